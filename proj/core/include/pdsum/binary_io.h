// Copyright 2026 The pdsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PDSUM_BINARY_IO_H_
#define PDSUM_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>
#include <utility>

#include "pdsum/error.h"

namespace pdsum::binary {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

// Append-only little-endian writer.
class Writer {
 public:
  template <typename T>
  void put(T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buf_.append(bytes, sizeof(T));
  }
  void put_bytes(std::string_view bytes) { buf_.append(bytes); }
  void put_string16(std::string_view s);
  void put_string32(std::string_view s);

  const std::string& data() const { return buf_; }
  std::string take() { return std::move(buf_); }

 private:
  std::string buf_;
};

// Bounds-checked reader; every overrun throws DataError("truncated ...").
class Reader {
 public:
  Reader(std::string_view data, std::string what) : data_(data), what_(std::move(what)) {}

  template <typename T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string_view get_bytes(std::size_t n) {
    need(n);
    std::string_view out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::string get_string16() { return std::string(get_bytes(get<std::uint16_t>())); }
  std::string get_string32() { return std::string(get_bytes(get<std::uint32_t>())); }

  bool done() const { return pos_ == data_.size(); }
  std::size_t position() const { return pos_; }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) {
      throw DataError("truncated " + what_ + " at byte " + std::to_string(pos_));
    }
  }

  std::string_view data_;
  std::string what_;
  std::size_t pos_ = 0;
};

inline void Writer::put_string16(std::string_view s) {
  if (s.size() > 0xffff) throw DataError("string too long for u16 length prefix");
  put<std::uint16_t>(static_cast<std::uint16_t>(s.size()));
  put_bytes(s);
}

inline void Writer::put_string32(std::string_view s) {
  put<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
  put_bytes(s);
}

std::string read_binary_file(const std::string& path);
void write_binary_file(const std::string& path, std::string_view bytes);

}  // namespace pdsum::binary

#endif  // PDSUM_BINARY_IO_H_
