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

#ifndef PDSUM_TEXT_H_
#define PDSUM_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pdsum {

// Lowercases ASCII letters and splits on runs of non-alphanumeric bytes.
// Bytes >= 0x80 count as word characters so UTF-8 words stay intact.
// Tokens shorter than two bytes are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Splits on '.', '?' or '!' when followed by whitespace and then an uppercase
// ASCII letter, or by end of text. Pieces are trimmed; empty pieces vanish.
std::vector<std::string> split_sentences(std::string_view text);

// Fixed English stopword list shipped with the library.
bool is_stopword(std::string_view token);
std::span<const std::string_view> stopwords();

// "a b" for a token bigram.
std::string join_bigram(std::string_view first, std::string_view second);

}  // namespace pdsum

#endif  // PDSUM_TEXT_H_
