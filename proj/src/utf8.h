// Copyright 2026 The NRE Authors.
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

#ifndef NRE_UTF8_H_
#define NRE_UTF8_H_

#include <cstddef>
#include <string_view>

namespace nre {
namespace utf8 {

// Returns the byte length of the well-formed code point starting at
// text[pos], or 0 if the sequence there is malformed or truncated.
std::size_t SequenceLength(std::string_view text, std::size_t pos);

// Throws Error(kInvalidUtf8) at the first malformed byte.
void Validate(std::string_view text);

bool IsAsciiSpace(char c);
bool IsAsciiAlnum(char c);

}  // namespace utf8
}  // namespace nre

#endif  // NRE_UTF8_H_
