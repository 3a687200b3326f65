// Copyright 2026 The sfc-eval Authors.
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

// Small string helpers shared by the core sources. Not installed.

#ifndef SFC_SRC_TEXT_H_
#define SFC_SRC_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace sfc::text {

std::string Trim(std::string_view s);
std::string ToLower(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// ASCII-only case changes of the first character; other bytes are untouched.
std::string CapitalizeFirst(std::string_view s);
std::string LowercaseFirst(std::string_view s);

bool HasTerminalPunctuation(std::string_view s);
std::string EnsureTerminalPeriod(std::string_view s);
// Removes one trailing '.' (after trimming trailing whitespace).
std::string StripTerminalPeriod(std::string_view s);

// Lower-case hex encoding of raw bytes.
std::string HexEncode(std::string_view bytes);

}  // namespace sfc::text

#endif  // SFC_SRC_TEXT_H_
