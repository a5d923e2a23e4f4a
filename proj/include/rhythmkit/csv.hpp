// Copyright 2026 The Rhythmkit Authors
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

#ifndef RHYTHMKIT_CSV_HPP_
#define RHYTHMKIT_CSV_HPP_

#include <optional>
#include <string>
#include <vector>

namespace rhythmkit {
namespace csv {

// Minimal comma-separated parsing: no quoting, UTF-8, '.' decimal
// separator. Lines starting with '#' are comments (used to carry
// provenance JSON in front of the data).
struct File {
  std::vector<std::string> comments;          // '#' lines, marker stripped
  std::vector<std::vector<std::string>> rows;  // header is rows[0]
};

File ReadFile(const std::string& path);

std::vector<std::string> SplitLine(const std::string& line);

std::string Trim(const std::string& s);

// strtod-free numeric conversions (std::from_chars / to_chars) so output
// is locale independent and round-trips exactly.
double ParseDouble(const std::string& field, const std::string& context);
long long ParseInt(const std::string& field, const std::string& context);
std::optional<double> ParseOptionalDouble(const std::string& field,
                                          const std::string& context);

std::string FormatDouble(double value);  // shortest round-trip form

}  // namespace csv
}  // namespace rhythmkit

#endif  // RHYTHMKIT_CSV_HPP_
