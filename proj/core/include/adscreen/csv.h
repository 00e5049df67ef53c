// Copyright 2026 The adscreen Authors
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

#ifndef ADSCREEN_CSV_H_
#define ADSCREEN_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace adscreen::csv {

// Minimal CSV support: comma separated, no quoting. Fields are trimmed of
// surrounding whitespace and a trailing '\r'.
std::vector<std::string> split_row(std::string_view line);

// Splits text into non-empty lines.
std::vector<std::string> lines(std::string_view text);

// Shortest decimal string that round-trips to the same double.
std::string format_double(double v);

// Parses a whole field as a double; returns false on any trailing garbage.
bool parse_double(std::string_view field, double& out);

}  // namespace adscreen::csv

#endif  // ADSCREEN_CSV_H_
