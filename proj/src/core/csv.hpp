// Copyright 2026 The Balderdash Simulation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace balderdash {

// RFC 4180 quoting: a field is quoted iff it contains a comma, a double
// quote, CR or LF; embedded quotes are doubled.
std::string csv_field(std::string_view value);
std::string csv_row(const std::vector<std::string>& fields);

// Parses RFC 4180 text into rows of fields. Throws ValidationError on an
// unterminated quoted field.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Shortest round-trip decimal form, with a trailing ".0" on integral values.
std::string format_real(double value);

}  // namespace balderdash
