// terasim: deterministic indoor terahertz radio propagation simulator
// Copyright (C) 2026 terasim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <string>
#include <vector>

namespace terasim
{

// Formats a value with six significant digits; negative infinity becomes "-inf".
// All CSV emitters use this so repeated runs are byte-identical.
std::string format_number(double value);

// Splits one CSV line on commas. No quoting support; inputs are plain numeric tables.
std::vector<std::string> split_csv_line(const std::string &line);

// Strict double parser; throws ValidationError naming `context` when the token
// is empty, non-numeric, or has trailing junk.
double parse_csv_double(const std::string &token, const std::string &context);

} // namespace terasim
