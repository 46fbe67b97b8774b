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

#include <stdexcept>
#include <string>

namespace terasim
{

// Unreadable or unwritable files; maps to CLI exit code 3.
class IoError : public std::runtime_error
{
  public:
    explicit IoError(const std::string &msg) : std::runtime_error(msg) {}
};

// Malformed or physically inconsistent input data; maps to CLI exit code 4.
class ValidationError : public std::runtime_error
{
  public:
    explicit ValidationError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace terasim
