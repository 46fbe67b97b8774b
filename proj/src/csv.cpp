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

#include "terasim/csv.hpp"

#include "terasim/errors.hpp"

#include <cmath>
#include <cstdio>

namespace terasim
{

std::string format_number(double value)
{
    if (std::isinf(value))
        return value < 0.0 ? "-inf" : "inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line)
    {
        if (c == ',')
        {
            out.push_back(cur);
            cur.clear();
        }
        else if (c != '\r')
        {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_csv_double(const std::string &token, const std::string &context)
{
    // Trim surrounding spaces so hand-edited tables with padding still parse.
    size_t b = token.find_first_not_of(" \t");
    size_t e = token.find_last_not_of(" \t");
    if (b == std::string::npos)
        throw ValidationError(context + ": empty numeric field");
    std::string t = token.substr(b, e - b + 1);
    if (t == "-inf")
        return -INFINITY;
    try
    {
        size_t pos = 0;
        double v = std::stod(t, &pos);
        if (pos != t.size())
            throw ValidationError(context + ": trailing characters in '" + t + "'");
        return v;
    }
    catch (const ValidationError &)
    {
        throw;
    }
    catch (const std::exception &)
    {
        throw ValidationError(context + ": not a number: '" + t + "'");
    }
}

} // namespace terasim
