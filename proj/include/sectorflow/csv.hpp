#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sectorflow::csv {

/// Shortest round-trippable text is not required; artifacts use a fixed 17 digits.
inline std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void row(std::ostream& out, const std::vector<double>& values)
{
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) {
            out << ',';
        }
        out << num(values[i]);
    }
    out << '\n';
}

inline void header(std::ostream& out, const std::vector<std::string>& names)
{
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) {
            out << ',';
        }
        out << names[i];
    }
    out << '\n';
}

} // namespace sectorflow::csv
