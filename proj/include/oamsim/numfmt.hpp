#pragma once

#include <cstdio>
#include <string>

namespace oamsim {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_number(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace oamsim
