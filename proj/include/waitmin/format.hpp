#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace waitmin {

/// Locale-independent rendering with 12 significant digits, trailing zeros
/// dropped ("%.12g" semantics): 2/3 -> "0.666666666667", 1.0 -> "1".
inline std::string fmt_num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

}  // namespace waitmin
