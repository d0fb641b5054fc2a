#include "brue/format.hpp"

#include <charconv>
#include <cstdio>

#include "brue/errors.hpp"

namespace brue {

std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_short(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string format_hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

} // namespace

std::vector<std::string> split_list(std::string_view text, char sep) {
    std::vector<std::string> items;
    if (trim(text).empty()) {
        return items;
    }
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        const std::string_view item = trim(text.substr(start, pos - start));
        items.emplace_back(item);
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return items;
}

double parse_real(std::string_view text, std::string_view what) {
    const std::string s(trim(text));
    if (s.empty()) {
        throw ConfigError("empty value for " + std::string(what));
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size()) {
        throw ConfigError("invalid number '" + s + "' for " + std::string(what));
    }
    return v;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
    const std::string_view s = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("invalid integer '" + std::string(s) + "' for " + std::string(what));
    }
    return v;
}

} // namespace brue
