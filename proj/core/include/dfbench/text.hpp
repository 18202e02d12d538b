#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dfbench {

std::string_view Trim(std::string_view s);
std::string AsciiLower(std::string_view s);
std::vector<std::string> Split(std::string_view s, char sep);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Strict decimal parsing: the whole (trimmed) string must be consumed.
std::optional<std::int64_t> ParseInt(std::string_view s);
std::optional<std::uint64_t> ParseUint(std::string_view s);

// Fixed six-decimal rendering used by every report; ties resolve to even
// under the default IEEE rounding mode.
std::string FormatScore(double value);

// Unicode canonical composition (NFC). Invalid UTF-8 is returned unchanged.
std::string NormalizeNfc(std::string_view utf8);
// Unicode default case folding on UTF-8 text.
std::string FoldCase(std::string_view utf8);

// Final path component with either separator style stripped.
std::string BaseName(std::string_view path);

}  // namespace dfbench
