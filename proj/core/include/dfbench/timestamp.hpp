#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace dfbench {

// Seconds since the Unix epoch, UTC, one-second resolution.
struct Timestamp {
  std::int64_t seconds = 0;

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// Accepts "YYYY-MM-DD[T ]HH:MM:SS" with optional fractional seconds
// (truncated) and an optional "Z" or "+HH:MM"/"-HH:MM" offset, or a bare
// integer epoch. Returns nullopt for anything else.
std::optional<Timestamp> ParseTimestamp(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ".
std::string FormatTimestamp(Timestamp ts);

// Current wall-clock time truncated to whole seconds.
Timestamp Now();

}  // namespace dfbench
