#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ghabuse {

/// Integral UTC seconds since the Unix epoch.
using UnixSeconds = std::int64_t;

inline constexpr UnixSeconds kSecondsPerDay = 86400;

/// Parses `YYYY-MM-DDTHH:MM:SSZ` (fractional seconds and `+HH:MM` offsets
/// accepted). Throws InvalidInput on malformed text.
UnixSeconds parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(UnixSeconds t);

}  // namespace ghabuse
