#pragma once

#include <string>
#include <string_view>

#include "culturestream/core.hpp"

namespace culturestream {

/// Accepts integer epoch seconds or ISO-8601 ("2013-07-20", "2013-07-20T10:00:00Z",
/// "2013-07-20 10:00:00+02:00", fractional seconds truncated). No offset means UTC.
/// Throws std::invalid_argument on anything else.
Timestamp parse_timestamp(std::string_view text);

/// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(Timestamp ts);

}  // namespace culturestream
