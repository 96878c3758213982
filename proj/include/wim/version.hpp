#pragma once

namespace wim {

inline constexpr const char* version = "1.0.0";

// Incremented whenever the JSON report layout changes incompatibly.
inline constexpr int report_schema_version = 1;

}  // namespace wim
