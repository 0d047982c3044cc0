#pragma once

namespace catline {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace catline
