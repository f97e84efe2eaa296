#pragma once

namespace carnot {

inline constexpr const char* kVersion = "0.3.0";

}  // namespace carnot
