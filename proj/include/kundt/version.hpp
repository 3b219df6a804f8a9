#pragma once

namespace kundt {

inline constexpr const char* kToolName = "kundt";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace kundt
