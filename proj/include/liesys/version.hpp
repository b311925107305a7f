#pragma once

namespace liesys {

inline constexpr const char* kToolName = "liesys";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace liesys
