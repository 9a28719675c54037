#pragma once

namespace selfsim {

inline constexpr const char* kToolName = "selfsim";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace selfsim
