#pragma once

namespace dadmm {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dadmm
