#pragma once

namespace nnmanifold {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nnmanifold
