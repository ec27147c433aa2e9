#pragma once

namespace smallball {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace smallball
