#pragma once

namespace muubqkd {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace muubqkd
