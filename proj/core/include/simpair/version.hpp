#pragma once

namespace simpair {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace simpair
