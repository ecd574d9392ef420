#pragma once

namespace kpz1d {

inline constexpr const char* kVersion = "0.1.0";

} // namespace kpz1d
