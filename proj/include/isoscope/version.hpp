#pragma once

namespace isoscope {

inline constexpr const char* kVersion = "0.1.0";

} // namespace isoscope
