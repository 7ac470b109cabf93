#pragma once

namespace coheft {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace coheft
