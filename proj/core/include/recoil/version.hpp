#pragma once

namespace recoil {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace recoil
