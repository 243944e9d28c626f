#pragma once

namespace chemneuron {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace chemneuron
