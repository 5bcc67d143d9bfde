#pragma once

namespace starkhole {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace starkhole
