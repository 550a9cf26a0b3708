#pragma once

namespace ecfvol {
inline constexpr const char* kVersion = "0.1.0";
}
