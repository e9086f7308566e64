#pragma once

namespace lqu {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRngName = "mt19937_64/box-muller";

}  // namespace lqu
