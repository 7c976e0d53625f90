#pragma once

namespace wsieve {

// Euler-Mascheroni constant, 20 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286061;

// e^gamma and friends; these seed the linear-sieve delay system and the
// Mertens normalization, so they are spelled out once here.
inline constexpr double kExpGamma = 1.7810724179901979852;
inline constexpr double kTwoExpGamma = 2.0 * kExpGamma;
inline constexpr double kExpMinusGamma = 0.56145948356688516982;

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace wsieve
