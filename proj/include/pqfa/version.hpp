#pragma once

namespace pqfa {

inline constexpr const char* kToolName = "pqfa";
inline constexpr const char* kVersion  = "0.1.0";

// Random-stream identity recorded in every machine-readable output so that
// published files state exactly how their samples were drawn.
inline constexpr const char* kRngId = "mt19937_64+splitmix64";

}  // namespace pqfa
