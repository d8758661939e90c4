#pragma once

// Shape constants for the synthetic benchmarks, kept in one place so they can
// be tuned against reference scatter plots without touching generator code.
// Component sizes and mixture weights are part of each benchmark's protocol
// and live with the generators.

namespace skelclus::bench::geometry {

inline constexpr double kPaddingSd = 0.1;  // sd of the appended noise dimensions

namespace yinyang {
inline constexpr double kOuterRadius = 3.0;
inline constexpr double kOuterJitterSd = 0.1;  // radial
inline constexpr double kArcRadius = 1.0;
inline constexpr double kArcCenterY = 1.0;     // arcs centered at (0, +-1)
inline constexpr double kArcJitterSd = 0.1;    // radial
// Angle trimmed off each arc at the origin end so the two arcs do not touch.
inline constexpr double kArcTrim = 0.5;
inline constexpr double kClumpY = 1.0;         // clumps at (0, +-1)
inline constexpr double kClumpSd = 0.1;
}  // namespace yinyang

namespace mickey {
inline constexpr double kFaceRadius = 1.0;
inline constexpr double kEarRadius = 0.3;
inline constexpr double kEarX = 1.0;  // ears centered at (+-kEarX, kEarY)
inline constexpr double kEarY = 1.0;
}  // namespace mickey

namespace manifold {
inline constexpr double kPlaneSide = 4.0;  // uniform on [0, side]^2 at height 0
inline constexpr double kBlobX = 6.0;      // N((6, 0, 0), 0.5^2 I_3)
inline constexpr double kBlobSd = 0.5;
inline constexpr double kRingX = 2.0;      // ring centered at (2, 6, 0)
inline constexpr double kRingY = 6.0;
inline constexpr double kRingRadius = 1.5;
inline constexpr double kRingJitterSd = 0.1;
}  // namespace manifold

namespace ring {
inline constexpr double kRingProbability = 1.0 / 6.0;
inline constexpr double kRingRadius = 1.0;
inline constexpr double kSd = 0.2;  // ring jitter and core spread
}  // namespace ring

namespace mix_mickey {
inline constexpr double kVariance = 2.0;
inline constexpr double kSmallX = 3.0;  // small clusters at (+-3, 3)
inline constexpr double kSmallY = 3.0;
}  // namespace mix_mickey

// Uniform noise points cover the signal's bounding box in the first two
// dimensions, widened by this fraction of its extent (half on each side).
inline constexpr double kNoiseBoxExpansion = 0.05;

}  // namespace skelclus::bench::geometry
