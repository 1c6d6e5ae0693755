#pragma once

// Every default used by the command-line front end. Reports embed the
// resolved value of each one, so a report can be replayed without this file.

namespace entdyn::defaults {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

// Orbits and rendering.
inline constexpr int kMaxIter = 256;
inline constexpr double kBoundRadius = 1e3;
inline constexpr double kEscapeRadius = 1e8;
inline constexpr double kWindow[4] = {-2.0, 2.0, -2.0, 2.0};
inline constexpr int kWidthPx = 256;
inline constexpr int kHeightPx = 256;
inline constexpr const char* kImagePath = "k_set.pgm";

// Circle scans.
inline constexpr int kCircleSamples = 2048;
inline constexpr int kCertifyGrid = 50;
inline constexpr int kGrowthGrid = 256;
inline constexpr int kGrowthPower = 1;
inline constexpr double kGrowthRMax = 100.0;
inline constexpr double kOrderRadii[3] = {10.0, 100.0, 1000.0};

// Contours.
inline constexpr double kTraceTol = 0.1;

// Surgery verification.
inline constexpr double kGamma = 24.0;
inline constexpr int kLevels = 8;
inline constexpr int kChainSamples = 10000;
inline constexpr int kSeamSamples = 256;
inline constexpr int kDilatationPoints = 1000;
inline constexpr double kDilatationStep = 1e-4;
inline constexpr double kDilatationSlack = 0.05;
inline constexpr double kSeamTolerance = 1e-9;
inline constexpr double kLadderTolerance = 1e-12;

}  // namespace entdyn::defaults
