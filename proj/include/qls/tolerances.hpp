#pragma once

namespace qls {

// Central tolerance policy. Symbolic identities are checked much tighter
// than anything that went through an ODE solve or finite differences.
inline constexpr double kSymbolicRelTol = 1e-9;
inline constexpr double kOdeRelTol = 1e-6;

// Worst derivative consumer is the jet-differentiated invariant of a
// transformed equation, which needs three orders on top of the curve.
inline constexpr int kDefaultJetOrder = 4;

}  // namespace qls
