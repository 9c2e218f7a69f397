#pragma once

// Shared numerical thresholds. Geometric checks default to kGeometric;
// algebraic identities that should hold to roundoff use kTight.
namespace cknet::tol {

inline constexpr double kDefault = 1e-9;
inline constexpr double kTight = 1e-12;
inline constexpr double kGeometric = 1e-8;

// |det| below this is treated as singular.
inline constexpr double kSingular = 1e-14;
// |sin(delta/2)| or |cos(delta/2)| below this makes tan/cot overflow.
inline constexpr double kAngle = 1e-12;
// Denominators in evolution formulas.
inline constexpr double kDenominator = 1e-12;
// Edges shorter than this are considered collapsed.
inline constexpr double kZeroEdge = 1e-14;

}  // namespace cknet::tol
