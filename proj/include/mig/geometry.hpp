#pragma once

#include <array>
#include <string>
#include <string_view>

#include "mig/matlin.hpp"

namespace mig {

/// Geometric measure on the HPD manifold.
enum class Measure { Airm, Lem, Jbld, Skld };

inline constexpr std::array<Measure, 4> kAllMeasures = {Measure::Airm, Measure::Lem, Measure::Jbld,
                                                        Measure::Skld};

std::string to_string(Measure m);
/// Case-insensitive; throws ValidationError on unknown names.
Measure parse_measure(std::string_view name);

/// Squared distance (AIRM, LEM) or divergence (JBLD, SKLD) between two HPD
/// matrices of equal order. Round-off below zero is clamped to 0.
///
///   AIRM  sum_i ln^2 lambda_i(X^{-1} Y)
///   LEM   ||Log X - Log Y||_F^2
///   JBLD  ln det((X + Y) / 2) - (ln det X + ln det Y) / 2
///   SKLD  tr(Y^{-1} X + X^{-1} Y - 2 I) / 2
double sq_dist(Measure m, const HpdMatrix& x, const HpdMatrix& y);

namespace detail {
double sq_dist(Measure m, const CMatrix& x, const CMatrix& y);
/// ||L_x - L_y||^2 with precomputed logarithms.
double lem_sq_dist_logs(const CMatrix& log_x, const CMatrix& log_y);
}  // namespace detail

}  // namespace mig
