#pragma once

#include <functional>

namespace trajeval {

struct ScalarInterval {
  double lower = 0.0;
  double upper = 1.0;
  double tolerance = 1e-9;
  int max_iters = 200;
};

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
  /// Final bracket; contains the minimizer when the objective is unimodal.
  double bracket_lower = 0.0;
  double bracket_upper = 0.0;
};

/// Golden-section search for a minimum of f on [lower, upper].
///
/// Two interior probes are evaluated during setup; each iteration discards
/// the part of the bracket beyond the worse probe, shrinking it by 1/phi,
/// and evaluates f once. Stops when the bracket is no wider than tolerance
/// (converged) or after max_iters iterations (not converged). The result is
/// the best probe evaluated.
///
/// Only unimodality on the interval is needed for the answer to be within
/// tolerance of the true minimizer; otherwise a local minimum is returned.
///
/// Throws Error(kInvalidArgument) for an empty interval or non-positive
/// tolerance / max_iters, Error(kNumerical, "non-finite objective") if f
/// returns NaN or infinity.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f,
                                      const ScalarInterval& interval);

}  // namespace trajeval
