#include "trajeval/scalar_opt.hpp"

#include <cmath>

#include "trajeval/error.hpp"

namespace trajeval {

namespace {

// 1/phi = phi - 1
const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;
const double kInvPhi2 = kInvPhi * kInvPhi;

}  // namespace

ScalarMinimum golden_section_minimize(const std::function<double(double)>& f,
                                      const ScalarInterval& interval) {
  double a = interval.lower;
  double b = interval.upper;
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw Error(ErrorKind::kInvalidArgument, "interval must satisfy lower < upper");
  }
  if (!(interval.tolerance > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "tolerance must be positive");
  }
  if (interval.max_iters <= 0) {
    throw Error(ErrorKind::kInvalidArgument, "max_iters must be positive");
  }

  ScalarMinimum result;
  const auto eval = [&](double x) {
    const double v = f(x);
    ++result.evaluations;
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNumerical, "non-finite objective");
    }
    return v;
  };

  // The width is tracked separately and interior points are re-derived from
  // the lower end, so rounding in reused points cannot compound.
  double h = b - a;
  double c = a + kInvPhi2 * h;
  double d = a + kInvPhi * h;
  double fc = eval(c);
  double fd = eval(d);

  while (h > interval.tolerance) {
    if (result.iterations == interval.max_iters) break;
    ++result.iterations;
    h *= kInvPhi;
    if (fc < fd) {
      b = a + h;
      d = c;
      fd = fc;
      c = a + kInvPhi2 * h;
      fc = eval(c);
    } else {
      a = b - h;
      c = d;
      fc = fd;
      d = a + kInvPhi * h;
      fd = eval(d);
    }
  }

  result.converged = h <= interval.tolerance;
  result.bracket_lower = a;
  result.bracket_upper = b;
  if (fc < fd) {
    result.x = c;
    result.value = fc;
  } else {
    result.x = d;
    result.value = fd;
  }
  return result;
}

}  // namespace trajeval
