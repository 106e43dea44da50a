#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace relaxrk {

/// Final state of a bracketing root solver: `x` is the best estimate and
/// `x_other` the opposite end of the last bracket (f changes sign between them).
struct RootBracket {
  double x;
  double fx;
  double x_other;
  double fx_other;
  int iterations;

  /// The bracket end where f <= 0 (f(x) == 0 counts for either side).
  double nonpositive_side() const { return fx <= 0.0 ? x : x_other; }
  double value_at_nonpositive_side() const { return fx <= 0.0 ? fx : fx_other; }
};

/// Brent's method (zeroin) on [a, b] with f(a) f(b) <= 0. Terminates when the
/// bracket is narrower than tol + 4 eps |x| or an exact zero is hit.
template <class F>
RootBracket brent(F&& f, double a, double b, double fa, double fb, double tol, int max_iterations = 200) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a;
  double fc = fa;
  double d = b - a;
  double e = d;
  int it = 0;
  for (;; ++it) {
    if ((fb > 0.0 && fc > 0.0) || (fb < 0.0 && fc < 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * tol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0 || it >= max_iterations) return {b, fb, c, fc, it};

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points are distinct.
      const double s = fb / fa;
      double p;
      double q;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : std::copysign(tol1, xm);
    fb = f(b);
  }
}

/// Plain bisection on [a, b] with f(a) f(b) <= 0, run until the midpoint no
/// longer moves or `max_iterations` is reached.
template <class F>
RootBracket bisection(F&& f, double a, double b, double fa, double fb, double tol = 0.0,
                      int max_iterations = 200) {
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (fa == 0.0) return {a, fa, b, fb, it};
    if (fb == 0.0) return {b, fb, a, fa, it};
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b || std::abs(b - a) <= tol) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  return std::abs(fa) <= std::abs(fb) ? RootBracket{a, fa, b, fb, it} : RootBracket{b, fb, a, fa, it};
}

}  // namespace relaxrk
