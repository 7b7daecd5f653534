#pragma once

#include <cmath>
#include <limits>

namespace coagfrag::detail {

class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Newton on g with a sign-change bracket [lo, hi]; steps leaving the bracket fall back to bisection.
template <class G, class DG>
double safeguarded_newton(G g, DG dg, double lo, double hi, double guess) {
  double g_lo = g(lo);
  bool increasing = g_lo < 0.0;
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int iter = 0; iter < 400; ++iter) {
    double gx = g(x);
    if (gx == 0.0) return x;
    if ((gx < 0.0) == increasing) {
      lo = x;
    } else {
      hi = x;
    }
    double d = dg(x);
    double next = (d != 0.0 && std::isfinite(d)) ? x - gx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(next), 1e-300);
    if (std::abs(next - x) <= tol || hi - lo <= tol) return next;
    x = next;
  }
  return x;
}

}  // namespace coagfrag::detail
