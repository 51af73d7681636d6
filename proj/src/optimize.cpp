#include "cvqkd/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

OptResult golden_max(const std::function<double(double)>& f, double lo, double hi, double arg_tol,
                     double value_tol, int max_iter) {
  if (!(lo <= hi)) throw std::invalid_argument("golden_max: bad bracket");
  constexpr double invphi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int it = 0; it < max_iter && (b - a) > arg_tol; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
    if (std::abs(f1 - f2) < value_tol && (b - a) < std::sqrt(arg_tol)) break;
  }
  return (f1 >= f2) ? OptResult{x1, f1} : OptResult{x2, f2};
}

OptResult golden_max_log(const std::function<double(double)>& f, double lo, double hi,
                         double arg_tol, double value_tol) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("golden_max_log: bad bracket");
  auto g = [&f](double u) { return f(std::exp(u)); };
  OptResult r = golden_max(g, std::log(lo), std::log(hi), arg_tol, value_tol);
  return {std::exp(r.arg), r.value};
}

RootResult bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol,
                       int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return {lo, true};
  if (fhi == 0.0) return {hi, true};
  if ((flo > 0.0) == (fhi > 0.0))
    return {std::abs(flo) <= std::abs(fhi) ? lo : hi, false};
  for (int it = 0; it < max_iter && (hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return {mid, true};
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return {0.5 * (lo + hi), true};
}

}  // namespace cvqkd
