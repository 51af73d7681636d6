#pragma once

#include <functional>
#include <vector>

namespace cvqkd {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// Gauss-Legendre rule with n points (Newton iteration on P_n, cached).
const GaussLegendreRule& gauss_legendre(int n);

// Integral of f over [a, b] with an n-point Gauss-Legendre rule. Throws if
// any sampled value is non-finite.
double integrate(const std::function<double(double)>& f, double a, double b, int n);

}  // namespace cvqkd
