#include "fourphoton/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fourphoton {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::domain_error("gauss_legendre: n must be >= 1");
  if (!(b > a)) throw std::domain_error("gauss_legendre: empty interval");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);

  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  // Newton iteration on P_n, Tricomi starting guesses.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = mid - half * x;  // cos ordering is decreasing; flip
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  if (n % 2 == 1) {
    rule.nodes[n / 2] = mid;  // exact symmetry for the central node
  }
  return rule;
}

QuadratureRule trapezoid(int n, double a, double b) {
  if (n < 2) throw std::domain_error("trapezoid: n must be >= 2");
  if (!(b > a)) throw std::domain_error("trapezoid: empty interval");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = a + h * i;
    rule.weights[i] = (i == 0 || i == n - 1) ? 0.5 * h : h;
  }
  rule.nodes[n - 1] = b;
  return rule;
}

QuadratureRule make_rule(RuleKind kind, int n, double a, double b) {
  return kind == RuleKind::GaussLegendre ? gauss_legendre(n, a, b)
                                         : trapezoid(n, a, b);
}

}  // namespace fourphoton
