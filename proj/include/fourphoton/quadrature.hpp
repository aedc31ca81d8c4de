#ifndef FOURPHOTON_QUADRATURE_HPP
#define FOURPHOTON_QUADRATURE_HPP

#include <vector>

namespace fourphoton {

enum class RuleKind { GaussLegendre, Trapezoid };

/// One-dimensional quadrature rule on a finite interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a,b]. Nodes are strictly increasing and
/// symmetric about the midpoint.
QuadratureRule gauss_legendre(int n, double a, double b);

/// n-point composite trapezoid rule on [a,b] (n >= 2, uniform nodes).
QuadratureRule trapezoid(int n, double a, double b);

QuadratureRule make_rule(RuleKind kind, int n, double a, double b);

}  // namespace fourphoton

#endif
