#include "nshyd/nonsmooth.hpp"

#include <cmath>

namespace nshyd::nonsmooth {

double phi_a(double b, double c, double a) {
  if (!(b > 0.0)) throw DomainError("phi_a: b must be positive");
  if (!(a >= 0.0)) throw DomainError("phi_a: a must be non-negative");
  if (a == 0.0 || c == 0.0) return 0.0;
  // Conjugate of (sqrt(a^2 b^2 + 4a|c|) - ab)/2, divided through by a.
  const double root = std::hypot(b, 2.0 * std::sqrt(std::abs(c) / a));
  return -sgn(c) * 2.0 * std::abs(c) / (b + root);
}

namespace {

struct Coefficients {
  double p;  // -a0 (b x1 + c)
  double q;  // a1 c
  double s;  // S(x1)
};

PhiBBranch select_branch(const Coefficients& k) {
  // Case order as in the closed form; the first match wins on shared boundaries.
  if ((k.p <= k.s && k.s <= 0.0) || (0.0 <= k.s && k.s <= k.q)) return PhiBBranch::BothNegative;
  if ((0.0 <= k.s && k.s <= k.p) || (k.q <= k.s && k.s <= 0.0)) return PhiBBranch::BothPositive;
  if (k.s <= std::min({0.0, k.p, k.q})) return PhiBBranch::NegativeAboveX1;
  return PhiBBranch::PositiveBelowX1;
}

void check_phi_b(double b, double a0, double a1) {
  if (!(b > 0.0)) throw DomainError("phi_b: b must be positive");
  if (!(a0 >= 0.0) || !(a1 >= 0.0)) throw DomainError("phi_b: a0 and a1 must be non-negative");
  if (a0 == 0.0 && a1 == 0.0) throw DomainError("phi_b: a0 and a1 cannot both be zero");
}

double residual_b(double x, double b, double c, double a0, double a1, double x1) {
  return s_signed(x) / a0 + s_signed(x - x1) / a1 + b * x + c;
}

}  // namespace

PhiBBranch phi_b_branch(double b, double c, double a0, double a1, double x1) {
  check_phi_b(b, a0, a1);
  if (a0 == 0.0 || a1 == 0.0) return PhiBBranch::Pinned;
  return select_branch({-a0 * (b * x1 + c), a1 * c, s_signed(x1)});
}

double phi_b(double b, double c, double a0, double a1, double x1) {
  check_phi_b(b, a0, a1);
  if (a0 == 0.0) return 0.0;
  if (a1 == 0.0) return x1;

  const PhiBBranch branch = select_branch({-a0 * (b * x1 + c), a1 * c, s_signed(x1)});
  // Signs of x and x - x1 inside the selected region.
  double s0 = 1.0, s1 = 1.0;
  switch (branch) {
    case PhiBBranch::BothNegative: s0 = -1.0; s1 = -1.0; break;
    case PhiBBranch::BothPositive: s0 = 1.0; s1 = 1.0; break;
    case PhiBBranch::NegativeAboveX1: s0 = -1.0; s1 = 1.0; break;
    case PhiBBranch::PositiveBelowX1: s0 = 1.0; s1 = -1.0; break;
    case PhiBBranch::Pinned: break;
  }

  // a0 a1 times the residual is the quadratic A x^2 + B x + C on this region.
  // The discriminant is expanded symbolically so the x1^2 terms cancel exactly.
  const double A = s0 * a1 + s1 * a0;
  const double B = a0 * (a1 * b - 2.0 * s1 * x1);
  const double C = a0 * (s1 * x1 * x1 + a1 * c);
  const double E = a0 * a1 * b * b - 4.0 * s1 * a0 * (b * x1 + c) - 4.0 * s0 * s1 * x1 * x1 -
                   4.0 * s0 * a1 * c;
  const double root = std::sqrt(a0) * std::sqrt(a1) * std::sqrt(std::max(E, 0.0));

  // The residual is increasing, so the wanted root has 2Ax + B = +root.
  double x = 0.0;
  if (B >= 0.0 && B + root > 0.0) {
    x = -2.0 * C / (B + root);
  } else if (A != 0.0) {
    x = (-B + root) / (2.0 * A);
  }

  // One Newton correction; the residual is C^1 with derivative >= b.
  const double g = residual_b(x, b, c, a0, a1, x1);
  const double dg = 2.0 * std::abs(x) / a0 + 2.0 * std::abs(x - x1) / a1 + b;
  const double polished = x - g / dg;
  if (std::isfinite(polished) &&
      std::abs(residual_b(polished, b, c, a0, a1, x1)) < std::abs(g)) {
    return polished;
  }
  return x;
}

}  // namespace nshyd::nonsmooth
