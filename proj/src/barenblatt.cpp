#include "pmlab/barenblatt.hpp"

#include <cmath>

namespace pmlab {

namespace {

double alpha_of(double m, int dim) {
  return dim / (dim * (m - 1.0) + 2.0);
}

double k_of(double m, int dim) {
  const double alpha = alpha_of(m, dim);
  return alpha * (m - 1.0) / (2.0 * m * dim);
}

}  // namespace

double barenblatt_profile_constant(double m, double mass, int dim) {
  if (dim != 1 && dim != 2) throw DomainError("barenblatt supports N = 1, 2");
  if (!(m > 1.0) || !(mass > 0.0))
    throw DomainError("barenblatt requires m > 1 and mass > 0");
  const double k = k_of(m, dim);
  const double p = 1.0 / (m - 1.0);
  if (dim == 1) {
    // mass = C^{p+1/2} k^{-1/2} * sqrt(pi) Gamma(p+1) / Gamma(p+3/2)
    const double shape = std::sqrt(M_PI) * std::tgamma(p + 1.0) /
                         std::tgamma(p + 1.5);
    return std::pow(mass * std::sqrt(k) / shape, 1.0 / (p + 0.5));
  }
  // N = 2: mass = pi C^{p+1} / (k (p+1))
  return std::pow(mass * k * (p + 1.0) / M_PI, 1.0 / (p + 1.0));
}

double barenblatt_exact(double m, double mass, const Point& x, double t,
                        int dim) {
  if (!(t > 0.0)) throw DomainError("barenblatt requires t > 0");
  const double alpha = alpha_of(m, dim);
  const double beta = alpha / dim;
  const double k = k_of(m, dim);
  const double C = barenblatt_profile_constant(m, mass, dim);
  const double r2 = (dim == 1) ? x[0] * x[0] : x[0] * x[0] + x[1] * x[1];
  const double arg = C - k * r2 * std::pow(t, -2.0 * beta);
  if (arg <= 0.0) return 0.0;
  return std::pow(t, -alpha) * std::pow(arg, 1.0 / (m - 1.0));
}

double barenblatt_support_radius(double m, double mass, double t, int dim) {
  const double C = barenblatt_profile_constant(m, mass, dim);
  return std::sqrt(C / k_of(m, dim)) * std::pow(t, alpha_of(m, dim) / dim);
}

Field barenblatt_field(const Grid& g, double m, double mass, double t) {
  Field f(g);
  for (int i = 0; i < g.cell_count(); ++i)
    f[i] = barenblatt_exact(m, mass, g.center(i), t, g.dim);
  return f;
}

}  // namespace pmlab
