#pragma once

#include "pmlab/grid.hpp"

namespace pmlab {

// Self-similar source solution of u_t = Lap(u^m):
//   U(x,t) = t^{-alpha} (C - k |x|^2 t^{-2 beta})_+^{1/(m-1)}
// with alpha = N/(N(m-1)+2), beta = alpha/N, k = alpha(m-1)/(2 m N) and C
// fixed by the prescribed total mass. Dimensions 1 and 2 are supported.
double barenblatt_exact(double m, double mass, const Point& x, double t,
                        int dim);

// The pressure-profile constant C determined by the mass; exposed so tests
// can reach the support radius sqrt(C/k) t^beta directly.
double barenblatt_profile_constant(double m, double mass, int dim);

double barenblatt_support_radius(double m, double mass, double t, int dim);

// Samples the exact solution at cell centers.
Field barenblatt_field(const Grid& g, double m, double mass, double t);

}  // namespace pmlab
