#pragma once

// Independent reference computations. Nothing here calls into the library.

#include <cstddef>
#include <vector>

namespace oracle {

struct AndersonMoments {
    double m2 = 0.0;          ///< E u(t)^2
    double m2_integral = 0.0; ///< int_0^t E u(s)^2 ds
};

/// RK4 for m'' = 2 m, m(0) = 1, m'(0) = 0, carrying the running integral.
AndersonMoments anderson_moments(double t, int steps);

/// Exact lattice second moments a_0 .. a_N for sigma(u) = u at step h:
/// a_N = 1 + h^2 (N + sum_{n=1}^{N-1} 2 (N - n) a_{n-1}).
std::vector<double> discrete_second_moments(int levels, double h);

/// Var v(steps, j) of the explicit heat scheme with sigma = 1 by iterating A^k delta.
double heat_scheme_variance(int columns, double ratio, int steps, double dt_over_dx);

/// Cells inside the cone of (N, N mod 2) by a corner test, in units of h^2.
long cone_area_units(int N);

/// |L_i| in h^2 units by a corner test, cones of depth N at columns M and M + d, M = N mod 2.
long spatial_left_units(int N, int d);

} // namespace oracle
