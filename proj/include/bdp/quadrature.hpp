#pragma once

#include <functional>
#include <span>

namespace bdp {

/// Adaptive Gauss-Kronrod quadrature of f over [a, b] targeting an absolute
/// error of abs_tol. Throws IntegrationFailure if the error estimate stays
/// above abs_tol.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol = 1e-12);

/// Same, but split at the given interior points (which must be sorted) so
/// that each panel has a smooth integrand.
double adaptive_integrate_split(const std::function<double(double)>& f, double a, double b,
                                std::span<const double> splits, double abs_tol = 1e-12);

}  // namespace bdp
