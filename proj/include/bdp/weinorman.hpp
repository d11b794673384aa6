#pragma once

#include "bdp/rates.hpp"

namespace bdp {

/// Coefficients of the ordered-exponential factorisation
///   U(t) = e^{g1 I} e^{g2 a+} e^{g3 a} e^{g4 a+a}
/// of the immigration-death evolution operator, at time t.
struct GFunctions {
    double t = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double g3 = 0.0;
    double g4 = 0.0;
};

/// Quantities read off the g-functions.
struct DerivedParams {
    double p;               // e^{g4}: survival probability of an initial particle
    double nu;              // g2: Poisson mean of surviving immigrants
    double alpha_spectral;  // g2 (g3 + 1) / g3
};

enum class SolverMethod { closed_form, ode };

struct SolverConfig {
    SolverMethod method = SolverMethod::closed_form;
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    double max_step = 0.0;  // 0 means unbounded
};

/// Integrated form of the g-system with M(t) = int_0^t mu:
///   g4 = -M, g3 = e^{M} - 1, g2 = int_0^t lambda(s) e^{M(s) - M(t)} ds, g1 = -g2.
/// Throws std::domain_error if t is outside [0, horizon].
GFunctions solve_closed(const RateProfile& profile, double t, double quad_tol = 1e-12);

/// Direct adaptive Runge-Kutta integration of
///   g4' = -mu, g3' = mu - g3 g4', g2' = lambda + g2 g4',
///   g1' = -lambda + g2 g3' + g2 g3 g4'
/// from g(0) = 0. g1 is integrated on its own, not set to -g2. The step
/// controller runs at 1/100 of cfg's tolerances so that the global error, not
/// just the local one, is close to them.
/// Throws IntegrationFailure if the step size collapses.
GFunctions solve_ode(const RateProfile& profile, double t, const SolverConfig& cfg = {});

/// Dispatch on cfg.method.
GFunctions solve(const RateProfile& profile, double t, const SolverConfig& cfg = {});

/// Throws DegenerateSpectral when g3 = 0.
DerivedParams derived_params(const GFunctions& g);

/// g2 (g3 + 1) / g3; throws DegenerateSpectral when g3 = 0.
double spectral_alpha(const GFunctions& g);

}  // namespace bdp
