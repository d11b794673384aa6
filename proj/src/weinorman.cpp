#include "bdp/weinorman.hpp"

#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

#include "bdp/errors.hpp"
#include "bdp/quadrature.hpp"

namespace bdp {

namespace odeint = boost::numeric::odeint;

GFunctions solve_closed(const RateProfile& profile, double t, double quad_tol) {
    profile.check_time(t);
    GFunctions g;
    g.t = t;
    if (t == 0.0) return g;

    const RateSpec& lambda = profile.lambda();
    const RateSpec& mu = profile.mu();
    const double big_m = integrate_rate(mu, 0.0, t);

    g.g4 = -big_m;
    g.g3 = std::expm1(big_m);

    if (profile.is_homogeneous()) {
        const double l = lambda.value();
        const double m = mu.value();
        g.g2 = (m == 0.0) ? l * t : -(l / m) * std::expm1(-m * t);
    } else {
        // The exponent M(s) - M(t) = -int_s^t mu is evaluated directly so it
        // never overflows.
        auto integrand = [&](double s) {
            return eval_rate(lambda, s) * std::exp(-integrate_rate(mu, s, t));
        };
        const auto splits = profile.discontinuities(0.0, t);
        g.g2 = adaptive_integrate_split(integrand, 0.0, t, splits, quad_tol);
    }
    g.g1 = -g.g2;
    return g;
}

namespace {

using State = std::array<double, 4>;  // g1, g2, g3, g4

struct GSystem {
    const RateProfile* profile;

    void operator()(const State& g, State& dg, double t) const {
        const double lambda = eval_rate(profile->lambda(), t);
        const double mu = eval_rate(profile->mu(), t);
        const double dg4 = -mu;
        const double dg3 = mu - g[2] * dg4;
        const double dg2 = lambda + g[1] * dg4;
        const double dg1 = -lambda + g[1] * dg3 + g[1] * g[2] * dg4;
        dg = {dg1, dg2, dg3, dg4};
    }
};

}  // namespace

GFunctions solve_ode(const RateProfile& profile, double t, const SolverConfig& cfg) {
    profile.check_time(t);
    GFunctions out;
    out.t = t;
    if (t == 0.0) return out;

    using Stepper = odeint::runge_kutta_dopri5<State>;
    const double max_dt = cfg.max_step > 0.0 ? cfg.max_step : t;
    // The controller bounds the local error per step; tighten it so the
    // accumulated error ends up near the requested tolerances.
    constexpr double kLocalFactor = 1e-2;
    auto stepper =
        odeint::make_controlled(cfg.abs_tol * kLocalFactor, cfg.rel_tol * kLocalFactor, max_dt, Stepper());

    State g{0.0, 0.0, 0.0, 0.0};
    double reached = 0.0;
    auto observe = [&](const State&, double s) { reached = s; };

    // Integrate panel by panel so that no step straddles a rate discontinuity.
    auto knots = profile.discontinuities(0.0, t);
    knots.push_back(t);
    double left = 0.0;
    try {
        for (double right : knots) {
            const double dt0 = std::min(1e-3, right - left);
            odeint::integrate_adaptive(stepper, GSystem{&profile}, g, left, right, dt0, observe);
            left = right;
        }
    } catch (const odeint::odeint_error& e) {
        throw IntegrationFailure(std::string("g-function ODE: ") + e.what(), reached);
    }

    out.g1 = g[0];
    out.g2 = g[1];
    out.g3 = g[2];
    out.g4 = g[3];
    return out;
}

GFunctions solve(const RateProfile& profile, double t, const SolverConfig& cfg) {
    return cfg.method == SolverMethod::closed_form ? solve_closed(profile, t, cfg.abs_tol)
                                                   : solve_ode(profile, t, cfg);
}

double spectral_alpha(const GFunctions& g) {
    if (g.g3 == 0.0) {
        throw DegenerateSpectral("spectral alpha undefined: g3 = 0 (no accumulated death intensity)");
    }
    return g.g2 * (g.g3 + 1.0) / g.g3;
}

DerivedParams derived_params(const GFunctions& g) {
    return {std::exp(g.g4), g.g2, spectral_alpha(g)};
}

}  // namespace bdp
