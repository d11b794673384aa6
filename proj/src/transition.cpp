#include "bdp/transition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bdp/charlier.hpp"
#include "bdp/errors.hpp"
#include "bdp/summation.hpp"

namespace bdp {

namespace {

constexpr double kProbSlack = 1e-12;
// Alternating lattice sums lose about this much per unit of absolute term mass.
constexpr double kRoundingPerMass = 1e-15;

double checked_probability(double p, const char* where, double rounding = 0.0) {
    const double slack = std::max(kProbSlack, rounding);
    if (!(p >= -slack && p <= 1.0 + slack)) {
        throw NumericalError(std::string(where) + ": probability " + std::to_string(p) +
                             " outside [0, 1]");
    }
    return std::clamp(p, 0.0, 1.0);
}

double log_factorial(unsigned k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// k * log(base) with the convention 0 * log(0) = 0.
double log_power(double log_base, unsigned k) {
    return k == 0 ? 0.0 : static_cast<double>(k) * log_base;
}

// Common shape of both Charlier formulas:
//   P_{n->m} = (alpha^m / m!) K sum_x rho^x w(x; alpha) C_m(x) C_n(x),
// summed for every m in [m_lo, m_hi] at once.
//
// The terms alternate in sign and their absolute sum can exceed the result by
// six or more orders of magnitude at short times, so the lattice sum runs in
// extended precision.
using Wide = long double;

struct SpectralSetup {
    Wide alpha;
    Wide log_rho;
    Wide log_k;
};

std::vector<SpectralValue> spectral_sum(unsigned n, unsigned m_lo, unsigned m_hi,
                                        const SpectralSetup& s, const TruncationPolicy& trunc,
                                        const char* where) {
    const Wide log_alpha = std::log(s.alpha);
    const double small = 1e-3 * trunc.abs_tol;
    const double alpha_d = static_cast<double>(s.alpha);
    const std::uint64_t x_start =
        static_cast<std::uint64_t>(std::ceil(alpha_d + 10.0 * std::sqrt(alpha_d + 1.0))) + m_hi + n;
    const unsigned top = std::max(n, m_hi);
    const unsigned count = m_hi - m_lo + 1;

    std::vector<Wide> log_front(count);
    for (unsigned j = 0; j < count; ++j) {
        const unsigned m = m_lo + j;
        log_front[j] = m * log_alpha - std::lgamma(static_cast<Wide>(m) + 1) + s.log_k;
    }

    std::vector<BasicCompensatedSum<Wide>> sums(count);
    std::vector<double> tail(count, 0.0);
    std::vector<double> mass(count, 0.0);  // sum of |term|, scales the rounding error
    std::vector<Wide> c(top + 1);
    unsigned run = 0;
    std::uint64_t x = 0;
    for (;; ++x) {
        const Wide xw = static_cast<Wide>(x);
        charlier_fill<Wide>(c, xw, s.alpha);
        const Wide log_w = -s.alpha + xw * (log_alpha + s.log_rho) - std::lgamma(xw + 1);
        const Wide cn = c[n];
        double largest = 0.0;
        if (cn != 0) {
            for (unsigned j = 0; j < count; ++j) {
                const Wide cm = c[m_lo + j];
                if (cm == 0) continue;
                // Polynomial factors stay linear unless their product leaves the
                // floating range; weight and prefactor are always combined as logs.
                const Wide poly = cm * cn;
                Wide term;
                if (std::isfinite(poly) && poly != 0) {
                    term = std::exp(log_front[j] + log_w) * poly;
                } else {
                    const Wide mag = std::exp(log_front[j] + log_w + std::log(std::abs(cn)) +
                                              std::log(std::abs(cm)));
                    term = ((cm < 0) != (cn < 0)) ? -mag : mag;
                }
                const double mag = static_cast<double>(std::abs(term));
                sums[j] += term;
                tail[j] += mag;
                mass[j] += mag;
                largest = std::max(largest, mag);
            }
        }
        if (largest < small) {
            ++run;
        } else {
            run = 0;
            std::fill(tail.begin(), tail.end(), 0.0);
        }
        if (x >= x_start && run >= trunc.consecutive_small) break;
        if (x >= trunc.x_max_hard_cap) break;
    }

    std::vector<SpectralValue> out(count);
    for (unsigned j = 0; j < count; ++j) {
        out[j].probability = checked_probability(static_cast<double>(sums[j].value()), where,
                                                 kRoundingPerMass * mass[j]);
        out[j].x_max = x;
        out[j].remainder_estimate = tail[j];
    }
    return out;
}

SpectralSetup km_setup(double t, double lambda, double mu) {
    if (!(lambda > 0.0) || !(mu > 0.0)) {
        throw std::domain_error("homogeneous spectral formula needs lambda > 0 and mu > 0");
    }
    if (!(t >= 0.0)) throw std::domain_error("negative time");
    return {static_cast<Wide>(lambda) / mu, -static_cast<Wide>(mu) * t, 0};
}

SpectralSetup expr2_setup(unsigned n, const GFunctions& g) {
    if (!(g.g3 > 0.0)) {
        throw DegenerateSpectral("Charlier expression undefined: g3 = 0; use expr1");
    }
    if (!(g.g2 > 0.0)) {
        throw DegenerateSpectral("Charlier expression undefined: spectral alpha = 0 (g2 = 0); use expr1");
    }
    const Wide g2 = g.g2, g3 = g.g3;
    const Wide log_g3p1 = std::log1p(g3);
    return {g2 * (g3 + 1) / g3, -log_g3p1, n * (static_cast<Wide>(g.g4) + log_g3p1)};
}

void check_g(const GFunctions& g) {
    if (!std::isfinite(g.g2) || !std::isfinite(g.g3) || !std::isfinite(g.g4) ||
        g.g4 > kProbSlack || g.g2 < -kProbSlack) {
        throw std::invalid_argument("g-functions out of range (need g2 >= 0, g4 <= 0)");
    }
}

}  // namespace

SpectralValue km_homogeneous(unsigned n, unsigned m, double t, double lambda, double mu,
                             const TruncationPolicy& trunc) {
    return spectral_sum(n, m, m, km_setup(t, lambda, mu), trunc, "km_homogeneous").front();
}

double expr1_finite_sum(unsigned n, unsigned m, const GFunctions& g) {
    check_g(g);
    const double g4 = std::min(g.g4, 0.0);
    const double nu = std::max(g.g2, 0.0);
    const double log_p = g4;
    const double log_q = std::log(-std::expm1(g4));  // log(1 - p), -inf when p = 1
    const double log_nu = std::log(nu);             // -inf when nu = 0

    CompensatedSum sum;
    const unsigned l_max = std::min(m, n);
    for (unsigned l = 0; l <= l_max; ++l) {
        const double log_binom = log_factorial(n) - log_factorial(l) - log_factorial(n - l);
        const double log_term = log_binom + log_power(log_p, l) + log_power(log_q, n - l) - nu +
                                log_power(log_nu, m - l) - log_factorial(m - l);
        sum += std::exp(log_term);
    }
    return checked_probability(sum.value(), "expr1_finite_sum");
}

SpectralValue expr2_charlier(unsigned n, unsigned m, const GFunctions& g,
                             const TruncationPolicy& trunc) {
    return spectral_sum(n, m, m, expr2_setup(n, g), trunc, "expr2_charlier").front();
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::expr1: return "expr1";
        case Method::expr2: return "expr2";
        case Method::km: return "km";
        case Method::oracle: return "oracle";
        case Method::best: return "best";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::expr1, Method::expr2, Method::km, Method::oracle, Method::best}) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

Method best_method(const GFunctions& g) {
    return (g.g3 > 1e-12 && g.g2 > 0.0) ? Method::expr2 : Method::expr1;
}

namespace {

void require_homogeneous(const RateProfile& profile) {
    if (!profile.is_homogeneous()) {
        throw std::domain_error("method km needs constant lambda and mu");
    }
}

}  // namespace

TransitionResult transition_probability(const TransitionQuery& q, Method method,
                                        const TruncationPolicy& trunc) {
    TransitionResult r;
    r.g = solve_closed(q.profile, q.t);
    if (r.g.g3 != 0.0) r.alpha_spectral = spectral_alpha(r.g);
    r.method = method == Method::best ? best_method(r.g) : method;

    switch (r.method) {
        case Method::expr1:
            r.probability = expr1_finite_sum(q.n, q.m, r.g);
            break;
        case Method::expr2: {
            const auto v = expr2_charlier(q.n, q.m, r.g, trunc);
            r.probability = v.probability;
            r.x_max = v.x_max;
            r.remainder_estimate = v.remainder_estimate;
            break;
        }
        case Method::km: {
            require_homogeneous(q.profile);
            const auto v = km_homogeneous(q.n, q.m, q.t, q.profile.lambda().value(),
                                          q.profile.mu().value(), trunc);
            r.probability = v.probability;
            r.x_max = v.x_max;
            r.remainder_estimate = v.remainder_estimate;
            break;
        }
        case Method::oracle: {
            const auto d = master_integrate(q.profile, q.n, q.t);
            r.probability = q.m < d.probs.size() ? std::clamp(d.probs[q.m], 0.0, 1.0) : 0.0;
            r.remainder_estimate = d.leaked_mass;
            break;
        }
        case Method::best:
            break;
    }
    return r;
}

Distribution transition_row(unsigned n, double t, const RateProfile& profile, Method method,
                            unsigned m_max, const TruncationPolicy& trunc) {
    Distribution d;
    d.t = t;
    d.probs.assign(m_max + 1, 0.0);

    const GFunctions g = solve_closed(profile, t);
    if (method == Method::best) method = best_method(g);

    switch (method) {
        case Method::expr1:
            for (unsigned m = 0; m <= m_max; ++m) d.probs[m] = expr1_finite_sum(n, m, g);
            break;
        case Method::expr2: {
            const auto row = spectral_sum(n, 0, m_max, expr2_setup(n, g), trunc, "expr2_charlier");
            for (unsigned m = 0; m <= m_max; ++m) d.probs[m] = row[m].probability;
            break;
        }
        case Method::km: {
            require_homogeneous(profile);
            const auto row = spectral_sum(
                n, 0, m_max, km_setup(t, profile.lambda().value(), profile.mu().value()), trunc,
                "km_homogeneous");
            for (unsigned m = 0; m <= m_max; ++m) d.probs[m] = row[m].probability;
            break;
        }
        case Method::oracle: {
            const auto full = master_integrate(profile, n, t);
            for (unsigned m = 0; m <= m_max && m < full.probs.size(); ++m) {
                d.probs[m] = std::max(full.probs[m], 0.0);
            }
            break;
        }
        case Method::best:
            break;
    }
    d.leaked_mass = std::max(0.0, 1.0 - d.captured_mass());
    return d;
}

double expected_count(unsigned n, const GFunctions& g) { return n * std::exp(g.g4) + g.g2; }

unsigned suggested_m_max(unsigned n, const GFunctions& g) {
    const double p = std::exp(g.g4);
    const double variance = n * p * (1.0 - p) + std::max(g.g2, 0.0);
    return static_cast<unsigned>(std::ceil(expected_count(n, g) + 12.0 * std::sqrt(variance) + 10.0));
}

}  // namespace bdp
