#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "bdp/oracle.hpp"
#include "bdp/rates.hpp"
#include "bdp/weinorman.hpp"

namespace bdp {

/// P_{n -> m}(t) under a rate profile.
struct TransitionQuery {
    unsigned n = 0;
    unsigned m = 0;
    double t = 0.0;
    RateProfile profile;
};

/// Truncation of the infinite lattice sums over x.
struct TruncationPolicy {
    double abs_tol = 1e-12;           // terms below 1e-3 abs_tol count as small
    unsigned consecutive_small = 10;  // stop after this many small terms in a row
    std::uint64_t x_max_hard_cap = 100000;
};

/// A truncated lattice sum and its truncation diagnostics.
struct SpectralValue {
    double probability = 0.0;
    std::uint64_t x_max = 0;
    double remainder_estimate = 0.0;
};

/// Time-homogeneous spectral formula
///   P = (alpha^m / m!) sum_x e^{-mu t x} C_m(x) C_n(x) w(x; alpha),  alpha = lambda / mu,
/// with w the Poisson(alpha) weight. Throws std::domain_error unless
/// lambda > 0 and mu > 0.
SpectralValue km_homogeneous(unsigned n, unsigned m, double t, double lambda, double mu,
                             const TruncationPolicy& trunc = {});

/// Finite-sum expression, evaluated as the convolution of the Binomial(n, p)
/// survivors with the Poisson(nu) immigrants:
///   P = sum_{l <= min(m,n)} binom(n,l) p^l (1-p)^{n-l} e^{-nu} nu^{m-l} / (m-l)!
/// with p = e^{g4}, nu = g2.
double expr1_finite_sum(unsigned n, unsigned m, const GFunctions& g);

/// Charlier expression with the time-dependent spectral parameter
/// alpha = g2 (g3 + 1) / g3:
///   P = (alpha^m / m!) sum_x e^{g4 n} C_m(x) C_n(x) w(x; alpha) (g3 + 1)^{n - x}.
/// Throws DegenerateSpectral when g3 = 0 or g2 = 0.
SpectralValue expr2_charlier(unsigned n, unsigned m, const GFunctions& g,
                             const TruncationPolicy& trunc = {});

enum class Method { expr1, expr2, km, oracle, best };

std::string_view to_string(Method m);
/// Parses "expr1", "expr2", "km", "oracle", "best"; throws std::invalid_argument.
Method parse_method(std::string_view name);

/// expr2 where it is defined (g3 > 1e-12 and g2 > 0), expr1 otherwise.
Method best_method(const GFunctions& g);

struct TransitionResult {
    double probability = 0.0;
    Method method = Method::best;  // the method actually used
    GFunctions g;
    std::optional<double> alpha_spectral;
    std::optional<std::uint64_t> x_max;
    std::optional<double> remainder_estimate;
};

/// Single transition probability by the requested method. The g-functions
/// come from solve_closed.
TransitionResult transition_probability(const TransitionQuery& q, Method method,
                                        const TruncationPolicy& trunc = {});

/// (P_{n->0}, ..., P_{n->m_max}); leaked_mass holds 1 minus the captured mass.
Distribution transition_row(unsigned n, double t, const RateProfile& profile, Method method,
                            unsigned m_max, const TruncationPolicy& trunc = {});

/// Mean of the law started from n: n e^{g4} + g2.
double expected_count(unsigned n, const GFunctions& g);

/// Row length that captures all but a negligible tail:
/// ceil(mean + 12 sqrt(variance) + 10).
unsigned suggested_m_max(unsigned n, const GFunctions& g);

}  // namespace bdp
