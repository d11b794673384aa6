#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace bdp {

/// Parameter of the Charlier family C_n(x; alpha), orthogonal with respect to
/// the Poisson(alpha) weight. alpha must be nonzero.
class CharlierParams {
public:
    explicit CharlierParams(double alpha);
    double alpha() const noexcept { return alpha_; }

private:
    double alpha_;
};

/// C_n(x; alpha) by the three-term recurrence
///   C_0 = 1, C_1 = 1 - x/alpha,
///   alpha C_{n+1} = (n + alpha - x) C_n - n C_{n-1},
/// run in n, or in x through the duality C_n(x) = C_x(n) when x is an integer
/// below n. Throws std::domain_error for alpha = 0.
double charlier_eval(unsigned n, double x, double alpha);

/// C_0(x) .. C_{n_max}(x) in one pass of the recurrence.
std::vector<double> charlier_sequence(unsigned n_max, double x, double alpha);

/// Plain three-term recurrence in n at fixed x: out[k] = C_k(x; alpha) for
/// k < out.size(). Accurate while k <= x; past that point C_k(x) is the
/// minimal solution of the recurrence and rounding errors grow like k!/alpha^k.
template <class T>
void charlier_recurrence(std::span<T> out, T x, T alpha) {
    if (out.empty()) return;
    out[0] = 1;
    if (out.size() == 1) return;
    out[1] = 1 - x / alpha;
    for (std::size_t n = 1; n + 1 < out.size(); ++n) {
        const T nt = static_cast<T>(n);
        out[n + 1] = ((nt + alpha - x) * out[n] - nt * out[n - 1]) / alpha;
    }
}

/// out[k] = C_k(x; alpha), k < out.size(). For integer x the degrees k > x are
/// taken from the duality C_k(x) = C_x(k), i.e. the recurrence is only ever
/// run with degree <= argument, where it is stable. alpha must be nonzero.
template <class T>
void charlier_fill(std::span<T> out, T x, T alpha) {
    if (out.empty()) return;
    const bool lattice = x >= 0 && x == std::floor(x) && x + 1 < static_cast<T>(out.size());
    if (!lattice) {
        charlier_recurrence(out, x, alpha);
        return;
    }
    const auto xi = static_cast<std::size_t>(x);
    charlier_recurrence(out.first(xi + 1), x, alpha);
    // Degree xi at argument k, for every k > xi.
    for (std::size_t k = xi + 1; k < out.size(); ++k) {
        const T arg = static_cast<T>(k);
        T prev = 1;
        T cur = 1 - arg / alpha;
        if (xi == 0) {
            out[k] = 1;
            continue;
        }
        for (std::size_t d = 1; d < xi; ++d) {
            const T dt = static_cast<T>(d);
            const T next = ((dt + alpha - arg) * cur - dt * prev) / alpha;
            prev = cur;
            cur = next;
        }
        out[k] = cur;
    }
}

/// Independent evaluation from the generating-function expansion
///   C_n(x; alpha) = sum_k binom(n,k) binom(x,k) k! (-1/alpha)^k
/// for integer x >= 0, summed in extended precision.
double gf_coeff_oracle(unsigned n, std::uint64_t x, double alpha);

/// Poisson weight e^{-alpha} alpha^x / x!, evaluated through lgamma.
/// Throws std::domain_error for alpha <= 0.
double poisson_weight(std::uint64_t x, double alpha);

/// Natural log of the Poisson weight.
double log_poisson_weight(std::uint64_t x, double alpha);

/// Result of a truncated sum over the lattice x = 0, 1, ...
struct LatticeSum {
    double value = 0.0;
    std::uint64_t x_max = 0;            // last x included
    double remainder_estimate = 0.0;    // magnitude of the trailing small terms
};

/// sum_x w(x; alpha) C_m(x) C_n(x), truncated: start at
/// ceil(alpha + 10 sqrt(alpha + 1)) + m + n and continue until ten
/// consecutive terms fall below 1e-3 abs_tol. alpha > 0.
LatticeSum charlier_weighted_inner(unsigned m, unsigned n, double alpha, double abs_tol = 1e-12);

/// The squared norm alpha^{-n} n! of C_n under the Poisson(alpha) weight.
double charlier_norm_squared(unsigned n, double alpha);

}  // namespace bdp
