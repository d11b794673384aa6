#include "bdp/charlier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdp/summation.hpp"

namespace bdp {

namespace {

void check_alpha(double alpha) {
    if (alpha == 0.0 || !std::isfinite(alpha)) {
        throw std::domain_error("Charlier parameter alpha must be finite and nonzero");
    }
}

}  // namespace

CharlierParams::CharlierParams(double alpha) : alpha_(alpha) { check_alpha(alpha); }

std::vector<double> charlier_sequence(unsigned n_max, double x, double alpha) {
    check_alpha(alpha);
    std::vector<double> c(n_max + 1);
    charlier_fill<double>(c, x, alpha);
    return c;
}

double charlier_eval(unsigned n, double x, double alpha) {
    check_alpha(alpha);
    if (x >= 0.0 && x == std::floor(x) && x < n) {
        // C_n(x) = C_x(n): run the recurrence in the smaller index.
        return charlier_eval(static_cast<unsigned>(x), n, alpha);
    }
    if (n == 0) return 1.0;
    double prev = 1.0;
    double cur = 1.0 - x / alpha;
    for (unsigned k = 1; k < n; ++k) {
        const double next = ((k + alpha - x) * cur - k * prev) / alpha;
        prev = cur;
        cur = next;
    }
    return cur;
}

double gf_coeff_oracle(unsigned n, std::uint64_t x, double alpha) {
    check_alpha(alpha);
    // term_k = binom(n,k) binom(x,k) k! (-1/alpha)^k, built by the ratio
    // term_{k+1}/term_k = -(n-k)(x-k) / ((k+1) alpha). The terms can exceed
    // the result by ten orders of magnitude, hence the extended precision.
    using Wide = long double;
    const std::uint64_t k_max = std::min<std::uint64_t>(n, x);
    BasicCompensatedSum<Wide> sum;
    Wide term = 1;
    sum += term;
    for (std::uint64_t k = 0; k < k_max; ++k) {
        term *= -static_cast<Wide>(n - k) * static_cast<Wide>(x - k) / (static_cast<Wide>(k + 1) * alpha);
        sum += term;
    }
    return static_cast<double>(sum.value());
}

double log_poisson_weight(std::uint64_t x, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("Poisson weight needs alpha > 0");
    const double xd = static_cast<double>(x);
    return -alpha + xd * std::log(alpha) - std::lgamma(xd + 1.0);
}

double poisson_weight(std::uint64_t x, double alpha) {
    return std::exp(log_poisson_weight(x, alpha));
}

double charlier_norm_squared(unsigned n, double alpha) {
    check_alpha(alpha);
    return std::exp(std::lgamma(n + 1.0) - n * std::log(std::abs(alpha))) *
           ((alpha < 0.0 && n % 2 == 1) ? -1.0 : 1.0);
}

LatticeSum charlier_weighted_inner(unsigned m, unsigned n, double alpha, double abs_tol) {
    if (!(alpha > 0.0)) throw std::domain_error("weighted Charlier sum needs alpha > 0");
    const double small = 1e-3 * abs_tol;
    const std::uint64_t x_start =
        static_cast<std::uint64_t>(std::ceil(alpha + 10.0 * std::sqrt(alpha + 1.0))) + m + n;
    constexpr int consecutive_needed = 10;
    constexpr std::uint64_t hard_cap = 100000;

    const unsigned top = std::max(m, n);
    CompensatedSum sum;
    int run = 0;
    double tail = 0.0;
    std::uint64_t x = 0;
    for (;; ++x) {
        const auto c = charlier_sequence(top, static_cast<double>(x), alpha);
        const double term = poisson_weight(x, alpha) * c[m] * c[n];
        sum += term;
        if (std::abs(term) < small) {
            ++run;
            tail += std::abs(term);
        } else {
            run = 0;
            tail = 0.0;
        }
        if ((x >= x_start && run >= consecutive_needed) || x >= hard_cap) break;
    }
    return {sum.value(), x, tail};
}

}  // namespace bdp
