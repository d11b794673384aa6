#pragma once

// Hand-rolled random generators for the property tests. Seeds are fixed so
// failures reproduce.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "bdp/rates.hpp"

namespace bdp::testing {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::vector<double> reals(std::size_t n, double lo, double hi) {
        std::vector<double> out(n);
        for (double& v : out) v = uniform(lo, hi);
        return out;
    }

    RateSpec rate(RateKind kind) {
        switch (kind) {
            case RateKind::constant:
                return RateSpec::constant(uniform(0.0, 3.0));
            case RateKind::piecewise_constant: {
                const int pieces = integer(1, 5);
                std::vector<double> bp{0.0}, vals{uniform(0.0, 3.0)};
                for (int k = 1; k < pieces; ++k) {
                    bp.push_back(bp.back() + uniform(0.1, 1.0));
                    vals.push_back(uniform(0.0, 3.0));
                }
                return RateSpec::piecewise_constant(bp, vals);
            }
            case RateKind::sinusoid: {
                const double a = uniform(0.0, 2.0);
                const double b = uniform(-a, a);
                return RateSpec::sinusoid(a, b, uniform(-8.0, 8.0), uniform(0.0, 2.0 * std::numbers::pi));
            }
            case RateKind::exp_decay:
                return RateSpec::exp_decay(uniform(0.0, 2.0), uniform(0.0, 3.0), uniform(0.0, 1.0));
        }
        return RateSpec::constant(1.0);
    }

    RateSpec any_rate() { return rate(static_cast<RateKind>(integer(0, 3))); }

private:
    std::mt19937_64 rng_;
};

inline constexpr RateKind kAllKinds[] = {RateKind::constant, RateKind::piecewise_constant,
                                         RateKind::sinusoid, RateKind::exp_decay};

}  // namespace bdp::testing
