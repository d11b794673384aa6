#include "bdp/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include <boost/numeric/odeint.hpp>

#include "bdp/errors.hpp"
#include "bdp/summation.hpp"

namespace bdp {

namespace odeint = boost::numeric::odeint;

double Distribution::captured_mass() const {
    CompensatedSum s;
    for (double p : probs) s += p;
    return s.value();
}

double Distribution::mean() const {
    CompensatedSum s;
    for (std::size_t k = 0; k < probs.size(); ++k) s += static_cast<double>(k) * probs[k];
    return s.value();
}

namespace {

// State layout: P_0 .. P_cap, then the leaked mass.
struct MasterSystem {
    const RateProfile* profile;
    std::size_t cap;

    void operator()(const std::vector<double>& y, std::vector<double>& dy, double t) const {
        const double lambda = eval_rate(profile->lambda(), t);
        const double mu = eval_rate(profile->mu(), t);
        for (std::size_t n = 0; n <= cap; ++n) {
            const double nd = static_cast<double>(n);
            const double below = n > 0 ? y[n - 1] : 0.0;
            const double above = n < cap ? y[n + 1] : 0.0;
            dy[n] = lambda * (below - y[n]) + mu * ((nd + 1.0) * above - nd * y[n]);
        }
        dy[cap + 1] = lambda * y[cap];
    }
};

Distribution integrate_with_cap(const RateProfile& profile, unsigned n0, double t,
                                std::size_t cap, double tol) {
    std::vector<double> y(cap + 2, 0.0);
    y[n0] = 1.0;

    if (t > 0.0) {
        using Stepper = odeint::runge_kutta_dopri5<std::vector<double>>;
        // Local error targets a hundredth of tol so the accumulated error stays below it.
        constexpr double kLocalFactor = 1e-2;
        auto stepper = odeint::make_controlled(tol * kLocalFactor, tol * kLocalFactor, Stepper());
        double reached = 0.0;
        auto observe = [&](const std::vector<double>&, double s) { reached = s; };
        auto knots = profile.discontinuities(0.0, t);
        knots.push_back(t);
        double left = 0.0;
        try {
            for (double right : knots) {
                odeint::integrate_adaptive(stepper, MasterSystem{&profile, cap}, y, left, right,
                                           std::min(1e-3, right - left), observe);
                left = right;
            }
        } catch (const odeint::odeint_error& e) {
            throw IntegrationFailure(std::string("master equation: ") + e.what(), reached);
        }
    }

    Distribution d;
    d.t = t;
    d.leaked_mass = y[cap + 1];
    y.pop_back();
    d.probs = std::move(y);
    return d;
}

}  // namespace

Distribution master_integrate(const RateProfile& profile, unsigned n0, double t,
                              std::optional<std::size_t> cap, double tol) {
    profile.check_time(t);
    if (!(tol > 0.0)) throw std::invalid_argument("master_integrate tolerance must be positive");
    if (cap) {
        if (n0 > *cap) throw std::invalid_argument("initial state above the truncation cap");
        if (*cap + 1 > kMaxMasterStates) throw ResourceError("truncation cap beyond the state limit");
        return integrate_with_cap(profile, n0, t, *cap, tol);
    }

    const double nu = integrate_rate(profile.lambda(), 0.0, t);
    std::size_t size = n0 + static_cast<std::size_t>(std::ceil(nu + 12.0 * std::sqrt(nu + n0) + 20.0));
    for (;;) {
        if (size + 1 > kMaxMasterStates) {
            throw ResourceError("master equation needs more than " +
                                std::to_string(kMaxMasterStates) + " states");
        }
        Distribution d = integrate_with_cap(profile, n0, t, size, tol);
        if (d.leaked_mass < 1e-12) return d;
        size *= 2;
    }
}

namespace {

// SplitMix64 finaliser; turns (seed, index) into a well-mixed 64-bit seed.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

unsigned simulate_trajectory(const RateProfile& profile, unsigned n0, double t,
                             std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 rng(mix64(mix64(seed) ^ index));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const RateSpec& lambda = profile.lambda();
    const RateSpec& mu = profile.mu();
    const double window = t / 8.0;

    auto bound_over = [&](double a, double b, unsigned n) {
        return sup_rate(lambda, a, b) + static_cast<double>(n) * sup_rate(mu, a, b);
    };

    unsigned n = n0;
    double s = 0.0;
    while (s < t) {
        double end = std::min(t, s + window);
        double bound = bound_over(s, end, n);
        if (bound > 0.0 && 1.0 / bound < end - s) {
            end = s + 1.0 / bound;
            bound = bound_over(s, end, n);
        }
        if (bound <= 0.0) {
            // Nothing can happen before the window closes.
            s = end;
            continue;
        }
        const double tau = -std::log1p(-unif(rng)) / bound;
        if (s + tau >= end) {
            s = end;
            continue;
        }
        s += tau;
        const double birth = eval_rate(lambda, s);
        const double death = static_cast<double>(n) * eval_rate(mu, s);
        const double u = unif(rng) * bound;
        if (u < birth) {
            ++n;
        } else if (u < birth + death) {
            --n;
        }
    }
    return n;
}

SimResult mc_simulate(const RateProfile& profile, unsigned n0, double t, const SimConfig& cfg) {
    profile.check_time(t);
    if (cfg.n_traj == 0) throw std::invalid_argument("n_traj must be at least 1");
    const std::uint64_t batch = std::max<std::uint64_t>(cfg.batch, 1);
    const std::uint64_t n_batches = (cfg.n_traj + batch - 1) / batch;
    unsigned workers = cfg.workers ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, n_batches));

    std::vector<unsigned> finals(cfg.n_traj);
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t b = next++; b < n_batches; b = next++) {
            const std::uint64_t lo = b * batch;
            const std::uint64_t hi = std::min(cfg.n_traj, lo + batch);
            for (std::uint64_t i = lo; i < hi; ++i) {
                finals[i] = simulate_trajectory(profile, n0, t, cfg.seed, i);
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    const unsigned top = *std::max_element(finals.begin(), finals.end());
    std::vector<std::uint64_t> counts(top + 1, 0);
    for (unsigned f : finals) ++counts[f];

    SimResult r;
    const double total = static_cast<double>(cfg.n_traj);
    r.dist.t = t;
    r.dist.probs.resize(counts.size());
    r.stderrs.resize(counts.size());
    CompensatedSum m1, m2;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        const double p = static_cast<double>(counts[k]) / total;
        r.dist.probs[k] = p;
        r.stderrs[k] = std::sqrt(p * (1.0 - p) / total);
        m1 += static_cast<double>(k) * p;
        m2 += static_cast<double>(k) * static_cast<double>(k) * p;
    }
    r.mean = m1.value();
    const double var = std::max(0.0, m2.value() - r.mean * r.mean);
    r.mean_stderr = std::sqrt(var / total);
    return r;
}

}  // namespace bdp
