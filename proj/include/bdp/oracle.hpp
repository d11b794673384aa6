#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bdp/rates.hpp"

namespace bdp {

/// Probability vector over states 0..N plus the mass known to lie beyond N.
struct Distribution {
    std::vector<double> probs;
    double leaked_mass = 0.0;
    double t = 0.0;

    double captured_mass() const;
    double mean() const;
};

/// Hard limit on the truncated state space of the master-equation integrator.
inline constexpr std::size_t kMaxMasterStates = 1000000;

/// Forward (master) equation of the immigration-death process,
///   dP_n/dt = lambda(t) [P_{n-1} - P_n] + mu(t) [(n+1) P_{n+1} - n P_n],
/// truncated at `cap`, integrated with an adaptive Dormand-Prince pair whose
/// step controller runs at tol / 100 so the global error stays below `tol`.
/// Births out of the top state are removed and accumulated in leaked_mass.
///
/// Without an explicit cap the state space starts at
///   n0 + ceil(nu + 12 sqrt(nu + n0) + 20),  nu = int_0^t lambda,
/// and doubles until leaked_mass < 1e-12.
///
/// Throws std::invalid_argument if n0 > cap, ResourceError past
/// kMaxMasterStates, IntegrationFailure on step-size collapse.
Distribution master_integrate(const RateProfile& profile, unsigned n0, double t,
                              std::optional<std::size_t> cap = std::nullopt, double tol = 1e-12);

struct SimConfig {
    std::uint64_t n_traj = 100000;
    std::uint64_t seed = 0x5eed;
    std::uint64_t batch = 4096;
    unsigned workers = 0;  // 0: hardware concurrency
};

struct SimResult {
    Distribution dist;             // empirical frequencies, leaked_mass = 0
    std::vector<double> stderrs;   // binomial standard error per state
    double mean = 0.0;
    double mean_stderr = 0.0;
};

/// Exact trajectory sampling by thinning against interval rate bounds.
/// Trajectory i draws from a generator seeded by (seed, i), so the result
/// does not depend on the number of workers.
SimResult mc_simulate(const RateProfile& profile, unsigned n0, double t, const SimConfig& cfg = {});

/// Final state of a single trajectory; exposed for testing.
unsigned simulate_trajectory(const RateProfile& profile, unsigned n0, double t,
                             std::uint64_t seed, std::uint64_t index);

}  // namespace bdp
