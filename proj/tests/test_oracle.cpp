#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bdp/charlier.hpp"
#include "bdp/errors.hpp"
#include "bdp/oracle.hpp"
#include "bdp/weinorman.hpp"
#include "profiles.hpp"

using namespace bdp;
using bdp::testing::constant_profile;

namespace {

double total_variation(const Distribution& a, const Distribution& b) {
    const std::size_t n = std::max(a.probs.size(), b.probs.size());
    double tv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double pa = i < a.probs.size() ? a.probs[i] : 0.0;
        const double pb = i < b.probs.size() ? b.probs[i] : 0.0;
        tv += std::abs(pa - pb);
    }
    return 0.5 * (tv + a.leaked_mass + b.leaked_mass);
}

}  // namespace

TEST_CASE("master_integrate at t = 0 is a point mass") {
    const auto d = master_integrate(constant_profile(), 4, 0.0);
    for (std::size_t i = 0; i < d.probs.size(); ++i) CHECK(d.probs[i] == (i == 4 ? 1.0 : 0.0));
    CHECK(d.leaked_mass == 0.0);
}

TEST_CASE("empty start gives P0 = e^{-nu}") {
    const auto d = master_integrate(constant_profile(), 0, 2.0);
    CHECK(std::abs(d.probs[0] - std::exp(-2.0 * (1.0 - std::exp(-1.0)))) <= 1e-11);
    CHECK(d.t == 2.0);
}

TEST_CASE("stationary law is Poisson(lambda/mu)") {
    const auto d = master_integrate(constant_profile(1.0, 1.0, 30.0), 0, 20.0);
    for (std::size_t x = 0; x < d.probs.size(); ++x) {
        CHECK_MESSAGE(std::abs(d.probs[x] - poisson_weight(x, 1.0)) <= 1e-9, "x=" << x);
    }
}

TEST_CASE("probability is conserved") {
    for (const auto& [name, profile] : bdp::testing::standard_profiles()) {
        for (double t : {0.5, 1.5, 4.0}) {
            const auto d = master_integrate(profile, 7, t);
            CHECK_MESSAGE(std::abs(d.captured_mass() + d.leaked_mass - 1.0) <= 1e-10, name);
            CHECK(d.leaked_mass < 1e-12);
            for (double p : d.probs) CHECK(p >= -1e-12);
        }
    }
}

TEST_CASE("a small explicit cap leaks mass but conserves the total") {
    const auto d = master_integrate(constant_profile(5.0, 0.1), 0, 2.0, 6);
    CHECK(d.probs.size() == 7);
    CHECK(d.leaked_mass > 0.01);
    CHECK(std::abs(d.captured_mass() + d.leaked_mass - 1.0) <= 1e-10);
}

TEST_CASE("halving the tolerance changes the answer by less than the tolerance") {
    const auto profile = bdp::testing::standard_profiles()[3].profile;
    const double tol = 1e-10;
    const auto a = master_integrate(profile, 3, 1.5, std::nullopt, tol);
    const auto b = master_integrate(profile, 3, 1.5, a.probs.size() - 1, tol / 2);
    REQUIRE(a.probs.size() == b.probs.size());
    for (std::size_t i = 0; i < a.probs.size(); ++i) CHECK(std::abs(a.probs[i] - b.probs[i]) < tol);
}

TEST_CASE("first moment follows the mean ODE") {
    for (const auto& [name, profile] : bdp::testing::standard_profiles()) {
        const double t = 1.5;
        const auto g = solve_closed(profile, t);
        const auto d = master_integrate(profile, 6, t);
        CHECK_MESSAGE(std::abs(d.mean() - (6.0 * std::exp(g.g4) + g.g2)) <= 1e-8, name);
    }
}

TEST_CASE("master_integrate argument errors") {
    CHECK_THROWS_AS(master_integrate(constant_profile(), 10, 1.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(master_integrate(constant_profile(), 0, 1.0, kMaxMasterStates + 5), ResourceError);
    CHECK_THROWS_AS(master_integrate(constant_profile(), 0, 11.0), std::domain_error);
}

TEST_CASE("pure death: mean decays like n0 e^{-mu t}") {
    const RateProfile profile(RateSpec::constant(0.0), RateSpec::constant(0.7), 5.0);
    SimConfig cfg;
    cfg.n_traj = 20000;
    const auto r = mc_simulate(profile, 5, 1.3, cfg);
    const double expected = 5.0 * std::exp(-0.7 * 1.3);
    CHECK(std::abs(r.mean - expected) <= 4.0 * r.mean_stderr);
    CHECK(r.dist.probs.size() <= 6);
}

TEST_CASE("Monte Carlo matches the master equation in total variation") {
    const auto profile = constant_profile();
    SimConfig cfg;
    cfg.n_traj = 100000;
    const auto mc = mc_simulate(profile, 3, 2.0, cfg);
    const auto exact = master_integrate(profile, 3, 2.0);
    CHECK(total_variation(mc.dist, exact) <= 0.01);
    CHECK(mc.dist.leaked_mass == 0.0);
    CHECK(std::abs(mc.dist.captured_mass() - 1.0) <= 1e-12);
    REQUIRE(mc.stderrs.size() == mc.dist.probs.size());
    for (std::size_t i = 0; i < mc.stderrs.size(); ++i) {
        const double p = mc.dist.probs[i];
        CHECK(mc.stderrs[i] == doctest::Approx(std::sqrt(p * (1 - p) / 100000.0)));
    }
}

TEST_CASE("Monte Carlo under time-dependent rates") {
    for (const auto& [name, profile] : bdp::testing::standard_profiles()) {
        SimConfig cfg;
        cfg.n_traj = 40000;
        const auto mc = mc_simulate(profile, 2, 1.5, cfg);
        const auto exact = master_integrate(profile, 2, 1.5);
        CHECK_MESSAGE(total_variation(mc.dist, exact) <= 0.02, name);
        CHECK(std::abs(mc.mean - exact.mean()) <= 4.0 * mc.mean_stderr);
    }
}

TEST_CASE("Monte Carlo is deterministic for any worker count") {
    const auto profile = bdp::testing::standard_profiles()[1].profile;
    SimConfig cfg;
    cfg.n_traj = 5000;
    cfg.batch = 97;
    cfg.workers = 1;
    const auto one = mc_simulate(profile, 3, 2.0, cfg);
    for (unsigned workers : {2u, 3u, 8u}) {
        cfg.workers = workers;
        const auto many = mc_simulate(profile, 3, 2.0, cfg);
        CHECK(many.dist.probs == one.dist.probs);
        CHECK(many.mean == one.mean);
    }
    cfg.batch = 4096;
    CHECK(mc_simulate(profile, 3, 2.0, cfg).dist.probs == one.dist.probs);
    cfg.seed = 12345;
    CHECK(mc_simulate(profile, 3, 2.0, cfg).dist.probs != one.dist.probs);
}

TEST_CASE("single trajectories are reproducible") {
    const auto profile = constant_profile();
    for (std::uint64_t i = 0; i < 20; ++i) {
        CHECK(simulate_trajectory(profile, 3, 2.0, 42, i) == simulate_trajectory(profile, 3, 2.0, 42, i));
    }
    CHECK(simulate_trajectory(profile, 3, 0.0, 42, 0) == 3);
}

TEST_CASE("Distribution helpers") {
    Distribution d{{0.25, 0.5, 0.25}, 0.0, 1.0};
    CHECK(d.captured_mass() == 1.0);
    CHECK(d.mean() == 1.0);
}
