#pragma once

#include <vector>

namespace bdp {

enum class RateKind { constant, piecewise_constant, sinusoid, exp_decay };

/// A nonnegative time-dependent rate function from a closed family with exact
/// antiderivatives and interval suprema.
///
///   constant            c
///   piecewise_constant  c_k on [t_k, t_{k+1}), right-continuous, t_0 = 0
///   sinusoid            a + b sin(omega t + phi), a >= |b|
///   exp_decay           a exp(-c t) + d
///
/// Parameters are validated by the factories; an existing RateSpec is always
/// nonnegative on t >= 0.
class RateSpec {
public:
    static RateSpec constant(double value);
    static RateSpec piecewise_constant(std::vector<double> breakpoints, std::vector<double> values);
    static RateSpec sinusoid(double base, double amplitude, double omega, double phase);
    static RateSpec exp_decay(double a, double c, double offset);

    RateKind kind() const noexcept { return kind_; }

    // Parameter accessors. Only the ones matching kind() are meaningful.
    double value() const noexcept { return p_[0]; }
    double base() const noexcept { return p_[0]; }
    double amplitude() const noexcept { return p_[1]; }
    double omega() const noexcept { return p_[2]; }
    double phase() const noexcept { return p_[3]; }
    double decay_amplitude() const noexcept { return p_[0]; }
    double decay_rate() const noexcept { return p_[1]; }
    double offset() const noexcept { return p_[2]; }
    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// True when the function does not depend on time.
    bool is_time_independent() const noexcept;

    /// Points in the open interval (t0, t1) where the function is discontinuous.
    std::vector<double> discontinuities(double t0, double t1) const;

private:
    RateSpec() = default;

    RateKind kind_ = RateKind::constant;
    double p_[4] = {0.0, 0.0, 0.0, 0.0};
    std::vector<double> breakpoints_;
    std::vector<double> values_;
};

/// Pointwise value. Throws std::domain_error for t < 0.
double eval_rate(const RateSpec& spec, double t);

/// Exact integral of the rate over [t0, t1]. Throws std::domain_error unless
/// 0 <= t0 <= t1.
double integrate_rate(const RateSpec& spec, double t0, double t1);

/// Supremum of the rate over [t0, t1]; exact for every built-in kind.
double sup_rate(const RateSpec& spec, double t0, double t1);

/// Birth rate lambda(t), per-particle death rate mu(t), and the horizon over
/// which queries are valid.
class RateProfile {
public:
    RateProfile(RateSpec lambda, RateSpec mu, double horizon);

    const RateSpec& lambda() const noexcept { return lambda_; }
    const RateSpec& mu() const noexcept { return mu_; }
    double horizon() const noexcept { return horizon_; }

    /// Throws std::domain_error unless 0 <= t <= horizon.
    void check_time(double t) const;

    /// Both rates constant in time.
    bool is_homogeneous() const noexcept;

    /// Sorted union of both rates' discontinuities in (t0, t1).
    std::vector<double> discontinuities(double t0, double t1) const;

private:
    RateSpec lambda_;
    RateSpec mu_;
    double horizon_;
};

}  // namespace bdp
