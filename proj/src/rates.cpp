#include "bdp/rates.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bdp {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_interval(double t0, double t1) {
    if (!(t0 >= 0.0)) throw std::domain_error("rate query at negative time");
    if (!(t1 >= t0)) throw std::domain_error("rate interval with t1 < t0");
}

// Index k of the piece containing t, i.e. breakpoints[k] <= t < breakpoints[k+1].
std::size_t piece_index(const std::vector<double>& breakpoints, double t) {
    auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
    return static_cast<std::size_t>(std::distance(breakpoints.begin(), it)) - 1;
}

}  // namespace

RateSpec RateSpec::constant(double value) {
    require(std::isfinite(value) && value >= 0.0, "constant rate must be finite and >= 0");
    RateSpec s;
    s.kind_ = RateKind::constant;
    s.p_[0] = value;
    return s;
}

RateSpec RateSpec::piecewise_constant(std::vector<double> breakpoints, std::vector<double> values) {
    require(!breakpoints.empty(), "piecewise_constant needs at least one breakpoint");
    require(breakpoints.size() == values.size(),
            "piecewise_constant needs one value per breakpoint");
    require(breakpoints.front() == 0.0, "piecewise_constant breakpoints must start at 0");
    for (std::size_t k = 1; k < breakpoints.size(); ++k) {
        require(std::isfinite(breakpoints[k]) && breakpoints[k] > breakpoints[k - 1],
                "piecewise_constant breakpoints must be strictly increasing");
    }
    for (double v : values) {
        require(std::isfinite(v) && v >= 0.0, "piecewise_constant values must be finite and >= 0");
    }
    RateSpec s;
    s.kind_ = RateKind::piecewise_constant;
    s.breakpoints_ = std::move(breakpoints);
    s.values_ = std::move(values);
    return s;
}

RateSpec RateSpec::sinusoid(double base, double amplitude, double omega, double phase) {
    require(std::isfinite(base) && std::isfinite(amplitude) && std::isfinite(omega) &&
                std::isfinite(phase),
            "sinusoid parameters must be finite");
    require(base >= std::abs(amplitude), "sinusoid requires base >= |amp|");
    RateSpec s;
    s.kind_ = RateKind::sinusoid;
    s.p_[0] = base;
    s.p_[1] = amplitude;
    s.p_[2] = omega;
    s.p_[3] = phase;
    return s;
}

RateSpec RateSpec::exp_decay(double a, double c, double offset) {
    require(std::isfinite(a) && std::isfinite(c) && std::isfinite(offset),
            "exp_decay parameters must be finite");
    require(a >= 0.0 && c >= 0.0 && offset >= 0.0, "exp_decay parameters must be >= 0");
    RateSpec s;
    s.kind_ = RateKind::exp_decay;
    s.p_[0] = a;
    s.p_[1] = c;
    s.p_[2] = offset;
    return s;
}

bool RateSpec::is_time_independent() const noexcept {
    switch (kind_) {
        case RateKind::constant:
            return true;
        case RateKind::piecewise_constant:
            return std::all_of(values_.begin(), values_.end(),
                               [&](double v) { return v == values_.front(); });
        case RateKind::sinusoid:
            return p_[1] == 0.0 || p_[2] == 0.0;
        case RateKind::exp_decay:
            return p_[0] == 0.0 || p_[1] == 0.0;
    }
    return false;
}

std::vector<double> RateSpec::discontinuities(double t0, double t1) const {
    std::vector<double> out;
    if (kind_ != RateKind::piecewise_constant) return out;
    for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
        if (breakpoints_[k] > t0 && breakpoints_[k] < t1) out.push_back(breakpoints_[k]);
    }
    return out;
}

double eval_rate(const RateSpec& spec, double t) {
    if (!(t >= 0.0)) throw std::domain_error("rate evaluated at negative time");
    switch (spec.kind()) {
        case RateKind::constant:
            return spec.value();
        case RateKind::piecewise_constant:
            return spec.values()[piece_index(spec.breakpoints(), t)];
        case RateKind::sinusoid:
            return spec.base() + spec.amplitude() * std::sin(spec.omega() * t + spec.phase());
        case RateKind::exp_decay:
            return spec.decay_amplitude() * std::exp(-spec.decay_rate() * t) + spec.offset();
    }
    return 0.0;
}

double integrate_rate(const RateSpec& spec, double t0, double t1) {
    check_interval(t0, t1);
    if (t0 == t1) return 0.0;
    switch (spec.kind()) {
        case RateKind::constant:
            return spec.value() * (t1 - t0);
        case RateKind::piecewise_constant: {
            const auto& bp = spec.breakpoints();
            const auto& vals = spec.values();
            double total = 0.0;
            std::size_t k = piece_index(bp, t0);
            double left = t0;
            while (left < t1) {
                const double right = (k + 1 < bp.size()) ? std::min(bp[k + 1], t1) : t1;
                total += vals[k] * (right - left);
                left = right;
                ++k;
            }
            return total;
        }
        case RateKind::sinusoid: {
            const double a = spec.base(), b = spec.amplitude(), w = spec.omega(), phi = spec.phase();
            if (w == 0.0) return (a + b * std::sin(phi)) * (t1 - t0);
            // cos(x1) - cos(x0) = -2 sin((x1+x0)/2) sin((x1-x0)/2), which keeps
            // precision when the interval is short.
            const double mid = 0.5 * w * (t1 + t0) + phi;
            const double half = 0.5 * w * (t1 - t0);
            return a * (t1 - t0) + (b / w) * 2.0 * std::sin(mid) * std::sin(half);
        }
        case RateKind::exp_decay: {
            const double a = spec.decay_amplitude(), c = spec.decay_rate(), d = spec.offset();
            if (c == 0.0) return (a + d) * (t1 - t0);
            // (a/c)(e^{-c t0} - e^{-c t1}) = -(a/c) e^{-c t0} expm1(-c (t1 - t0))
            return -(a / c) * std::exp(-c * t0) * std::expm1(-c * (t1 - t0)) + d * (t1 - t0);
        }
    }
    return 0.0;
}

double sup_rate(const RateSpec& spec, double t0, double t1) {
    check_interval(t0, t1);
    switch (spec.kind()) {
        case RateKind::constant:
            return spec.value();
        case RateKind::piecewise_constant: {
            const auto& bp = spec.breakpoints();
            const auto& vals = spec.values();
            std::size_t k = piece_index(bp, t0);
            double best = vals[k];
            for (++k; k < bp.size() && bp[k] <= t1; ++k) best = std::max(best, vals[k]);
            return best;
        }
        case RateKind::sinusoid: {
            const double a = spec.base(), b = spec.amplitude(), w = spec.omega(), phi = spec.phase();
            if (b == 0.0 || w == 0.0) return a + b * std::sin(phi);
            constexpr double two_pi = 2.0 * std::numbers::pi;
            double th0 = w * t0 + phi, th1 = w * t1 + phi;
            if (th0 > th1) std::swap(th0, th1);
            if (th1 - th0 >= two_pi) return a + std::abs(b);
            // Peak of b sin(theta) sits at pi/2 (b > 0) or -pi/2 (b < 0), mod 2 pi.
            const double peak = (b > 0.0) ? std::numbers::pi / 2 : -std::numbers::pi / 2;
            const double k = std::ceil((th0 - peak) / two_pi);
            if (peak + k * two_pi <= th1) return a + std::abs(b);
            return std::max(eval_rate(spec, t0), eval_rate(spec, t1));
        }
        case RateKind::exp_decay:
            return eval_rate(spec, t0);
    }
    return 0.0;
}

RateProfile::RateProfile(RateSpec lambda, RateSpec mu, double horizon)
    : lambda_(std::move(lambda)), mu_(std::move(mu)), horizon_(horizon) {
    if (!(std::isfinite(horizon) && horizon > 0.0)) {
        throw std::invalid_argument("horizon must be finite and positive");
    }
}

void RateProfile::check_time(double t) const {
    if (!(t >= 0.0 && t <= horizon_)) {
        throw std::domain_error("time " + std::to_string(t) + " outside [0, horizon]");
    }
}

bool RateProfile::is_homogeneous() const noexcept {
    return lambda_.kind() == RateKind::constant && mu_.kind() == RateKind::constant;
}

std::vector<double> RateProfile::discontinuities(double t0, double t1) const {
    auto out = lambda_.discontinuities(t0, t1);
    auto more = mu_.discontinuities(t0, t1);
    out.insert(out.end(), more.begin(), more.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace bdp
