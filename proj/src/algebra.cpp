#include "bdp/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bdp/charlier.hpp"
#include "bdp/summation.hpp"

namespace bdp {

namespace {

double max_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double c : v) m = std::max(m, std::abs(c));
    return m;
}

template <class Op>
FockCoeffs combine(const FockCoeffs& lhs, const FockCoeffs& rhs, Op op) {
    const std::size_t len = std::max(lhs.coeffs.size(), rhs.coeffs.size());
    FockCoeffs out{std::vector<double>(len, 0.0), lhs.alpha};
    for (std::size_t i = 0; i < len; ++i) {
        const double l = i < lhs.coeffs.size() ? lhs.coeffs[i] : 0.0;
        const double r = i < rhs.coeffs.size() ? rhs.coeffs[i] : 0.0;
        out.coeffs[i] = op(l, r);
    }
    return out;
}

}  // namespace

FockCoeffs number_state(unsigned n, double alpha) {
    FockCoeffs s{std::vector<double>(n + 1, 0.0), alpha};
    s.coeffs[n] = 1.0;
    return s;
}

FockCoeffs create_op(const FockCoeffs& s) {
    FockCoeffs out{std::vector<double>(s.coeffs.size() + 1, 0.0), s.alpha};
    std::copy(s.coeffs.begin(), s.coeffs.end(), out.coeffs.begin() + 1);
    return out;
}

FockCoeffs annihilate_op(const FockCoeffs& s) {
    const std::size_t len = s.coeffs.empty() ? 0 : s.coeffs.size() - 1;
    FockCoeffs out{std::vector<double>(len, 0.0), s.alpha};
    for (std::size_t n = 1; n < s.coeffs.size(); ++n) {
        out.coeffs[n - 1] = static_cast<double>(n) * s.coeffs[n];
    }
    return out;
}

FockCoeffs number_op(const FockCoeffs& s) {
    FockCoeffs out = s;
    for (std::size_t n = 0; n < out.coeffs.size(); ++n) out.coeffs[n] *= static_cast<double>(n);
    return out;
}

double bra_pairing(unsigned m, const FockCoeffs& s) {
    if (m >= s.coeffs.size()) return 0.0;
    const double c = s.coeffs[m];
    if (c == 0.0) return 0.0;
    return c * std::tgamma(m + 1.0) * std::pow(s.alpha, -static_cast<double>(m));
}

FockCoeffs coherent_coeffs(double z, unsigned n_max, double alpha) {
    FockCoeffs s{std::vector<double>(n_max + 1, 0.0), alpha};
    double c = 1.0;
    for (unsigned n = 0; n <= n_max; ++n) {
        s.coeffs[n] = c;
        c *= z / (n + 1);
    }
    return s;
}

FockCoeffs exp_annihilate(double z, const FockCoeffs& s) {
    FockCoeffs result = s;
    FockCoeffs term = s;
    for (unsigned k = 1; !term.coeffs.empty(); ++k) {
        term = (z / k) * annihilate_op(term);
        result = result + term;
        if (max_norm(term.coeffs) <= 1e-16 * max_norm(result.coeffs)) break;
    }
    return result;
}

FockCoeffs operator+(const FockCoeffs& lhs, const FockCoeffs& rhs) {
    return combine(lhs, rhs, [](double l, double r) { return l + r; });
}

FockCoeffs operator-(const FockCoeffs& lhs, const FockCoeffs& rhs) {
    return combine(lhs, rhs, [](double l, double r) { return l - r; });
}

FockCoeffs operator*(double k, const FockCoeffs& s) {
    FockCoeffs out = s;
    for (double& c : out.coeffs) c *= k;
    return out;
}

double max_abs_diff(const FockCoeffs& lhs, const FockCoeffs& rhs) {
    return max_norm((lhs - rhs).coeffs);
}

GridFunction to_grid(const FockCoeffs& s, unsigned x_max) {
    GridFunction f{std::vector<double>(x_max + 1, 0.0), s.alpha};
    if (s.coeffs.empty()) return f;
    const auto top = static_cast<unsigned>(s.coeffs.size() - 1);
    for (unsigned x = 0; x <= x_max; ++x) {
        const auto c = charlier_sequence(top, x, s.alpha);
        CompensatedSum sum;
        for (unsigned n = 0; n <= top; ++n) sum += s.coeffs[n] * c[n];
        f.values[x] = sum.value();
    }
    return f;
}

GridFunction create_grid(const GridFunction& f) {
    GridFunction out{std::vector<double>(f.values.size(), 0.0), f.alpha};
    for (std::size_t x = 0; x < f.values.size(); ++x) {
        const double prev = x > 0 ? f.values[x - 1] : 0.0;
        out.values[x] = f.values[x] - (static_cast<double>(x) / f.alpha) * prev;
    }
    return out;
}

GridFunction annihilate_grid(const GridFunction& f) {
    if (f.values.size() < 2) {
        throw std::out_of_range("annihilate_grid needs a point beyond the output range");
    }
    GridFunction out{std::vector<double>(f.values.size() - 1, 0.0), f.alpha};
    for (std::size_t x = 0; x + 1 < f.values.size(); ++x) {
        out.values[x] = f.alpha * f.values[x] - f.alpha * f.values[x + 1];
    }
    return out;
}

}  // namespace bdp
