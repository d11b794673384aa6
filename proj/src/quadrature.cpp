#include "bdp/quadrature.hpp"

#include <algorithm>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bdp/errors.hpp"
#include "bdp/summation.hpp"

namespace bdp {

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol) {
    if (a == b) return 0.0;
    using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    // Boost's tolerance is relative to the L1 norm, so take a single-panel
    // look at the scale first and convert the absolute target.
    double error = 0.0;
    double l1 = 0.0;
    const double single = Rule::integrate(f, a, b, 0, 0.0, &error, &l1);
    if (error <= abs_tol) return single;
    const double rel_tol = std::max(abs_tol / std::max(l1, 1e-300), 1e-14);
    const double value = Rule::integrate(f, a, b, 20, rel_tol, &error, &l1);
    if (error > abs_tol && error > 1e-13 * l1) {
        throw IntegrationFailure("adaptive quadrature did not reach tolerance", b);
    }
    return value;
}

double adaptive_integrate_split(const std::function<double(double)>& f, double a, double b,
                                std::span<const double> splits, double abs_tol) {
    CompensatedSum total;
    double left = a;
    for (double s : splits) {
        if (s <= left || s >= b) continue;
        total += adaptive_integrate(f, left, s, abs_tol);
        left = s;
    }
    total += adaptive_integrate(f, left, b, abs_tol);
    return total.value();
}

}  // namespace bdp
