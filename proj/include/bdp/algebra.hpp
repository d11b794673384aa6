#pragma once

#include <vector>

// Two concrete realisations of the creation/annihilation algebra
// [a, a+] = 1 used to check the operator identities behind the Charlier
// transition formula.
//
//   number basis:  a+|n> = |n+1>,   a|n> = n|n-1>,   <m|n> = alpha^{-n} n! delta_mn
//   lattice basis: |n> = C_n(x; alpha),
//                  a+ f(x) = f(x) - (x/alpha) f(x-1),
//                  a  f(x) = alpha f(x) - alpha f(x+1)

namespace bdp {

/// Ket sum_n c_n |n> in the number basis; alpha is the bra-pairing parameter.
struct FockCoeffs {
    std::vector<double> coeffs;
    double alpha = 1.0;
};

/// Function f(0..X) on the nonnegative integers.
struct GridFunction {
    std::vector<double> values;
    double alpha = 1.0;
};

/// |n> as a unit coordinate vector of length n + 1.
FockCoeffs number_state(unsigned n, double alpha = 1.0);

FockCoeffs create_op(const FockCoeffs& s);
FockCoeffs annihilate_op(const FockCoeffs& s);
/// a+ a, i.e. c_n -> n c_n.
FockCoeffs number_op(const FockCoeffs& s);

/// <m|s> = alpha^{-m} m! c_m (zero when m is beyond the stored range).
double bra_pairing(unsigned m, const FockCoeffs& s);

/// Coherent state e^{z a+}|0>: c_n = z^n / n! for n <= n_max.
FockCoeffs coherent_coeffs(double z, unsigned n_max, double alpha = 1.0);

/// e^{z a} s by truncated series; stops once a term's max-norm drops below
/// 1e-16 of the accumulated result (a lowers the degree, so the series is
/// finite for finite s).
FockCoeffs exp_annihilate(double z, const FockCoeffs& s);

// Linear combinations; operands are zero-padded to a common length and the
// result takes the left operand's alpha.
FockCoeffs operator+(const FockCoeffs& lhs, const FockCoeffs& rhs);
FockCoeffs operator-(const FockCoeffs& lhs, const FockCoeffs& rhs);
FockCoeffs operator*(double k, const FockCoeffs& s);

/// Largest absolute coefficient difference after zero padding.
double max_abs_diff(const FockCoeffs& lhs, const FockCoeffs& rhs);

/// Lattice representation of s: f(x) = sum_n c_n C_n(x; alpha), x = 0..x_max.
GridFunction to_grid(const FockCoeffs& s, unsigned x_max);

/// a+ on the lattice, same length as the input; f(-1) is taken as 0.
GridFunction create_grid(const GridFunction& f);

/// a on the lattice; reads f(x+1), so the output is one point shorter.
/// Throws std::out_of_range for a grid with fewer than two points.
GridFunction annihilate_grid(const GridFunction& f);

}  // namespace bdp
