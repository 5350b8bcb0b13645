#ifndef ZHALL_SPECFUN_HPP
#define ZHALL_SPECFUN_HPP

#include <string>
#include <vector>

#include "zhall/errors.hpp"

// Complex special functions: Gamma, zeta, the completed zeta
//
//     zeta_star(s) = pi^(-s/2) Gamma(s/2) zeta(s),
//
// the Harish-Chandra kernel Phi(s) = zeta_star(s)/zeta_star(s+1), its
// antisymmetrizer Lambda, the Jacobi theta sum, and a bisection root
// finder for the ordinates of zeta_star on the critical line.

namespace zhall::specfun {

// Gamma(s), Lanczos rational approximation with reflection for Re(s) < 1/2.
// Relative error below 1e-13 for |s| <= 50. Throws PoleError at
// non-positive integers.
Complex gamma(Complex s);

// log Gamma(s) on Re(s) > 0 (principal branch of the Lanczos series).
Complex log_gamma_right_half(Complex s);

// Riemann zeta by Euler-Maclaurin summation with a Bernoulli tail of fixed
// order 10 and a cutoff N chosen from |s| so the first dropped tail term is
// below 1e-15 absolute. Accurate to ~1e-12 relative for |Im s| <= 100,
// Re(s) >= -6; switches to the functional equation below that.
// Throws PoleError at s = 1.
Complex zeta(Complex s);

// Completed zeta zeta_star(s) = pi^(-s/2) Gamma(s/2) zeta(s). Simple poles
// at 0 and 1 (PoleError); satisfies zeta_star(s) = zeta_star(1-s).
// Always evaluated through the product on the right, never through the
// functional equation, so symmetry checks are non-circular.
Complex zeta_star(Complex s);

// Phi(s) = zeta_star(s)/zeta_star(s+1). Pole at s = 1; ZeroDivisionError
// when zeta_star(s+1) vanishes. Satisfies Phi(s) Phi(-s) = 1. The common
// pole of numerator and denominator at s = 0 cancels (Phi(0) = -1) and is
// evaluated through the regularized ratio.
Complex phi(Complex s);

// Lambda(s) = zeta_star(-s) (s-1) (-s-1). Simple pole only at s = 0 with
// residue 1; zeros at s = 1 and at s = -rho for every nontrivial zero rho.
// The apparent pole of zeta_star(-s) at s = -1 is cancelled by the (-s-1)
// factor: Lambda(-1) = -2. Satisfies Phi(s) = Lambda(s)^{-1} Lambda(-s).
Complex lambda_big(Complex s);

// theta(b) = sum_{n in Z} exp(-n^2 pi b), b > 0. Terms are added until they
// drop below 1e-18; for b < 1 the sum is taken after the Jacobi turn
// theta(b) = theta(1/b)/sqrt(b) so the summed series is always fast.
double theta(double b);

enum class KernelKind { ZetaStar, Phi, LambdaBig };

// A kernel evaluator with pole/zero metadata, as consumed by the shuffle
// module. zero_hints is advisory (populated from the zero cache for
// LambdaBig); pole_set is exact.
struct KernelFunction {
    KernelKind kind = KernelKind::Phi;
    std::vector<Complex> pole_set;
    std::vector<Complex> zero_hints;

    Complex operator()(Complex s) const;

    static KernelFunction zeta_star_kernel();
    static KernelFunction phi_kernel();
    static KernelFunction lambda_kernel();
};

// Verified ordinates t with zeta_star(1/2 + i t) = 0, strictly increasing.
struct ZetaZeroCache {
    std::vector<double> ordinates;
    double tolerance = 1e-6;

    void insert(double t);
    // Plain-text format: header "# zeta-zero-cache v1 tol=<tol>", then one
    // ordinate per line with 12 significant digits.
    void save(const std::string& path) const;
    static ZetaZeroCache load(const std::string& path);
};

// zeta_star(1/2 + i t) is real (functional equation plus conjugation
// symmetry); this returns that real value.
double critical_line_value(double t);

// All sign changes of t -> zeta_star(1/2+it) on [t_min, t_max], refined by
// bisection to an interval below 1e-9 and appended to the cache. Returns
// the ordinates found in this range. Empty result if no sign change.
std::vector<double> find_zeta_zeros(double t_min, double t_max, ZetaZeroCache* cache = nullptr,
                                    double scan_step = 0.2);

} // namespace zhall::specfun

#endif
