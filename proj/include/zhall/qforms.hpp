#ifndef ZHALL_QFORMS_HPP
#define ZHALL_QFORMS_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "zhall/zlattice.hpp"

// Lattice bundles as positive definite Gram matrices, restriction and
// minimizing pushforward of the form along sub/quotient lattices, rank-1
// subbundle enumeration, the rank (1,1) Hall product as a literal lattice
// sum, and the Eisenstein-Maass series with its unipotent constant term.

namespace zhall::qforms {

using zlattice::IntMatrix;
using zlattice::IntVector;

// A rank-n bundle: the Gram matrix of the form q on a fixed lattice basis.
struct GramBundle {
    Eigen::MatrixXd G;

    explicit GramBundle(Eigen::MatrixXd gram);
    int rank() const { return static_cast<int>(G.rows()); }
    double q(const IntVector& v) const;
};

struct PrimitiveVector {
    IntVector coords; // first nonzero entry positive, gcd 1
};

struct UpperHalfPoint {
    double x = 0.0;
    double y = 1.0; // tau = x + iy, y > 0
};

// det(G)^{-1/2}, the inverse covolume.
double degree(const GramBundle& E);

// E_tau: lattice Z + Z tau in C with the form q_st / Im(tau)^{1/2};
// Gram (1/y) [[1, x], [x, x^2+y^2]] on the basis {1, tau}. Degree 1.
GramBundle bundle_from_tau(const UpperHalfPoint& tau);

// Iwasawa slice: the rank-2 bundle attached to (a1, a2, x) under the fixed
// convention q(m, n) = (n - x m)^2 / a1^2 + m^2 / a2^2. The canonical
// rank-1 subbundle span(e2) has degree a1, the quotient degree a2, and
// degree(E) = a1 a2. The unipotent coordinate has period 1 in x.
GramBundle bundle_from_iwasawa(double a1, double a2, double x);

// Pullback form on a primitive sublattice: B^T G B for the basis matrix B.
// NonPrimitiveError if the columns do not span a primitive sublattice.
GramBundle restrict_form(const GramBundle& E, const IntMatrix& sublattice_basis);

// Pushforward (fiberwise minimized) form along a surjective quotient map
// J: Z^n -> Z^m with primitive kernel; computed as the Schur complement of
// the kernel block. NonSurjectiveError if J is not onto over Z.
GramBundle pushforward_form(const GramBundle& E, const IntMatrix& quotient_map);

// All rank-1 subbundles of degree >= degree_min: primitive vectors v, up
// to sign, with q(v) <= 1/degree_min^2, Fincke-Pohst under the Cholesky
// factor. Sorted by norm.
std::vector<PrimitiveVector> enumerate_rank1_subbundles(const GramBundle& E, double degree_min,
                                                        std::size_t budget = 1'000'000);

using ScalarFn = std::function<Complex(double)>;

// Hall product of two degree-1 weight functions, evaluated on a rank-2
// bundle: sum over rank-1 subbundles E' of
//   deg(E')^{1/2} deg(E/E')^{-1/2} f1(deg E') f2(deg E/E'),
// with deg(E/E') = deg(E)/deg(E'). Terms with deg(E') < degree_floor are
// dropped (the caller picks the floor from f1's decay). Norm-sorted
// summation below `sort_threshold` terms, compensated streaming beyond.
Complex hall_product_11(const ScalarFn& f1, const ScalarFn& f2, const GramBundle& E,
                        double degree_floor, std::size_t budget = 1'000'000,
                        std::size_t sort_threshold = (1u << 20));

// Eisenstein-Maass series E(tau, s) = 1/2 sum_{(m,n) coprime} y^s/|m+n tau|^{2s},
// Re(s) > 1 (ConvergenceError otherwise). Direct coprime-pair sum over
// |m + n tau| <= R with R chosen from the integral tail bound so the
// truncation error is below tol; radius_override forces R (used to match
// cutoffs against the Hall-side sum).
Complex eisenstein_maass(const UpperHalfPoint& tau, Complex s, double tol,
                         double radius_override = 0.0);

// Tail-bound radius used by eisenstein_maass.
double eisenstein_radius(double y, double sigma, double tol);

// Constant term over the unipotent slice: int_0^1 f(a1, a2, x) dx by
// Gauss-Legendre with quad_points nodes, f evaluated through
// bundle_from_iwasawa.
using SliceFn = std::function<Complex(const GramBundle&, double a1, double a2, double x)>;
Complex constant_term_rank2(const SliceFn& f, double a1, double a2, int quad_points);

} // namespace zhall::qforms

#endif
