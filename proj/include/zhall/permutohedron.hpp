#ifndef ZHALL_PERMUTOHEDRON_HPP
#define ZHALL_PERMUTOHEDRON_HPP

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "zhall/specfun.hpp"

// The ordered-set-partition face lattice of the permutohedron P_n, the
// kernel-perturbed cochain differential d_L, wheel detection in the zero
// pattern, cohomology ranks (floating SVD or exact Gaussian rationals),
// the depth filtration, and the zeta-zero localization scan.

namespace zhall::permutohedron {

using Rational = boost::multiprecision::cpp_rational;

// Exact complex scalar over Q(i) for the rational-weight mode.
struct GaussRat {
    Rational re = 0;
    Rational im = 0;
    bool is_zero() const { return re == 0 && im == 0; }
    GaussRat operator+(const GaussRat& o) const { return {re + o.re, im + o.im}; }
    GaussRat operator-(const GaussRat& o) const { return {re - o.re, im - o.im}; }
    GaussRat operator*(const GaussRat& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussRat operator/(const GaussRat& o) const {
        Rational d = o.re * o.re + o.im * o.im;
        return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
    }
};

// Blocks are sorted sets of 0-based elements; together they partition
// {0..n-1}. Dimension of the face is n - (number of blocks).
struct OrderedSetPartition {
    std::vector<std::vector<int>> blocks;
    int n() const;
    int dim() const { return n() - static_cast<int>(blocks.size()); }
    bool operator==(const OrderedSetPartition&) const = default;
};

// All faces of P_n, graded by dimension 0 .. n-1, in a fixed deterministic
// order. Valid for 1 <= n <= 6.
std::vector<std::vector<OrderedSetPartition>> faces(int n);

// Off-diagonal weights lambda_ij with the exact-zero mask.
struct PerturbedMatrix {
    int n = 0;
    Eigen::MatrixXcd lambda;
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> zero_mask;

    static PerturbedMatrix all_ones(int n);
    // lambda_ij = kernel(s_i - s_j); entries with |value| < zero_tol are
    // snapped to exact zero in the mask.
    static PerturbedMatrix from_points(const std::vector<Complex>& s,
                                       const std::function<Complex(Complex)>& kernel,
                                       double zero_tol = 1e-8);
    Complex entry(int i, int j) const { return zero_mask(i, j) ? Complex(0.0) : lambda(i, j); }
};

// Weight of a codimension-1 coface: F refines F' by splitting one block
// I' u I'' (I' before I''); the weight is prod_{i in I', j in I''}
// lambda_{ij}, exact zero as soon as one factor is masked.
// NotCofaceError if F' is not obtained from F by merging two adjacent blocks.
Complex coface_weight(const OrderedSetPartition& F, const OrderedSetPartition& Fp,
                      const PerturbedMatrix& L);

// Cochain complex of P_n with the perturbed differential
//   d(1_F) = sum_{F' = merge of blocks nu, nu+1} (-1)^{nu-1} lambda_{FF'} 1_{F'}.
struct PerturbedComplex {
    int n = 0;
    std::vector<std::vector<OrderedSetPartition>> grades;
    std::vector<Eigen::MatrixXcd> d; // d[m]: C^m -> C^{m+1}
};

PerturbedComplex build_complex(const PerturbedMatrix& L);

// All simple directed cycles of the zero-entry digraph (i -> j when
// lambda_ij is masked), each rooted at its smallest vertex; sorted by
// (length, vertex sequence).
std::vector<std::vector<int>> detect_wheels(const PerturbedMatrix& L);

struct CohomologyResult {
    std::vector<int> dims;       // dim H^m, m = 0 .. n-1
    std::vector<double> gaps;    // per differential: smallest kept / largest dropped sigma
    double min_gap = 0.0;        // over all differentials with a nontrivial split
    int euler_characteristic = 0;
};

// dim H^m = dim C^m - rank(d_m) - rank(d_{m-1}), ranks by SVD with the
// threshold rank_tol relative to the largest singular value.
// IllConditionedError when a singular value sits within a factor 30 of the
// threshold on either side.
CohomologyResult cohomology_dims(const PerturbedComplex& C, double rank_tol = 1e-8);

// Exact-rational mode: same complex and ranks over Q(i).
struct ExactComplex {
    int n = 0;
    std::vector<std::vector<OrderedSetPartition>> grades;
    // d[m] as dense row-major grades[m+1].size() x grades[m].size()
    std::vector<std::vector<GaussRat>> d;
};

ExactComplex build_complex_exact(int n, const std::vector<std::vector<GaussRat>>& lambda);
std::vector<int> cohomology_dims_exact(const ExactComplex& C);

// Depth filtration for a wheel-free zero set Z (pairs (i, j) meaning
// lambda_ij = 0). RenumberError if the Z-digraph has a directed cycle.
struct DepthFiltration {
    int n = 0;
    std::vector<std::vector<int>> depth; // depth[m][k] for faces(n)[m][k]
    int max_depth = 0;
    // levels[r] = graded index lists of faces with depth >= r, r = 0 .. max_depth
    std::vector<std::vector<std::vector<int>>> levels;
};

DepthFiltration depth_filtration(const std::vector<std::pair<int, int>>& Z, int n);

// Cohomology dims of the polyhedral subcomplex spanned by the given face
// indices (ordinary differential, all weights 1).
std::vector<int> subcomplex_cohomology_dims(int n, const std::vector<std::vector<int>>& member);

// Localization scan at T = {c, c+rho, c+1}, rho = 1/2 + i t_rho from the
// zero cache: build lambda_ij = Lambda(s_i - s_j), snap wheel entries,
// compute dims; then re-run with s_1 shifted by each offset (wheel broken).
struct WheelScanPoint {
    Complex c;
    std::vector<int> dims;
    double min_gap = 0.0;
    std::vector<std::vector<int>> wheels;
};

struct WheelScanReport {
    double rho_ordinate = 0.0;
    std::vector<WheelScanPoint> on_wheel;
    std::vector<WheelScanPoint> perturbed; // one per (c, offset) pair
};

WheelScanReport cubic_relation_scan(const specfun::ZetaZeroCache& cache, int rho_index,
                                    const std::vector<Complex>& c_samples,
                                    const std::vector<double>& offsets, double zero_tol = 1e-8,
                                    double rank_tol = 1e-8);

} // namespace zhall::permutohedron

#endif
