#ifndef ZHALL_SHUFFLE_HPP
#define ZHALL_SHUFFLE_HPP

#include <functional>
#include <utility>
#include <vector>

#include "zhall/evaluator.hpp"
#include "zhall/mellin.hpp"
#include "zhall/specfun.hpp"

// The kernel shuffle product and its symmetric variant, built on black-box
// graded evaluators. A term of F (deg m) * G (deg n) picks the slot set A
// occupied by F's variables; inverted slot pairs a in A, b in B with a > b
// contribute one kernel factor. With kernel Phi this reproduces, at
// m = n = 1,
//   (F * G)(s1, s2) = F(s1) G(s2) + Phi(s1 - s2) F(s2) G(s1),
// and the product is associative for any kernel.

namespace zhall::shuffle {

using Kernel = std::function<Complex(Complex)>;

// An (m, n)-shuffle: w(i) < w(j) for i < j within [1, m] and within
// [m+1, m+n]. Stored as the image word w[0..m+n-1] (1-based values).
struct Shuffle {
    std::vector<int> w;
    int m = 0;
    int n = 0;
    bool valid() const;
};

// All C(m+n, m) shuffles in lexicographic order of the word w.
std::vector<Shuffle> enumerate_shuffles(int m, int n);

// Kernel weight of one shuffle: product over inverted block pairs
// (i <= m < j with w(i) > w(j)) of kernel(s_{w(j)} - s_{w(i)}).
Complex phi_w(const std::vector<Complex>& s, const Shuffle& w, const Kernel& kernel);

// Shuffle product with the given kernel (Phi in every production use).
GradedEvaluator shuffle_product(const GradedEvaluator& F, const GradedEvaluator& G,
                                const Kernel& kernel);

// Symmetric shuffle: sum over slot splittings (A, B) of
//   F(s_A) G(s_B) prod_{a in A, b in B} lambda(s_a - s_b).
// Requires symmetric inputs; the result is symmetric. Evaluations closer
// than `near_diagonal` to a coordinate collision are regularized by offset
// evaluation at eps and eps/10 with Richardson extrapolation.
struct StarOptions {
    double near_diagonal = 1e-3;
    double eps = 1e-3;
};
GradedEvaluator symmetric_shuffle(const GradedEvaluator& F, const GradedEvaluator& G,
                                  const Kernel& kernel, const StarOptions& opts = {});

// The quadratic-relation pairing: (s1, s2) -> F(s1, s2) + Phi(s1-s2) F(s2, s1).
// Kernel defaults to Phi.
GradedEvaluator mult2(const GradedEvaluator& F, const Kernel& kernel = specfun::phi);

// End-to-end oracle for the constant-term homomorphism: pipeline A pushes
// two log-Gaussian weights through the literal lattice Hall product, the
// unipotent constant term with the delta^(1/2) twist, and a 2-dimensional
// forward Mellin transform; pipeline B is the shuffle product of the
// closed-form transforms. Valid for Re(s1 - s2) > 1.
struct ChCheckConfig {
    int x_nodes = 32;            // Gauss-Legendre nodes for the unipotent slice
    double window_sigmas = 7.0;  // degree-window half-width in units of sigma
    double mellin_tol = 2e-6;    // outer 2-d Mellin tolerance, absolute
    double mellin_rel = 8e-6;    // per-axis relative acceptance floor
    std::size_t budget = 4'000'000;
    // |log(a2/a1)| bands for the constant-term evaluation: Gauss-Legendre on
    // the x-slice up to 2*gl_halfwidth, the exact coprime-column average up
    // to 2*cusp_halfwidth, the bare canonical term beyond (its complement
    // decays like exp((1 - Re(s1-s2)) w) in w = log(a2/a1)/2).
    double gl_halfwidth = 1.0;
    double cusp_halfwidth = 12.5;
};

struct ChCheckReport {
    std::vector<std::pair<Complex, Complex>> s_points;
    std::vector<Complex> pipeline_a;
    std::vector<Complex> pipeline_b;
    std::vector<double> rel_dev;
    double max_rel_dev = 0.0;
    // diagnostic samples of the twisted constant term on the (a1,a2) slice
    std::vector<std::pair<double, double>> ct_sample_points;
    std::vector<Complex> ct_sample_values;
};

// Twisted constant term of the Hall product of two log-Gaussian weights at
// one point of the (a1, a2) slice (the inner loop of pipeline A).
Complex hall_ct_twisted(const mellin::LogGaussianTestFunction& f1,
                        const mellin::LogGaussianTestFunction& f2, double a1, double a2,
                        const ChCheckConfig& cfg = {});

ChCheckReport ch_homomorphism_check(const mellin::LogGaussianTestFunction& f1,
                                    const mellin::LogGaussianTestFunction& f2,
                                    const std::vector<std::pair<double, double>>& e_family_sample,
                                    const std::vector<std::pair<Complex, Complex>>& s_sample,
                                    const ChCheckConfig& cfg = {});

} // namespace zhall::shuffle

#endif
