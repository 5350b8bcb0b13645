#ifndef ZHALL_MELLIN_HPP
#define ZHALL_MELLIN_HPP

#include <functional>
#include <vector>

#include "zhall/evaluator.hpp"
#include "zhall/quadrature.hpp"

// Forward and inverse Mellin transforms on R_+^n,
//
//     (M f)(s) = int f(a) a^s d*a,   (N F)(a) = (2 pi i)^{-n} int F(s) a^{-s} ds,
//
// together with the log-Gaussian test family whose transform is entire and
// closed-form.

namespace zhall::mellin {

// amplitude * prod_nu exp(-(log a_nu - mu_nu)^2 / (2 sigma_nu^2)).
// Positive, smooth, and decaying super-polynomially in |log a| on every
// axis, so every Mellin integral below converges for all s in C^n.
struct LogGaussianTestFunction {
    std::vector<double> mu;
    std::vector<double> sigma;
    double amplitude = 1.0;

    int dim() const { return static_cast<int>(mu.size()); }
    bool valid() const;
    double operator()(const std::vector<double>& a) const;
    double eval_log(const std::vector<double>& u) const; // u = log a, overflow-safe
};

// Vertical contour Re(s) = sigma0, truncated at height T with a uniform
// trapezoid grid of `nodes` points per axis.
struct VerticalContour {
    std::vector<double> sigma0;
    double T = 40.0;
    int nodes = 801;
};

struct MellinQuad {
    double tol = 1e-11;       // absolute tolerance
    double rel_floor = 2e-14; // relative acceptance floor per axis
    int max_level = 10;
};

// Forward transform by the double-exponential rule in log coordinates,
// one axis at a time (dimension of s sets the arity of f).
Complex mellin_forward(const std::function<Complex(const std::vector<double>&)>& f,
                       const std::vector<Complex>& s, const MellinQuad& quad = {});

// One-dimensional convenience overload.
Complex mellin_forward(const std::function<Complex(double)>& f, Complex s,
                       const MellinQuad& quad = {});

// Entire closed form of the log-Gaussian transform:
//   s -> amplitude * prod sqrt(2 pi) sigma_nu exp(mu_nu s_nu + sigma_nu^2 s_nu^2 / 2).
GradedEvaluator mellin_closed_form(const LogGaussianTestFunction& f);

// Inverse transform over [sigma0 - iT, sigma0 + iT]^n, trapezoid with
// automatic height doubling until the tail estimate clears `tol`, then node
// doubling until two grids agree. Nodes are summed center-outward.
Complex mellin_inverse(const GradedEvaluator& F, const std::vector<double>& a,
                       VerticalContour contour, double tol = 1e-9);

Complex mellin_inverse(const std::function<Complex(Complex)>& F, double a, double sigma0,
                       double T = 40.0, int nodes = 801, double tol = 1e-9);

// Checks N(s_nu F) = -a_nu d/da_nu f on the log-Gaussian family, where the
// right side is evaluated analytically. Returns the pointwise table and
// the maximum discrepancy over `sample_points`.
struct DerivativeRuleReport {
    std::vector<std::vector<double>> points;
    std::vector<double> lhs_abs_err;
    double max_discrepancy = 0.0;
};

DerivativeRuleReport derivative_rule_check(const LogGaussianTestFunction& f, int axis,
                                           const std::vector<std::vector<double>>& sample_points,
                                           const VerticalContour& contour);

} // namespace zhall::mellin

#endif
