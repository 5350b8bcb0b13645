#ifndef ZHALL_QUADRATURE_HPP
#define ZHALL_QUADRATURE_HPP

#include <functional>
#include <vector>

#include "zhall/errors.hpp"

namespace zhall::quadrature {

// Double-exponential (tanh-sinh family) rule for integrals over the whole
// real line, u = sinh((pi/2) sinh t) with trapezoid steps halved until two
// successive levels agree. Integrands must decay at least exponentially.
struct DeConfig {
    double tol = 1e-10;      // absolute tolerance on the integral
    double rel_floor = 2e-14; // acceptance floor relative to |I|, rounding noise
    double h0 = 0.5;         // level-0 step in t
    int max_level = 10;      // refinement cap
    // After the acceptance test passes, refine once more and return that
    // value; knocks the systematic part of the acceptance-level error down
    // an order of magnitude for the cost of one extra sweep.
    bool polish = false;
    // Nodes beyond |u| > u_cap are treated as zero. 340 keeps a = e^u,
    // a^2, and their reciprocals inside double range for integrands in
    // log coordinates.
    double u_cap = 340.0;
};

// Integrate g over (-inf, inf). Throws ConvergenceError if refinements
// keep disagreeing at max_level.
Complex de_integral(const std::function<Complex(double)>& g, const DeConfig& cfg = {});

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
    explicit GaussLegendre(int n);
};

// Integrate f over [0, 1] with an n-point Gauss-Legendre rule.
Complex gauss01(const std::function<Complex(double)>& f, int n);

// Compensated (Kahan) accumulator; keeps large deterministic sums honest.
struct KahanSum {
    double hi = 0.0;
    double lo = 0.0;
    void add(double x) {
        double y = x - lo;
        double t = hi + y;
        lo = (t - hi) - y;
        hi = t;
    }
    double value() const { return hi; }
};

struct KahanSumC {
    KahanSum re, im;
    void add(Complex z) {
        re.add(z.real());
        im.add(z.imag());
    }
    Complex value() const { return {re.value(), im.value()}; }
};

} // namespace zhall::quadrature

#endif
