#include "zhall/mellin.hpp"

#include <cmath>

namespace zhall::mellin {

using quadrature::DeConfig;
using quadrature::de_integral;
using quadrature::KahanSumC;

namespace {
constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;
}

bool LogGaussianTestFunction::valid() const {
    if (mu.size() != sigma.size() || mu.empty()) return false;
    for (double s : sigma)
        if (!(s > 0.0)) return false;
    return std::isfinite(amplitude);
}

double LogGaussianTestFunction::operator()(const std::vector<double>& a) const {
    std::vector<double> u(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i] > 0.0)) throw DomainError("LogGaussianTestFunction: a must be positive");
        u[i] = std::log(a[i]);
    }
    return eval_log(u);
}

double LogGaussianTestFunction::eval_log(const std::vector<double>& u) const {
    double q = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        double d = (u[i] - mu[i]) / sigma[i];
        q += d * d;
    }
    return q > 1400.0 ? 0.0 : amplitude * std::exp(-0.5 * q);
}

namespace {

// Recursive tensor DE integration in log coordinates: axis k of
//   int f(e^{u_1},..,e^{u_n}) exp(sum s_nu u_nu) du.
// `scale` is the modulus of the a^s factors of the enclosing axes; inner
// tolerances relax by it, so only what survives the outer weights is
// resolved.
Complex forward_axis(const std::function<Complex(const std::vector<double>&)>& f,
                     const std::vector<Complex>& s, std::vector<double>& a, std::size_t k,
                     const MellinQuad& quad, double scale) {
    DeConfig cfg;
    cfg.tol = quad.tol / std::max(scale, 1e-280);
    cfg.rel_floor = quad.rel_floor;
    cfg.max_level = quad.max_level;
    auto g = [&](double u) -> Complex {
        a[k] = std::exp(u);
        Complex inner;
        if (k + 1 < s.size()) {
            double w = (s[k] * u).real();
            inner = forward_axis(f, s, a, k + 1, quad,
                                 scale * (w < -700.0 ? 0.0 : std::exp(std::min(w, 700.0))));
        } else {
            inner = f(a);
        }
        if (inner == Complex(0.0)) return 0.0;
        // a^s factor for this axis; pair the exponents in log space so an
        // underflowing f(a) never meets an overflowing a^s
        Complex e = s[k] * u;
        double mag = std::log(std::abs(inner)) + e.real();
        if (mag < -745.0) return 0.0;
        if (mag > 700.0)
            throw ConvergenceError("mellin_forward: integrand grows on the contour");
        if (e.real() > 700.0) return std::polar(std::exp(mag), std::arg(inner) + e.imag());
        return inner * std::exp(e);
    };
    return de_integral(g, cfg);
}

} // namespace

Complex mellin_forward(const std::function<Complex(const std::vector<double>&)>& f,
                       const std::vector<Complex>& s, const MellinQuad& quad) {
    if (s.empty()) throw ConfigError("mellin_forward: empty s");
    std::vector<double> a(s.size(), 1.0);
    return forward_axis(f, s, a, 0, quad, 1.0);
}

Complex mellin_forward(const std::function<Complex(double)>& f, Complex s, const MellinQuad& quad) {
    return mellin_forward(
        [&f](const std::vector<double>& a) { return f(a[0]); }, std::vector<Complex>{s}, quad);
}

GradedEvaluator mellin_closed_form(const LogGaussianTestFunction& f) {
    if (!f.valid()) throw ConfigError("mellin_closed_form: invalid test function");
    const int n = f.dim();
    auto mu = f.mu;
    auto sg = f.sigma;
    double amp = f.amplitude;
    GradedEvaluator F;
    F.degree = n;
    F.symmetric = (n == 1);
    F.singular_set_hint = "";
    F.eval = [mu, sg, amp](const std::vector<Complex>& s) {
        Complex acc = amp;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            acc *= kSqrt2Pi * sg[i] * std::exp(mu[i] * s[i] + 0.5 * sg[i] * sg[i] * s[i] * s[i]);
        }
        return acc;
    };
    return F;
}

namespace {

// Trapezoid over one axis of the inverse integral, center-outward order.
Complex inverse_axis(const GradedEvaluator& F, const std::vector<double>& a,
                     const VerticalContour& contour, std::vector<Complex>& s, std::size_t k,
                     int nodes) {
    double h = 2.0 * contour.T / (nodes - 1);
    double loga = std::log(a[k]);
    auto node_value = [&](double t) -> Complex {
        s[k] = Complex(contour.sigma0[k], t);
        Complex inner;
        if (k + 1 < a.size()) {
            inner = inverse_axis(F, a, contour, s, k + 1, nodes);
        } else {
            inner = F(s);
        }
        // a^{-s} = exp(-s log a)
        return inner * std::exp(-s[k] * loga);
    };
    KahanSumC acc;
    int half = (nodes - 1) / 2;
    acc.add(node_value(0.0));
    for (int j = 1; j <= half; ++j) {
        double w = (j == half) ? 0.5 : 1.0;
        acc.add(node_value(j * h) * w);
        acc.add(node_value(-j * h) * w);
    }
    // (1/2pi) int F a^{-s} dt per axis
    return acc.value() * (h / (2.0 * 3.14159265358979323846));
}

// Max |F| over the outermost few nodes of every axis combination; cheap
// proxy for the truncated tail.
double tail_magnitude(const GradedEvaluator& F, const std::vector<double>& a,
                      const VerticalContour& contour) {
    std::vector<Complex> s(a.size());
    double worst = 0.0;
    for (std::size_t ax = 0; ax < a.size(); ++ax) {
        for (int probe = 0; probe < 3; ++probe) {
            for (std::size_t i = 0; i < a.size(); ++i) s[i] = Complex(contour.sigma0[i], 0.0);
            double t = contour.T * (1.0 - 0.02 * probe);
            s[ax] = Complex(contour.sigma0[ax], t);
            double m = std::abs(F(s));
            double apow = std::pow(a[ax], -contour.sigma0[ax]);
            worst = std::max(worst, m * apow * contour.T);
        }
    }
    return worst;
}

} // namespace

Complex mellin_inverse(const GradedEvaluator& F, const std::vector<double>& a,
                       VerticalContour contour, double tol) {
    if (contour.sigma0.size() != a.size() || F.degree != static_cast<int>(a.size()))
        throw ConfigError("mellin_inverse: dimension mismatch");
    if (contour.nodes < 16) throw ConfigError("mellin_inverse: need at least 16 nodes");
    for (double av : a)
        if (!(av > 0.0)) throw DomainError("mellin_inverse: a must be positive");

    for (int grow = 0;; ++grow) {
        if (tail_magnitude(F, a, contour) <= tol) break;
        if (grow >= 6)
            throw ConvergenceError("mellin_inverse: tail estimate exceeds tol; F may not decay");
        contour.T *= 2.0;
        contour.nodes = contour.nodes * 2 - 1;
    }

    int nodes = contour.nodes | 1; // odd so the center is a node
    std::vector<Complex> s(a.size());
    Complex prev = inverse_axis(F, a, contour, s, 0, nodes);
    for (int level = 0; level < 4; ++level) {
        int finer = nodes * 2 - 1;
        Complex cur = inverse_axis(F, a, contour, s, 0, finer);
        if (std::abs(cur - prev) <= tol) return cur;
        nodes = finer;
        prev = cur;
    }
    throw ConvergenceError("mellin_inverse: node refinement did not settle");
}

Complex mellin_inverse(const std::function<Complex(Complex)>& F, double a, double sigma0, double T,
                       int nodes, double tol) {
    GradedEvaluator ev;
    ev.degree = 1;
    ev.eval = [&F](const std::vector<Complex>& s) { return F(s[0]); };
    VerticalContour contour{{sigma0}, T, nodes};
    return mellin_inverse(ev, {a}, contour, tol);
}

DerivativeRuleReport derivative_rule_check(const LogGaussianTestFunction& f, int axis,
                                           const std::vector<std::vector<double>>& sample_points,
                                           const VerticalContour& contour) {
    if (!f.valid() || axis < 0 || axis >= f.dim())
        throw ConfigError("derivative_rule_check: bad arguments");
    GradedEvaluator F = mellin_closed_form(f);
    GradedEvaluator sF;
    sF.degree = F.degree;
    sF.eval = [F, axis](const std::vector<Complex>& s) { return s[axis] * F(s); };

    DerivativeRuleReport rep;
    for (const auto& a : sample_points) {
        Complex lhs = mellin_inverse(sF, a, contour, 1e-10);
        // -a d/da of the log-Gaussian along `axis`: f(a) (log a_nu - mu_nu)/sigma_nu^2
        double rhs = f(a) * (std::log(a[axis]) - f.mu[axis]) / (f.sigma[axis] * f.sigma[axis]);
        double err = std::abs(lhs - Complex(rhs));
        rep.points.push_back(a);
        rep.lhs_abs_err.push_back(err);
        rep.max_discrepancy = std::max(rep.max_discrepancy, err);
    }
    return rep;
}

} // namespace zhall::mellin
