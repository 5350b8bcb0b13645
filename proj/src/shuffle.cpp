#include "zhall/shuffle.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "zhall/qforms.hpp"

namespace zhall::shuffle {

bool Shuffle::valid() const {
    if (static_cast<int>(w.size()) != m + n || m < 0 || n < 0) return false;
    std::vector<bool> seen(m + n, false);
    for (int v : w) {
        if (v < 1 || v > m + n || seen[v - 1]) return false;
        seen[v - 1] = true;
    }
    for (int i = 1; i < m; ++i)
        if (w[i - 1] >= w[i]) return false;
    for (int j = m + 1; j < m + n; ++j)
        if (w[j - 1] >= w[j]) return false;
    return true;
}

std::vector<Shuffle> enumerate_shuffles(int m, int n) {
    if (m < 0 || n < 0) throw ConfigError("enumerate_shuffles: negative block size");
    const int N = m + n;
    std::vector<Shuffle> out;
    // choose the slot set A = w([1, m]) as an increasing m-subset of 1..N
    std::vector<int> idx(m);
    for (int i = 0; i < m; ++i) idx[i] = i;
    while (true) {
        Shuffle sh;
        sh.m = m;
        sh.n = n;
        sh.w.assign(N, 0);
        std::vector<bool> used(N, false);
        for (int i = 0; i < m; ++i) {
            sh.w[i] = idx[i] + 1;
            used[idx[i]] = true;
        }
        int pos = m;
        for (int v = 0; v < N; ++v)
            if (!used[v]) sh.w[pos++] = v + 1;
        out.push_back(std::move(sh));
        if (m == 0) break;
        int i = m - 1;
        while (i >= 0 && idx[i] == N - m + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < m; ++j) idx[j] = idx[j - 1] + 1;
    }
    std::sort(out.begin(), out.end(), [](const Shuffle& a, const Shuffle& b) { return a.w < b.w; });
    return out;
}

Complex phi_w(const std::vector<Complex>& s, const Shuffle& sh, const Kernel& kernel) {
    if (!sh.valid()) throw ConfigError("phi_w: malformed shuffle");
    if (static_cast<int>(s.size()) != sh.m + sh.n) throw ConfigError("phi_w: arity mismatch");
    Complex prod = 1.0;
    for (int i = 0; i < sh.m; ++i) {
        for (int j = sh.m; j < sh.m + sh.n; ++j) {
            if (sh.w[i] > sh.w[j]) prod *= kernel(s[sh.w[j] - 1] - s[sh.w[i] - 1]);
        }
    }
    return prod;
}

GradedEvaluator shuffle_product(const GradedEvaluator& F, const GradedEvaluator& G,
                                const Kernel& kernel) {
    const int m = F.degree, n = G.degree;
    if (m == 0) {
        Complex c = F(std::vector<Complex>{});
        GradedEvaluator out = G;
        auto base = G.eval;
        out.eval = [base, c](const std::vector<Complex>& s) { return c * base(s); };
        return out;
    }
    if (n == 0) {
        Complex c = G(std::vector<Complex>{});
        GradedEvaluator out = F;
        auto base = F.eval;
        out.eval = [base, c](const std::vector<Complex>& s) { return c * base(s); };
        return out;
    }
    auto shuffles = enumerate_shuffles(m, n);
    GradedEvaluator out;
    out.degree = m + n;
    out.symmetric = false;
    out.singular_set_hint = "kernel singularities on coordinate differences";
    out.eval = [F, G, kernel, shuffles, m, n](const std::vector<Complex>& s) {
        Complex acc = 0.0;
        std::vector<Complex> sa(m), sb(n);
        for (const Shuffle& sh : shuffles) {
            for (int i = 0; i < m; ++i) sa[i] = s[sh.w[i] - 1];
            for (int j = 0; j < n; ++j) sb[j] = s[sh.w[m + j] - 1];
            acc += F(sa) * G(sb) * phi_w(s, sh, kernel);
        }
        return acc;
    };
    return out;
}

namespace {

Complex star_direct(const GradedEvaluator& F, const GradedEvaluator& G, const Kernel& kernel,
                    const std::vector<Shuffle>& shuffles, const std::vector<Complex>& s) {
    const int m = F.degree, n = G.degree;
    Complex acc = 0.0;
    std::vector<Complex> sa(m), sb(n);
    for (const Shuffle& sh : shuffles) {
        for (int i = 0; i < m; ++i) sa[i] = s[sh.w[i] - 1];
        for (int j = 0; j < n; ++j) sb[j] = s[sh.w[m + j] - 1];
        Complex lam = 1.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) lam *= kernel(sa[i] - sb[j]);
        acc += F(sa) * G(sb) * lam;
    }
    return acc;
}

double min_pair_distance(const std::vector<Complex>& s) {
    double d = 1e300;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) d = std::min(d, std::abs(s[i] - s[j]));
    return d;
}

} // namespace

GradedEvaluator symmetric_shuffle(const GradedEvaluator& F, const GradedEvaluator& G,
                                  const Kernel& kernel, const StarOptions& opts) {
    const int m = F.degree, n = G.degree;
    if ((m > 1 && !F.symmetric) || (n > 1 && !G.symmetric))
        throw ConfigError("symmetric_shuffle: inputs must be symmetric");
    if (m == 0 || n == 0) return shuffle_product(F, G, kernel);
    auto shuffles = enumerate_shuffles(m, n);
    GradedEvaluator out;
    out.degree = m + n;
    out.symmetric = true;
    out.singular_set_hint = "regularized near coordinate collisions";
    out.eval = [F, G, kernel, shuffles, opts](const std::vector<Complex>& s) {
        if (min_pair_distance(s) >= opts.near_diagonal)
            return star_direct(F, G, kernel, shuffles, s);
        // Offset the collision along a fixed direction and extrapolate:
        // the product is analytic, so value(eps) = value(0) + O(eps).
        auto offset_eval = [&](double eps) {
            std::vector<Complex> sp = s;
            for (std::size_t k = 0; k < sp.size(); ++k)
                sp[k] += Complex(0.0, eps * static_cast<double>(k));
            return star_direct(F, G, kernel, shuffles, sp);
        };
        Complex v1 = offset_eval(opts.eps);
        Complex v2 = offset_eval(opts.eps / 10.0);
        return (10.0 * v2 - v1) / 9.0;
    };
    return out;
}

GradedEvaluator mult2(const GradedEvaluator& F, const Kernel& kernel) {
    if (F.degree != 2) throw ConfigError("mult2: need a degree-2 evaluator");
    GradedEvaluator out;
    out.degree = 2;
    out.singular_set_hint = "Phi poles on s1 - s2";
    out.eval = [F, kernel](const std::vector<Complex>& s) {
        return F(s) + kernel(s[0] - s[1]) * F(std::vector<Complex>{s[1], s[0]});
    };
    return out;
}

namespace {

struct DegreeWindow {
    double lo;
    double hi;
};

DegreeWindow window_of(const mellin::LogGaussianTestFunction& f, double k) {
    return {std::exp(f.mu[0] - k * f.sigma[0]), std::exp(f.mu[0] + k * f.sigma[0])};
}

const std::vector<int>& totients_up_to(int mmax) {
    static thread_local std::vector<int> phi{0, 1};
    if (static_cast<int>(phi.size()) <= mmax) {
        int n = mmax + 1;
        phi.assign(n, 0);
        for (int i = 0; i < n; ++i) phi[i] = i;
        for (int p = 2; p < n; ++p)
            if (phi[p] == p)
                for (int k = p; k < n; k += p) phi[k] -= phi[k] / p;
    }
    return phi;
}

// Exact x-average of the Hall lattice sum over the unipotent period: for
// each column m >= 1 the sum over n coprime to m combined with the x
// integral tiles the real line,
//   int_0^1 sum_{gcd(n,m)=1} h(n - xm) dx = (phi(m)/m) int_R h(u) du,
// so the twisted constant term reduces to the x-independent canonical term
// of degree a1 plus phi(m)-weighted copies of one smooth column integral
//   I(dtop) = int_R W(dtop / sqrt(1 + v^2)) dv,   dtop = a2 / m.
// I is sampled on a uniform log-grid and cubically interpolated over m;
// the arithmetic weight phi(m) stays exact.
Complex hall_ct_column_average(const mellin::LogGaussianTestFunction& f1,
                               const mellin::LogGaussianTestFunction& f2, double a1, double a2,
                               double d_lo) {
    const double D = a1 * a2;
    double total = f1.eval_log({std::log(a1)}) * f2.eval_log({std::log(a2)});
    int mmax = static_cast<int>(std::floor(a2 / d_lo));
    if (mmax < 1) return total;
    const auto& phi = totients_up_to(mmax);
    auto weight = [&](double d) {
        return d / std::sqrt(D) * f1.eval_log({std::log(d)}) * f2.eval_log({std::log(D / d)});
    };
    double sig = std::min(f1.sigma[0], f2.sigma[0]);
    // column integral against log dtop; v = sinh(theta) spaces the degree
    // decades evenly
    auto column_integral = [&](double log_dtop) {
        double theta_max = std::acosh(std::max(1.0, std::exp(log_dtop) / d_lo));
        if (theta_max <= 0.0) return 0.0;
        int nodes = std::clamp(static_cast<int>(16.0 + 18.0 * theta_max / sig), 16, 512);
        static thread_local std::map<int, quadrature::GaussLegendre> cache;
        auto it = cache.find(nodes);
        if (it == cache.end()) it = cache.emplace(nodes, quadrature::GaussLegendre(nodes)).first;
        const auto& gl = it->second;
        double dtop = std::exp(log_dtop);
        double acc = 0.0;
        for (int i = 0; i < nodes; ++i) {
            double th = gl.x[i] * theta_max;
            double ch = std::cosh(th);
            acc += gl.w[i] * weight(dtop / ch) * ch;
        }
        return acc * theta_max;
    };

    // uniform grid over log dtop in [log d_lo, log a2], two pad points
    double t_lo = std::log(d_lo), t_hi = std::log(a2);
    double h = sig / 16.0;
    int npts = static_cast<int>(std::ceil((t_hi - t_lo) / h)) + 5;
    std::vector<double> table(npts);
    for (int i = 0; i < npts; ++i) table[i] = column_integral(t_lo + (i - 1) * h);

    auto interp = [&](double t) {
        double x = (t - t_lo) / h + 1.0;
        int i = std::clamp(static_cast<int>(std::floor(x)), 1, npts - 3);
        double f = x - i;
        double m1 = 0.5 * (table[i + 1] - table[i - 1]);
        double m2 = 0.5 * (table[i + 2] - table[i]);
        double d = table[i + 1] - table[i];
        return table[i] + f * m1 + f * f * (3.0 * d - 2.0 * m1 - m2) +
               f * f * f * (m2 + m1 - 2.0 * d);
    };

    quadrature::KahanSum acc;
    for (int m = 1; m <= mmax; ++m) {
        double t = std::log(a2 / static_cast<double>(m));
        if (t < t_lo) break;
        acc.add(static_cast<double>(phi[m]) * interp(t));
    }
    return total + std::sqrt(a2 / a1) * (a1 / a2) * acc.value();
}

} // namespace

Complex hall_ct_twisted(const mellin::LogGaussianTestFunction& f1,
                        const mellin::LogGaussianTestFunction& f2, double a1, double a2,
                        const ChCheckConfig& cfg) {
    if (f1.dim() != 1 || f2.dim() != 1) throw ConfigError("hall_ct_twisted: need 1-d weights");
    const double D = a1 * a2;
    DegreeWindow w1 = window_of(f1, cfg.window_sigmas);
    DegreeWindow w2 = window_of(f2, cfg.window_sigmas);
    double floor = std::max(w1.lo, D / w2.hi);
    double ceil = std::min(w1.hi, D / w2.lo);
    if (floor > ceil) return 0.0; // degree windows cannot meet on this slice
    // Every non-canonical subbundle has degree at most a2; below the
    // reachable window only the canonical term (degree a1, x-independent,
    // twists cancelling) survives.
    if (a2 < floor) return f1.eval_log({std::log(a1)}) * f2.eval_log({std::log(a2)});
    double ratio = a2 / a1;
    if (ratio <= std::exp(2.0 * cfg.gl_halfwidth)) {
        // balanced bundles: literal slice quadrature over x in [0,1]
        qforms::ScalarFn g1 = [&f1](double d) { return Complex(f1.eval_log({std::log(d)}), 0.0); };
        qforms::ScalarFn g2 = [&f2](double d) { return Complex(f2.eval_log({std::log(d)}), 0.0); };
        Complex ct = qforms::constant_term_rank2(
            [&](const qforms::GramBundle& E, double, double, double) {
                return qforms::hall_product_11(g1, g2, E, floor, cfg.budget);
            },
            a1, a2, cfg.x_nodes);
        return std::sqrt(a2 / a1) * ct;
    }
    if (ratio <= std::exp(2.0 * cfg.cusp_halfwidth)) {
        // cusp: the x-structure is finer than any node set, but the x
        // integral is exact column by column
        return hall_ct_column_average(f1, f2, a1, a2, floor);
    }
    // beyond the cusp cap only the canonical term is kept; the neglected
    // remainder enters the Mellin integral with weight exp((1-Re(s1-s2)) w)
    return f1.eval_log({std::log(a1)}) * f2.eval_log({std::log(a2)});
}

ChCheckReport ch_homomorphism_check(const mellin::LogGaussianTestFunction& f1,
                                    const mellin::LogGaussianTestFunction& f2,
                                    const std::vector<std::pair<double, double>>& e_family_sample,
                                    const std::vector<std::pair<Complex, Complex>>& s_sample,
                                    const ChCheckConfig& cfg) {
    ChCheckReport rep;
    for (auto [a1, a2] : e_family_sample) {
        rep.ct_sample_points.emplace_back(a1, a2);
        rep.ct_sample_values.push_back(hall_ct_twisted(f1, f2, a1, a2, cfg));
    }
    GradedEvaluator B =
        shuffle_product(mellin_closed_form(f1), mellin_closed_form(f2), specfun::phi);
    for (auto [s1, s2] : s_sample) {
        if (!((s1 - s2).real() > 1.0))
            throw ConfigError("ch_homomorphism_check: need Re(s1 - s2) > 1");
        mellin::MellinQuad quad;
        quad.tol = cfg.mellin_tol;
        quad.rel_floor = cfg.mellin_rel;
        Complex a_val = mellin::mellin_forward(
            [&](const std::vector<double>& a) { return hall_ct_twisted(f1, f2, a[0], a[1], cfg); },
            std::vector<Complex>{s1, s2}, quad);
        Complex b_val = B(s1, s2);
        double dev = std::abs(a_val - b_val) / std::max(1e-300, std::abs(b_val));
        rep.s_points.emplace_back(s1, s2);
        rep.pipeline_a.push_back(a_val);
        rep.pipeline_b.push_back(b_val);
        rep.rel_dev.push_back(dev);
        rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
    }
    return rep;
}

} // namespace zhall::shuffle
