#include "zhall/quadrature.hpp"

#include <cmath>
#include <unordered_map>

namespace zhall::quadrature {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

struct DeNode {
    double u;
    double w; // du/dt
};

bool de_node(double t, double u_cap, DeNode& out) {
    double s = std::sinh(t);
    double arg = 0.5 * kPi * s;
    if (std::abs(arg) > 710.0) return false; // sinh would overflow
    out.u = std::sinh(arg);
    if (std::abs(out.u) > u_cap) return false;
    out.w = 0.5 * kPi * std::cosh(t) * std::cosh(arg);
    return true;
}

// Sum of g(u(t)) u'(t) over the trapezoid grid at step h, t = 0 excluded.
// With `odd_only`, only odd multiples of h (refinement midpoints). A side
// stops early only after significant mass has been seen followed by three
// sub-threshold terms; otherwise it runs to the u_cap horizon, so bumps far
// from the origin are never skipped.
Complex de_sweep(const std::function<Complex(double)>& g, double h, bool odd_only, double u_cap,
                 double trunc) {
    KahanSumC acc;
    int stride = odd_only ? 2 : 1;
    for (int dir = 0; dir < 2; ++dir) {
        double sign = dir == 0 ? 1.0 : -1.0;
        int small_run = 0;
        bool seen_mass = false;
        for (int k = 1;; k += stride) {
            DeNode nd;
            if (!de_node(sign * h * k, u_cap, nd)) break;
            Complex v = g(nd.u) * nd.w;
            acc.add(v);
            if (std::abs(v) < trunc) {
                if (++small_run >= 3 && seen_mass && h * k > 1.0) break;
            } else {
                small_run = 0;
                if (std::abs(v) >= 100.0 * trunc) seen_mass = true;
            }
        }
    }
    return acc.value();
}

} // namespace

Complex de_integral(const std::function<Complex(double)>& g, const DeConfig& cfg) {
    double trunc = cfg.tol * 1e-4;
    double h = cfg.h0;
    DeNode origin;
    de_node(0.0, cfg.u_cap, origin);
    Complex sum = g(origin.u) * origin.w + de_sweep(g, h, false, cfg.u_cap, trunc);
    Complex prev = h * sum;
    for (int level = 1; level <= cfg.max_level; ++level) {
        h *= 0.5;
        sum += de_sweep(g, h, true, cfg.u_cap, trunc);
        Complex cur = h * sum;
        if (std::abs(cur - prev) <= cfg.tol + cfg.rel_floor * std::abs(cur)) return cur;
        prev = cur;
    }
    throw ConvergenceError("de_integral: refinements disagree at max level");
}

GaussLegendre::GaussLegendre(int n) : x(n), w(n) {
    if (n < 1) throw ConfigError("GaussLegendre: need n >= 1");
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess, Newton on P_n
        double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * xi * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (xi * p0 - p1) / (xi * xi - 1.0);
            double dx = p0 / pp;
            xi -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        x[i] = -xi;
        x[n - 1 - i] = xi;
        w[i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

Complex gauss01(const std::function<Complex(double)>& f, int n) {
    static thread_local std::unordered_map<int, GaussLegendre> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
    const GaussLegendre& gl = it->second;
    KahanSumC acc;
    for (int i = 0; i < n; ++i) {
        double xi = 0.5 * (gl.x[i] + 1.0);
        acc.add(f(xi) * (0.5 * gl.w[i]));
    }
    return acc.value();
}

} // namespace zhall::quadrature
