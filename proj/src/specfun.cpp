#include "zhall/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace zhall::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;
constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

// Lanczos coefficients, g = 607/128, N = 15 (Godfrey's table). Relative
// error ~1e-15 on Re(s) > 0 for double precision.
constexpr double kLanczosG = 4.7421875;
constexpr double kLanczosC[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5, 1.5808870322491248884e-4,
    -2.1026444172410488319e-4,  2.1743961811521264320e-4,  -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5, 3.6899182659531622704e-6,
};

bool near_nonpositive_integer(Complex s, double tol) {
    if (std::abs(s.imag()) > tol) return false;
    double r = std::round(s.real());
    return r <= 0.0 && std::abs(s.real() - r) <= tol;
}

// Lanczos series; accurate for Re(s) >= 0.5, usable on Re(s) > 0.
Complex gamma_lanczos(Complex s) {
    Complex z = s - 1.0;
    Complex a = kLanczosC[0];
    for (int k = 1; k < 15; ++k) a += kLanczosC[k] / (z + static_cast<double>(k));
    Complex t = z + kLanczosG + 0.5;
    return kSqrt2Pi * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

// Bernoulli numbers B_2 .. B_20 for the Euler-Maclaurin tail (order 10).
constexpr double kBernoulli[10] = {
    1.0 / 6.0,       -1.0 / 30.0, 1.0 / 42.0,      -1.0 / 30.0,     5.0 / 66.0,
    -691.0 / 2730.0, 7.0 / 6.0,   -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0,
};

// Euler-Maclaurin evaluation of zeta(s), used for Re(s) >= -6.
Complex zeta_euler_maclaurin(Complex s) {
    // First dropped tail term is |B_22/22!| |(s)_21| N^{-Re(s)-21}; choose
    // the smallest N pushing it below 1e-17, keeping the cancellation
    // between the direct sum and its corrections as small as possible.
    double poch_abs = 1.0;
    for (int j = 0; j <= 20; ++j) poch_abs *= std::abs(s + static_cast<double>(j));
    double p = 21.0 + s.real();
    double n_est = std::pow(5.7e-18 * poch_abs / 1e-17, 1.0 / p);
    // Bernoulli terms must be decreasing at the tail order
    double n_dec = (std::abs(s) + 21.0) / 4.0;
    int N = std::clamp(static_cast<int>(std::ceil(std::max(n_est, n_dec))) + 4, 10, 20000);

    struct KahanC {
        double hr = 0, cr = 0, hi = 0, ci = 0;
        void add(Complex z) {
            double yr = z.real() - cr, tr = hr + yr;
            cr = (tr - hr) - yr;
            hr = tr;
            double yi = z.imag() - ci, ti = hi + yi;
            ci = (ti - hi) - yi;
            hi = ti;
        }
        Complex value() const { return {hr, hi}; }
    } sum;
    for (int n = N - 1; n >= 2; --n) {
        sum.add(std::exp(-s * std::log(static_cast<double>(n))));
    }
    sum.add(1.0);
    double logN = std::log(static_cast<double>(N));
    Complex Nms = std::exp(-s * logN); // N^{-s}
    sum.add(0.5 * Nms);
    sum.add(Nms * static_cast<double>(N) / (s - 1.0));

    // Bernoulli tail: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
    Complex poch = s;
    double fact_inv = 0.5;                        // 1/(2k)! at k = 1
    Complex npow = Nms / static_cast<double>(N);  // N^{-s-1}
    double invN2 = 1.0 / (static_cast<double>(N) * static_cast<double>(N));
    for (int k = 1; k <= 10; ++k) {
        sum.add(kBernoulli[k - 1] * fact_inv * poch * npow);
        poch *= (s + static_cast<double>(2 * k - 1)) * (s + static_cast<double>(2 * k));
        fact_inv /= static_cast<double>((2 * k + 1) * (2 * k + 2));
        npow *= invN2;
    }
    return sum.value();
}

} // namespace

Complex gamma(Complex s) {
    if (near_nonpositive_integer(s, 1e-12)) throw PoleError("Gamma", s);
    if (s.real() >= 0.5) return gamma_lanczos(s);
    if (s.real() > 0.0) return gamma_lanczos(s + 1.0) / s;
    // reflection Gamma(s) Gamma(1-s) = pi / sin(pi s)
    return kPi / (std::sin(kPi * s) * gamma_lanczos(1.0 - s));
}

Complex log_gamma_right_half(Complex s) {
    if (s.real() <= 0.0) throw DomainError("log_gamma_right_half requires Re(s) > 0");
    Complex z = s - 1.0;
    Complex a = kLanczosC[0];
    for (int k = 1; k < 15; ++k) a += kLanczosC[k] / (z + static_cast<double>(k));
    Complex t = z + kLanczosG + 0.5;
    return std::log(a) + (z + 0.5) * std::log(t) - t + std::log(kSqrt2Pi);
}

Complex zeta(Complex s) {
    if (std::abs(s - 1.0) < 1e-10) throw PoleError("zeta", s);
    if (s.real() >= -6.0) return zeta_euler_maclaurin(s);
    // deep left half-plane only: zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    Complex u = 1.0 - s;
    return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) * gamma(u) *
           zeta_euler_maclaurin(u);
}

Complex zeta_star(Complex s) {
    if (std::abs(s) < 1e-10 || std::abs(s - 1.0) < 1e-10) throw PoleError("zeta_star", s);
    // Near a trivial zero s = -2k the Gamma factor's pole cancels the zeta
    // zero; group the cancelling pair before multiplying.
    if (s.real() < -1.5 && std::abs(s.imag()) < 0.25) {
        double k = std::round(-s.real() / 2.0);
        if (k >= 1.0 && std::abs(s + 2.0 * k) < 0.25) {
            Complex d = s / 2.0 + k;
            // Gamma(s/2)*d, regular: Gamma(s/2+k+1) / prod_{j=0}^{k-1} (s/2+j)
            Complex greg = gamma(s / 2.0 + k + 1.0);
            for (int j = 0; j < static_cast<int>(k); ++j) greg /= (s / 2.0 + static_cast<double>(j));
            Complex zreg; // zeta(s)/d
            if (std::abs(d) < 1e-7) {
                double h = 1e-4;
                zreg = (zeta(s + h) - zeta(s - h)) / h; // 2 zeta'(-2k)
            } else {
                zreg = zeta(s) / d;
            }
            return std::pow(kPi, -s / 2.0) * greg * zreg;
        }
    }
    return std::pow(kPi, -s / 2.0) * gamma(s / 2.0) * zeta(s);
}

Complex phi(Complex s) {
    if (std::abs(s - 1.0) < 1e-10) throw PoleError("Phi: zeta_star(s)", s);
    if (std::abs(s + 1.0) < 1e-10) return 0.0; // zeta_star(s+1) pole at s = -1
    if (std::abs(s) < 1e-6) {
        // simple poles of numerator and denominator cancel; Phi(0) = -1
        if (std::abs(s) < 1e-13) return -1.0;
        return (s * zeta_star(s)) / (s * zeta_star(s + 1.0));
    }
    Complex denom = zeta_star(s + 1.0);
    if (std::abs(denom) < 1e-12) throw ZeroDivisionError("zeta_star(s+1)", s);
    return zeta_star(s) / denom;
}

Complex lambda_big(Complex s) {
    if (std::abs(s) < 1e-10) throw PoleError("Lambda", s);
    if (std::abs(s + 1.0) < 1e-9) {
        // zeta_star(-s)(-s-1) -> res_{u=1} zeta_star = 1 as s -> -1
        return s - 1.0;
    }
    return zeta_star(-s) * (s - 1.0) * (-s - 1.0);
}

double theta(double b) {
    if (b <= 0.0) throw DomainError("theta(b) requires b > 0");
    double scale = 1.0;
    if (b < 1.0) {
        // Jacobi turn theta(b) = theta(1/b)/sqrt(b) keeps the sum short
        scale = 1.0 / std::sqrt(b);
        b = 1.0 / b;
    }
    double sum = 1.0;
    for (int n = 1;; ++n) {
        double term = std::exp(-static_cast<double>(n) * n * kPi * b);
        sum += 2.0 * term;
        if (term < 1e-18) break;
    }
    return scale * sum;
}

Complex KernelFunction::operator()(Complex s) const {
    switch (kind) {
        case KernelKind::ZetaStar: return zeta_star(s);
        case KernelKind::Phi: return phi(s);
        case KernelKind::LambdaBig: return lambda_big(s);
    }
    throw ConfigError("unknown kernel kind");
}

KernelFunction KernelFunction::zeta_star_kernel() {
    return KernelFunction{KernelKind::ZetaStar, {Complex(0.0), Complex(1.0)}, {}};
}

KernelFunction KernelFunction::phi_kernel() {
    return KernelFunction{KernelKind::Phi, {Complex(1.0)}, {Complex(-1.0)}};
}

KernelFunction KernelFunction::lambda_kernel() {
    return KernelFunction{KernelKind::LambdaBig, {Complex(0.0)}, {Complex(1.0)}};
}

void ZetaZeroCache::insert(double t) {
    auto it = std::lower_bound(ordinates.begin(), ordinates.end(), t);
    if (it != ordinates.end() && std::abs(*it - t) < 1e-7) return;
    if (it != ordinates.begin() && std::abs(*(it - 1) - t) < 1e-7) return;
    ordinates.insert(it, t);
}

void ZetaZeroCache::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open zero cache for writing: " + path);
    char buf[64];
    std::snprintf(buf, sizeof buf, "# zeta-zero-cache v1 tol=%g\n", tolerance);
    out << buf;
    for (double t : ordinates) {
        std::snprintf(buf, sizeof buf, "%.12g\n", t);
        out << buf;
    }
}

ZetaZeroCache ZetaZeroCache::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open zero cache: " + path);
    std::string header;
    std::getline(in, header);
    ZetaZeroCache cache;
    auto pos = header.find("tol=");
    if (header.rfind("# zeta-zero-cache v1", 0) != 0 || pos == std::string::npos)
        throw ConfigError("bad zero cache header: " + header);
    cache.tolerance = std::stod(header.substr(pos + 4));
    double t;
    while (in >> t) cache.insert(t);
    return cache;
}

double critical_line_value(double t) {
    return zeta_star(Complex(0.5, t)).real();
}

std::vector<double> find_zeta_zeros(double t_min, double t_max, ZetaZeroCache* cache,
                                    double scan_step) {
    if (!(0.0 < t_min && t_min < t_max)) throw DomainError("find_zeta_zeros: need 0 < t_min < t_max");
    std::vector<double> found;
    double t0 = t_min;
    double f0 = critical_line_value(t0);
    while (t0 < t_max) {
        double t1 = std::min(t0 + scan_step, t_max);
        double f1 = critical_line_value(t1);
        if (f0 * f1 < 0.0) {
            double lo = t0, hi = t1, flo = f0;
            while (hi - lo > 1e-9) {
                double mid = 0.5 * (lo + hi);
                double fm = critical_line_value(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (flo * fm < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            found.push_back(0.5 * (lo + hi));
        }
        t0 = t1;
        f0 = f1;
    }
    if (cache) {
        for (double t : found) cache->insert(t);
    }
    return found;
}

} // namespace zhall::specfun
