#include "zhall/qforms.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "zhall/quadrature.hpp"

namespace zhall::qforms {

using quadrature::KahanSumC;

GramBundle::GramBundle(Eigen::MatrixXd gram) : G(std::move(gram)) {
    if (G.rows() != G.cols() || G.rows() == 0) throw DomainError("GramBundle: matrix must be square");
    if (!G.isApprox(G.transpose(), 1e-12)) throw DomainError("GramBundle: matrix must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success)
        throw DomainError("GramBundle: matrix must be positive definite");
}

double GramBundle::q(const IntVector& v) const {
    Eigen::VectorXd vd = v.cast<double>();
    return vd.dot(G * vd);
}

double degree(const GramBundle& E) { return 1.0 / std::sqrt(E.G.determinant()); }

GramBundle bundle_from_tau(const UpperHalfPoint& tau) {
    if (!(tau.y > 0.0)) throw DomainError("bundle_from_tau: Im(tau) must be positive");
    Eigen::MatrixXd G(2, 2);
    G << 1.0, tau.x, tau.x, tau.x * tau.x + tau.y * tau.y;
    G /= tau.y;
    return GramBundle(G);
}

GramBundle bundle_from_iwasawa(double a1, double a2, double x) {
    if (!(a1 > 0.0 && a2 > 0.0)) throw DomainError("bundle_from_iwasawa: a1, a2 must be positive");
    Eigen::MatrixXd G(2, 2);
    double i1 = 1.0 / (a1 * a1), i2 = 1.0 / (a2 * a2);
    G << x * x * i1 + i2, -x * i1, -x * i1, i1;
    return GramBundle(G);
}

GramBundle restrict_form(const GramBundle& E, const IntMatrix& B) {
    if (B.rows() != E.rank() || B.cols() < 1 || B.cols() > B.rows())
        throw DomainError("restrict_form: bad sublattice basis shape");
    if (!zlattice::is_primitive_sublattice(B))
        throw NonPrimitiveError("restrict_form: sublattice is not primitive");
    Eigen::MatrixXd Bd = B.cast<double>();
    return GramBundle(Bd.transpose() * E.G * Bd);
}

GramBundle pushforward_form(const GramBundle& E, const IntMatrix& J) {
    const int n = E.rank();
    const int m = static_cast<int>(J.rows());
    if (J.cols() != n || m < 1 || m > n) throw DomainError("pushforward_form: bad quotient map shape");
    if (!zlattice::is_surjective_over_z(J))
        throw NonSurjectiveError("pushforward_form: quotient map is not onto over Z");
    if (m == n) {
        // J unimodular: plain change of basis by J^{-1}
        Eigen::MatrixXd Ji = zlattice::unimodular_inverse(J).cast<double>();
        return GramBundle(Ji.transpose() * E.G * Ji);
    }
    // Kernel basis K (n x (n-m)) and a section S (n x m) with J S = I:
    // from U J V = [I_m | 0], J (V [I;0] U) = U^{-1} U = I, so
    // S = V[:,1..m] U, and the kernel is spanned by V[:,m+1..n].
    auto snf = zlattice::smith_normal_form(J);
    IntMatrix K = snf.V.rightCols(n - m);
    IntMatrix S = snf.V.leftCols(m) * snf.U;
    if ((J * S - IntMatrix::Identity(m, m)).cwiseAbs().maxCoeff() != 0)
        throw NonSurjectiveError("pushforward_form: section construction failed");
    Eigen::MatrixXd Kd = K.cast<double>();
    Eigen::MatrixXd Sd = S.cast<double>();
    // min over the kernel fiber: Schur complement of the kernel block
    Eigen::MatrixXd KGK = Kd.transpose() * E.G * Kd;
    Eigen::MatrixXd KGS = Kd.transpose() * E.G * Sd;
    Eigen::MatrixXd SGS = Sd.transpose() * E.G * Sd;
    Eigen::MatrixXd pushed = SGS - KGS.transpose() * KGK.llt().solve(KGS);
    pushed = 0.5 * (pushed + pushed.transpose());
    return GramBundle(pushed);
}

std::vector<PrimitiveVector> enumerate_rank1_subbundles(const GramBundle& E, double degree_min,
                                                        std::size_t budget) {
    if (!(degree_min > 0.0)) throw DomainError("enumerate_rank1_subbundles: degree_min must be > 0");
    double bound = 1.0 / (degree_min * degree_min);
    zlattice::EnumOptions opts;
    opts.budget = budget;
    opts.primitive_only = true;
    std::vector<PrimitiveVector> out;
    for (auto& v : zlattice::short_vectors(E.G, bound, opts)) out.push_back(PrimitiveVector{v});
    return out;
}

Complex hall_product_11(const ScalarFn& f1, const ScalarFn& f2, const GramBundle& E,
                        double degree_floor, std::size_t budget, std::size_t sort_threshold) {
    if (E.rank() != 2) throw DomainError("hall_product_11: need a rank-2 bundle");
    if (!(degree_floor > 0.0)) throw DomainError("hall_product_11: degree_floor must be > 0");
    const double D = degree(E);
    const double bound = 1.0 / (degree_floor * degree_floor);
    zlattice::EnumOptions opts;
    opts.budget = budget;
    opts.primitive_only = true;

    auto term = [&](double q) -> Complex {
        double d = 1.0 / std::sqrt(q);
        double dq = D / d;
        return std::sqrt(d / dq) * f1(d) * f2(dq);
    };

    // Cheap estimate of the candidate count decides between the norm-sorted
    // path and the streaming compensated path.
    double approx_count = 3.2 * bound / std::sqrt(E.G.determinant());
    if (approx_count < static_cast<double>(sort_threshold)) {
        std::vector<double> norms;
        try {
            zlattice::short_vectors_stream(E.G, bound, opts,
                                           [&](const IntVector&, double q) { norms.push_back(q); });
        } catch (const BudgetError&) {
            throw;
        }
        std::sort(norms.begin(), norms.end());
        KahanSumC acc;
        for (double q : norms) acc.add(term(q));
        return acc.value();
    }
    KahanSumC acc;
    zlattice::short_vectors_stream(E.G, bound, opts,
                                   [&](const IntVector&, double q) { acc.add(term(q)); });
    return acc.value();
}

double eisenstein_radius(double y, double sigma, double tol) {
    // |y^s / r^{2s}| summed over coprime pairs beyond radius R is bounded by
    // (pi / y) y^sigma R^{2-2 sigma} / (2 sigma - 2) (lattice point count in
    // annuli over covolume y, coprime density < 1, the 1/2 of the series
    // against the two signs). Solve for R at tol/2 and pad.
    double c = 3.14159265358979323846 * std::pow(y, sigma - 1.0) / (2.0 * sigma - 2.0);
    double R = std::pow((0.5 * tol) / c, 1.0 / (2.0 - 2.0 * sigma));
    return std::max(R, 30.0) * 1.05;
}

Complex eisenstein_maass(const UpperHalfPoint& tau, Complex s, double tol, double radius_override) {
    const double sigma = s.real();
    if (!(sigma > 1.0)) throw ConvergenceError("eisenstein_maass: series requires Re(s) > 1");
    if (!(tau.y > 0.0)) throw DomainError("eisenstein_maass: Im(tau) must be positive");
    const double x = tau.x, y = tau.y;
    const double R = radius_override > 0.0 ? radius_override : eisenstein_radius(y, sigma, tol);
    const double R2 = R * R;
    const double logy = std::log(y);
    const int mode = (s.imag() == 0.0) ? (sigma == 2.0 ? 2 : 1) : 0;
    quadrature::KahanSum racc; // real fast paths
    KahanSumC acc;
    const std::int64_t nmax = static_cast<std::int64_t>(std::floor(R / y));
    for (std::int64_t n = -nmax; n <= nmax; ++n) {
        double ny = static_cast<double>(n) * y;
        double rem = R2 - ny * ny;
        if (rem < 0.0) continue;
        double half = std::sqrt(rem);
        double c = -static_cast<double>(n) * x;
        std::int64_t mlo = static_cast<std::int64_t>(std::ceil(c - half - 1e-9));
        std::int64_t mhi = static_cast<std::int64_t>(std::floor(c + half + 1e-9));
        for (std::int64_t m = mlo; m <= mhi; ++m) {
            if (m == 0 && n == 0) continue;
            if (std::gcd(std::abs(m), std::abs(n)) != 1) continue;
            double mx = static_cast<double>(m) + static_cast<double>(n) * x;
            double q = mx * mx + ny * ny;
            if (q > R2) continue;
            if (mode == 2) {
                double r = y / q;
                racc.add(r * r);
            } else if (mode == 1) {
                racc.add(std::pow(y / q, sigma));
            } else {
                // y^s / q^s = exp(s (log y - log q))
                acc.add(std::exp(s * (logy - std::log(q))));
            }
        }
    }
    if (mode != 0) return Complex(0.5 * racc.value(), 0.0);
    return 0.5 * acc.value();
}

Complex constant_term_rank2(const SliceFn& f, double a1, double a2, int quad_points) {
    if (quad_points < 2) throw ConfigError("constant_term_rank2: need at least 2 nodes");
    return quadrature::gauss01(
        [&](double x) {
            GramBundle E = bundle_from_iwasawa(a1, a2, x);
            return f(E, a1, a2, x);
        },
        quad_points);
}

} // namespace zhall::qforms
