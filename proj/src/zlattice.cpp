#include "zhall/zlattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace zhall::zlattice {

namespace {

using std::int64_t;

void swap_rows(IntMatrix& M, int a, int b) { M.row(a).swap(M.row(b)); }
void swap_cols(IntMatrix& M, int a, int b) { M.col(a).swap(M.col(b)); }

} // namespace

SmithResult smith_normal_form(const IntMatrix& A) {
    const int m = static_cast<int>(A.rows());
    const int n = static_cast<int>(A.cols());
    SmithResult r;
    r.D = A;
    r.U = IntMatrix::Identity(m, m);
    r.V = IntMatrix::Identity(n, n);
    IntMatrix& D = r.D;

    int k = 0;
    while (k < m && k < n) {
        // find pivot: smallest nonzero |entry| in D(k.., k..)
        int pi = -1, pj = -1;
        int64_t best = 0;
        for (int i = k; i < m; ++i)
            for (int j = k; j < n; ++j)
                if (D(i, j) != 0 && (pi < 0 || std::abs(D(i, j)) < best)) {
                    best = std::abs(D(i, j));
                    pi = i;
                    pj = j;
                }
        if (pi < 0) break; // rest is zero
        if (pi != k) { swap_rows(D, pi, k); swap_rows(r.U, pi, k); }
        if (pj != k) { swap_cols(D, pj, k); swap_cols(r.V, pj, k); }

        bool clean = true;
        for (int i = k + 1; i < m; ++i) {
            int64_t q = D(i, k) / D(k, k);
            if (q != 0) { D.row(i) -= q * D.row(k); r.U.row(i) -= q * r.U.row(k); }
            if (D(i, k) != 0) clean = false;
        }
        for (int j = k + 1; j < n; ++j) {
            int64_t q = D(k, j) / D(k, k);
            if (q != 0) { D.col(j) -= q * D.col(k); r.V.col(j) -= q * r.V.col(k); }
            if (D(k, j) != 0) clean = false;
        }
        if (!clean) continue; // remainders left; repeat with smaller pivot

        // divisibility: D(k,k) must divide all later entries
        bool divides = true;
        for (int i = k + 1; i < m && divides; ++i)
            for (int j = k + 1; j < n && divides; ++j)
                if (D(i, j) % D(k, k) != 0) {
                    // fold row i into row k and retry
                    D.row(k) += D.row(i);
                    r.U.row(k) += r.U.row(i);
                    divides = false;
                }
        if (!divides) continue;
        if (D(k, k) < 0) { D.row(k) = -D.row(k); r.U.row(k) = -r.U.row(k); }
        ++k;
    }
    for (int i = 0; i < std::min(m, n); ++i)
        if (D(i, i) != 0) r.invariant_factors.push_back(D(i, i));
    return r;
}

bool is_primitive_sublattice(const IntMatrix& basis) {
    if (basis.cols() == 0 || basis.cols() > basis.rows()) return false;
    SmithResult s = smith_normal_form(basis);
    if (static_cast<int>(s.invariant_factors.size()) != basis.cols()) return false; // not full rank
    return std::all_of(s.invariant_factors.begin(), s.invariant_factors.end(),
                       [](std::int64_t d) { return d == 1; });
}

bool is_surjective_over_z(const IntMatrix& J) {
    if (J.rows() > J.cols()) return false;
    SmithResult s = smith_normal_form(J);
    if (static_cast<int>(s.invariant_factors.size()) != J.rows()) return false;
    return std::all_of(s.invariant_factors.begin(), s.invariant_factors.end(),
                       [](std::int64_t d) { return d == 1; });
}

bool is_primitive_vector(const IntVector& v) {
    std::int64_t g = 0;
    for (int i = 0; i < v.size(); ++i) g = std::gcd(g, std::abs(v[i]));
    return g == 1;
}

IntMatrix complete_to_unimodular(const IntMatrix& basis) {
    const int n = static_cast<int>(basis.rows());
    const int k = static_cast<int>(basis.cols());
    SmithResult s = smith_normal_form(basis);
    if (static_cast<int>(s.invariant_factors.size()) != k ||
        !std::all_of(s.invariant_factors.begin(), s.invariant_factors.end(),
                     [](std::int64_t d) { return d == 1; }))
        throw NonPrimitiveError("complete_to_unimodular: columns do not span a primitive sublattice");
    // U A V = [I_k; 0]  =>  A = U^{-1} [I;0] V^{-1}, so the first k columns
    // of U^{-1} span the same sublattice as A's columns.
    IntMatrix Uinv = unimodular_inverse(s.U);
    IntMatrix W = IntMatrix::Identity(n, n);
    W.leftCols(k) = basis;
    W.rightCols(n - k) = Uinv.rightCols(n - k);
    // det(W) = +-1 by construction (change of basis within the sublattice);
    // verify to be safe.
    IntMatrix check = smith_normal_form(W).D;
    for (int i = 0; i < n; ++i)
        if (check(i, i) != 1)
            throw NonPrimitiveError("complete_to_unimodular: completion failed");
    return W;
}

IntMatrix unimodular_inverse(const IntMatrix& U) {
    const int n = static_cast<int>(U.rows());
    // Gauss-Jordan over Q with exact integer pivots of +-1 after SNF-style
    // row reduction; for unimodular U plain fraction-free elimination works
    // with long double intermediates only for pivoting decisions.
    // Use adjugate via Eigen on doubles then round: entries of U^{-1} are
    // integers bounded by det of (n-1)-minors; for the small matrices used
    // here (n <= 8, small entries) double precision is exact.
    Eigen::MatrixXd Ud = U.cast<double>();
    double det = Ud.determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-6)
        throw NonPrimitiveError("unimodular_inverse: matrix is not unimodular");
    Eigen::MatrixXd inv = Ud.inverse();
    IntMatrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = inv(i, j);
            double r = std::round(v);
            if (std::abs(v - r) > 1e-6)
                throw NonPrimitiveError("unimodular_inverse: non-integer inverse entry");
            out(i, j) = static_cast<std::int64_t>(r);
        }
    return out;
}

IntVector canonical_sign(IntVector v) {
    for (int i = 0; i < v.size(); ++i) {
        if (v[i] > 0) return v;
        if (v[i] < 0) return -v;
    }
    return v;
}

ReducedGram lll_reduce(const Eigen::MatrixXd& G0, double delta) {
    const int n = static_cast<int>(G0.rows());
    ReducedGram out{G0, IntMatrix::Identity(n, n)};
    if (n == 1) return out;
    Eigen::MatrixXd& G = out.G;

    // Gram-Schmidt data recomputed from the current Gram
    Eigen::MatrixXd mu(n, n);
    Eigen::VectorXd Bstar(n);
    auto gso = [&]() {
        for (int i = 0; i < n; ++i) {
            double b = G(i, i);
            for (int j = 0; j < i; ++j) {
                double m = G(i, j);
                for (int k = 0; k < j; ++k) m -= mu(i, k) * mu(j, k) * Bstar(k);
                mu(i, j) = m / Bstar(j);
                b -= mu(i, j) * mu(i, j) * Bstar(j);
            }
            Bstar(i) = b;
        }
    };
    auto translate = [&](int i, int j, std::int64_t q) {
        // column op b_i <- b_i - q b_j on the implicit basis
        Eigen::VectorXd gj = G.col(j);
        G.col(i) -= static_cast<double>(q) * gj;
        G.row(i) -= static_cast<double>(q) * G.row(j);
        out.T.col(i) -= q * out.T.col(j);
    };
    auto swap_basis = [&](int i, int j) {
        G.col(i).swap(G.col(j));
        G.row(i).swap(G.row(j));
        out.T.col(i).swap(out.T.col(j));
    };

    gso();
    int k = 1;
    int guard = 0;
    while (k < n && ++guard < 10000) {
        for (int j = k - 1; j >= 0; --j) {
            std::int64_t q = static_cast<std::int64_t>(std::llround(mu(k, j)));
            if (q != 0) {
                translate(k, j, q);
                gso();
            }
        }
        if (Bstar(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * Bstar(k - 1)) {
            ++k;
        } else {
            swap_basis(k, k - 1);
            gso();
            k = std::max(1, k - 1);
        }
    }
    return out;
}

namespace {

struct FpContext {
    Eigen::MatrixXd R; // upper-triangular Cholesky factor, G = R^T R
    double bound = 0.0;
    std::size_t budget = 0;
    std::size_t visited = 0;
    bool primitive_only = true;
    const std::function<void(const IntVector&, double)>* visit = nullptr;
    IntVector coords;
    Eigen::VectorXd partial; // partial[i] = sum_{j>i} R(i,j) x_j
};

// Enumerate level i (coordinates x_{i+1..n-1} fixed), recursing downward.
// rem is the norm budget left at this level.
void fp_level(FpContext& ctx, int i, double rem) {
    const auto& R = ctx.R;
    const int n = static_cast<int>(R.rows());
    // center of the allowed window for x_i: R(i,i) x_i + partial_i in
    // [-sqrt(rem), sqrt(rem)]
    double center = -ctx.partial(i) / R(i, i);
    double half = std::sqrt(std::max(rem, 0.0)) / R(i, i);
    std::int64_t lo = static_cast<std::int64_t>(std::ceil(center - half - 1e-12));
    std::int64_t hi = static_cast<std::int64_t>(std::floor(center + half + 1e-12));
    for (std::int64_t x = lo; x <= hi; ++x) {
        double y = R(i, i) * static_cast<double>(x) + ctx.partial(i);
        double used = y * y;
        if (used > rem + 1e-12) continue;
        ctx.coords(i) = x;
        if (++ctx.visited > ctx.budget)
            throw BudgetError("short_vectors: candidate count exceeded cap", ctx.budget);
        if (i == 0) {
            bool zero = true;
            for (int j = 0; j < n; ++j)
                if (ctx.coords(j) != 0) { zero = false; break; }
            if (zero) continue;
            // up to sign: first nonzero coordinate positive
            int fnz = 0;
            while (ctx.coords(fnz) == 0) ++fnz;
            if (ctx.coords(fnz) < 0) continue;
            if (ctx.primitive_only && !is_primitive_vector(ctx.coords)) continue;
            double q = ctx.bound - rem + used; // accumulated norm
            (*ctx.visit)(ctx.coords, q);
        } else {
            for (int j = 0; j < i; ++j) ctx.partial(j) += R(j, i) * static_cast<double>(x);
            fp_level(ctx, i - 1, rem - used);
            for (int j = 0; j < i; ++j) ctx.partial(j) -= R(j, i) * static_cast<double>(x);
        }
    }
    ctx.coords(i) = 0;
}

} // namespace

void short_vectors_stream(const Eigen::MatrixXd& G, double bound, const EnumOptions& opts,
                          const std::function<void(const IntVector&, double)>& visit) {
    const int n = static_cast<int>(G.rows());
    if (n == 0 || G.rows() != G.cols()) throw ConfigError("short_vectors: bad Gram matrix");
    // enumerate under an LLL-reduced basis so skew forms cost area, not
    // aspect ratio, and map hits back to the original coordinates
    ReducedGram red = lll_reduce(G);
    Eigen::LLT<Eigen::MatrixXd> llt(red.G);
    if (llt.info() != Eigen::Success)
        throw DomainError("short_vectors: Gram matrix is not positive definite");
    std::function<void(const IntVector&, double)> mapped =
        [&](const IntVector& v, double q) { visit(canonical_sign(red.T * v), q); };
    FpContext ctx;
    ctx.R = llt.matrixU();
    ctx.bound = bound;
    ctx.budget = opts.budget;
    ctx.primitive_only = opts.primitive_only;
    ctx.visit = &mapped;
    ctx.coords = IntVector::Zero(n);
    ctx.partial = Eigen::VectorXd::Zero(n);
    fp_level(ctx, n - 1, bound);
}

std::vector<IntVector> short_vectors(const Eigen::MatrixXd& G, double bound,
                                     const EnumOptions& opts) {
    std::vector<std::pair<double, IntVector>> found;
    short_vectors_stream(G, bound, opts, [&](const IntVector& v, double q) {
        found.emplace_back(q, v);
    });
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return std::lexicographical_compare(a.second.data(), a.second.data() + a.second.size(),
                                            b.second.data(), b.second.data() + b.second.size());
    });
    std::vector<IntVector> out;
    out.reserve(found.size());
    for (auto& p : found) out.push_back(std::move(p.second));
    return out;
}

} // namespace zhall::zlattice
