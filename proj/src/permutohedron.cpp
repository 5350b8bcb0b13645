#include "zhall/permutohedron.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace zhall::permutohedron {

int OrderedSetPartition::n() const {
    int count = 0;
    for (const auto& b : blocks) count += static_cast<int>(b.size());
    return count;
}

std::vector<std::vector<OrderedSetPartition>> faces(int n) {
    if (n < 1 || n > 6) throw DomainError("faces: supported for 1 <= n <= 6");
    std::vector<std::vector<OrderedSetPartition>> graded(n);
    // all surjections {0..n-1} -> {0..p-1} in lexicographic order of the
    // assignment word; blocks are the fibers
    for (int p = 1; p <= n; ++p) {
        std::vector<int> assign(n, 0);
        while (true) {
            bool surj;
            {
                std::vector<bool> hit(p, false);
                for (int v : assign) hit[v] = true;
                surj = std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
            }
            if (surj) {
                OrderedSetPartition osp;
                osp.blocks.assign(p, {});
                for (int i = 0; i < n; ++i) osp.blocks[assign[i]].push_back(i);
                graded[n - p].push_back(std::move(osp));
            }
            int k = n - 1;
            while (k >= 0 && assign[k] == p - 1) assign[k--] = 0;
            if (k < 0) break;
            ++assign[k];
        }
    }
    return graded;
}

PerturbedMatrix PerturbedMatrix::all_ones(int n) {
    PerturbedMatrix L;
    L.n = n;
    L.lambda = Eigen::MatrixXcd::Ones(n, n);
    L.zero_mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
    return L;
}

PerturbedMatrix PerturbedMatrix::from_points(const std::vector<Complex>& s,
                                             const std::function<Complex(Complex)>& kernel,
                                             double zero_tol) {
    const int n = static_cast<int>(s.size());
    PerturbedMatrix L;
    L.n = n;
    L.lambda = Eigen::MatrixXcd::Zero(n, n);
    L.zero_mask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(n, n, false);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            Complex v = kernel(s[i] - s[j]);
            L.lambda(i, j) = v;
            if (std::abs(v) < zero_tol) {
                L.lambda(i, j) = 0.0;
                L.zero_mask(i, j) = true;
            }
        }
    return L;
}

namespace {

// Identify the merge position: F' must equal F with blocks nu, nu+1 merged.
// Returns nu (0-based) or -1.
int merge_position(const OrderedSetPartition& F, const OrderedSetPartition& Fp) {
    const int p = static_cast<int>(F.blocks.size());
    if (static_cast<int>(Fp.blocks.size()) != p - 1) return -1;
    for (int nu = 0; nu + 1 < p; ++nu) {
        bool ok = true;
        for (int b = 0; b < p - 1 && ok; ++b) {
            const std::vector<int>* expect;
            std::vector<int> merged;
            if (b < nu) {
                expect = &F.blocks[b];
            } else if (b == nu) {
                merged = F.blocks[nu];
                merged.insert(merged.end(), F.blocks[nu + 1].begin(), F.blocks[nu + 1].end());
                std::sort(merged.begin(), merged.end());
                expect = &merged;
            } else {
                expect = &F.blocks[b + 1];
            }
            if (*expect != Fp.blocks[b]) ok = false;
        }
        if (ok) return nu;
    }
    return -1;
}

template <typename Scalar, typename EntryFn>
Scalar merge_weight(const OrderedSetPartition& F, int nu, const EntryFn& entry, bool& exact_zero) {
    Scalar w{};
    bool first = true;
    exact_zero = false;
    for (int i : F.blocks[nu])
        for (int j : F.blocks[nu + 1]) {
            if (first) {
                w = entry(i, j, exact_zero);
                first = false;
            } else {
                bool z = false;
                w = w * entry(i, j, z);
                exact_zero = exact_zero || z;
            }
            if (exact_zero) return Scalar{};
        }
    return w;
}

} // namespace

Complex coface_weight(const OrderedSetPartition& F, const OrderedSetPartition& Fp,
                      const PerturbedMatrix& L) {
    int nu = merge_position(F, Fp);
    if (nu < 0) throw NotCofaceError("coface_weight: F' is not an adjacent-merge coface of F");
    bool exact_zero = false;
    Complex w = merge_weight<Complex>(
        F, nu,
        [&](int i, int j, bool& z) {
            z = L.zero_mask(i, j);
            return z ? Complex(0.0) : L.lambda(i, j);
        },
        exact_zero);
    return exact_zero ? Complex(0.0) : w;
}

namespace {

// Canonical key of an ordered set partition for index lookup.
std::vector<int> osp_key(const OrderedSetPartition& f) {
    std::vector<int> key;
    for (const auto& b : f.blocks) {
        for (int v : b) key.push_back(v);
        key.push_back(-1);
    }
    return key;
}

struct FaceIndex {
    std::vector<std::map<std::vector<int>, int>> by_grade;
    explicit FaceIndex(const std::vector<std::vector<OrderedSetPartition>>& graded) {
        by_grade.resize(graded.size());
        for (std::size_t m = 0; m < graded.size(); ++m)
            for (std::size_t k = 0; k < graded[m].size(); ++k)
                by_grade[m][osp_key(graded[m][k])] = static_cast<int>(k);
    }
    int find(int m, const OrderedSetPartition& f) const {
        auto it = by_grade[m].find(osp_key(f));
        if (it == by_grade[m].end()) throw ConfigError("face index lookup failed");
        return it->second;
    }
};

// Shared construction of the perturbed differential; EntryFn(i, j, &zero)
// supplies lambda_ij in the target scalar.
template <typename Scalar, typename EntryFn>
std::vector<std::vector<Scalar>> build_differential(
    int n, const std::vector<std::vector<OrderedSetPartition>>& graded, const EntryFn& entry,
    std::vector<std::pair<int, int>>* shapes) {
    FaceIndex index(graded);
    std::vector<std::vector<Scalar>> mats;
    for (int m = 0; m + 1 < n; ++m) {
        const auto& lower = graded[m];
        const auto& upper = graded[m + 1];
        std::vector<Scalar> M(upper.size() * lower.size(), Scalar{});
        for (std::size_t col = 0; col < lower.size(); ++col) {
            const OrderedSetPartition& F = lower[col];
            const int p = static_cast<int>(F.blocks.size());
            for (int nu = 0; nu + 1 < p; ++nu) {
                OrderedSetPartition Fp;
                Fp.blocks.reserve(p - 1);
                for (int b = 0; b < p; ++b) {
                    if (b == nu) {
                        std::vector<int> merged = F.blocks[nu];
                        merged.insert(merged.end(), F.blocks[nu + 1].begin(),
                                      F.blocks[nu + 1].end());
                        std::sort(merged.begin(), merged.end());
                        Fp.blocks.push_back(std::move(merged));
                        ++b;
                    } else {
                        Fp.blocks.push_back(F.blocks[b]);
                    }
                }
                int row = index.find(m + 1, Fp);
                bool exact_zero = false;
                Scalar w = merge_weight<Scalar>(F, nu, entry, exact_zero);
                if (exact_zero) continue;
                // bar sign (-1)^{nu} for 0-based nu
                if (nu % 2 == 1) w = Scalar{} - w;
                M[row * lower.size() + col] = M[row * lower.size() + col] + w;
            }
        }
        if (shapes) shapes->emplace_back(static_cast<int>(upper.size()), static_cast<int>(lower.size()));
        mats.push_back(std::move(M));
    }
    return mats;
}

} // namespace

PerturbedComplex build_complex(const PerturbedMatrix& L) {
    PerturbedComplex C;
    C.n = L.n;
    C.grades = faces(L.n);
    std::vector<std::pair<int, int>> shapes;
    auto mats = build_differential<Complex>(
        L.n, C.grades,
        [&](int i, int j, bool& z) {
            z = L.zero_mask(i, j);
            return z ? Complex(0.0) : L.lambda(i, j);
        },
        &shapes);
    for (std::size_t m = 0; m < mats.size(); ++m) {
        Eigen::MatrixXcd D(shapes[m].first, shapes[m].second);
        for (int r = 0; r < shapes[m].first; ++r)
            for (int c = 0; c < shapes[m].second; ++c) D(r, c) = mats[m][r * shapes[m].second + c];
        C.d.push_back(std::move(D));
    }
    return C;
}

std::vector<std::vector<int>> detect_wheels(const PerturbedMatrix& L) {
    const int n = L.n;
    std::vector<std::vector<int>> cycles;
    std::vector<int> path;
    std::vector<bool> on_path(n, false);
    // simple cycles rooted at their smallest vertex
    std::function<void(int, int)> dfs = [&](int root, int v) {
        for (int w = 0; w < n; ++w) {
            if (w == v || !L.zero_mask(v, w)) continue;
            if (w == root && path.size() >= 2) {
                cycles.push_back(path);
            } else if (w > root && !on_path[w]) {
                path.push_back(w);
                on_path[w] = true;
                dfs(root, w);
                on_path[w] = false;
                path.pop_back();
            }
        }
    };
    for (int root = 0; root < n; ++root) {
        path = {root};
        on_path.assign(n, false);
        on_path[root] = true;
        dfs(root, root);
    }
    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return cycles;
}

namespace {

int svd_rank(const Eigen::MatrixXcd& M, double rank_tol, double* gap) {
    if (M.rows() == 0 || M.cols() == 0) {
        if (gap) *gap = std::numeric_limits<double>::infinity();
        return 0;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    if (smax == 0.0) {
        if (gap) *gap = std::numeric_limits<double>::infinity();
        return 0;
    }
    double thresh = rank_tol * smax;
    int rank = 0;
    double smallest_kept = 0.0, largest_dropped = 0.0;
    for (int i = 0; i < sv.size(); ++i) {
        double s = sv(i);
        if (s > thresh) {
            ++rank;
            smallest_kept = s;
        } else {
            largest_dropped = std::max(largest_dropped, s);
        }
        if (s > thresh / 30.0 && s < thresh * 30.0)
            throw IllConditionedError("svd_rank: singular value clusters at the rank threshold");
    }
    if (gap) {
        if (rank == 0 || largest_dropped == 0.0)
            *gap = std::numeric_limits<double>::infinity();
        else
            *gap = smallest_kept / largest_dropped;
    }
    return rank;
}

} // namespace

CohomologyResult cohomology_dims(const PerturbedComplex& C, double rank_tol) {
    const int n = C.n;
    CohomologyResult res;
    std::vector<int> ranks(n, 0); // ranks[m] = rank d_m for m < n-1
    res.gaps.resize(C.d.size());
    res.min_gap = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < C.d.size(); ++m) {
        ranks[m] = svd_rank(C.d[m], rank_tol, &res.gaps[m]);
        res.min_gap = std::min(res.min_gap, res.gaps[m]);
    }
    res.dims.resize(n);
    int chi = 0;
    for (int m = 0; m < n; ++m) {
        int dim_cm = static_cast<int>(C.grades[m].size());
        int r_m = (m < n - 1) ? ranks[m] : 0;
        int r_prev = (m > 0) ? ranks[m - 1] : 0;
        res.dims[m] = dim_cm - r_m - r_prev;
        chi += (m % 2 == 0 ? 1 : -1) * dim_cm;
    }
    res.euler_characteristic = chi;
    return res;
}

ExactComplex build_complex_exact(int n, const std::vector<std::vector<GaussRat>>& lambda) {
    ExactComplex C;
    C.n = n;
    C.grades = faces(n);
    C.d = build_differential<GaussRat>(
        n, C.grades,
        [&](int i, int j, bool& z) {
            const GaussRat& v = lambda[i][j];
            z = v.is_zero();
            return v;
        },
        nullptr);
    return C;
}

namespace {

int exact_rank(std::vector<GaussRat> M, int rows, int cols) {
    int rank = 0;
    for (int col = 0; col < cols && rank < rows; ++col) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (!M[r * cols + col].is_zero()) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        if (pivot != rank)
            for (int c = 0; c < cols; ++c) std::swap(M[pivot * cols + c], M[rank * cols + c]);
        GaussRat inv = GaussRat{1, 0} / M[rank * cols + col];
        for (int r = rank + 1; r < rows; ++r) {
            if (M[r * cols + col].is_zero()) continue;
            GaussRat f = M[r * cols + col] * inv;
            for (int c = col; c < cols; ++c)
                M[r * cols + c] = M[r * cols + c] - f * M[rank * cols + c];
        }
        ++rank;
    }
    return rank;
}

} // namespace

std::vector<int> cohomology_dims_exact(const ExactComplex& C) {
    const int n = C.n;
    std::vector<int> ranks(n, 0);
    for (std::size_t m = 0; m < C.d.size(); ++m) {
        int rows = static_cast<int>(C.grades[m + 1].size());
        int cols = static_cast<int>(C.grades[m].size());
        ranks[m] = exact_rank(C.d[m], rows, cols);
    }
    std::vector<int> dims(n);
    for (int m = 0; m < n; ++m) {
        int r_m = (m < n - 1) ? ranks[m] : 0;
        int r_prev = (m > 0) ? ranks[m - 1] : 0;
        dims[m] = static_cast<int>(C.grades[m].size()) - r_m - r_prev;
    }
    return dims;
}

DepthFiltration depth_filtration(const std::vector<std::pair<int, int>>& Z, int n) {
    // wheel-free precondition: the Z-digraph must admit a topological order
    {
        std::vector<std::vector<int>> adj(n);
        std::vector<int> indeg(n, 0);
        for (auto [i, j] : Z) {
            if (i < 0 || j < 0 || i >= n || j >= n || i == j)
                throw DomainError("depth_filtration: bad zero pair");
            adj[i].push_back(j);
            ++indeg[j];
        }
        std::vector<int> order;
        std::vector<int> stack;
        for (int v = 0; v < n; ++v)
            if (indeg[v] == 0) stack.push_back(v);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (int w : adj[v])
                if (--indeg[w] == 0) stack.push_back(w);
        }
        if (static_cast<int>(order.size()) != n)
            throw RenumberError("depth_filtration: zero pattern contains a wheel");
    }
    auto graded = faces(n);
    DepthFiltration out;
    out.n = n;
    out.depth.resize(graded.size());
    for (std::size_t m = 0; m < graded.size(); ++m) {
        out.depth[m].resize(graded[m].size());
        for (std::size_t k = 0; k < graded[m].size(); ++k) {
            const auto& F = graded[m][k];
            std::vector<int> block_of(n, -1);
            for (int b = 0; b < static_cast<int>(F.blocks.size()); ++b)
                for (int v : F.blocks[b]) block_of[v] = b;
            int dpt = 0;
            for (auto [i, j] : Z)
                if (block_of[i] < block_of[j]) ++dpt;
            out.depth[m][k] = dpt;
            out.max_depth = std::max(out.max_depth, dpt);
        }
    }
    out.levels.resize(out.max_depth + 1);
    for (int r = 0; r <= out.max_depth; ++r) {
        out.levels[r].resize(graded.size());
        for (std::size_t m = 0; m < graded.size(); ++m)
            for (std::size_t k = 0; k < graded[m].size(); ++k)
                if (out.depth[m][k] >= r) out.levels[r][m].push_back(static_cast<int>(k));
    }
    return out;
}

std::vector<int> subcomplex_cohomology_dims(int n, const std::vector<std::vector<int>>& member) {
    PerturbedMatrix ones = PerturbedMatrix::all_ones(n);
    PerturbedComplex full = build_complex(ones);
    // restrict each differential to member rows/columns
    std::vector<int> ranks(n, 0);
    std::vector<int> sizes(n, 0);
    for (int m = 0; m < n; ++m)
        sizes[m] = m < static_cast<int>(member.size()) ? static_cast<int>(member[m].size()) : 0;
    for (int m = 0; m + 1 < n; ++m) {
        if (sizes[m] == 0 || sizes[m + 1] == 0) {
            ranks[m] = 0;
            continue;
        }
        Eigen::MatrixXcd sub(sizes[m + 1], sizes[m]);
        for (int r = 0; r < sizes[m + 1]; ++r)
            for (int c = 0; c < sizes[m]; ++c) sub(r, c) = full.d[m](member[m + 1][r], member[m][c]);
        ranks[m] = svd_rank(sub, 1e-8, nullptr);
    }
    std::vector<int> dims(n);
    for (int m = 0; m < n; ++m) {
        int r_m = (m < n - 1) ? ranks[m] : 0;
        int r_prev = (m > 0) ? ranks[m - 1] : 0;
        dims[m] = sizes[m] - r_m - r_prev;
    }
    return dims;
}

WheelScanReport cubic_relation_scan(const specfun::ZetaZeroCache& cache, int rho_index,
                                    const std::vector<Complex>& c_samples,
                                    const std::vector<double>& offsets, double zero_tol,
                                    double rank_tol) {
    if (rho_index < 0 || rho_index >= static_cast<int>(cache.ordinates.size()))
        throw ConfigError("cubic_relation_scan: rho_index outside the zero cache");
    const double t_rho = cache.ordinates[rho_index];
    const Complex rho(0.5, t_rho);
    WheelScanReport rep;
    rep.rho_ordinate = t_rho;

    auto scan_point = [&](const std::vector<Complex>& T) {
        PerturbedMatrix L = PerturbedMatrix::from_points(T, specfun::lambda_big, zero_tol);
        WheelScanPoint pt;
        pt.c = T[0];
        pt.wheels = detect_wheels(L);
        CohomologyResult res = cohomology_dims(build_complex(L), rank_tol);
        pt.dims = res.dims;
        pt.min_gap = res.min_gap;
        return pt;
    };

    for (Complex c : c_samples) {
        rep.on_wheel.push_back(scan_point({c, c + rho, c + 1.0}));
        for (double off : offsets) {
            rep.perturbed.push_back(scan_point({c + off, c + rho, c + 1.0}));
        }
    }
    return rep;
}

} // namespace zhall::permutohedron
