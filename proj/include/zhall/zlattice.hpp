#ifndef ZHALL_ZLATTICE_HPP
#define ZHALL_ZLATTICE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "zhall/errors.hpp"

// Exact integer lattice plumbing: Smith normal form over Z, primitivity
// tests, completion of a primitive sublattice basis to GL_n(Z), and
// Fincke-Pohst enumeration of short vectors under a Cholesky factor.

namespace zhall::zlattice {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct SmithResult {
    IntMatrix U;            // left transform, unimodular
    IntMatrix V;            // right transform, unimodular
    IntMatrix D;            // U * A * V = D, diagonal invariant factors
    std::vector<std::int64_t> invariant_factors;
};

SmithResult smith_normal_form(const IntMatrix& A);

// Columns span a primitive sublattice iff every invariant factor is 1.
bool is_primitive_sublattice(const IntMatrix& basis);

// Surjective as a map Z^n -> Z^m (rows m <= cols n, invariant factors 1).
bool is_surjective_over_z(const IntMatrix& J);

// gcd of entries is 1 (rank-1 primitivity).
bool is_primitive_vector(const IntVector& v);

// Unimodular U whose first k columns span the same sublattice as `basis`
// (n x k, primitive). Throws NonPrimitiveError otherwise.
IntMatrix complete_to_unimodular(const IntMatrix& basis);

// Integer inverse of a unimodular matrix.
IntMatrix unimodular_inverse(const IntMatrix& U);

// Primitive vector normal form: first nonzero coordinate positive.
IntVector canonical_sign(IntVector v);

// LLL reduction of a positive definite Gram matrix: returns the reduced
// Gram T^T G T together with the unimodular change of basis T.
struct ReducedGram {
    Eigen::MatrixXd G;
    IntMatrix T;
};
ReducedGram lll_reduce(const Eigen::MatrixXd& G, double delta = 0.99);

struct EnumOptions {
    std::size_t budget = 1'000'000; // candidate cap, BudgetError beyond
    bool primitive_only = true;     // keep gcd-1 vectors only
};

// All nonzero integer vectors v, up to sign, with v^T G v <= bound, via
// Fincke-Pohst under the Cholesky factor of the positive definite G.
// Results sorted by (norm, lexicographic coordinates).
std::vector<IntVector> short_vectors(const Eigen::MatrixXd& G, double bound,
                                     const EnumOptions& opts = {});

// Streaming variant: visit(v, q) is called in a fixed deterministic order
// (not norm-sorted); used where the candidate set is too large to store.
void short_vectors_stream(const Eigen::MatrixXd& G, double bound, const EnumOptions& opts,
                          const std::function<void(const IntVector&, double)>& visit);

} // namespace zhall::zlattice

#endif
