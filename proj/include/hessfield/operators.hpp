#pragma once

#include "hessfield/domain.hpp"
#include "hessfield/linalg.hpp"

#include <vector>

namespace hf {

// Finite truncation of an operator field: per-vertex N x N corners of
// infinite matrices extended by zero, with a declared support bound.
struct OperatorField {
    MatrixField field;
    int support = 0; // rows/columns with 0-based index >= support are zero

    void validate() const;
};

// Stored iterates of the stepwise reduction. Index 0 holds the starting
// triple (g = f, u = I); index k holds the state after k annihilation steps.
struct IterationTrace {
    int N = 0;
    int K = 0; // number of stored iterates
    std::vector<MatrixField> g;
    std::vector<MatrixField> u;
    std::vector<MatrixField> h; // h[k] = u[k] g[k] u[k]^*
    std::vector<std::vector<double>> step_perturbation; // per step, per vertex
    std::vector<double> step_budget;                    // eps_min / 2^k
    std::vector<int> bump_used;                         // -1 when no bump was needed
    RMat freeze; // freeze(k, l): deviation of the first k columns of h[l] vs h[k]

    void check_invariants(const ToleranceField& eps) const;
};

struct OperatorReduceResult {
    IterationTrace trace;
    MatrixField v; // final unitary
    MatrixField g; // final perturbed field
    MatrixField h; // v g v*
};

// Krylov orthonormalization u of (xi, x xi, ..., x^{N-1} xi): u* x u is
// Hessenberg with positive subdiagonal and u e1 is a positive multiple of xi.
// Errors when the Krylov family is rank deficient (xi not cyclic).
std::pair<CMat, CMat> cyclic_to_hessenberg(const CMat& x, const CVec& xi);

// K-1 annihilation steps with budget eps/2^(k+1) at step k; when the column
// tail cannot be certified nonzero and off the negative axis over the mesh,
// a bump is placed at a fresh index past the current support, so the
// certificate becomes exact.
OperatorReduceResult operator_reduce(const OperatorField& f, const ToleranceField& eps, int K,
                                     std::uint64_t seed);

// Independent re-scan of the stored iterates: max over k <= l of the
// deviation of the first k-1 columns of h[l] from h[k].
double column_freeze_check(const IterationTrace& trace);

} // namespace hf
