#pragma once

#include "hessfield/avoidance.hpp"
#include "hessfield/domain.hpp"
#include "hessfield/linalg.hpp"

#include <string>
#include <vector>

namespace hf {

// Outcome of a vertexwise unitary reduction: h = u g u* with g close to the
// input and h column-constrained at every vertex.
struct ReductionResult {
    MatrixField g; // perturbed field, self-adjoint deviation from the input
    MatrixField u; // unitary field
    MatrixField h; // u g u*, in constrained form
    int k_achieved = 0;
    int c = 0;
    double perturbation_max = 0.0;
    ContinuityAudit u_audit;
    ContinuityAudit h_audit;
    std::vector<AvoidanceCertificate> certificates;

    void check_invariants(const MatrixField& f, const ToleranceField& eps) const;
};

int corner_size(int d);

// Householder column loop. k_target < 0 picks the dimension-based default
// n - ceil(d/2) - 1. Valid whenever each column leaves enough trailing room
// for the general-position steps (always true for the default target).
ReductionResult hessenberg_reduce_default(const MatrixField& f, const ToleranceField& eps,
                                          std::uint64_t seed, int k_target = -1);

// d <= 3: one extra framed 2x1 block cleared by a Givens rotation.
ReductionResult hessenberg_reduce_dim3(const MatrixField& f, const ToleranceField& eps,
                                       std::uint64_t seed);

// d <= 1: additionally makes the last subdiagonal entry positive via a
// diagonal phase, reaching the fully unreduced form.
ReductionResult hessenberg_reduce_dim1(const MatrixField& f, const ToleranceField& eps,
                                       std::uint64_t seed);

// Dispatch on the domain dimension; k_achieved = n - corner_size(d), clamped.
ReductionResult hessenberg_summary(const MatrixField& f, const ToleranceField& eps,
                                   std::uint64_t seed);

enum class QMode { rank1_positive, rank1_negative, rank2_traceless };

// Splitting h = sum_i lambda_i p_i + r + q in the reduced frame: k rank-one
// spectral projections with distinct weights, a corner block r, and a small
// coupling term q supported on one 2x2 block.
struct StrucDecomposition {
    ReductionResult base;
    QMode q_mode = QMode::rank2_traceless;
    int k = 0;
    int c = 0;
    std::vector<double> mu;             // per vertex, coupling magnitude
    std::vector<CMat> q;                // per vertex, n x n
    std::vector<CMat> r;                // per vertex, n x n
    std::vector<RVec> lambda;           // per vertex, k values descending
    std::vector<std::vector<CMat>> p;   // per vertex, k rank-one projections
    bool norm_bound_ok = true;          // reported, not asserted

    void check_invariants() const;
};

StrucDecomposition struc_decompose(const MatrixField& f, const ToleranceField& eps,
                                   QMode q_mode, std::uint64_t seed);

// Vertex labels from the d <= 3 reduction: "unsplit" where the last
// subdiagonal entry is away from zero (then all n eigenvalues are simple),
// "split" otherwise (the leading (n-1)-block has simple spectrum).
struct StrucLabels {
    std::vector<int> unsplit;        // 1 = unsplit, 0 = split, per vertex
    std::vector<double> min_gap;     // gap of the spectrum that must be simple
    int unsplit_count = 0;
    bool pass = true;
};

StrucLabels strucdim3_classify(const ReductionResult& result, double tol_pos = kDefaultTolPos);

} // namespace hf
