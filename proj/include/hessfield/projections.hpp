#pragma once

#include "hessfield/domain.hpp"
#include "hessfield/linalg.hpp"
#include "hessfield/reduction.hpp"

#include <vector>

namespace hf {

// Matrix field whose values are Hermitian idempotents.
struct ProjectionField {
    MatrixField field;
    std::vector<int> ranks; // per vertex, rounded trace
    int min_rank = 0;

    void validate() const; // also fills ranks / min_rank
};

struct ProjectionReduceResult {
    ProjectionField q;
    MatrixField u; // q = u p u* per vertex
    std::vector<BHFormDescriptor> descriptors;
    int k = 0; // target column count n - c
    double eps_used = 0.0;
    double min_spectral_gap = 0.0; // min over vertices of min |eig - 1/2| before rounding
    double max_conj_error = 0.0;   // max over vertices of ||u p u* - q||
    double classify_tol = 0.0;
};

// Block-diagonalization pipeline: Hessenberg reduction at a projection-scale
// epsilon, tridiagonal truncation, small-entry shrinkage, and a spectral
// rounding whose polar unitary conjugates p exactly onto the rounded q.
// eps < 0 picks the default 0.9/(24^2 n^3).
ProjectionReduceResult projection_reduce(const ProjectionField& p, std::uint64_t seed,
                                         double eps = -1.0);

int gamma_of_dim(int d);

struct Section {
    std::vector<CVec> values; // per vertex, a column of the projection
    std::vector<int> column;  // per vertex, which column was taken
    ContinuityAudit audit;
    bool continuity_warning = false;
};

// Per vertex, the first column of p whose norm reaches 1/sqrt(2).
// p must be in block-diagonal (BH) form; c is the corner size.
Section extract_section(const ProjectionField& p, int c);

struct SectionBundle {
    std::vector<std::vector<CVec>> sections; // sections[i][vertex]
    double independence_margin = 0.0;        // min singular value of the section matrix
    int gamma = 0;
    int b = 0;

    void check_invariants(const ProjectionField& p) const;
};

// Extracts b - gamma pointwise linearly independent sections of the column
// space by repeated reduce / extract / deflate.
SectionBundle trivial_summand(const ProjectionField& p, std::uint64_t seed);

} // namespace hf
