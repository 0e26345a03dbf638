#pragma once

#include "hessfield/domain.hpp"
#include "hessfield/linalg.hpp"
#include "hessfield/reduction.hpp"

#include <vector>

namespace hf {

// Characteristic polynomials of the trailing corners of a Jacobi matrix,
// p_i(lambda) = det(c_i - lambda I), built by the three-term recurrence.
// Index i runs 1..n+1 with p_{n+1} = 1.
struct SturmSequence {
    int n = 0;
    std::vector<RVec> coeffs; // coeffs[i-1] = p_i, ascending powers

    double evaluate(int i, double lambda) const;
};

SturmSequence sturm_sequence(const CMat& x);

struct SturmCheck {
    double max_residual = 0.0;
    std::vector<double> residuals; // per sample point, max over valid i
    bool pass = false;
};

// Verifies the corrected three-term recurrence against direct determinant
// evaluation of the trailing corners at 20 sample points.
SturmCheck sturm_recurrence_check(const CMat& x, int k);

struct MultiplicityReport {
    int max_mult = 0;
    int count_mult_gt1 = 0;
    bool hermitian = false;
    bool pass_max = false;
    bool pass_count = true; // only meaningful for Hermitian inputs
    std::vector<int> profile; // cluster sizes
};

MultiplicityReport multiplicity_bounds_check(const CMat& x, int k, double tol_scale = 1.0);

// Largest violation of the eigenvalue interlacing between x and its trailing
// (n-1)-corner; 0 for a clean pass.
double interlacing_check(const CMat& x);

struct SeparationReport {
    std::vector<RVec> eigenvalues;           // per vertex, descending
    std::vector<std::vector<int>> profile;   // per vertex cluster sizes
    int distinct_count_min = 0;
    int max_multiplicity = 0;
    double min_gap = 0.0; // min over vertices of the smallest adjacent gap
};

SeparationReport make_separation_report(const std::vector<CMat>& values, double tol_scale = 1.0);

std::pair<MatrixField, SeparationReport>
separate_default(const MatrixField& f, const ToleranceField& eps, std::uint64_t seed);

// d <= 2: full separation, n distinct eigenvalues at every vertex.
std::pair<MatrixField, SeparationReport>
separate_dim2(const MatrixField& f, const ToleranceField& eps, std::uint64_t seed);

// d <= 4: at least n-1 distinct eigenvalues at every vertex.
std::pair<MatrixField, SeparationReport>
separate_dim4(const MatrixField& f, const ToleranceField& eps, std::uint64_t seed);

// The canonical rank-one projection field on the unit sphere in R^3.
MatrixField bott_field(const Domain& dom);

} // namespace hf
