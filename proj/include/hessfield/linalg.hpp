#pragma once

#include "hessfield/types.hpp"

#include <vector>

namespace hf {

// Margins for membership in H_n^k (unreduced Hessenberg in the first k columns
// with positive subdiagonal entries there).
struct HFormDescriptor {
    int n = 0;
    int k = 0;
    double subdiag_min = std::numeric_limits<double>::infinity();
    double zero_max = 0.0;

    bool member(double tol_zero, double tol_pos) const {
        return zero_max <= tol_zero && subdiag_min >= tol_pos;
    }
};

// Margins for membership in BH_n^k: a projection, block diagonal with leading
// blocks of size 1 or 2 (real nonnegative entries) and a trailing corner block.
struct BHFormDescriptor {
    int n = 0;
    int k = 0;
    std::vector<int> block_sizes; // alpha_1..alpha_r then beta
    double nonneg_min = std::numeric_limits<double>::infinity(); // min real part of required-nonneg entries
    double offblock_max = 0.0; // largest magnitude outside declared blocks (incl. imag parts in blocks)

    bool member(double tol_zero) const {
        return offblock_max <= tol_zero && nonneg_min >= -tol_zero && structure_ok;
    }
    bool structure_ok = false; // block sizes satisfy the alpha/beta constraint
};

struct HouseholderData {
    CVec householder;  // h = b/||b|| + e1
    CMat reflection;   // 2 h h* / <h,h> - I (Hermitian involution)
    CMat annihilator;  // unitary with annihilator * b = (||b||, 0, ...)^T
};

double default_tol_zero(const CMat& m);
constexpr double kDefaultTolPos = 1e-9;

// Householder step: unitary mapping b to (||b||, 0, ..., 0)^T. Errors when b
// lies on (or within 1e-10 of) the closed ray spanned by (-1, 0, ..., 0).
// The pure reflection around h annihilates only when Im b_1 = 0; the returned
// annihilator composes it with a phase correction that stays continuous away
// from the forbidden ray.
std::pair<HouseholderData, double> householder_annihilate(const CVec& b);

// 2x2 unitary with u0 * (a, b)^T = (r, 0)^T, r = sqrt(|a|^2+|b|^2).
CMat givens_annihilate(cplx a, cplx b);

// Hermitian eigendecomposition, eigenvalues sorted descending.
std::pair<RVec, CMat> hermitian_eig(const CMat& m);

// Unitary polar factor v = z (z* z)^{-1/2}. Errors when the smallest singular
// value of z is below 1e-8.
CMat polar_unitary(const CMat& z);

HFormDescriptor classify_H(const CMat& m, int k);
BHFormDescriptor classify_BH(const CMat& p, int k, double tol_zero);

} // namespace hf
