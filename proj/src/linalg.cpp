#include "hessfield/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace hf {

double default_tol_zero(const CMat& m) { return 1e-9 * (1.0 + opnorm(m)); }

std::pair<HouseholderData, double> householder_annihilate(const CVec& b) {
    const int m = static_cast<int>(b.size());
    require(m >= 1, "householder needs a nonempty vector");
    const double r = b.norm();
    require(r > 0.0, "householder input on the forbidden ray (zero vector)");
    CVec beta = b / r;
    CVec e1 = CVec::Zero(m);
    e1[0] = 1.0;
    CVec h = beta + e1;
    require(h.norm() >= 1e-10, "householder input too close to the forbidden ray");

    HouseholderData data;
    data.householder = h;
    const double hh = h.squaredNorm();
    data.reflection = (2.0 / hh) * (h * h.adjoint()) - CMat::Identity(m, m);

    // Phase-corrected annihilator. The pure reflection maps beta to e1 only
    // when Im beta_1 = 0; compose with a continuous rotation in the
    // {e1, f2} plane otherwise.
    const cplx b1 = beta[0];
    const double s2 = std::max(0.0, 1.0 - std::norm(b1));
    const double s = std::sqrt(s2);
    if (s < 1e-14 || m == 1) {
        CMat u = CMat::Identity(m, m);
        u(0, 0) = std::conj(b1);
        data.annihilator = u;
    } else {
        CVec f2 = (beta - b1 * e1) / s;
        cplx one_plus = 1.0 + b1;
        cplx mu = (one_plus * one_plus) / std::norm(one_plus);
        CMat u = CMat::Identity(m, m);
        u += (std::conj(b1) - 1.0) * (e1 * e1.adjoint());
        u += s * (e1 * f2.adjoint());
        u -= std::conj(mu) * s * (f2 * e1.adjoint());
        u += (std::conj(mu) * b1 - 1.0) * (f2 * f2.adjoint());
        data.annihilator = u;
    }
    return {data, r};
}

CMat givens_annihilate(cplx a, cplx b) {
    const double r = std::sqrt(std::norm(a) + std::norm(b));
    require(r > 0.0, "givens input must be nonzero");
    CMat u(2, 2);
    u(0, 0) = std::conj(a) / r;
    u(0, 1) = std::conj(b) / r;
    u(1, 0) = -b / r;
    u(1, 1) = a / r;
    return u;
}

std::pair<RVec, CMat> hermitian_eig(const CMat& m) {
    require(opnorm(m - m.adjoint()) <= 1e-10 * std::max(1.0, opnorm(m)),
            "hermitian_eig requires a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<CMat> solver(0.5 * (m + m.adjoint()));
    require(solver.info() == Eigen::Success, "eigendecomposition failed");
    const int n = static_cast<int>(m.rows());
    RVec vals(n);
    CMat vecs(n, n);
    for (int i = 0; i < n; ++i) { // ascending -> descending
        vals[i] = solver.eigenvalues()[n - 1 - i];
        vecs.col(i) = solver.eigenvectors().col(n - 1 - i);
    }
    return {vals, vecs};
}

CMat polar_unitary(const CMat& z) {
    Eigen::JacobiSVD<CMat> svd(z, Eigen::ComputeFullU | Eigen::ComputeFullV);
    require(svd.singularValues().minCoeff() >= 1e-8, "polar_unitary: near-singular input");
    return svd.matrixU() * svd.matrixV().adjoint();
}

HFormDescriptor classify_H(const CMat& m, int k) {
    const int n = static_cast<int>(m.rows());
    require(k >= 0 && k <= n, "classify_H: k out of range");
    HFormDescriptor d;
    d.n = n;
    d.k = k;
    const int kc = std::min(k, n - 1); // H_n^n == H_n^{n-1}
    for (int j = 0; j < kc; ++j) {
        d.subdiag_min = std::min(d.subdiag_min, m(j + 1, j).real());
        d.zero_max = std::max(d.zero_max, std::abs(m(j + 1, j).imag()));
        for (int i = j + 2; i < n; ++i) d.zero_max = std::max(d.zero_max, std::abs(m(i, j)));
    }
    if (kc == 0) d.subdiag_min = std::numeric_limits<double>::infinity();
    return d;
}

BHFormDescriptor classify_BH(const CMat& p, int k, double tol_zero) {
    const int n = static_cast<int>(p.rows());
    require(k >= 0 && k <= n, "classify_BH: k out of range");
    BHFormDescriptor d;
    d.n = n;
    d.k = k;

    // Greedy block partition from the left: a size-2 block starts at j when
    // the subdiagonal coupling there is above tol_zero.
    int pos = 0;
    while (pos < k) {
        if (pos + 1 < n && std::abs(p(pos + 1, pos)) > tol_zero) {
            d.block_sizes.push_back(2);
            pos += 2;
        } else {
            d.block_sizes.push_back(1);
            pos += 1;
        }
    }
    const int beta = n - pos;
    d.block_sizes.push_back(beta);
    d.structure_ok = (pos == k) || (pos == k + 1 && !d.block_sizes.empty() &&
                                    d.block_sizes[d.block_sizes.size() - 2] == 2);

    // Block membership map over the alpha region.
    std::vector<int> block_of(pos, -1);
    {
        int at = 0;
        for (size_t bi = 0; bi + 1 < d.block_sizes.size(); ++bi) {
            for (int t = 0; t < d.block_sizes[bi]; ++t) block_of[at + t] = static_cast<int>(bi);
            at += d.block_sizes[bi];
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const bool i_alpha = i < pos, j_alpha = j < pos;
            if (!i_alpha && !j_alpha) continue; // beta corner, unconstrained
            if (i_alpha && j_alpha && block_of[i] == block_of[j]) {
                // in-block: required real nonnegative
                d.nonneg_min = std::min(d.nonneg_min, p(i, j).real());
                d.offblock_max = std::max(d.offblock_max, std::abs(p(i, j).imag()));
            } else {
                d.offblock_max = std::max(d.offblock_max, std::abs(p(i, j)));
            }
        }
    }
    if (pos == 0) d.nonneg_min = std::numeric_limits<double>::infinity();
    return d;
}

} // namespace hf
