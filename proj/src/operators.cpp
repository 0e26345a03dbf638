#include "hessfield/operators.hpp"

#include "hessfield/avoidance.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hf {

namespace {

void verify(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::invariant, what);
}

RVec realify(const CVec& b) {
    RVec out(2 * b.size());
    for (int i = 0; i < b.size(); ++i) {
        out[2 * i] = b[i].real();
        out[2 * i + 1] = b[i].imag();
    }
    return out;
}

} // namespace

void OperatorField::validate() const {
    field.validate();
    require(support >= 0 && support <= field.n, "operator field: support bound out of range");
    for (std::size_t v = 0; v < field.values.size(); ++v) {
        const CMat& m = field.values[v];
        for (int i = 0; i < field.n; ++i)
            for (int j = 0; j < field.n; ++j)
                if (i >= support || j >= support)
                    require(std::abs(m(i, j)) <= 1e-14,
                            "operator field: entry beyond the support bound at vertex " +
                                std::to_string(v));
    }
}

std::pair<CMat, CMat> cyclic_to_hessenberg(const CMat& x, const CVec& xi) {
    const int n = static_cast<int>(x.rows());
    require(x.cols() == n && xi.size() == n, "cyclic_to_hessenberg: shape mismatch");
    require(xi.norm() > 0.0, "cyclic_to_hessenberg: zero vector");

    CMat krylov(n, n);
    CVec w = xi;
    for (int j = 0; j < n; ++j) {
        krylov.col(j) = w;
        w = x * w;
    }
    Eigen::JacobiSVD<CMat> svd(krylov);
    double floor = 1e-8 * xi.norm() * std::pow(std::max(1.0, opnorm(x)), n - 1);
    require(svd.singularValues().minCoeff() > floor,
            "cyclic_to_hessenberg: Krylov family is rank deficient (vector not cyclic)");

    Eigen::HouseholderQR<CMat> qr(krylov);
    CMat u = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    // normalize so the R diagonal is positive; then the subdiagonal of u*xu is
    // the positive ratio of consecutive leading coefficients
    for (int j = 0; j < n; ++j) {
        cplx d = r(j, j);
        cplx phase = d / std::abs(d);
        u.col(j) *= phase;
    }
    CMat h = u.adjoint() * x * u;
    for (int j = 0; j + 1 < n; ++j)
        verify(h(j + 1, j).real() > 0.0 && std::abs(h(j + 1, j).imag()) <= 1e-10,
               "cyclic_to_hessenberg: subdiagonal not positive");
    return {u, h};
}

void IterationTrace::check_invariants(const ToleranceField& eps) const {
    for (int k = 1; k < K; ++k) {
        for (std::size_t v = 0; v < g[k].values.size(); ++v) {
            CMat diff = g[k].values[v] - g[k - 1].values[v];
            double norm = opnorm(diff);
            double budget = eps.values[v] / std::pow(2.0, k);
            verify(norm < budget, "iteration trace: step " + std::to_string(k) +
                                      " perturbation beyond its budget at vertex " +
                                      std::to_string(v));
            verify(opnorm(diff - diff.adjoint()) <= 1e-12,
                   "iteration trace: perturbation not Hermitian");
            Eigen::JacobiSVD<CMat> svd(diff);
            int rank = 0;
            for (int i = 0; i < svd.singularValues().size(); ++i)
                if (svd.singularValues()[i] > 1e-12 * std::max(1.0, norm)) ++rank;
            verify(rank <= 2, "iteration trace: perturbation rank exceeds 2");
        }
        for (std::size_t v = 0; v < u[k].values.size(); ++v)
            verify(opnorm(u[k].values[v] * u[k].values[v].adjoint() -
                          CMat::Identity(N, N)) <= 1e-10,
                   "iteration trace: unitary drift at step " + std::to_string(k));
        for (std::size_t v = 0; v < h[k].values.size(); ++v)
            verify(opnorm(h[k].values[v] - u[k].values[v] * g[k].values[v] *
                                               u[k].values[v].adjoint()) <= 1e-10,
                   "iteration trace: h is not the conjugated field at step " +
                       std::to_string(k));
    }
}

OperatorReduceResult operator_reduce(const OperatorField& f, const ToleranceField& eps, int K,
                                     std::uint64_t seed) {
    (void)seed; // deterministic: bump placement needs no randomness
    f.validate();
    eps.validate();
    const int n = f.field.n;
    const std::size_t nv = f.field.values.size();
    require(K >= 1 && K <= n - 2 - f.support,
            "operator_reduce: iteration count exceeds the free-index headroom");

    IterationTrace tr;
    tr.N = n;
    tr.K = K;
    tr.freeze = RMat::Zero(K, K);
    auto push = [&](const std::vector<CMat>& gv, const std::vector<CMat>& uv,
                    const std::vector<CMat>& hv) {
        MatrixField mg{f.field.domain, n, gv}, mu{f.field.domain, n, uv},
            mh{f.field.domain, n, hv};
        tr.g.push_back(mg);
        tr.u.push_back(mu);
        tr.h.push_back(mh);
    };

    std::vector<CMat> g = f.field.values;
    std::vector<CMat> u(nv, CMat::Identity(n, n));
    std::vector<CMat> h = g;
    push(g, u, h);

    int support = f.support;
    for (int k = 1; k < K; ++k) {
        int p = k - 1; // 0-based column being annihilated
        double budget = eps.min_value() / std::pow(2.0, k);
        tr.step_budget.push_back(budget);

        auto tails = [&]() {
            std::vector<CVec> out(nv);
            for (std::size_t v = 0; v < nv; ++v)
                out[v] = h[v].col(p).segment(k, n - k);
            return out;
        };
        auto certified = [&](const std::vector<CVec>& b) {
            VectorField vf;
            vf.domain = f.field.domain;
            vf.m = 2 * (n - k);
            for (const CVec& c : b) vf.values.push_back(realify(c));
            auto nz = certify_nonzero(vf);
            auto ray = certify_off_ray(vf);
            double m1 = nz.empty() ? std::numeric_limits<double>::infinity()
                                   : *std::min_element(nz.begin(), nz.end());
            double m2 = ray.empty() ? std::numeric_limits<double>::infinity()
                                    : *std::min_element(ray.begin(), ray.end());
            return std::min(m1, m2);
        };

        std::vector<CVec> b = tails();
        std::vector<double> pert(nv, 0.0);
        int bump_row = -1;
        if (!(certified(b) > 0.0)) {
            // fresh row past both the support and the subdiagonal, so the
            // interpolated tail carries a constant positive coordinate
            bump_row = std::max(support, k + 1);
            verify(bump_row < n, "operator_reduce: no free index left for the bump");
            for (std::size_t v = 0; v < nv; ++v) {
                double delta = 0.5 * eps.values[v] / std::pow(2.0, k);
                CMat bump = CMat::Zero(n, n);
                bump(bump_row, p) = delta;
                bump(p, bump_row) = delta;
                g[v] += u[v].adjoint() * bump * u[v];
                h[v] += bump;
                pert[v] = delta;
            }
            support = std::max(support, bump_row + 1);
            b = tails();
            verify(certified(b) > 0.0,
                   "operator_reduce: tail still uncertified after the bump");
        }
        tr.bump_used.push_back(bump_row);
        tr.step_perturbation.push_back(pert);

        for (std::size_t v = 0; v < nv; ++v) {
            auto [hd, r] = householder_annihilate(b[v]);
            CMat vstep = CMat::Identity(n, n);
            vstep.bottomRightCorner(n - k, n - k) = hd.annihilator;
            u[v] = vstep * u[v];
            h[v] = vstep * h[v] * vstep.adjoint();
        }
        push(g, u, h);
    }

    for (int k = 0; k < K; ++k)
        for (int l = k; l < K; ++l) {
            double dev = 0.0;
            for (std::size_t v = 0; v < nv; ++v)
                for (int j = 0; j < k; ++j)
                    dev = std::max(dev,
                                   (tr.h[l].values[v].col(j) - tr.h[k].values[v].col(j))
                                       .cwiseAbs()
                                       .maxCoeff());
            tr.freeze(k, l) = dev;
        }

    OperatorReduceResult res;
    res.trace = tr;
    res.v = tr.u.back();
    res.g = tr.g.back();
    res.h = tr.h.back();

    for (std::size_t v = 0; v < nv; ++v) {
        CMat diff = res.g.values[v] - f.field.values[v];
        verify(opnorm(diff) < eps.values[v], "operator_reduce: total perturbation too large");
        verify(opnorm(diff - diff.adjoint()) <= 1e-12,
               "operator_reduce: total perturbation not Hermitian");
        const CMat& hv = res.h.values[v];
        for (int j = 0; j < K - 1; ++j) {
            verify(hv(j + 1, j).real() > 0.0 && std::abs(hv(j + 1, j).imag()) <= 1e-10,
                   "operator_reduce: subdiagonal not positive in column " + std::to_string(j));
            for (int i = j + 2; i < n; ++i)
                verify(std::abs(hv(i, j)) <= 1e-10,
                       "operator_reduce: column " + std::to_string(j) + " not annihilated");
        }
    }
    verify(column_freeze_check(tr) <= 1e-10, "operator_reduce: column freeze violated");
    return res;
}

double column_freeze_check(const IterationTrace& trace) {
    double dev = 0.0;
    for (int k = 0; k < trace.K; ++k)
        for (int l = k; l < trace.K; ++l)
            for (std::size_t v = 0; v < trace.h[k].values.size(); ++v)
                for (int j = 0; j < k; ++j)
                    dev = std::max(dev, (trace.h[l].values[v].col(j) -
                                         trace.h[k].values[v].col(j))
                                            .cwiseAbs()
                                            .maxCoeff());
    return dev;
}

} // namespace hf
