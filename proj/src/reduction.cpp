#include "hessfield/reduction.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace hf {

namespace {

void verify(bool cond, const std::string& what) {
    if (!cond)
        throw Error(ErrorCode::invariant, what);
}

RVec realify(const CVec& b) {
    RVec x(2 * b.size());
    for (int i = 0; i < b.size(); ++i) {
        x(2 * i) = b(i).real();
        x(2 * i + 1) = b(i).imag();
    }
    return x;
}

CVec complexify(const RVec& x) {
    CVec b(x.size() / 2);
    for (int i = 0; i < b.size(); ++i)
        b(i) = cplx(x(2 * i), x(2 * i + 1));
    return b;
}

ToleranceField scaled(const ToleranceField& eps, double factor) {
    ToleranceField out = eps;
    for (auto& v : out.values)
        v *= factor;
    return out;
}

CMat symmetrized(const CMat& m) { return 0.5 * (m + m.adjoint()); }

// Mutable reduction state: h starts as the (symmetrized) input and is driven
// to constrained form; u accumulates the vertexwise conjugations.
struct Core {
    const MatrixField* f = nullptr;
    std::vector<CMat> h;
    std::vector<CMat> u;
    std::vector<AvoidanceCertificate> certs;
};

Core start_core(const MatrixField& f) {
    f.validate();
    require(f.hermitian(1e-10), "input field must be self-adjoint per vertex");
    Core core;
    core.f = &f;
    core.h.reserve(f.values.size());
    for (const auto& m : f.values)
        core.h.push_back(symmetrized(m));
    core.u.assign(f.values.size(), CMat::Identity(f.n, f.n));
    return core;
}

// Writes a trailing-block perturbation of column p (and its adjoint row) and
// annihilates everything below the subdiagonal with a single unitary.
void generic_column(Core& core, int p, const ToleranceField& eps_step, std::uint64_t seed) {
    const Domain& dom = *core.f->domain;
    const int n = core.f->n;
    const int mlen = n - 1 - p;

    VectorField vf;
    vf.domain = &dom;
    vf.m = 2 * mlen;
    vf.values.reserve(core.h.size());
    for (const auto& hv : core.h)
        vf.values.push_back(realify(hv.col(p).segment(p + 1, mlen)));

    auto [vf1, cert1] = avoid_zero(vf, eps_step, seed);
    auto [vf2, cert2] = avoid_ray(vf1, eps_step, seed ^ 0x517cc1b727220a95ull);
    core.certs.push_back(std::move(cert1));
    core.certs.push_back(std::move(cert2));

    for (std::size_t v = 0; v < core.h.size(); ++v) {
        CVec b2 = complexify(vf2.values[v]);
        core.h[v].col(p).segment(p + 1, mlen) = b2;
        core.h[v].row(p).segment(p + 1, mlen) = b2.adjoint();
        auto [hd, r] = householder_annihilate(b2);
        (void)r;
        CMat U = CMat::Identity(n, n);
        U.block(p + 1, p + 1, mlen, mlen) = hd.annihilator;
        core.h[v] = U * core.h[v] * U.adjoint();
        core.u[v] = U * core.u[v];
    }
}

void run_columns(Core& core, const ToleranceField& eps, std::uint64_t seed, int ncols) {
    const int n = core.f->n;
    if (ncols <= 0)
        return;
    ToleranceField eps_step = scaled(eps, 1.0 / (2.0 * n));
    for (int p = 0; p < ncols; ++p)
        generic_column(core, p, eps_step, seed + 2ull * static_cast<std::uint64_t>(p));
}

// Clears h(n-1, n-3) with a framed 2x1 general-position step and a Givens
// rotation on the last two coordinates. Needs n >= 3 and d <= 3.
void givens_step(Core& core, const ToleranceField& eps, std::uint64_t seed) {
    const Domain& dom = *core.f->domain;
    const int n = core.f->n;
    const int p = n - 3;

    VectorField vf;
    vf.domain = &dom;
    vf.m = 4;
    vf.values.reserve(core.h.size());
    for (const auto& hv : core.h)
        vf.values.push_back(realify(hv.col(p).segment(p + 1, 2)));

    auto [vf2, cert] = avoid_zero(vf, eps, seed);
    core.certs.push_back(std::move(cert));

    for (std::size_t v = 0; v < core.h.size(); ++v) {
        CVec b2 = complexify(vf2.values[v]);
        core.h[v].col(p).segment(p + 1, 2) = b2;
        core.h[v].row(p).segment(p + 1, 2) = b2.adjoint();
        CMat u0 = givens_annihilate(b2(0), b2(1));
        CMat U = CMat::Identity(n, n);
        U.block(n - 2, n - 2, 2, 2) = u0;
        core.h[v] = U * core.h[v] * U.adjoint();
        core.u[v] = U * core.u[v];
    }
}

void run_dim3(Core& core, const ToleranceField& eps, std::uint64_t seed) {
    const int n = core.f->n;
    if (n <= 2)
        return;
    ToleranceField half = scaled(eps, 0.5);
    run_columns(core, half, seed, n - 3);
    givens_step(core, half, seed + 101);
}

ReductionResult finalize(Core&& core, const ToleranceField& eps, int k_achieved, int c) {
    const MatrixField& f = *core.f;
    ReductionResult out;
    out.g.domain = out.u.domain = out.h.domain = f.domain;
    out.g.n = out.u.n = out.h.n = f.n;
    out.k_achieved = k_achieved;
    out.c = c;
    out.h.values = std::move(core.h);
    out.u.values = std::move(core.u);
    out.certificates = std::move(core.certs);

    out.g.values.resize(f.values.size());
    for (std::size_t v = 0; v < f.values.size(); ++v) {
        CMat pulled = out.u.values[v].adjoint() * out.h.values[v] * out.u.values[v];
        out.g.values[v] = f.values[v] + symmetrized(pulled - f.values[v]);
        double dev = opnorm(out.g.values[v] - f.values[v]);
        out.perturbation_max = std::max(out.perturbation_max, dev);
        verify(dev < eps.values[v], "perturbation budget exceeded at a vertex");
    }
    out.u_audit = audit_continuity(out.u);
    out.h_audit = audit_continuity(out.h);
    return out;
}

} // namespace

int corner_size(int d) {
    require(d >= 0, "dimension must be nonnegative");
    if (d <= 1)
        return 0;
    if (d <= 3)
        return 2;
    return (d + 1) / 2 + 1;
}

void ReductionResult::check_invariants(const MatrixField& f, const ToleranceField& eps) const {
    for (std::size_t v = 0; v < f.values.size(); ++v) {
        const CMat& uv = u.values[v];
        CMat I = CMat::Identity(f.n, f.n);
        verify(opnorm(uv * uv.adjoint() - I) <= 1e-10, "u not unitary at a vertex");
        CMat dev = g.values[v] - f.values[v];
        verify(opnorm(dev - dev.adjoint()) <= 1e-10, "perturbation not self-adjoint");
        verify(opnorm(dev) < eps.values[v], "perturbation exceeds the tolerance");
        CMat resid = h.values[v] - uv * g.values[v] * uv.adjoint();
        verify(opnorm(resid) <= 1e-10 * (1.0 + opnorm(g.values[v])),
               "h deviates from u g u*");
        verify(classify_H(h.values[v], k_achieved)
                   .member(default_tol_zero(h.values[v]), kDefaultTolPos),
               "h not in constrained form at a vertex");
    }
}

ReductionResult hessenberg_reduce_default(const MatrixField& f, const ToleranceField& eps,
                                          std::uint64_t seed, int k_target) {
    f.validate();
    eps.validate();
    require(eps.domain == f.domain, "tolerance field on a different domain");
    const int n = f.n;
    const int d = f.domain->dim;
    int k = (k_target >= 0) ? k_target : n - (d + 1) / 2 - 1;
    k = std::clamp(k, 0, n);
    const int ncols = std::min(k, n - 1);

    Core core = start_core(f);
    run_columns(core, eps, seed, ncols);
    return finalize(std::move(core), eps, k, n - k);
}

ReductionResult hessenberg_reduce_dim3(const MatrixField& f, const ToleranceField& eps,
                                       std::uint64_t seed) {
    f.validate();
    eps.validate();
    require(eps.domain == f.domain, "tolerance field on a different domain");
    require(f.domain->dim <= 3, "variant requires domain dimension at most 3");
    const int n = f.n;
    Core core = start_core(f);
    run_dim3(core, eps, seed);
    int k = std::max(n - 2, 0);
    return finalize(std::move(core), eps, k, n - k);
}

ReductionResult hessenberg_reduce_dim1(const MatrixField& f, const ToleranceField& eps,
                                       std::uint64_t seed) {
    f.validate();
    eps.validate();
    require(eps.domain == f.domain, "tolerance field on a different domain");
    require(f.domain->dim <= 1, "variant requires domain dimension at most 1");
    const int n = f.n;
    Core core = start_core(f);
    if (n >= 2) {
        ToleranceField half = scaled(eps, 0.5);
        run_dim3(core, half, seed);

        // Last subdiagonal entry: push it off zero, then rotate its phase away.
        const int p = n - 2;
        VectorField vf;
        vf.domain = f.domain;
        vf.m = 2;
        vf.values.reserve(core.h.size());
        for (const auto& hv : core.h)
            vf.values.push_back(realify(hv.col(p).segment(p + 1, 1)));
        auto [vf2, cert] = avoid_zero(vf, half, seed + 211);
        core.certs.push_back(std::move(cert));
        for (std::size_t v = 0; v < core.h.size(); ++v) {
            cplx z = complexify(vf2.values[v])(0);
            core.h[v](n - 1, p) = z;
            core.h[v](p, n - 1) = std::conj(z);
            cplx zeta = std::abs(z) / z;
            CMat D = CMat::Identity(n, n);
            D(n - 1, n - 1) = zeta;
            core.h[v] = D * core.h[v] * D.adjoint();
            core.u[v] = D * core.u[v];
        }
    }
    return finalize(std::move(core), eps, n, 0);
}

ReductionResult hessenberg_summary(const MatrixField& f, const ToleranceField& eps,
                                   std::uint64_t seed) {
    f.validate();
    const int d = f.domain->dim;
    if (d <= 1)
        return hessenberg_reduce_dim1(f, eps, seed);
    if (d <= 3)
        return hessenberg_reduce_dim3(f, eps, seed);
    return hessenberg_reduce_default(f, eps, seed);
}

StrucDecomposition struc_decompose(const MatrixField& f, const ToleranceField& eps,
                                   QMode q_mode, std::uint64_t seed) {
    f.validate();
    const int n = f.n;
    const int d = f.domain->dim;
    const int c = (d + 1) / 2 + 1;
    require(n > c, "matrix size must exceed the corner size");
    const int k = n - c;

    StrucDecomposition out;
    out.base = hessenberg_reduce_default(f, eps, seed, k);
    out.q_mode = q_mode;
    out.k = k;
    out.c = c;

    const std::size_t nv = f.values.size();
    out.mu.resize(nv);
    out.q.resize(nv);
    out.r.resize(nv);
    out.lambda.resize(nv);
    out.p.resize(nv);

    const double sqrt2 = std::sqrt(2.0);
    for (std::size_t v = 0; v < nv; ++v) {
        const CMat& hv = out.base.h.values[v];
        double mu = hv(k, k - 1).real();
        out.mu[v] = mu;

        CMat q = CMat::Zero(n, n);
        switch (q_mode) {
        case QMode::rank2_traceless:
            q(k - 1, k) = mu;
            q(k, k - 1) = mu;
            break;
        case QMode::rank1_positive:
            q(k - 1, k - 1) = mu;
            q(k - 1, k) = mu;
            q(k, k - 1) = mu;
            q(k, k) = mu;
            break;
        case QMode::rank1_negative:
            q(k - 1, k - 1) = -mu;
            q(k - 1, k) = mu;
            q(k, k - 1) = mu;
            q(k, k) = -mu;
            break;
        }
        out.q[v] = q;

        CMat rest = hv - q;
        auto [lam, w] = hermitian_eig(rest.topLeftCorner(k, k));
        out.lambda[v] = lam;
        out.p[v].reserve(k);
        for (int i = 0; i < k; ++i) {
            CMat pi = CMat::Zero(n, n);
            pi.topLeftCorner(k, k) = w.col(i) * w.col(i).adjoint();
            out.p[v].push_back(std::move(pi));
        }

        CMat rv = CMat::Zero(n, n);
        rv.bottomRightCorner(c, c) = rest.bottomRightCorner(c, c);
        out.r[v] = rv;

        double bound = (q_mode == QMode::rank2_traceless ? 1.0 : sqrt2) *
                       (opnorm(f.values[v]) + eps.values[v]);
        if (opnorm(q) > bound + 1e-12)
            out.norm_bound_ok = false;
    }
    return out;
}

void StrucDecomposition::check_invariants() const {
    const int n = base.h.n;
    for (std::size_t v = 0; v < base.h.values.size(); ++v) {
        CMat sum = q[v] + r[v];
        for (int i = 0; i < k; ++i)
            sum += lambda[v](i) * p[v][i];
        verify(opnorm(sum - base.h.values[v]) <= 1e-9,
               "decomposition does not reassemble the reduced field");
        CMat psum = CMat::Zero(n, n);
        for (int i = 0; i < k; ++i) {
            psum += p[v][i];
            for (int j = 0; j < k; ++j) {
                CMat prod = p[v][i] * p[v][j];
                CMat want = (i == j) ? p[v][i] : CMat::Zero(n, n);
                verify(opnorm(prod - want) <= 1e-9, "projections not orthogonal");
            }
            verify(opnorm(p[v][i] * r[v]) <= 1e-9, "projection overlaps the corner block");
        }
        CMat ik = CMat::Zero(n, n);
        ik.topLeftCorner(k, k).setIdentity();
        verify(opnorm(psum - ik) <= 1e-9, "projections do not sum to the leading identity");
        for (int i = 0; i + 1 < k; ++i)
            verify(lambda[v](i) > lambda[v](i + 1), "weights not strictly decreasing");
    }
}

StrucLabels strucdim3_classify(const ReductionResult& result, double tol_pos) {
    const int n = result.h.n;
    require(n >= 2, "classification needs matrices of size at least 2");
    StrucLabels out;
    const std::size_t nv = result.h.values.size();
    out.unsplit.resize(nv);
    out.min_gap.resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        const CMat& hv = result.h.values[v];
        bool unsplit = std::abs(hv(n - 1, n - 2)) > tol_pos;
        out.unsplit[v] = unsplit ? 1 : 0;
        if (unsplit)
            ++out.unsplit_count;
        RVec lam = unsplit ? hermitian_eig(hv).first
                           : hermitian_eig(hv.topLeftCorner(n - 1, n - 1)).first;
        double gap = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 < lam.size(); ++i)
            gap = std::min(gap, lam(i) - lam(i + 1));
        out.min_gap[v] = gap;
        if (!(gap > 0.0))
            out.pass = false;
    }
    return out;
}

} // namespace hf
