#include "hessfield/spectra.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace hf {

namespace {

void verify(bool cond, const std::string& what) {
    if (!cond)
        throw Error(ErrorCode::invariant, what);
}

double horner(const RVec& coeffs, double lambda) {
    double acc = 0.0;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
        acc = acc * lambda + coeffs(i);
    return acc;
}

// union-find clustering of eigenvalues within a gap tolerance
std::vector<int> cluster_sizes(const std::vector<cplx>& eigs, double tol) {
    const int n = static_cast<int>(eigs.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(eigs[i] - eigs[j]) <= tol)
                parent[find(i)] = find(j);
    std::vector<int> count(n, 0);
    for (int i = 0; i < n; ++i)
        ++count[find(i)];
    std::vector<int> sizes;
    for (int i = 0; i < n; ++i)
        if (count[i] > 0)
            sizes.push_back(count[i]);
    return sizes;
}

std::vector<cplx> all_eigenvalues(const CMat& x, bool hermitian) {
    if (hermitian) {
        RVec lam = hermitian_eig(x).first;
        std::vector<cplx> out(lam.begin(), lam.end());
        return out;
    }
    Eigen::ComplexEigenSolver<CMat> solver(x);
    require(solver.info() == Eigen::Success, "eigenvalue iteration failed");
    CVec lam = solver.eigenvalues();
    return std::vector<cplx>(lam.begin(), lam.end());
}

CMat symmetrized(const CMat& m) { return 0.5 * (m + m.adjoint()); }

RVec realify(const CVec& b) {
    RVec x(2 * b.size());
    for (int i = 0; i < b.size(); ++i) {
        x(2 * i) = b(i).real();
        x(2 * i + 1) = b(i).imag();
    }
    return x;
}

// Rebuilds g from the modified reduced frame and re-checks the budget.
std::pair<MatrixField, SeparationReport>
finish_separation(const MatrixField& f, const ToleranceField& eps, const ReductionResult& res,
                  const std::vector<CMat>& h_final) {
    MatrixField g;
    g.domain = f.domain;
    g.n = f.n;
    g.values.resize(f.values.size());
    for (std::size_t v = 0; v < f.values.size(); ++v) {
        CMat pulled = res.u.values[v].adjoint() * h_final[v] * res.u.values[v];
        g.values[v] = f.values[v] + symmetrized(pulled - f.values[v]);
        verify(opnorm(g.values[v] - f.values[v]) < eps.values[v],
               "separation perturbation exceeds the tolerance");
    }
    return {std::move(g), make_separation_report(h_final)};
}

} // namespace

double SturmSequence::evaluate(int i, double lambda) const {
    require(i >= 1 && i <= n + 1, "sturm index out of range");
    return horner(coeffs[i - 1], lambda);
}

SturmSequence sturm_sequence(const CMat& x) {
    const int n = static_cast<int>(x.rows());
    require(n >= 1, "empty matrix");
    require(opnorm(x - x.adjoint()) <= 1e-10 * (1.0 + opnorm(x)), "matrix must be Hermitian");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            require(std::abs(i - j) <= 1 || std::abs(x(i, j)) <= 1e-12,
                    "matrix must be tridiagonal");

    SturmSequence seq;
    seq.n = n;
    seq.coeffs.assign(n + 1, RVec());
    seq.coeffs[n] = RVec::Ones(1); // p_{n+1} = 1
    for (int i = n; i >= 1; --i) {
        // p_i(l) = (x_ii - l) p_{i+1}(l) - |x_{i+1,i}|^2 p_{i+2}(l)
        double diag = x(i - 1, i - 1).real();
        const RVec& prev = seq.coeffs[i];
        RVec cur = RVec::Zero(n - i + 2);
        for (int t = 0; t < prev.size(); ++t) {
            cur(t) += diag * prev(t);
            cur(t + 1) -= prev(t);
        }
        if (i <= n - 1) {
            double off = std::norm(x(i, i - 1));
            const RVec& prev2 = seq.coeffs[i + 1];
            for (int t = 0; t < prev2.size(); ++t)
                cur(t) -= off * prev2(t);
        }
        seq.coeffs[i - 1] = cur;
    }
    return seq;
}

SturmCheck sturm_recurrence_check(const CMat& x, int k) {
    const int n = static_cast<int>(x.rows());
    require(n >= 1, "empty matrix");
    const double scale = std::max(1.0, opnorm(x));

    SturmCheck out;
    const int samples = 20;
    out.residuals.resize(samples, 0.0);
    const int imax = std::min(k, n - 2);
    for (int si = 0; si < samples; ++si) {
        double lambda = scale * (-1.0 + 2.0 * si / (samples - 1));
        // direct determinant oracle on the trailing corners
        std::vector<double> p(n + 3, 0.0);
        p[n + 1] = 1.0; // p_{n+1}
        for (int i = n; i >= 1; --i) {
            CMat corner = x.bottomRightCorner(n - i + 1, n - i + 1);
            corner -= lambda * CMat::Identity(n - i + 1, n - i + 1);
            p[i] = corner.determinant().real();
        }
        double worst = 0.0;
        for (int i = 1; i <= imax; ++i) {
            double rhs = (x(i - 1, i - 1).real() - lambda) * p[i + 1] -
                         std::norm(x(i, i - 1)) * p[i + 2];
            worst = std::max(worst, std::abs(p[i] - rhs));
        }
        out.residuals[si] = worst;
        out.max_residual = std::max(out.max_residual, worst);
    }
    out.pass = out.max_residual <= 1e-8 * std::max(1.0, std::pow(opnorm(x), n));
    return out;
}

MultiplicityReport multiplicity_bounds_check(const CMat& x, int k, double tol_scale) {
    const int n = static_cast<int>(x.rows());
    auto desc = classify_H(x, k);
    require(desc.member(default_tol_zero(x), kDefaultTolPos),
            "matrix is not in the declared constrained form");

    MultiplicityReport out;
    out.hermitian = opnorm(x - x.adjoint()) <= 1e-10 * (1.0 + opnorm(x));
    auto eigs = all_eigenvalues(x, out.hermitian);
    double tol = 1e-7 * (1.0 + opnorm(x)) * tol_scale;
    out.profile = cluster_sizes(eigs, tol);
    for (int s : out.profile) {
        out.max_mult = std::max(out.max_mult, s);
        if (s > 1)
            ++out.count_mult_gt1;
    }
    out.pass_max = out.max_mult <= std::max(n - k, 1);
    if (out.hermitian)
        out.pass_count = out.count_mult_gt1 <= std::max(n - k - 1, 1);
    return out;
}

double interlacing_check(const CMat& x) {
    const int n = static_cast<int>(x.rows());
    require(n >= 2, "interlacing needs size at least 2");
    RVec lam = hermitian_eig(x).first;
    RVec mu = hermitian_eig(x.bottomRightCorner(n - 1, n - 1)).first;
    double violation = 0.0;
    for (int i = 0; i < n - 1; ++i) {
        violation = std::max(violation, mu(i) - lam(i));
        violation = std::max(violation, lam(i + 1) - mu(i));
    }
    return violation;
}

SeparationReport make_separation_report(const std::vector<CMat>& values, double tol_scale) {
    SeparationReport out;
    out.eigenvalues.reserve(values.size());
    out.profile.reserve(values.size());
    out.distinct_count_min = std::numeric_limits<int>::max();
    out.min_gap = std::numeric_limits<double>::infinity();
    for (const auto& m : values) {
        RVec lam = hermitian_eig(symmetrized(m)).first;
        double tol = 1e-7 * (1.0 + opnorm(m)) * tol_scale;
        std::vector<cplx> eigs(lam.begin(), lam.end());
        auto profile = cluster_sizes(eigs, tol);
        out.distinct_count_min =
            std::min(out.distinct_count_min, static_cast<int>(profile.size()));
        for (int s : profile)
            out.max_multiplicity = std::max(out.max_multiplicity, s);
        for (int i = 0; i + 1 < lam.size(); ++i)
            out.min_gap = std::min(out.min_gap, lam(i) - lam(i + 1));
        out.eigenvalues.push_back(std::move(lam));
        out.profile.push_back(std::move(profile));
    }
    if (values.empty())
        out.distinct_count_min = 0;
    return out;
}

std::pair<MatrixField, SeparationReport>
separate_default(const MatrixField& f, const ToleranceField& eps, std::uint64_t seed) {
    auto res = hessenberg_reduce_default(f, eps, seed);
    return {res.g, make_separation_report(res.h.values)};
}

std::pair<MatrixField, SeparationReport>
separate_dim2(const MatrixField& f, const ToleranceField& eps, std::uint64_t seed) {
    f.validate();
    require(f.domain->dim <= 2, "variant requires domain dimension at most 2");
    const int n = f.n;
    if (n == 1) {
        MatrixField g = f;
        return {std::move(g), make_separation_report(f.values)};
    }

    ToleranceField half = eps;
    for (auto& v : half.values)
        v *= 0.5;
    auto res = hessenberg_reduce_dim3(f, half, seed);

    // framed block (coupling, last diagonal entry) as a field into R^3
    VectorField b;
    b.domain = f.domain;
    b.m = 3;
    b.values.reserve(f.values.size());
    for (const auto& hv : res.h.values) {
        RVec x(3);
        x << hv(n - 1, n - 2).real(), hv(n - 1, n - 2).imag(), hv(n - 1, n - 1).real();
        b.values.push_back(x);
    }

    // targets: coupling zero, diagonal hitting an eigenvalue of the corner
    std::vector<VectorField> targets;
    std::vector<RVec> corner_eigs(f.values.size());
    for (std::size_t v = 0; v < f.values.size(); ++v)
        corner_eigs[v] =
            hermitian_eig(symmetrized(res.h.values[v].topLeftCorner(n - 1, n - 1))).first;
    for (int i = 0; i < n - 1; ++i) {
        VectorField t;
        t.domain = f.domain;
        t.m = 3;
        t.values.reserve(f.values.size());
        for (std::size_t v = 0; v < f.values.size(); ++v) {
            RVec x(3);
            x << 0.0, 0.0, corner_eigs[v](i);
            t.values.push_back(x);
        }
        targets.push_back(std::move(t));
    }

    // the mirrored 2x2 update amplifies a shift of delta by up to 2/sqrt(3)
    ToleranceField eps_avoid = half;
    for (auto& v : eps_avoid.values)
        v *= std::sqrt(3.0) / 2.0;
    auto [b2, cert] = avoid_k_maps(b, targets, eps_avoid, seed + 0x5eedu);

    std::vector<CMat> h_final = res.h.values;
    for (std::size_t v = 0; v < f.values.size(); ++v) {
        cplx w(b2.values[v](0), b2.values[v](1));
        h_final[v](n - 1, n - 2) = w;
        h_final[v](n - 2, n - 1) = std::conj(w);
        h_final[v](n - 1, n - 1) = b2.values[v](2);
    }
    auto out = finish_separation(f, eps, res, h_final);
    verify(out.second.distinct_count_min == n, "a vertex has a repeated eigenvalue");
    verify(out.second.min_gap > 0.0, "minimum eigenvalue gap not positive");
    return out;
}

std::pair<MatrixField, SeparationReport>
separate_dim4(const MatrixField& f, const ToleranceField& eps, std::uint64_t seed) {
    f.validate();
    require(f.domain->dim <= 4, "variant requires domain dimension at most 4");
    const int n = f.n;
    if (n <= 2) {
        MatrixField g = f;
        for (auto& m : g.values)
            m = symmetrized(m);
        return {std::move(g), make_separation_report(g.values)};
    }

    ToleranceField half = eps;
    for (auto& v : half.values)
        v *= 0.5;
    auto res = hessenberg_reduce_default(f, half, seed, n - 3);

    // c = (c1, c2, c3) in C^2 x R, perturbing from zero away from the
    // collision set { (-a, -b, lambda_i - mu_j) }
    VectorField zero;
    zero.domain = f.domain;
    zero.m = 5;
    zero.values.assign(f.values.size(), RVec::Zero(5));

    std::vector<VectorField> targets;
    targets.reserve(2 * static_cast<std::size_t>(n - 2));
    std::vector<RVec> lam(f.values.size()), mu(f.values.size());
    for (std::size_t v = 0; v < f.values.size(); ++v) {
        const CMat& hv = res.h.values[v];
        lam[v] = hermitian_eig(symmetrized(hv.topLeftCorner(n - 2, n - 2))).first;
        mu[v] = hermitian_eig(symmetrized(hv.bottomRightCorner(2, 2))).first;
    }
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < n - 2; ++i) {
            VectorField t;
            t.domain = f.domain;
            t.m = 5;
            t.values.reserve(f.values.size());
            for (std::size_t v = 0; v < f.values.size(); ++v) {
                const CMat& hv = res.h.values[v];
                RVec x(5);
                x << -hv(n - 2, n - 3).real(), -hv(n - 2, n - 3).imag(),
                     -hv(n - 1, n - 3).real(), -hv(n - 1, n - 3).imag(),
                     lam[v](i) - mu[v](j);
                t.values.push_back(x);
            }
            targets.push_back(std::move(t));
        }

    // ||update|| <= ||(c1,c2)|| + |c3| <= sqrt(2) ||c||
    ToleranceField eps_avoid = half;
    for (auto& v : eps_avoid.values)
        v /= std::sqrt(2.0);
    auto [c, cert] = avoid_k_maps(zero, targets, eps_avoid, seed + 0xd14u);

    std::vector<CMat> h_final = res.h.values;
    for (std::size_t v = 0; v < f.values.size(); ++v) {
        cplx c1(c.values[v](0), c.values[v](1));
        cplx c2(c.values[v](2), c.values[v](3));
        double c3 = c.values[v](4);
        CMat& hv = h_final[v];
        hv(n - 2, n - 3) += c1;
        hv(n - 3, n - 2) += std::conj(c1);
        hv(n - 1, n - 3) += c2;
        hv(n - 3, n - 1) += std::conj(c2);
        hv(n - 2, n - 2) += c3;
        hv(n - 1, n - 1) += c3;
    }
    auto out = finish_separation(f, eps, res, h_final);
    verify(out.second.distinct_count_min >= n - 1,
           "fewer than n-1 distinct eigenvalues at a vertex");
    return out;
}

MatrixField bott_field(const Domain& dom) {
    MatrixField f;
    f.domain = &dom;
    f.n = 2;
    f.values.reserve(dom.vertices.size());
    for (const auto& v : dom.vertices) {
        require(v.size() == 3, "vertices must carry (x, y, z) coordinates");
        require(v.norm() <= 1.0 + 1e-12, "vertices must lie inside the unit ball");
        double x = v(0), y = v(1), z = v(2);
        CMat m(2, 2);
        m << 0.5 * (1.0 - z), 0.5 * cplx(x, y), 0.5 * cplx(x, -y), 0.5 * (1.0 + z);
        f.values.push_back(m);
    }
    return f;
}

} // namespace hf
