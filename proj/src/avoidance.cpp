#include "hessfield/avoidance.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace hf {

void VectorField::validate() const {
    require(domain != nullptr, "vector field has no domain");
    require(m >= 1, "vector field dimension must be positive");
    require(static_cast<int>(values.size()) == static_cast<int>(domain->vertices.size()),
            "vector field value count does not match vertex count");
    for (const auto& v : values)
        require(static_cast<int>(v.size()) == m, "vector field value has wrong dimension");
}

namespace {

constexpr int kMaxRetries = 32;
constexpr double kFeasTol = 1e-12;

// Equality-constrained least squares on a face: minimize ||A x||^2 subject to
// c^T x = 1, via the KKT system. Returns false if the solve is too degenerate
// to trust; sub-faces cover the minimizer in that case.
bool face_minimize(const RMat& A, const RVec& c, RVec& x_out) {
    const int s = static_cast<int>(A.cols());
    RMat kkt(s + 1, s + 1);
    kkt.topLeftCorner(s, s) = 2.0 * (A.transpose() * A);
    kkt.topRightCorner(s, 1) = c;
    kkt.bottomLeftCorner(1, s) = c.transpose();
    kkt(s, s) = 0.0;
    RVec rhs = RVec::Zero(s + 1);
    rhs(s) = 1.0;
    Eigen::CompleteOrthogonalDecomposition<RMat> cod(kkt);
    RVec sol = cod.solve(rhs);
    if (!sol.allFinite())
        return false;
    double scale = kkt.cwiseAbs().maxCoeff() + 1.0;
    if ((kkt * sol - rhs).norm() > 1e-8 * scale)
        return false;
    x_out = sol.head(s);
    return true;
}

} // namespace

std::pair<double, RVec> min_norm_over_simplex(const std::vector<RVec>& verts) {
    require(!verts.empty(), "simplex needs at least one vertex");
    const int d1 = static_cast<int>(verts.size());
    const int m = static_cast<int>(verts[0].size());
    for (const auto& v : verts)
        require(static_cast<int>(v.size()) == m, "mixed vector dimensions in simplex");

    double best = std::numeric_limits<double>::infinity();
    RVec best_bary = RVec::Zero(d1);

    for (unsigned mask = 1; mask < (1u << d1); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < d1; ++i)
            if (mask & (1u << i))
                idx.push_back(i);
        const int s = static_cast<int>(idx.size());

        RVec lam(s);
        if (s == 1) {
            lam(0) = 1.0;
        } else {
            RMat A(m, s);
            for (int j = 0; j < s; ++j)
                A.col(j) = verts[idx[j]];
            if (!face_minimize(A, RVec::Ones(s), lam))
                continue;
            bool feasible = true;
            for (int j = 0; j < s; ++j)
                if (lam(j) < -kFeasTol)
                    feasible = false;
            if (!feasible)
                continue;
        }

        RVec pt = RVec::Zero(m);
        double lsum = 0.0;
        RVec bary = RVec::Zero(d1);
        for (int j = 0; j < s; ++j) {
            double lj = std::max(lam(j), 0.0);
            pt += lj * verts[idx[j]];
            bary(idx[j]) = lj;
            lsum += lj;
        }
        if (lsum <= 0.0)
            continue;
        pt /= lsum;
        bary /= lsum;
        double val = pt.norm();
        if (val < best) {
            best = val;
            best_bary = bary;
        }
    }
    return {best, best_bary};
}

double simplex_ray_distance(const std::vector<RVec>& verts) {
    require(!verts.empty(), "simplex needs at least one vertex");
    const int d1 = static_cast<int>(verts.size());
    const int m = static_cast<int>(verts[0].size());
    require(m >= 1, "ray distance needs ambient dimension >= 1");

    // t = 0 endpoint of the ray reduces to distance-to-origin.
    double best = min_norm_over_simplex(verts).first;

    // Faces with the ray parameter free: minimize || sum lambda_i v_i + t e1 ||
    // over sum lambda = 1, t >= 0 (the ray is { -t e1 }).
    for (unsigned mask = 1; mask < (1u << d1); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < d1; ++i)
            if (mask & (1u << i))
                idx.push_back(i);
        const int s = static_cast<int>(idx.size());

        RMat A(m, s + 1);
        for (int j = 0; j < s; ++j)
            A.col(j) = verts[idx[j]];
        A.col(s) = RVec::Unit(m, 0);
        RVec c = RVec::Zero(s + 1);
        c.head(s).setOnes();

        RVec x;
        if (!face_minimize(A, c, x))
            continue;
        bool feasible = x(s) >= -kFeasTol;
        for (int j = 0; j < s && feasible; ++j)
            if (x(j) < -kFeasTol)
                feasible = false;
        if (!feasible)
            continue;

        RVec lam = x.head(s).cwiseMax(0.0);
        double lsum = lam.sum();
        if (lsum <= 0.0)
            continue;
        lam /= lsum;
        RVec pt = RVec::Zero(m);
        for (int j = 0; j < s; ++j)
            pt += lam(j) * verts[idx[j]];
        pt(0) += std::max(x(s), 0.0);
        best = std::min(best, pt.norm());
    }
    return best;
}

std::vector<double> certify_nonzero(const VectorField& g) {
    std::vector<double> margins;
    margins.reserve(g.domain->simplices.size());
    for (const auto& simp : g.domain->simplices) {
        std::vector<RVec> verts;
        verts.reserve(simp.size());
        for (int vi : simp)
            verts.push_back(g.values[vi]);
        margins.push_back(min_norm_over_simplex(verts).first);
    }
    return margins;
}

std::vector<double> certify_off_ray(const VectorField& g) {
    std::vector<double> margins;
    margins.reserve(g.domain->simplices.size());
    for (const auto& simp : g.domain->simplices) {
        std::vector<RVec> verts;
        verts.reserve(simp.size());
        for (int vi : simp)
            verts.push_back(g.values[vi]);
        margins.push_back(simplex_ray_distance(verts));
    }
    return margins;
}

namespace {

double min_of(const std::vector<double>& xs) {
    double out = std::numeric_limits<double>::infinity();
    for (double x : xs)
        out = std::min(out, x);
    return out;
}

std::uint64_t attempt_seed(std::uint64_t seed, int attempt) {
    return seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(attempt);
}

VectorField perturb(const VectorField& f, const ToleranceField& eps, std::uint64_t seed,
                    int attempt, double radius_scale) {
    VectorField g = f;
    if (attempt == 0)
        return g; // first try: certify the input as-is
    double radius = eps.min_value() * radius_scale / std::pow(2.0, attempt);
    Rng rng(attempt_seed(seed, attempt));
    for (auto& v : g.values)
        v += rng.in_ball(f.m, radius);
    return g;
}

[[noreturn]] void certification_failed(const char* what) {
    throw Error(ErrorCode::invariant,
                std::string(what) + ": no certified perturbation within " +
                    std::to_string(kMaxRetries) + " retries (mesh too coarse?)");
}

std::pair<VectorField, AvoidanceCertificate>
avoid_generic(const VectorField& f, const ToleranceField& eps, std::uint64_t seed,
              const std::vector<VectorField>* targets, const char* what) {
    f.validate();
    eps.validate();
    require(eps.domain == f.domain, "tolerance field on a different domain");
    require(f.domain->dim <= f.m - 1, "domain dimension must be below vector dimension");
    for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        VectorField g = perturb(f, eps, seed, attempt, 1.0);
        std::vector<double> margins;
        if (targets == nullptr) {
            margins = certify_nonzero(g);
        } else {
            VectorField diff = g;
            margins.assign(g.domain->simplices.size(),
                           std::numeric_limits<double>::infinity());
            for (const auto& h : *targets) {
                require(h.m == f.m && h.domain == f.domain, "target field mismatch");
                for (std::size_t i = 0; i < g.values.size(); ++i)
                    diff.values[i] = g.values[i] - h.values[i];
                auto mh = certify_nonzero(diff);
                for (std::size_t s = 0; s < margins.size(); ++s)
                    margins[s] = std::min(margins[s], mh[s]);
            }
        }
        double global = min_of(margins);
        if (global > 0.0) {
            AvoidanceCertificate cert;
            cert.global_margin = global;
            cert.seed = seed;
            cert.retries = attempt;
            cert.per_simplex = std::move(margins);
            return {std::move(g), std::move(cert)};
        }
    }
    certification_failed(what);
}

} // namespace

std::pair<VectorField, AvoidanceCertificate>
avoid_zero(const VectorField& f, const ToleranceField& eps, std::uint64_t seed) {
    return avoid_generic(f, eps, seed, nullptr, "avoid_zero");
}

std::pair<VectorField, AvoidanceCertificate>
avoid_k_maps(const VectorField& f, const std::vector<VectorField>& targets,
             const ToleranceField& eps, std::uint64_t seed) {
    require(!targets.empty(), "avoid_k_maps needs at least one target");
    return avoid_generic(f, eps, seed, &targets, "avoid_k_maps");
}

std::pair<VectorField, AvoidanceCertificate>
avoid_ray(const VectorField& f, const ToleranceField& eps, std::uint64_t seed) {
    f.validate();
    eps.validate();
    require(eps.domain == f.domain, "tolerance field on a different domain");
    require(f.domain->dim <= f.m - 2, "domain dimension must be below sphere dimension");

    for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        VectorField g = f;
        if (attempt > 0) {
            // Perturb the direction only and restore the radius, so norms are
            // preserved exactly. A direction shift of rho moves the point by at
            // most 2*r*rho, hence the per-vertex scaling and the extra halving.
            Rng rng(attempt_seed(seed, attempt));
            for (std::size_t vi = 0; vi < g.values.size(); ++vi) {
                auto& v = g.values[vi];
                double r = v.norm();
                double rho = eps.values[vi] /
                             (std::pow(2.0, attempt + 1) * std::max(1.0, r));
                RVec delta = rng.in_ball(f.m, rho);
                if (r > 0.0) {
                    RVec dir = v / r + delta;
                    double dn = dir.norm();
                    if (dn > 0.0)
                        v = r * dir / dn;
                }
            }
        }
        auto margins = certify_off_ray(g);
        double global = min_of(margins);
        if (global > 0.0) {
            AvoidanceCertificate cert;
            cert.global_margin = global;
            cert.seed = seed;
            cert.retries = attempt;
            cert.per_simplex = std::move(margins);
            return {std::move(g), std::move(cert)};
        }
    }
    certification_failed("avoid_ray");
}

OperatorAvoidResult avoid_zero_operator(const std::vector<CVec>& f, const ToleranceField& eps,
                                        int support_bound) {
    require(!f.empty(), "operator avoidance needs at least one vertex value");
    eps.validate();
    const int N = static_cast<int>(f[0].size());
    require(support_bound >= 0 && support_bound < N,
            "support bound leaves no free coordinate in the truncation");
    require(static_cast<int>(eps.values.size()) == static_cast<int>(f.size()),
            "tolerance field vertex count mismatch");
    for (const auto& v : f) {
        require(static_cast<int>(v.size()) == N, "mixed truncation sizes");
        for (int i = support_bound; i < N; ++i)
            require(std::abs(v(i)) <= 1e-12, "value exceeds the declared support bound");
    }

    OperatorAvoidResult out;
    out.bump_index = support_bound;
    out.values = f;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t vi = 0; vi < f.size(); ++vi) {
        out.values[vi](support_bound) += eps.values[vi];
        margin = std::min(margin, eps.values[vi]);
    }
    // The bumped coordinate interpolates affinely, so its minimum over every
    // simplex is attained at a vertex.
    out.margin = margin;
    require(margin > 0.0, "tolerance field must be positive");
    return out;
}

} // namespace hf
