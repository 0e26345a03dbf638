#include "hessfield/projections.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>

namespace hf {

namespace {

void verify(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::invariant, what);
}

} // namespace

void ProjectionField::validate() const {
    field.validate();
    auto* self = const_cast<ProjectionField*>(this);
    self->ranks.assign(field.values.size(), 0);
    int n = field.n;
    for (std::size_t v = 0; v < field.values.size(); ++v) {
        const CMat& p = field.values[v];
        require((p - p.adjoint()).cwiseAbs().maxCoeff() <= 1e-12,
                "projection field: value is not self-adjoint at vertex " + std::to_string(v));
        require((p * p - p).cwiseAbs().maxCoeff() <= 1e-10,
                "projection field: value is not idempotent at vertex " + std::to_string(v));
        double tr = p.trace().real();
        int r = static_cast<int>(std::lround(tr));
        require(std::abs(tr - r) <= 1e-8 && r >= 0 && r <= n,
                "projection field: non-integral trace at vertex " + std::to_string(v));
        self->ranks[v] = r;
    }
    self->min_rank = ranks.empty() ? 0 : *std::min_element(ranks.begin(), ranks.end());
}

int gamma_of_dim(int d) {
    require(d >= 0, "gamma_of_dim: negative dimension");
    if (d <= 1) return 0;
    if (d <= 3) return 1;
    return (d + 1) / 2;
}

namespace {

// Keep the three diagonals through column k-1 plus the trailing corner block
// (0-based indices; entries are at most eps in magnitude elsewhere).
CMat truncate_to_blocks(const CMat& h, int k) {
    int n = static_cast<int>(h.rows());
    CMat out = CMat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            bool tri = std::abs(i - j) <= 1 && std::min(i, j) < k;
            bool corner = i >= k && j >= k;
            if (tri || corner) out(i, j) = h(i, j);
        }
    return out;
}

// Entrywise radial shrink: zero below the threshold, pull the modulus in by
// the threshold above it. Turns near-block-diagonal into exactly block
// diagonal without moving any entry by more than the threshold.
CMat shrink_entries(const CMat& m, double threshold) {
    CMat out = m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            double a = std::abs(m(i, j));
            out(i, j) = a <= threshold ? cplx(0, 0) : m(i, j) * ((a - threshold) / a);
        }
    return out;
}

// Connected components of the nonzero off-diagonal pattern, as index groups
// in increasing order. For a block-diagonal matrix these are its blocks.
std::vector<std::vector<int>> block_partition(const CMat& m) {
    int n = static_cast<int>(m.rows());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (m(i, j) != cplx(0, 0) || m(j, i) != cplx(0, 0)) parent[find(i)] = find(j);
    std::vector<std::vector<int>> groups(n);
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& g : groups)
        if (!g.empty()) out.push_back(std::move(g));
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a[0] < b[0]; });
    return out;
}

} // namespace

ProjectionReduceResult projection_reduce(const ProjectionField& p, std::uint64_t seed,
                                         double eps) {
    ProjectionField pv = p;
    pv.validate();
    int n = p.field.n;
    std::size_t nv = p.field.values.size();
    if (eps < 0.0) eps = 0.9 / (576.0 * n * n * n);
    require(eps > 0.0 && eps < 1.0 / (576.0 * n * n * n),
            "projection_reduce: epsilon out of range");

    ToleranceField tol = ToleranceField::constant(*p.field.domain, eps);
    ReductionResult base = hessenberg_summary(p.field, tol, seed);
    int k = n - base.c;
    double threshold = 2.0 * std::sqrt(n * eps);

    ProjectionReduceResult res;
    res.k = k;
    res.eps_used = eps;
    res.min_spectral_gap = std::numeric_limits<double>::infinity();
    res.q.field.domain = p.field.domain;
    res.q.field.n = n;
    res.q.field.values.resize(nv);
    res.u.domain = p.field.domain;
    res.u.n = n;
    res.u.values.resize(nv);
    res.descriptors.resize(nv);
    res.classify_tol = threshold;

    for (std::size_t v = 0; v < nv; ++v) {
        const CMat& u0 = base.u.values[v];
        CMat h = u0 * p.field.values[v] * u0.adjoint();
        CMat hp = truncate_to_blocks(h, k);
        CMat hpp = shrink_entries(hp, threshold);
        verify(opnorm(hpp - h) < 0.25,
               "projection_reduce: shrunk matrix drifted from the conjugated projection");

        // Spectral rounding, block by block so the off-block zeros are exact.
        CMat q = CMat::Zero(n, n);
        for (const auto& blk : block_partition(hpp)) {
            int m = static_cast<int>(blk.size());
            CMat sub(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) sub(i, j) = hpp(blk[i], blk[j]);
            auto [vals, vecs] = hermitian_eig(0.5 * (sub + sub.adjoint()));
            CMat qs = CMat::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                double gap = std::abs(vals[i] - 0.5);
                res.min_spectral_gap = std::min(res.min_spectral_gap, gap);
                verify(gap >= 0.1, "projection_reduce: eigenvalue too close to 1/2 at vertex " +
                                       std::to_string(v));
                if (vals[i] > 0.5) qs += vecs.col(i) * vecs.col(i).adjoint();
            }
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) q(blk[i], blk[j]) = qs(i, j);
        }

        // z intertwines h and q and stays invertible since ||q - h|| < 1/2;
        // its polar unitary conjugates h exactly onto q.
        CMat id = CMat::Identity(n, n);
        CMat z = q * h + (id - q) * (id - h);
        CMat vpol = polar_unitary(z);
        CMat u = vpol * u0;
        CMat qv = u * p.field.values[v] * u.adjoint();
        res.max_conj_error = std::max(res.max_conj_error, opnorm(qv - q));

        res.q.field.values[v] = q;
        res.u.values[v] = u;
        res.descriptors[v] = classify_BH(q, k, threshold);
        verify(res.descriptors[v].member(threshold),
               "projection_reduce: rounded value left the block-diagonal class at vertex " +
                   std::to_string(v));
    }
    verify(res.max_conj_error <= 1e-8,
           "projection_reduce: conjugation drifted beyond tolerance");
    res.q.validate();
    for (std::size_t v = 0; v < nv; ++v)
        verify(res.q.ranks[v] == pv.ranks[v],
               "projection_reduce: rank changed at vertex " + std::to_string(v));
    return res;
}

Section extract_section(const ProjectionField& p, int c) {
    ProjectionField pv = p;
    pv.validate();
    int n = p.field.n;
    require(c >= 0 && c <= n, "extract_section: corner size out of range");
    Section s;
    s.values.resize(p.field.values.size());
    s.column.resize(p.field.values.size());
    const double threshold = 1.0 / std::sqrt(2.0);
    for (std::size_t v = 0; v < p.field.values.size(); ++v) {
        const CMat& q = p.field.values[v];
        int col = -1;
        for (int j = 0; j < n; ++j)
            if (q.col(j).norm() >= threshold - 1e-12) {
                col = j;
                break;
            }
        verify(col >= 0, "extract_section: no column reaches 1/sqrt(2) at vertex " +
                             std::to_string(v));
        s.values[v] = q.col(col);
        s.column[v] = col;
    }

    // Edge jump audit of the section against the projection it came from.
    MatrixField sf;
    sf.domain = p.field.domain;
    sf.n = 1;
    sf.values.resize(s.values.size());
    for (std::size_t v = 0; v < s.values.size(); ++v) {
        CMat m(n, 1);
        m.col(0) = s.values[v];
        sf.values[v] = m;
    }
    s.audit = audit_continuity(sf);
    ContinuityAudit in = audit_continuity(p.field);
    s.continuity_warning = s.audit.max_edge_jump > 10.0 * std::max(in.max_edge_jump, 1e-12);
    return s;
}

void SectionBundle::check_invariants(const ProjectionField& p) const {
    std::size_t nv = p.field.values.size();
    for (const auto& sec : sections) {
        verify(sec.size() == nv, "section bundle: vertex count mismatch");
        for (std::size_t v = 0; v < nv; ++v)
            verify((p.field.values[v] * sec[v] - sec[v]).norm() <= 1e-9 * (1.0 + sec[v].norm()),
                   "section bundle: vector leaves the column space at vertex " +
                       std::to_string(v));
    }
    verify(independence_margin > 0.0, "section bundle: sections are dependent somewhere");
}

SectionBundle trivial_summand(const ProjectionField& p, std::uint64_t seed) {
    ProjectionField cur = p;
    cur.validate();
    int n = p.field.n;
    std::size_t nv = p.field.values.size();
    int d = p.field.domain->dim;
    int gamma = gamma_of_dim(d);
    int b = cur.min_rank;
    require(b >= gamma + 1,
            "trivial_summand: minimal rank " + std::to_string(b) +
                " leaves no room below the obstruction bound " + std::to_string(gamma + 1));

    SectionBundle bundle;
    bundle.gamma = gamma;
    bundle.b = b;
    for (int step = 0; step < b - gamma; ++step) {
        ProjectionReduceResult red = projection_reduce(cur, seed + 1000 * (step + 1));
        Section sq = extract_section(red.q, red.q.field.n - red.k);

        std::vector<CVec> sec(nv);
        for (std::size_t v = 0; v < nv; ++v)
            sec[v] = red.u.values[v].adjoint() * sq.values[v];
        bundle.sections.push_back(sec);

        if (step + 1 == b - gamma) break;

        // Deflate: remove the extracted line from the column space, then snap
        // eigenvalues back to {0, 1} to absorb roundoff before the next pass.
        for (std::size_t v = 0; v < nv; ++v) {
            const CVec& s = sec[v];
            CMat raw = cur.field.values[v] - (s * s.adjoint()) / s.squaredNorm();
            auto [vals, vecs] = hermitian_eig(0.5 * (raw + raw.adjoint()));
            CMat snapped = CMat::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                verify(std::min(std::abs(vals[i]), std::abs(vals[i] - 1.0)) <= 1e-6,
                       "trivial_summand: deflated eigenvalue away from {0,1} at vertex " +
                           std::to_string(v));
                if (vals[i] > 0.5) snapped += vecs.col(i) * vecs.col(i).adjoint();
            }
            cur.field.values[v] = snapped;
        }
        cur.validate();
    }

    // Pointwise independence margin of the extracted family.
    bundle.independence_margin = std::numeric_limits<double>::infinity();
    int m = static_cast<int>(bundle.sections.size());
    for (std::size_t v = 0; v < nv; ++v) {
        CMat s(n, m);
        for (int i = 0; i < m; ++i) s.col(i) = bundle.sections[i][v];
        Eigen::JacobiSVD<CMat> svd(s);
        bundle.independence_margin =
            std::min(bundle.independence_margin, svd.singularValues().minCoeff());
    }
    bundle.check_invariants(p);
    return bundle;
}

} // namespace hf
