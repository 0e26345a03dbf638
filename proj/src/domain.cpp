#include "hessfield/domain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace hf {

void Domain::derive_edges() {
    std::set<std::pair<int, int>> seen;
    for (const auto& s : simplices) {
        for (size_t a = 0; a < s.size(); ++a)
            for (size_t b = a + 1; b < s.size(); ++b)
                seen.insert({std::min(s[a], s[b]), std::max(s[a], s[b])});
    }
    edges.assign(seen.begin(), seen.end());
}

void Domain::validate() const {
    require(dim >= 0, "domain dimension must be >= 0");
    for (const auto& s : simplices) {
        require(static_cast<int>(s.size()) <= dim + 1, "simplex has more than d+1 vertices");
        std::set<int> uniq(s.begin(), s.end());
        require(uniq.size() == s.size(), "simplex vertex indices must be distinct");
        for (int v : s) require(v >= 0 && v < vertex_count(), "simplex vertex index out of range");
    }
}

void MatrixField::validate() const {
    require(domain != nullptr, "field has no domain");
    require(static_cast<int>(values.size()) == domain->vertex_count(),
            "field value count must equal vertex count");
    for (const auto& m : values) {
        require(m.rows() == n && m.cols() == n, "field value has wrong shape");
        require(m.allFinite(), "field values must be finite");
    }
}

bool MatrixField::hermitian(double tol) const {
    for (const auto& m : values)
        if (opnorm(m - m.adjoint()) > tol * (1.0 + opnorm(m))) return false;
    return true;
}

ToleranceField ToleranceField::constant(const Domain& d, double eps) {
    ToleranceField t;
    t.domain = &d;
    t.values.assign(d.vertex_count(), eps);
    t.validate();
    return t;
}

double ToleranceField::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, v);
    return m;
}

void ToleranceField::validate() const {
    require(domain != nullptr, "tolerance field has no domain");
    require(static_cast<int>(values.size()) == domain->vertex_count(),
            "tolerance value count must equal vertex count");
    for (double v : values) require(v > 0.0, "tolerance values must be strictly positive");
}

namespace {

// Index of a lattice point in {0..r}^d, row-major.
int lattice_index(const std::vector<int>& p, int r) {
    int idx = 0;
    for (int c : p) idx = idx * (r + 1) + c;
    return idx;
}

// Kuhn split of the unit cube anchored at `base`: one simplex per permutation
// of the axes, walking from the low corner to the high corner.
void kuhn_simplices(int d, int r, const std::vector<int>& base,
                    const std::function<int(const std::vector<int>&)>& index_of,
                    std::vector<std::vector<int>>& out) {
    std::vector<int> perm(d);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        std::vector<int> simplex;
        std::vector<int> p = base;
        simplex.push_back(index_of(p));
        for (int step = 0; step < d; ++step) {
            p[perm[step]] += 1;
            simplex.push_back(index_of(p));
        }
        out.push_back(simplex);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

} // namespace

Domain build_grid(int d, int resolution) {
    require(d >= 0 && d <= 4, "grid dimension must be in [0, 4]");
    require(resolution >= 1, "grid resolution must be >= 1");
    Domain dom;
    dom.dim = d;
    int r = resolution;

    if (d == 0) {
        dom.vertices.push_back(RVec::Zero(1));
        dom.simplices.push_back({0});
        dom.derive_edges();
        dom.validate();
        return dom;
    }

    // vertices of {0..r}^d scaled to [0,1]^d
    std::vector<int> p(d, 0);
    int total = 1;
    for (int i = 0; i < d; ++i) total *= (r + 1);
    dom.vertices.resize(total);
    for (int idx = 0; idx < total; ++idx) {
        int rem = idx;
        RVec v(d);
        for (int i = d - 1; i >= 0; --i) {
            v[i] = static_cast<double>(rem % (r + 1)) / r;
            rem /= (r + 1);
        }
        dom.vertices[idx] = v;
    }

    auto index_of = [&](const std::vector<int>& q) { return lattice_index(q, r); };
    std::vector<int> base(d, 0);
    // iterate over all cells
    while (true) {
        kuhn_simplices(d, r, base, index_of, dom.simplices);
        int axis = d - 1;
        while (axis >= 0) {
            if (++base[axis] < r) break;
            base[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    dom.derive_edges();
    dom.validate();
    return dom;
}

Domain build_sphere(int k, int resolution) {
    require(k >= 1 && k <= 3, "sphere dimension must be in {1, 2, 3}");
    require(resolution >= 1, "sphere resolution must be >= 1");
    int D = k + 1; // ambient dimension
    int r = resolution;
    Domain dom;
    dom.dim = k;

    // Lattice points of {0..r}^D restricted to the cube boundary, deduplicated.
    std::map<std::vector<int>, int> id_of;
    auto boundary_id = [&](const std::vector<int>& p) {
        auto it = id_of.find(p);
        if (it != id_of.end()) return it->second;
        int id = static_cast<int>(dom.vertices.size());
        id_of.emplace(p, id);
        RVec v(D);
        for (int i = 0; i < D; ++i) v[i] = 2.0 * p[i] / r - 1.0;
        dom.vertices.push_back(v / v.norm());
        return id;
    };

    // One k-dimensional face grid per (axis, side) pair.
    for (int axis = 0; axis < D; ++axis) {
        for (int side = 0; side <= 1; ++side) {
            int fixed = side * r;
            auto embed = [&](const std::vector<int>& q) {
                std::vector<int> p(D);
                int j = 0;
                for (int i = 0; i < D; ++i) p[i] = (i == axis) ? fixed : q[j++];
                return boundary_id(p);
            };
            std::vector<int> base(k, 0);
            while (true) {
                kuhn_simplices(k, r, base, embed, dom.simplices);
                int a = k - 1;
                while (a >= 0) {
                    if (++base[a] < r) break;
                    base[a] = 0;
                    --a;
                }
                if (a < 0) break;
            }
        }
    }
    dom.derive_edges();
    dom.validate();
    return dom;
}

ContinuityAudit audit_continuity(const MatrixField& field) {
    ContinuityAudit audit;
    const Domain& dom = *field.domain;
    for (size_t e = 0; e < dom.edges.size(); ++e) {
        auto [a, b] = dom.edges[e];
        double jump = opnorm(field.values[a] - field.values[b]);
        if (jump > audit.max_edge_jump) {
            audit.max_edge_jump = jump;
            audit.worst_edge = static_cast<int>(e);
        }
    }
    if (audit.worst_edge < 0 && !dom.edges.empty()) audit.worst_edge = 0;
    return audit;
}

CMat evaluate(const MatrixField& field, int simplex, const RVec& barycentric) {
    require(simplex >= 0 && simplex < field.domain->simplex_count(), "simplex index out of range");
    const auto& verts = field.domain->simplices[simplex];
    require(barycentric.size() == static_cast<int>(verts.size()),
            "barycentric coordinate count mismatch");
    double sum = 0.0;
    for (int i = 0; i < barycentric.size(); ++i) {
        require(barycentric[i] >= -1e-12, "barycentric coordinates must be nonnegative");
        sum += barycentric[i];
    }
    require(std::abs(sum - 1.0) <= 1e-12, "barycentric coordinates must sum to 1");
    CMat out = CMat::Zero(field.n, field.n);
    for (int i = 0; i < barycentric.size(); ++i) out += barycentric[i] * field.values[verts[i]];
    return out;
}

} // namespace hf
