#pragma once

#include "hessfield/types.hpp"

#include <array>
#include <utility>
#include <vector>

namespace hf {

// Finite simplicial complex with ambient vertex coordinates and a declared
// covering dimension. Immutable after construction.
struct Domain {
    std::vector<RVec> vertices;             // points in R^D
    std::vector<std::vector<int>> simplices; // vertex index tuples, size <= d+1
    int dim = 0;                             // declared covering dimension
    std::vector<std::pair<int, int>> edges;  // derived 1-faces, i < j, sorted, unique

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int simplex_count() const { return static_cast<int>(simplices.size()); }

    void validate() const;
    void derive_edges();
};

// Per-vertex complex n x n matrices, entrywise affine interpolation per simplex.
struct MatrixField {
    const Domain* domain = nullptr;
    int n = 0;
    std::vector<CMat> values; // one per vertex

    void validate() const;
    bool hermitian(double tol = 1e-12) const;
};

// Per-vertex positive reals, affine interpolation.
struct ToleranceField {
    const Domain* domain = nullptr;
    std::vector<double> values;

    static ToleranceField constant(const Domain& d, double eps);
    double min_value() const;
    void validate() const;
};

struct ContinuityAudit {
    double max_edge_jump = 0.0;
    int worst_edge = -1; // index into domain.edges; -1 when there are no edges
};

// Kuhn/Freudenthal triangulation of the regular grid on [0,1]^d,
// `resolution` cells per axis.
Domain build_grid(int d, int resolution);

// Simplicial boundary complex of a refined (k+1)-cube, vertices radially
// projected to the unit sphere.
Domain build_sphere(int k, int resolution);

ContinuityAudit audit_continuity(const MatrixField& field);

// Affine combination of the simplex's vertex matrices.
CMat evaluate(const MatrixField& field, int simplex, const RVec& barycentric);

} // namespace hf
