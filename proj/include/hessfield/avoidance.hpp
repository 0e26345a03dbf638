#pragma once

#include "hessfield/domain.hpp"

#include <vector>

namespace hf {

// Per-vertex vectors in R^m with affine interpolation per simplex.
struct VectorField {
    const Domain* domain = nullptr;
    int m = 0;
    std::vector<RVec> values;

    void validate() const;
};

// Constructive witness that a PL-interpolated map misses a forbidden set.
struct AvoidanceCertificate {
    double global_margin = 0.0;
    std::uint64_t seed = 0;
    int retries = 0;
    std::vector<double> per_simplex;
};

// Exact minimizer of || sum lambda_i v_i || over the standard simplex, by
// enumeration of all faces (equality-constrained least squares per face).
// Returns the minimum and the minimizing barycentric point.
std::pair<double, RVec> min_norm_over_simplex(const std::vector<RVec>& verts);

// Distance between conv(verts) and the closed ray { lambda * (-e1) : lambda >= 0 }.
double simplex_ray_distance(const std::vector<RVec>& verts);

// Perturbations with exact per-simplex certification and seeded
// retries (R = 32). All are deterministic given (input, seed).
std::pair<VectorField, AvoidanceCertificate>
avoid_zero(const VectorField& f, const ToleranceField& eps, std::uint64_t seed);

std::pair<VectorField, AvoidanceCertificate>
avoid_k_maps(const VectorField& f, const std::vector<VectorField>& targets,
             const ToleranceField& eps, std::uint64_t seed);

// Norm-preserving mode: perturbs the direction on the sphere and rescales to
// the original radius, then certifies distance to the ray.
std::pair<VectorField, AvoidanceCertificate>
avoid_ray(const VectorField& f, const ToleranceField& eps, std::uint64_t seed);

// Truncated sequence-space variant: g(x) = f(x) + eps(x) e_k for a fixed free
// index k past the support bound.
struct OperatorAvoidResult {
    std::vector<CVec> values;
    int bump_index = -1; // 0-based coordinate that received the bump
    double margin = 0.0;
};

OperatorAvoidResult avoid_zero_operator(const std::vector<CVec>& f, const ToleranceField& eps,
                                        int support_bound);

// Re-certification helpers (the independent oracle side).
std::vector<double> certify_nonzero(const VectorField& g);
std::vector<double> certify_off_ray(const VectorField& g);

} // namespace hf
