#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hf {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Error taxonomy mirrored by the C API / CLI exit codes.
enum class ErrorCode {
    precondition = 3,
    invariant = 2,
    parse = 4,
    io = 5,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw Error(ErrorCode::precondition, what);
}

// Operator (spectral) norm.
inline double opnorm(const CMat& m) {
    if (m.size() == 0) return 0.0;
    return m.operatorNorm();
}

// Deterministic seeded generator. Doubles are derived from the raw 64-bit
// stream with a fixed mapping so runs are reproducible across platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [-1, 1]
    double symmetric() { return 2.0 * uniform() - 1.0; }

    double gaussian() {
        // Box-Muller, cached second value.
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // uniform point in the closed ball of given radius in R^m
    RVec in_ball(int m, double radius) {
        RVec dir(m);
        for (int i = 0; i < m; ++i) dir[i] = gaussian();
        double nrm = dir.norm();
        if (nrm <= 1e-300) return RVec::Zero(m);
        double r = radius * std::pow(uniform(), 1.0 / m);
        return dir * (r / nrm);
    }

    // random Hermitian with entries built from [-1,1] uniforms, then symmetrized
    CMat hermitian(int n) {
        CMat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = cplx(symmetric(), symmetric());
        return 0.5 * (a + a.adjoint());
    }

    CMat complex_matrix(int n) {
        CMat a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = cplx(symmetric(), symmetric());
        return a;
    }

  private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace hf
