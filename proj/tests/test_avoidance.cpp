#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hessfield/avoidance.hpp"
#include "hessfield/domain.hpp"

#include <cmath>
#include <functional>
#include <limits>

using namespace hf;

namespace {

RVec vec2(double a, double b) {
    RVec v(2);
    v << a, b;
    return v;
}

RVec vec3(double a, double b, double c) {
    RVec v(3);
    v << a, b, c;
    return v;
}

// dense barycentric sampling, used as an independent lower-accuracy oracle
double sampled_min_norm(const std::vector<RVec>& verts, int steps) {
    double best = std::numeric_limits<double>::infinity();
    const int d1 = static_cast<int>(verts.size());
    std::vector<int> w(d1, 0);
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == d1 - 1) {
            w[pos] = left;
            RVec pt = RVec::Zero(verts[0].size());
            for (int i = 0; i < d1; ++i)
                pt += (static_cast<double>(w[i]) / steps) * verts[i];
            best = std::min(best, pt.norm());
            return;
        }
        for (int c = 0; c <= left; ++c) {
            w[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, steps);
    return best;
}

} // namespace

TEST_CASE("min norm over a simplex: closed forms") {
    auto [v1, b1] = min_norm_over_simplex({vec2(1.0, 0.0)});
    CHECK(v1 == doctest::Approx(1.0));

    auto [v2, b2] = min_norm_over_simplex({vec2(1.0, 0.0), vec2(0.0, 1.0)});
    CHECK(v2 == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(b2(0) == doctest::Approx(0.5));
    CHECK(b2(1) == doctest::Approx(0.5));

    auto [v3, b3] = min_norm_over_simplex({vec2(-1.0, 0.0), vec2(1.0, 0.0)});
    CHECK(v3 == doctest::Approx(0.0));

    // segment at height 1: minimum attained in the interior
    auto [v4, b4] = min_norm_over_simplex({vec2(1.0, 1.0), vec2(-1.0, 1.0)});
    CHECK(v4 == doctest::Approx(1.0));
}

TEST_CASE("min norm over a simplex matches dense sampling") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RVec> verts;
        int d1 = 2 + static_cast<int>(rng.next_u64() % 3);
        for (int i = 0; i < d1; ++i)
            verts.push_back(vec3(rng.symmetric(), rng.symmetric(), rng.symmetric()));
        double exact = min_norm_over_simplex(verts).first;
        double sampled = sampled_min_norm(verts, 40);
        CHECK(exact <= sampled + 1e-12);
        CHECK(sampled <= exact + 0.15); // sampling resolution slack
    }
}

TEST_CASE("distance from a simplex to the trailing ray") {
    CHECK(simplex_ray_distance({vec2(1.0, 0.0)}) == doctest::Approx(1.0));
    CHECK(simplex_ray_distance({vec2(-5.0, 0.0)}) == doctest::Approx(0.0));
    CHECK(simplex_ray_distance({vec2(-1.0, 1.0)}) == doctest::Approx(1.0));
    CHECK(simplex_ray_distance({vec2(-2.0, 1.0), vec2(3.0, 1.0)}) == doctest::Approx(1.0));
    // positive axis: nearest ray point is the origin
    CHECK(simplex_ray_distance({vec2(2.0, 0.0), vec2(3.0, 0.0)}) == doctest::Approx(2.0));
}

TEST_CASE("ray distance matches dense sampling") {
    Rng rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<RVec> verts;
        int d1 = 1 + static_cast<int>(rng.next_u64() % 3);
        for (int i = 0; i < d1; ++i)
            verts.push_back(vec3(rng.symmetric(), rng.symmetric(), rng.symmetric()));
        double exact = simplex_ray_distance(verts);
        // sample the simplex and the ray parameter
        double sampled = std::numeric_limits<double>::infinity();
        for (int ti = 0; ti <= 60; ++ti) {
            std::vector<RVec> shifted = verts;
            double t = 3.0 * ti / 60.0;
            for (auto& v : shifted)
                v(0) += t;
            sampled = std::min(sampled, sampled_min_norm(shifted, 30));
        }
        CHECK(exact <= sampled + 1e-12);
        CHECK(sampled <= exact + 0.2);
    }
}

TEST_CASE("avoid_zero clears a transversal zero crossing") {
    Domain dom = build_grid(1, 4);
    VectorField f;
    f.domain = &dom;
    f.m = 2;
    for (const auto& x : dom.vertices)
        f.values.push_back(vec2(x(0) - 0.5, 0.0));

    ToleranceField eps = ToleranceField::constant(dom, 0.1);
    auto [g, cert] = avoid_zero(f, eps, 42);
    CHECK(cert.global_margin > 0.0);
    CHECK(cert.retries >= 1); // the input itself passes through zero
    for (std::size_t v = 0; v < f.values.size(); ++v)
        CHECK((g.values[v] - f.values[v]).norm() < 0.1);
    // certificate matches an independent re-check
    auto margins = certify_nonzero(g);
    for (std::size_t s = 0; s < margins.size(); ++s)
        CHECK(margins[s] == doctest::Approx(cert.per_simplex[s]));

    auto [g2, cert2] = avoid_zero(f, eps, 42);
    for (std::size_t v = 0; v < f.values.size(); ++v)
        CHECK((g.values[v] - g2.values[v]).norm() == 0.0); // deterministic
    auto [g3, cert3] = avoid_zero(f, eps, 43);
    CHECK(cert3.global_margin > 0.0);
}

TEST_CASE("avoid_zero requires spare dimensions") {
    Domain dom = build_grid(2, 2);
    VectorField f;
    f.domain = &dom;
    f.m = 2;
    f.values.assign(dom.vertices.size(), vec2(1.0, 1.0));
    ToleranceField eps = ToleranceField::constant(dom, 0.1);
    try {
        avoid_zero(f, eps, 1);
        FAIL("expected a precondition error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::precondition);
    }
}

TEST_CASE("avoid_k_maps separates from moving targets") {
    Domain dom = build_grid(1, 4);
    VectorField f;
    f.domain = &dom;
    f.m = 2;
    for (const auto& x : dom.vertices)
        f.values.push_back(vec2(x(0), 0.0));
    VectorField t1 = f; // the field itself: distance zero, must perturb
    VectorField t2;
    t2.domain = &dom;
    t2.m = 2;
    t2.values.assign(dom.vertices.size(), vec2(0.0, 5.0));

    ToleranceField eps = ToleranceField::constant(dom, 0.05);
    auto [g, cert] = avoid_k_maps(f, {t1, t2}, eps, 7);
    CHECK(cert.global_margin > 0.0);
    CHECK(cert.retries >= 1);
    for (std::size_t v = 0; v < f.values.size(); ++v)
        CHECK((g.values[v] - f.values[v]).norm() < 0.05);
}

TEST_CASE("avoid_ray preserves norms") {
    Domain dom = build_grid(1, 4);
    VectorField f;
    f.domain = &dom;
    f.m = 3;
    Rng rng(31);
    for (std::size_t v = 0; v < dom.vertices.size(); ++v)
        f.values.push_back(5.0 * vec3(rng.symmetric(), rng.symmetric(), rng.symmetric()));

    ToleranceField eps = ToleranceField::constant(dom, 0.1);
    auto [g, cert] = avoid_ray(f, eps, 3);
    CHECK(cert.global_margin > 0.0);
    for (std::size_t v = 0; v < f.values.size(); ++v) {
        CHECK(g.values[v].norm() == doctest::Approx(f.values[v].norm()).epsilon(1e-12));
        CHECK((g.values[v] - f.values[v]).norm() < 0.1);
    }

    // constant unit vector on the first axis has margin exactly 1
    VectorField e1;
    e1.domain = &dom;
    e1.m = 3;
    e1.values.assign(dom.vertices.size(), vec3(1.0, 0.0, 0.0));
    auto [ge, ce] = avoid_ray(e1, eps, 5);
    CHECK(ce.retries == 0);
    CHECK(ce.global_margin == doctest::Approx(1.0));
}

TEST_CASE("avoid_ray pushes a field off the ray") {
    Domain dom = build_grid(1, 4);
    VectorField f;
    f.domain = &dom;
    f.m = 3;
    // sweeps through the forbidden ray at x = 0.5
    for (const auto& x : dom.vertices)
        f.values.push_back(vec3(-1.0, x(0) - 0.5, 0.0));
    ToleranceField eps = ToleranceField::constant(dom, 0.2);
    auto [g, cert] = avoid_ray(f, eps, 17);
    CHECK(cert.global_margin > 0.0);
    CHECK(cert.retries >= 1);
}

TEST_CASE("operator-space bump lands past the support bound") {
    Domain dom = build_grid(1, 2);
    ToleranceField eps = ToleranceField::constant(dom, 0.25);
    std::vector<CVec> f(dom.vertices.size(), CVec::Zero(6));
    for (std::size_t v = 0; v < f.size(); ++v) {
        f[v](0) = cplx(0.5, 0.5);
        f[v](1) = 1.0;
    }
    auto out = avoid_zero_operator(f, eps, 2);
    CHECK(out.bump_index == 2);
    CHECK(out.margin == doctest::Approx(0.25));
    for (std::size_t v = 0; v < f.size(); ++v) {
        CHECK(std::abs(out.values[v](2) - cplx(0.25, 0.0)) < 1e-15);
        CHECK((out.values[v] - f[v]).norm() == doctest::Approx(0.25));
    }
    CHECK_THROWS_AS(avoid_zero_operator(f, eps, 6), Error);
}
