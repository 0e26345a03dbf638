#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hessfield/domain.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <set>

using namespace hf;

namespace {

double simplex_volume(const Domain& dom, const std::vector<int>& simp) {
    int d = dom.dim;
    RMat edge(d, d);
    for (int j = 0; j < d; ++j)
        edge.col(j) = dom.vertices[simp[j + 1]] - dom.vertices[simp[0]];
    double fact = 1.0;
    for (int i = 2; i <= d; ++i)
        fact *= i;
    return std::abs(edge.determinant()) / fact;
}

} // namespace

TEST_CASE("grid counts and geometry") {
    for (int d = 0; d <= 3; ++d) {
        int r = (d == 3) ? 2 : 4;
        Domain dom = build_grid(d, r);
        dom.validate();
        std::size_t nv = 1;
        std::size_t ns = 1;
        for (int i = 0; i < d; ++i) {
            nv *= static_cast<std::size_t>(r + 1);
            ns *= static_cast<std::size_t>(r);
        }
        std::size_t fact = 1;
        for (int i = 2; i <= d; ++i)
            fact *= static_cast<std::size_t>(i);
        CHECK(dom.vertices.size() == nv);
        CHECK(dom.simplices.size() == ns * fact);
        for (const auto& s : dom.simplices)
            CHECK(static_cast<int>(s.size()) == d + 1);
        if (d >= 1) {
            double total = 0.0;
            for (const auto& s : dom.simplices)
                total += simplex_volume(dom, s);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("grid edges") {
    Domain line = build_grid(1, 4);
    CHECK(line.edges.size() == 4);
    Domain square = build_grid(2, 1);
    // unit square cut in two triangles: 4 boundary edges plus one diagonal
    CHECK(square.edges.size() == 5);
}

TEST_CASE("sphere mesh is on the unit sphere with the right topology") {
    Domain circle = build_sphere(1, 8);
    circle.validate();
    for (const auto& v : circle.vertices)
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // closed polygon: V = E
    CHECK(circle.vertices.size() == circle.edges.size());

    Domain sphere = build_sphere(2, 4);
    sphere.validate();
    for (const auto& v : sphere.vertices)
        CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-12));
    long V = static_cast<long>(sphere.vertices.size());
    long E = static_cast<long>(sphere.edges.size());
    long F = static_cast<long>(sphere.simplices.size());
    CHECK(V - E + F == 2);
    // no degenerate triangles
    for (const auto& s : sphere.simplices) {
        std::set<int> uniq(s.begin(), s.end());
        CHECK(uniq.size() == 3);
    }
}

TEST_CASE("evaluate interpolates affinely") {
    Domain dom = build_grid(1, 2);
    MatrixField f;
    f.domain = &dom;
    f.n = 2;
    for (std::size_t v = 0; v < dom.vertices.size(); ++v) {
        CMat m(2, 2);
        double t = dom.vertices[v](0);
        m << t, cplx(0.0, t), cplx(0.0, -t), 1.0 - t;
        f.values.push_back(m);
    }
    f.validate();

    RVec bary(2);
    bary << 1.0, 0.0;
    const auto& simp = dom.simplices[0];
    CMat at_vertex = evaluate(f, 0, bary);
    CHECK((at_vertex - f.values[simp[0]]).norm() == doctest::Approx(0.0));

    bary << 0.5, 0.5;
    CMat mid = evaluate(f, 0, bary);
    CMat avg = 0.5 * (f.values[simp[0]] + f.values[simp[1]]);
    CHECK((mid - avg).norm() == doctest::Approx(0.0).epsilon(1e-15));

    RVec bad(2);
    bad << 0.7, 0.7;
    CHECK_THROWS_AS(evaluate(f, 0, bad), Error);
}

TEST_CASE("continuity audit") {
    Domain dom = build_grid(1, 4);
    MatrixField f;
    f.domain = &dom;
    f.n = 2;
    f.values.assign(dom.vertices.size(), CMat::Identity(2, 2));
    CHECK(audit_continuity(f).max_edge_jump == doctest::Approx(0.0));

    // a single bumped vertex shows up as the worst jump
    f.values[2](0, 0) = 3.0;
    ContinuityAudit audit = audit_continuity(f);
    CHECK(audit.max_edge_jump == doctest::Approx(2.0));
}

TEST_CASE("tolerance field") {
    Domain dom = build_grid(1, 2);
    ToleranceField eps = ToleranceField::constant(dom, 0.1);
    CHECK(eps.min_value() == doctest::Approx(0.1));
    eps.values[1] = 0.05;
    CHECK(eps.min_value() == doctest::Approx(0.05));
    eps.values[1] = -1.0;
    CHECK_THROWS_AS(eps.validate(), Error);
}
