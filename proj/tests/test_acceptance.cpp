// End-to-end acceptance gate: ten numbered criteria, one pass/fail line each.

#include "hessfield.h"
#include "hessfield/operators.hpp"
#include "hessfield/projections.hpp"
#include "hessfield/serialize.hpp"
#include "hessfield/spectra.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

using namespace hf;

namespace {

int failures = 0;

void criterion(int idx, const std::string& name, const std::function<void()>& body) {
    try {
        body();
        std::printf("criterion %2d (%s): pass\n", idx, name.c_str());
    } catch (const std::exception& e) {
        std::printf("criterion %2d (%s): FAIL - %s\n", idx, name.c_str(), e.what());
        ++failures;
    }
    std::fflush(stdout);
}

void expect(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error(what);
}

MatrixField random_hermitian_field(const Domain& dom, int n, std::uint64_t seed) {
    MatrixField f;
    f.domain = &dom;
    f.n = n;
    Rng rng(seed);
    for (std::size_t v = 0; v < dom.vertices.size(); ++v) f.values.push_back(rng.hermitian(n));
    return f;
}

ProjectionField padded_bott(const Domain& dom, int pad, bool doubled) {
    MatrixField b = bott_field(dom);
    ProjectionField p;
    p.field.domain = &dom;
    p.field.n = pad;
    for (const CMat& m : b.values) {
        CMat big = CMat::Zero(pad, pad);
        big.topLeftCorner(2, 2) = m;
        if (doubled) big.bottomRightCorner(2, 2) = m;
        p.field.values.push_back(big);
    }
    return p;
}

CMat random_in_column_class(Rng& rng, int n, int k, bool herm) {
    CMat m = herm ? rng.hermitian(n) : rng.complex_matrix(n);
    for (int j = 0; j < k; ++j)
        for (int i = j + 2; i < n; ++i) {
            m(i, j) = 0.0;
            if (herm) m(j, i) = 0.0;
        }
    for (int j = 0; j < k && j + 1 < n; ++j) {
        double v = 0.2 + rng.uniform();
        m(j + 1, j) = v;
        if (herm) m(j, j + 1) = v;
    }
    return m;
}

void c1_summary() {
    const int corner[] = {0, 0, 2, 2, 3};
    for (int d = 0; d <= 4; ++d) {
        Domain dom = build_grid(d, 4);
        ToleranceField eps = ToleranceField::constant(dom, 0.1);
        MatrixField f = random_hermitian_field(dom, 6, 900 + d);
        ReductionResult res = hessenberg_summary(f, eps, 17 + d);
        expect(res.c == corner[d], "corner size mismatch at d=" + std::to_string(d));
        expect(res.k_achieved == 6 - corner[d], "k mismatch at d=" + std::to_string(d));
        for (std::size_t v = 0; v < dom.vertices.size(); ++v) {
            const CMat& h = res.h.values[v];
            expect(classify_H(h, res.k_achieved).member(default_tol_zero(h), kDefaultTolPos),
                   "column-class membership failed");
            expect(opnorm(res.g.values[v] - f.values[v]) < 0.1, "budget exceeded");
            CMat dev = res.g.values[v] - f.values[v];
            expect(opnorm(dev - dev.adjoint()) <= 1e-12, "perturbation not Hermitian");
            expect(opnorm(res.u.values[v] * res.u.values[v].adjoint() -
                          CMat::Identity(6, 6)) <= 1e-10,
                   "unitary drift");
        }
    }
}

void c2_multiplicity() {
    Rng rng(41);
    for (int k = 0; k <= 8; ++k)
        for (int rep = 0; rep < 200; ++rep) {
            CMat x = random_in_column_class(rng, 8, k, false);
            MultiplicityReport r = multiplicity_bounds_check(x, k);
            expect(r.pass_max, "multiplicity bound violated (general)");
            CMat xh = random_in_column_class(rng, 8, k, true);
            MultiplicityReport rh = multiplicity_bounds_check(xh, k);
            expect(rh.hermitian && rh.pass_max && rh.pass_count,
                   "cluster bound violated (Hermitian)");
        }
}

void c3_sturm() {
    Rng rng(7);
    for (int rep = 0; rep < 100; ++rep) {
        int n = 2 + static_cast<int>(rng.uniform() * 7);
        CMat x = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i) x(i, i) = 2.0 * rng.symmetric();
        for (int i = 0; i + 1 < n; ++i) {
            double b = 0.1 + rng.uniform();
            x(i + 1, i) = b;
            x(i, i + 1) = b;
        }
        SturmCheck chk = sturm_recurrence_check(x, n);
        expect(chk.pass, "recurrence residual too large");
    }
    for (int rep = 0; rep < 100; ++rep) {
        CMat x = rng.hermitian(8);
        expect(interlacing_check(x) <= 1e-9 * (1.0 + opnorm(x)), "interlacing violated");
    }
}

void c4_separation_dim2() {
    Domain sph = build_sphere(2, 8);
    ToleranceField eps = ToleranceField::constant(sph, 0.1);
    MatrixField bott = bott_field(sph);
    auto [gb, rb] = separate_dim2(bott, eps, 19);
    expect(rb.distinct_count_min == 2 && rb.min_gap > 0.0, "Bott field not separated");
    for (std::size_t v = 0; v < sph.vertices.size(); ++v)
        expect(opnorm(gb.values[v] - bott.values[v]) < 0.1, "Bott budget exceeded");

    Rng rng(3);
    Domain grid = build_grid(2, 4);
    ToleranceField ge = ToleranceField::constant(grid, 0.1);
    for (int rep = 0; rep < 20; ++rep) {
        int n = 2 + static_cast<int>(rng.uniform() * 4);
        MatrixField f = random_hermitian_field(grid, n, 5000 + rep);
        auto [g, r] = separate_dim2(f, ge, 100 + rep);
        expect(r.distinct_count_min == n && r.min_gap > 0.0, "not fully separated");
        for (std::size_t v = 0; v < grid.vertices.size(); ++v)
            expect(opnorm(g.values[v] - f.values[v]) < 0.1, "budget exceeded");
    }
}

void c5_separation_dim4() {
    for (int d : {3, 4}) {
        Domain grid = build_grid(d, d == 3 ? 2 : 1);
        ToleranceField eps = ToleranceField::constant(grid, 0.1);
        for (int rep = 0; rep < 20; ++rep) {
            MatrixField f = random_hermitian_field(grid, 6, 7000 + 100 * d + rep);
            auto [g, r] = separate_dim4(f, eps, 200 + rep);
            expect(r.distinct_count_min >= 5, "fewer than n-1 distinct eigenvalues");
            expect(r.max_multiplicity <= 2, "cluster of size above 2");
            for (const auto& profile : r.profile) {
                int pairs = 0;
                for (int c : profile)
                    if (c >= 2) ++pairs;
                expect(pairs <= 1, "more than one paired cluster");
            }
        }
    }
}

void c6_projection_pipeline() {
    Domain sph = build_sphere(2, 8);
    ProjectionField p = padded_bott(sph, 4, false);
    double eps = 0.9 / (576.0 * 64.0);
    ProjectionReduceResult res = projection_reduce(p, 29, eps);
    expect(res.k == 2, "wrong block split");
    expect(res.max_conj_error <= 1e-8, "conjugation drift above 1e-8");
    expect(res.min_spectral_gap >= 0.1, "spectral gap below 0.1");
    for (std::size_t v = 0; v < sph.vertices.size(); ++v) {
        expect(res.descriptors[v].member(res.classify_tol), "block form not certified");
        expect(res.q.ranks[v] == 1, "rank not preserved");
    }
}

void c7_trivial_summand() {
    Domain sph = build_sphere(2, 8);
    ProjectionField p = padded_bott(sph, 4, true);
    SectionBundle bundle = trivial_summand(p, 31);
    expect(bundle.sections.size() == 1, "expected exactly one section");
    for (const CVec& s : bundle.sections[0])
        expect(s.norm() >= 1.0 / std::sqrt(2.0) - 1e-9, "section norm below threshold");
    bundle.check_invariants(p); // column-space membership within 1e-9

    ProjectionField rank1 = padded_bott(sph, 3, false);
    int code = 0;
    try {
        trivial_summand(rank1, 31);
    } catch (const Error& e) {
        code = static_cast<int>(e.code());
    }
    expect(code == 3, "rank-1 input must fail the precondition");
}

void c8_operator_fields() {
    Domain circle = build_sphere(1, 16);
    int N = 32, s = 8, K = 10;
    OperatorField f;
    f.field.domain = &circle;
    f.field.n = N;
    f.support = s;
    Rng rng(59);
    for (std::size_t v = 0; v < circle.vertices.size(); ++v) {
        CMat m = CMat::Zero(N, N);
        m.topLeftCorner(s, s) = rng.hermitian(s);
        f.field.values.push_back(m);
    }
    ToleranceField eps = ToleranceField::constant(circle, 0.1);
    OperatorReduceResult res = operator_reduce(f, eps, K, 61);
    res.trace.check_invariants(eps); // per-step budget, Hermitian, rank <= 2
    expect(column_freeze_check(res.trace) <= 1e-10, "column freeze violated");
    for (std::size_t v = 0; v < circle.vertices.size(); ++v) {
        const CMat& h = res.h.values[v];
        for (int j = 0; j < K - 1; ++j) {
            expect(h(j + 1, j).real() > 0.0, "subdiagonal not positive");
            for (int i = j + 2; i < N; ++i)
                expect(std::abs(h(i, j)) <= 1e-10, "column not Hessenberg");
        }
        expect(opnorm(res.g.values[v] - f.field.values[v]) < 0.1, "total budget exceeded");
    }
}

void c9_avoidance_soundness() {
    Domain grid = build_grid(2, 3);
    ToleranceField eps = ToleranceField::constant(grid, 0.05);
    Rng rng(83);
    for (int rep = 0; rep < 50; ++rep) {
        VectorField f;
        f.domain = &grid;
        f.m = 3;
        for (std::size_t v = 0; v < grid.vertices.size(); ++v) {
            RVec x(3);
            for (int i = 0; i < 3; ++i) x[i] = rng.symmetric();
            f.values.push_back(x);
        }
        auto [g, cert] = avoid_zero(f, eps, 400 + rep);
        auto margins = certify_nonzero(g);
        double oracle = *std::min_element(margins.begin(), margins.end());
        expect(std::abs(oracle - cert.global_margin) <= 1e-12, "avoid_zero margin mismatch");

        VectorField f4;
        f4.domain = &grid;
        f4.m = 4; // the direction sphere must have dimension above the mesh
        for (std::size_t v = 0; v < grid.vertices.size(); ++v) {
            RVec x(4);
            for (int i = 0; i < 4; ++i) x[i] = rng.symmetric();
            f4.values.push_back(x);
        }
        auto [gr, certr] = avoid_ray(f4, eps, 800 + rep);
        auto ray = certify_off_ray(gr);
        double oracler = *std::min_element(ray.begin(), ray.end());
        expect(std::abs(oracler - certr.global_margin) <= 1e-12, "avoid_ray margin mismatch");
    }
    // hypothesis violation: target dimension not above the mesh dimension
    for (int m = 1; m <= 2; ++m) {
        VectorField f;
        f.domain = &grid;
        f.m = m;
        f.values.assign(grid.vertices.size(), RVec::Ones(m));
        int code = 0;
        try {
            avoid_zero(f, eps, 1);
        } catch (const Error& e) {
            code = static_cast<int>(e.code());
        }
        expect(code == 3, "dimension violation must error, not certify");
    }
}

void c10_determinism_roundtrip() {
    const char* job = R"({"command":"reduce","seed":5,"epsilon":0.1,
        "domain":{"builtin":"grid","dim":2,"resolution":2},
        "field":{"builtin":"random-hermitian","n":4,"seed":9}})";
    hf_result* a = hf_run_job(job);
    hf_result* b = hf_run_job(job);
    expect(hf_result_status(a) == 0 && hf_result_status(b) == 0, "job failed");
    std::string ra = hf_result_report(a), rb = hf_result_report(b);
    hf_result_free(a);
    hf_result_free(b);
    expect(ra == rb, "repeated job not byte-identical");
    expect(dump(parse(ra)) == ra, "report round-trip not byte-identical");

    Domain grid = build_grid(2, 2);
    MatrixField f = random_hermitian_field(grid, 4, 9);
    std::string text = dump(field_to_json(f));
    FieldDocument doc = field_from_json(parse(text));
    expect(dump(field_to_json(doc.field)) == text, "field round-trip not byte-identical");
}

} // namespace

int main() {
    criterion(1, "column reduction by dimension", c1_summary);
    criterion(2, "multiplicity bounds", c2_multiplicity);
    criterion(3, "three-term recurrence and interlacing", c3_sturm);
    criterion(4, "full separation through dimension 2", c4_separation_dim2);
    criterion(5, "near separation through dimension 4", c5_separation_dim4);
    criterion(6, "projection block pipeline", c6_projection_pipeline);
    criterion(7, "section extraction", c7_trivial_summand);
    criterion(8, "truncated operator reduction", c8_operator_fields);
    criterion(9, "avoidance soundness", c9_avoidance_soundness);
    criterion(10, "determinism and round-trip", c10_determinism_roundtrip);
    if (failures != 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
