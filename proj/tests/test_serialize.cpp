#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hessfield/serialize.hpp"

#include <cstdio>
#include <functional>

using namespace hf;

namespace {

int error_code(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return static_cast<int>(e.code());
    }
    return 0;
}

MatrixField random_field(const Domain& dom, int n, std::uint64_t seed) {
    MatrixField f;
    f.domain = &dom;
    f.n = n;
    Rng rng(seed);
    for (std::size_t v = 0; v < dom.vertices.size(); ++v) f.values.push_back(rng.hermitian(n));
    return f;
}

} // namespace

TEST_CASE("field document round-trips byte-identically and bit-exactly") {
    Domain grid = build_grid(2, 3);
    MatrixField f = random_field(grid, 4, 99);
    std::string text = dump(field_to_json(f));
    FieldDocument doc = field_from_json(parse(text));
    std::string text2 = dump(field_to_json(doc.field));
    CHECK(text == text2);

    CHECK(doc.domain.dim == 2);
    CHECK(doc.domain.vertices.size() == grid.vertices.size());
    CHECK(doc.domain.edges == grid.edges);
    for (std::size_t v = 0; v < f.values.size(); ++v)
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(doc.field.values[v](i, j) == f.values[v](i, j)); // exact bits
}

TEST_CASE("floats dump in shortest round-trip form") {
    CHECK(ojson(0.1).dump() == "0.1");
    CHECK(ojson(1.0 / 3.0).dump() == "0.3333333333333333");
    CHECK(ojson(2.0).dump() == "2.0");
}

TEST_CASE("malformed input reports the parse code") {
    CHECK(error_code([] { parse("{ not json"); }) == 4);
    CHECK(error_code([] { field_from_json(parse("{}")); }) == 4);
    CHECK(error_code([] {
              field_from_json(parse(R"({"domain":{"vertices":[[0]],"simplices":[[0]],"dim":0},
                                       "field":{"n":2,"values":[[[1,0]]]}})"));
          }) == 4);
}

TEST_CASE("io failures report the io code") {
    CHECK(error_code([] { read_text("/nonexistent/nowhere.json"); }) == 5);
    CHECK(error_code([] { write_text("/nonexistent/nowhere.json", "x"); }) == 5);

    std::string path = "serialize_roundtrip_tmp.json";
    write_text(path, "{\"a\": 1}\n");
    CHECK(read_text(path) == "{\"a\": 1}\n");
    std::remove(path.c_str());
}

TEST_CASE("report serializers are deterministic") {
    AvoidanceCertificate c;
    c.global_margin = 0.125;
    c.seed = 42;
    c.retries = 3;
    c.per_simplex = {0.5, 0.25};
    std::string a = dump(certificate_to_json(c));
    std::string b = dump(certificate_to_json(c));
    CHECK(a == b);
    CHECK(dump(parse(a)) == a);

    SeparationReport r;
    r.eigenvalues = {RVec::Zero(2), RVec::Ones(2)};
    r.profile = {{1, 1}, {2}};
    r.distinct_count_min = 1;
    r.max_multiplicity = 2;
    r.min_gap = 0.0;
    std::string csv = separation_to_csv(r);
    CHECK(csv == "vertex,eig0,eig1,profile\n0,0.0,0.0,1|1\n1,1.0,1.0,2\n");
    CHECK(dump(separation_to_json(r)) == dump(parse(dump(separation_to_json(r)))));
}

TEST_CASE("matrix entries survive a text round-trip exactly") {
    Rng rng(5);
    CMat m = rng.complex_matrix(5);
    CMat back = matrix_from_json(parse(dump(matrix_to_json(m))), 5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) CHECK(back(i, j) == m(i, j));
}
