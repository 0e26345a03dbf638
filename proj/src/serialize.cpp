#include "hessfield/serialize.hpp"

#include <fstream>
#include <sstream>

namespace hf {

ojson domain_to_json(const Domain& d) {
    ojson j;
    j["vertices"] = ojson::array();
    for (const RVec& v : d.vertices) {
        ojson row = ojson::array();
        for (int i = 0; i < v.size(); ++i) row.push_back(v[i]);
        j["vertices"].push_back(row);
    }
    j["simplices"] = d.simplices;
    j["dim"] = d.dim;
    return j;
}

Domain domain_from_json(const ojson& j) {
    Domain d;
    try {
        for (const auto& row : j.at("vertices")) {
            RVec v(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) v[i] = row[i].get<double>();
            d.vertices.push_back(v);
        }
        d.simplices = j.at("simplices").get<std::vector<std::vector<int>>>();
        d.dim = j.at("dim").get<int>();
    } catch (const ojson::exception& e) {
        throw Error(ErrorCode::parse, std::string("domain: ") + e.what());
    }
    d.derive_edges();
    d.validate();
    return d;
}

ojson matrix_to_json(const CMat& m) {
    ojson entries = ojson::array();
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            entries.push_back(ojson::array({m(i, j).real(), m(i, j).imag()}));
    return entries;
}

CMat matrix_from_json(const ojson& j, int n) {
    try {
        if (static_cast<int>(j.size()) != n * n)
            throw Error(ErrorCode::parse, "matrix: entry count mismatch");
        CMat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const auto& e = j.at(i * n + k);
                m(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
            }
        return m;
    } catch (const ojson::exception& e) {
        throw Error(ErrorCode::parse, std::string("matrix: ") + e.what());
    }
}

ojson field_to_json(const MatrixField& f) {
    ojson j;
    j["domain"] = domain_to_json(*f.domain);
    j["field"]["n"] = f.n;
    j["field"]["values"] = ojson::array();
    for (const CMat& m : f.values) j["field"]["values"].push_back(matrix_to_json(m));
    return j;
}

FieldDocument field_from_json(const ojson& j) {
    FieldDocument doc;
    doc.domain = domain_from_json(j.is_object() && j.contains("domain") ? j.at("domain")
                                                                        : ojson::object());
    try {
        const auto& f = j.at("field");
        doc.field.n = f.at("n").get<int>();
        for (const auto& m : f.at("values"))
            doc.field.values.push_back(matrix_from_json(m, doc.field.n));
    } catch (const ojson::exception& e) {
        throw Error(ErrorCode::parse, std::string("field: ") + e.what());
    }
    doc.field.domain = &doc.domain;
    doc.field.validate();
    return doc;
}

ojson certificate_to_json(const AvoidanceCertificate& c) {
    ojson j;
    j["global_margin"] = c.global_margin;
    j["seed"] = c.seed;
    j["retries"] = c.retries;
    j["per_simplex"] = c.per_simplex;
    return j;
}

ojson audit_to_json(const ContinuityAudit& a) {
    ojson j;
    j["max_edge_jump"] = a.max_edge_jump;
    j["worst_edge"] = a.worst_edge;
    return j;
}

ojson reduction_to_json(const ReductionResult& r) {
    ojson j;
    j["k"] = r.k_achieved;
    j["c"] = r.c;
    j["perturbation_max"] = r.perturbation_max;
    j["u_audit"] = audit_to_json(r.u_audit);
    j["h_audit"] = audit_to_json(r.h_audit);
    j["certificates"] = ojson::array();
    for (const auto& c : r.certificates) j["certificates"].push_back(certificate_to_json(c));
    j["g"] = ojson::array();
    j["u"] = ojson::array();
    j["h"] = ojson::array();
    for (const CMat& m : r.g.values) j["g"].push_back(matrix_to_json(m));
    for (const CMat& m : r.u.values) j["u"].push_back(matrix_to_json(m));
    for (const CMat& m : r.h.values) j["h"].push_back(matrix_to_json(m));
    return j;
}

ojson separation_to_json(const SeparationReport& r) {
    ojson j;
    j["distinct_count_min"] = r.distinct_count_min;
    j["max_multiplicity"] = r.max_multiplicity;
    j["min_gap"] = r.min_gap;
    j["eigenvalues"] = ojson::array();
    for (const RVec& v : r.eigenvalues) {
        ojson row = ojson::array();
        for (int i = 0; i < v.size(); ++i) row.push_back(v[i]);
        j["eigenvalues"].push_back(row);
    }
    j["profile"] = r.profile;
    return j;
}

std::string separation_to_csv(const SeparationReport& r) {
    std::ostringstream out;
    out << "vertex";
    int n = r.eigenvalues.empty() ? 0 : static_cast<int>(r.eigenvalues[0].size());
    for (int i = 0; i < n; ++i) out << ",eig" << i;
    out << ",profile\n";
    for (std::size_t v = 0; v < r.eigenvalues.size(); ++v) {
        out << v;
        for (int i = 0; i < n; ++i) out << "," << ojson(r.eigenvalues[v][i]).dump();
        out << ",";
        for (std::size_t i = 0; i < r.profile[v].size(); ++i) {
            if (i) out << "|";
            out << r.profile[v][i];
        }
        out << "\n";
    }
    return out.str();
}

ojson trace_to_json(const IterationTrace& t) {
    ojson j;
    j["N"] = t.N;
    j["K"] = t.K;
    j["step_budget"] = t.step_budget;
    j["step_perturbation"] = t.step_perturbation;
    j["bump_used"] = t.bump_used;
    ojson freeze = ojson::array();
    for (int k = 0; k < t.freeze.rows(); ++k) {
        ojson row = ojson::array();
        for (int l = 0; l < t.freeze.cols(); ++l) row.push_back(t.freeze(k, l));
        freeze.push_back(row);
    }
    j["freeze"] = freeze;
    return j;
}

ojson sections_to_json(const SectionBundle& b) {
    ojson j;
    j["count"] = b.sections.size();
    j["gamma"] = b.gamma;
    j["b"] = b.b;
    j["independence_margin"] = b.independence_margin;
    j["sections"] = ojson::array();
    for (const auto& sec : b.sections) {
        ojson per_vertex = ojson::array();
        for (const CVec& s : sec) {
            ojson row = ojson::array();
            for (int i = 0; i < s.size(); ++i)
                row.push_back(ojson::array({s[i].real(), s[i].imag()}));
            per_vertex.push_back(row);
        }
        j["sections"].push_back(per_vertex);
    }
    return j;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson parse(const std::string& text) {
    try {
        return ojson::parse(text);
    } catch (const ojson::exception& e) {
        throw Error(ErrorCode::parse, e.what());
    }
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error(ErrorCode::io, "read failed: " + path);
    return buf.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
    out << text;
    out.flush();
    if (!out) throw Error(ErrorCode::io, "write failed: " + path);
}

} // namespace hf
