#include "hessfield.h"

#include "hessfield/serialize.hpp"

#include <cmath>
#include <new>
#include <string>
#include <utility>

namespace {

using hf::ojson;

const char* status_name(int status) {
    switch (status) {
        case HF_STATUS_OK: return "pass";
        case HF_STATUS_INVARIANT: return "invariant";
        case HF_STATUS_PRECONDITION: return "precondition";
        case HF_STATUS_PARSE: return "parse";
        case HF_STATUS_IO: return "io";
        default: return "unknown";
    }
}

hf::Domain make_domain(const ojson& spec) {
    if (spec.contains("builtin")) {
        std::string name = spec.at("builtin").get<std::string>();
        if (name == "grid")
            return hf::build_grid(spec.at("dim").get<int>(), spec.at("resolution").get<int>());
        if (name == "sphere")
            return hf::build_sphere(spec.at("k").get<int>(), spec.at("resolution").get<int>());
        throw hf::Error(hf::ErrorCode::parse, "unknown domain builtin: " + name);
    }
    return hf::domain_from_json(spec);
}

hf::MatrixField make_field(const hf::Domain& dom, const ojson& spec) {
    hf::MatrixField f;
    f.domain = &dom;
    if (spec.contains("builtin")) {
        std::string name = spec.at("builtin").get<std::string>();
        if (name == "bott") {
            int pad = spec.value("pad", 2);
            hf::MatrixField b = hf::bott_field(dom);
            f.n = pad;
            for (const hf::CMat& m : b.values) {
                hf::CMat big = hf::CMat::Zero(pad, pad);
                big.topLeftCorner(2, 2) = m;
                f.values.push_back(big);
            }
            return f;
        }
        int n = spec.value("n", 4);
        f.n = n;
        if (name == "zero") {
            f.values.assign(dom.vertices.size(), hf::CMat::Zero(n, n));
            return f;
        }
        if (name == "random-hermitian") {
            hf::Rng rng(spec.value("seed", std::uint64_t{1}));
            for (std::size_t v = 0; v < dom.vertices.size(); ++v)
                f.values.push_back(rng.hermitian(n));
            return f;
        }
        if (name == "shift") {
            int support = spec.value("support", n);
            hf::CMat s = hf::CMat::Zero(n, n);
            for (int i = 0; i + 1 < n && i + 1 < support; ++i) s(i + 1, i) = 1.0;
            f.values.assign(dom.vertices.size(), s);
            return f;
        }
        throw hf::Error(hf::ErrorCode::parse, "unknown field builtin: " + name);
    }
    f.n = spec.at("n").get<int>();
    for (const auto& m : spec.at("values"))
        f.values.push_back(hf::matrix_from_json(m, f.n));
    f.validate();
    return f;
}

hf::ToleranceField make_epsilon(const hf::Domain& dom, const ojson& job) {
    if (job.contains("epsilon") && job.at("epsilon").is_array()) {
        hf::ToleranceField eps;
        eps.domain = &dom;
        eps.values = job.at("epsilon").get<std::vector<double>>();
        eps.validate();
        return eps;
    }
    return hf::ToleranceField::constant(dom, job.value("epsilon", 0.1));
}

ojson run_reduce(const hf::Domain& dom, const ojson& job, std::uint64_t seed) {
    hf::MatrixField f = make_field(dom, job.at("field"));
    hf::ToleranceField eps = make_epsilon(dom, job);
    hf::ReductionResult res = hf::hessenberg_summary(f, eps, seed);
    res.check_invariants(f, eps);
    ojson body;
    body["dim"] = dom.dim;
    body["n"] = f.n;
    body["seed"] = seed;
    body["epsilon"] = job.value("epsilon", 0.1);
    body["input"] = hf::field_to_json(f);
    body["result"] = hf::reduction_to_json(res);
    return body;
}

ojson run_separate(const hf::Domain& dom, const ojson& job, std::uint64_t seed) {
    hf::MatrixField f = make_field(dom, job.at("field"));
    hf::ToleranceField eps = make_epsilon(dom, job);
    hf::require(dom.dim <= 4, "separate: domain dimension above 4 is unsupported");
    auto [g, report] =
        dom.dim <= 2 ? hf::separate_dim2(f, eps, seed) : hf::separate_dim4(f, eps, seed);
    ojson body;
    body["dim"] = dom.dim;
    body["n"] = f.n;
    body["seed"] = seed;
    body["separation"] = hf::separation_to_json(report);
    body["csv"] = hf::separation_to_csv(report);
    double pmax = 0.0;
    for (std::size_t v = 0; v < f.values.size(); ++v)
        pmax = std::max(pmax, hf::opnorm(g.values[v] - f.values[v]));
    body["perturbation_max"] = pmax;
    return body;
}

ojson run_struc(const hf::Domain& dom, const ojson& job, std::uint64_t seed) {
    hf::MatrixField f = make_field(dom, job.at("field"));
    hf::ToleranceField eps = make_epsilon(dom, job);
    std::string mode = job.value("q_mode", std::string("rank2-traceless"));
    hf::QMode qm;
    if (mode == "rank1-positive")
        qm = hf::QMode::rank1_positive;
    else if (mode == "rank1-negative")
        qm = hf::QMode::rank1_negative;
    else if (mode == "rank2-traceless")
        qm = hf::QMode::rank2_traceless;
    else
        throw hf::Error(hf::ErrorCode::parse, "unknown q_mode: " + mode);
    hf::StrucDecomposition sd = hf::struc_decompose(f, eps, qm, seed);
    sd.check_invariants();
    ojson body;
    body["dim"] = dom.dim;
    body["n"] = f.n;
    body["k"] = sd.k;
    body["c"] = sd.c;
    double mu_max = 0.0;
    for (double m : sd.mu) mu_max = std::max(mu_max, std::abs(m));
    body["mu_max"] = mu_max;
    body["norm_bound_ok"] = sd.norm_bound_ok;
    if (dom.dim <= 3) {
        hf::StrucLabels labels = hf::strucdim3_classify(sd.base);
        body["unsplit_count"] = labels.unsplit_count;
        body["labels_pass"] = labels.pass;
    }
    return body;
}

ojson descriptor_summary(const std::vector<hf::BHFormDescriptor>& ds, double tol) {
    bool all = true;
    double worst_offblock = 0.0;
    for (const auto& d : ds) {
        all = all && d.member(tol);
        worst_offblock = std::max(worst_offblock, d.offblock_max);
    }
    ojson j;
    j["all_member"] = all;
    j["worst_offblock"] = worst_offblock;
    return j;
}

ojson run_project_reduce(const hf::Domain& dom, const ojson& job, std::uint64_t seed) {
    hf::ProjectionField p;
    p.field = make_field(dom, job.at("field"));
    double eps = job.value("epsilon", -1.0);
    hf::ProjectionReduceResult res = hf::projection_reduce(p, seed, eps);
    ojson body;
    body["dim"] = dom.dim;
    body["n"] = p.field.n;
    body["k"] = res.k;
    body["epsilon_used"] = res.eps_used;
    body["min_spectral_gap"] = res.min_spectral_gap;
    body["max_conj_error"] = res.max_conj_error;
    body["min_rank"] = res.q.min_rank;
    body["descriptors"] = descriptor_summary(res.descriptors, res.classify_tol);
    body["q"] = hf::field_to_json(res.q.field);
    return body;
}

ojson run_sections(const hf::Domain& dom, const ojson& job, std::uint64_t seed) {
    hf::ProjectionField p;
    p.field = make_field(dom, job.at("field"));
    hf::SectionBundle bundle = hf::trivial_summand(p, seed);
    ojson body;
    body["dim"] = dom.dim;
    body["n"] = p.field.n;
    body["bundle"] = hf::sections_to_json(bundle);
    return body;
}

ojson run_operator_reduce(const hf::Domain& dom, const ojson& job, std::uint64_t seed) {
    hf::OperatorField f;
    f.field = make_field(dom, job.at("field"));
    f.support = job.at("field").value("support", f.field.n);
    hf::ToleranceField eps = make_epsilon(dom, job);
    int K = job.at("K").get<int>();
    hf::OperatorReduceResult res = hf::operator_reduce(f, eps, K, seed);
    res.trace.check_invariants(eps);
    ojson body;
    body["dim"] = dom.dim;
    body["N"] = f.field.n;
    body["support"] = f.support;
    body["K"] = K;
    body["trace"] = hf::trace_to_json(res.trace);
    body["freeze_max"] = hf::column_freeze_check(res.trace);
    return body;
}

// Recomputes every invariant of a stored reduce report from its raw data.
ojson run_verify(const ojson& job) {
    const ojson& rep = job.at("report");
    if (rep.value("command", std::string()) != "reduce")
        throw hf::Error(hf::ErrorCode::precondition,
                        "verify: only reduce reports are supported");
    double ts = job.value("tolerance_scale", 1.0);
    hf::FieldDocument doc = hf::field_from_json(rep.at("input"));
    const ojson& result = rep.at("result");
    int n = doc.field.n;
    int k = result.at("k").get<int>();
    double epsilon = rep.at("epsilon").get<double>();

    ojson violations = ojson::array();
    auto check = [&](std::size_t v, const char* what, double value, double bound) {
        if (value > bound) {
            ojson item;
            item["vertex"] = v;
            item["check"] = what;
            item["value"] = value;
            item["bound"] = bound;
            violations.push_back(item);
        }
    };
    hf::CMat id = hf::CMat::Identity(n, n);
    for (std::size_t v = 0; v < doc.field.values.size(); ++v) {
        hf::CMat g = hf::matrix_from_json(result.at("g").at(v), n);
        hf::CMat u = hf::matrix_from_json(result.at("u").at(v), n);
        hf::CMat h = hf::matrix_from_json(result.at("h").at(v), n);
        check(v, "unitary", hf::opnorm(u * u.adjoint() - id), 1e-10 * ts);
        hf::CMat dev = g - doc.field.values[v];
        check(v, "hermitian_deviation", hf::opnorm(dev - dev.adjoint()), 1e-10 * ts);
        check(v, "conjugation", hf::opnorm(h - u * g * u.adjoint()),
              1e-10 * (1.0 + hf::opnorm(g)) * ts);
        check(v, "budget", hf::opnorm(dev), epsilon * ts);
        hf::HFormDescriptor d = hf::classify_H(h, k);
        check(v, "column_form", d.member(hf::default_tol_zero(h) * ts, hf::kDefaultTolPos)
                                    ? 0.0
                                    : 1.0,
              0.5);
    }
    ojson body;
    body["tolerance_scale"] = ts;
    body["violations"] = violations;
    if (!violations.empty())
        throw hf::Error(hf::ErrorCode::invariant,
                        "verify: " + std::to_string(violations.size()) +
                            " violation(s); first at vertex " +
                            violations[0]["vertex"].dump() + " (" +
                            violations[0]["check"].get<std::string>() + ")");
    return body;
}

struct JobOutcome {
    int status = HF_STATUS_OK;
    std::string report;
    std::string message;
};

JobOutcome run_job_text(const char* text) {
    JobOutcome out;
    ojson report;
    std::string command = "unknown";
    try {
        ojson job = hf::parse(text == nullptr ? "" : text);
        command = job.at("command").get<std::string>();
        report["command"] = command;
        std::uint64_t seed = job.value("seed", std::uint64_t{0});
        ojson body;
        if (command == "verify") {
            body = run_verify(job);
        } else {
            hf::Domain dom = make_domain(job.at("domain"));
            if (command == "reduce")
                body = run_reduce(dom, job, seed);
            else if (command == "separate")
                body = run_separate(dom, job, seed);
            else if (command == "struc")
                body = run_struc(dom, job, seed);
            else if (command == "project-reduce")
                body = run_project_reduce(dom, job, seed);
            else if (command == "sections")
                body = run_sections(dom, job, seed);
            else if (command == "operator-reduce")
                body = run_operator_reduce(dom, job, seed);
            else
                throw hf::Error(hf::ErrorCode::parse, "unknown command: " + command);
        }
        report["status"] = status_name(HF_STATUS_OK);
        for (auto& [key, value] : body.items()) report[key] = value;
    } catch (const hf::Error& e) {
        out.status = static_cast<int>(e.code());
        out.message = e.what();
    } catch (const ojson::exception& e) {
        out.status = HF_STATUS_PARSE;
        out.message = e.what();
    } catch (const std::exception& e) {
        out.status = HF_STATUS_INVARIANT;
        out.message = e.what();
    }
    if (out.status != HF_STATUS_OK) {
        ojson failed;
        failed["command"] = command;
        failed["status"] = status_name(out.status);
        failed["error"] = out.message;
        report = failed;
    }
    out.report = hf::dump(report);
    return out;
}

} // namespace

struct hf_result {
    JobOutcome outcome;
};

extern "C" {

int hf_abi_version(void) { return HF_ABI_VERSION; }

hf_result* hf_run_job(const char* job_json) {
    auto* r = new (std::nothrow) hf_result;
    if (r == nullptr) return nullptr;
    try {
        r->outcome = run_job_text(job_json);
    } catch (...) {
        r->outcome.status = HF_STATUS_INVARIANT;
        r->outcome.message = "internal error";
        r->outcome.report = "{\"status\": \"invariant\"}\n";
    }
    return r;
}

int hf_result_status(const hf_result* r) { return r == nullptr ? HF_STATUS_IO : r->outcome.status; }

const char* hf_result_report(const hf_result* r) {
    return r == nullptr ? "" : r->outcome.report.c_str();
}

const char* hf_result_message(const hf_result* r) {
    return r == nullptr ? "" : r->outcome.message.c_str();
}

void hf_result_free(hf_result* r) { delete r; }

} // extern "C"
