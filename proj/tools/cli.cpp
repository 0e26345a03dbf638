// Command-line front end. Flags are assembled into a JSON job, handed to the
// C API, and the resulting report is always written, pass or fail.

#include "hessfield.h"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

using json = nlohmann::ordered_json;

struct Options {
    std::string command;
    std::string domain = "grid";
    int dim = 2;
    int sphere_k = 2;
    int resolution = 4;
    std::string field = "random-hermitian";
    int n = 4;
    int support = -1;
    int pad = 2;
    std::uint64_t field_seed = 1;
    int iterations = 4;
    std::string q_mode = "rank2-traceless";
    std::string input;
    std::string output = ".";
    std::uint64_t seed = 0;
    double epsilon = 0.0; // 0 = module default
    int threads = 1;
    double tolerance_scale = 1.0;
};

int fail_io(const std::string& what) {
    std::cerr << "error: " << what << "\n";
    return HF_STATUS_IO;
}

int run(const Options& opt) {
    json job;
    job["command"] = opt.command;
    job["seed"] = opt.seed;
    if (opt.epsilon > 0.0) job["epsilon"] = opt.epsilon;
    job["tolerance_scale"] = opt.tolerance_scale;
    job["threads"] = opt.threads;

    if (opt.command == "verify") {
        if (opt.input.empty()) {
            std::cerr << "error: verify needs --input\n";
            return HF_STATUS_PARSE;
        }
        std::ifstream in(opt.input, std::ios::binary);
        if (!in) return fail_io("cannot open " + opt.input);
        std::ostringstream buf;
        buf << in.rdbuf();
        json rep = json::parse(buf.str(), nullptr, false);
        if (rep.is_discarded()) {
            std::cerr << "error: " << opt.input << " is not valid JSON\n";
            return HF_STATUS_PARSE;
        }
        job["report"] = rep;
    } else if (!opt.input.empty()) {
        std::ifstream in(opt.input, std::ios::binary);
        if (!in) return fail_io("cannot open " + opt.input);
        std::ostringstream buf;
        buf << in.rdbuf();
        json doc = json::parse(buf.str(), nullptr, false);
        if (doc.is_discarded()) {
            std::cerr << "error: " << opt.input << " is not valid JSON\n";
            return HF_STATUS_PARSE;
        }
        if (doc.contains("domain")) job["domain"] = doc["domain"];
        if (doc.contains("field")) job["field"] = doc["field"];
    } else {
        json dom;
        dom["builtin"] = opt.domain;
        if (opt.domain == "grid") {
            dom["dim"] = opt.dim;
        } else {
            dom["k"] = opt.sphere_k;
        }
        dom["resolution"] = opt.resolution;
        job["domain"] = dom;

        json field;
        field["builtin"] = opt.field;
        field["n"] = opt.n;
        field["seed"] = opt.field_seed;
        if (opt.field == "bott") field["pad"] = opt.pad;
        if (opt.support >= 0) field["support"] = opt.support;
        job["field"] = field;
    }
    if (opt.command == "operator-reduce") job["K"] = opt.iterations;
    if (opt.command == "struc") job["q_mode"] = opt.q_mode;

    hf_result* res = hf_run_job(job.dump().c_str());
    int status = hf_result_status(res);
    std::string report = hf_result_report(res);
    std::string message = hf_result_message(res);
    hf_result_free(res);

    std::error_code ec;
    std::filesystem::create_directories(opt.output, ec);
    std::string report_path = opt.output + "/report.json";
    {
        std::ofstream out(report_path, std::ios::binary);
        if (!out) return fail_io("cannot write " + report_path);
        out << report;
    }
    json parsed = json::parse(report, nullptr, false);
    if (!parsed.is_discarded() && parsed.contains("csv")) {
        std::ofstream csv(opt.output + "/separation.csv", std::ios::binary);
        if (!csv) return fail_io("cannot write " + opt.output + "/separation.csv");
        csv << parsed["csv"].get<std::string>();
    }

    if (status == HF_STATUS_OK)
        std::cout << opt.command << ": pass (" << report_path << ")\n";
    else
        std::cerr << opt.command << ": "
                  << (parsed.is_discarded() ? "fail" : parsed.value("status", "fail")) << " - "
                  << message << "\n";
    return status;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous Hessenberg reduction of matrix fields over meshes"};
    app.require_subcommand(1);

    Options opt;
    const char* commands[] = {"reduce",   "separate",        "struc",  "project-reduce",
                              "sections", "operator-reduce", "verify"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--input", opt.input, "field document or report to load");
        sub->add_option("--output", opt.output, "directory for report files");
        sub->add_option("--seed", opt.seed, "pipeline seed");
        sub->add_option("--epsilon", opt.epsilon, "perturbation budget");
        sub->add_option("--threads", opt.threads, "worker cap");
        sub->add_option("--tolerance-scale", opt.tolerance_scale, "scales check tolerances");
        sub->add_option("--domain", opt.domain, "builtin mesh: grid or sphere");
        sub->add_option("--dim", opt.dim, "grid dimension");
        sub->add_option("--sphere-k", opt.sphere_k, "sphere dimension");
        sub->add_option("--resolution", opt.resolution, "mesh resolution");
        sub->add_option("--field", opt.field,
                        "builtin field: bott, zero, random-hermitian, shift");
        sub->add_option("--n", opt.n, "matrix size");
        sub->add_option("--pad", opt.pad, "embed the bott field into this size");
        sub->add_option("--support", opt.support, "operator support bound");
        sub->add_option("--field-seed", opt.field_seed, "builtin field generator seed");
        sub->add_option("--iterations", opt.iterations, "operator-reduce step count");
        sub->add_option("--q-mode", opt.q_mode,
                        "struc coupling: rank1-positive, rank1-negative, rank2-traceless");
    }

    CLI11_PARSE(app, argc, argv);
    opt.command = app.get_subcommands().front()->get_name();
    try {
        return run(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return HF_STATUS_INVARIANT;
    }
}
