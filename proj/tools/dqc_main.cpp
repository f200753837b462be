// dqc: command-line front end for the distribution pipeline.

#include "dqc/bench.hpp"
#include "dqc/builder.hpp"
#include "dqc/cost.hpp"
#include "dqc/error.hpp"
#include "dqc/refiners.hpp"
#include "dqc/verifier.hpp"
#include "dqc/workflows.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dqc::ParseError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(out);
    if (!f) throw dqc::ParseError("cannot write " + out);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("dqc");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* lvl = std::getenv("DQC_LOG")) spdlog::set_level(spdlog::level::from_str(lvl));
}

std::shared_ptr<const dqc::IndexedCircuit> load_indexed(const std::string& path) {
    return dqc::index_circuit(dqc::rebase(dqc::load_circuit(path)));
}

// Distribution + built circuit + stats, verified unless told otherwise.
json package(const dqc::Distribution& d, const dqc::DistributedCircuit& built, bool verify, std::uint64_t seed) {
    const dqc::BuildStats st = dqc::stats(built);
    json out;
    out["distribution"] = json::parse(dqc::distribution_to_json(d, built.ebit_count));
    out["distributed"] = json::parse(dqc::distributed_to_json(built));
    out["stats"] = json::parse(dqc::stats_to_json(st, built.module_names));
    out["total_cost"] = dqc::total_cost(d);
    if (!verify) {
        out["verified"] = "skipped";
    } else if (dqc::branch_wires(built) > dqc::kMaxSimQubits) {
        spdlog::warn("distributed circuit needs {} simulator wires; skipping verification", dqc::branch_wires(built));
        out["verified"] = "too-large";
    } else {
        dqc::VerifyOptions vo;
        vo.seed = seed;
        dqc::require_equivalent(d.circuit(), built, vo);
        out["verified"] = true;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Distributed quantum circuit compiler"};
    app.require_subcommand(1);

    std::string circuit_path, network_path, out, dist_path, original, distributed, config, passes = "dtype-n,dtype-i";
    std::string workflow = "embed-steiner-detach", cls = "cz_fraction", kind = "homogeneous", qasm_out;
    std::uint64_t seed = 0;
    int anneal_iters = 10000, rounds = 20, repeat = 1, jobs = 1, qubits = 4, layers = 0, modules = 2, link = -2;
    double p = 0.5;
    bool no_verify = false;

    auto* rebase_cmd = app.add_subcommand("rebase", "Rewrite a circuit into H, Rz, CRz");
    rebase_cmd->add_option("--circuit", circuit_path, "Circuit (.json or .qasm)")->required()->check(CLI::ExistingFile);
    rebase_cmd->add_option("--out", out, "Output file (default stdout)");

    auto* dist_cmd = app.add_subcommand("distribute", "Distribute a circuit over a network");
    dist_cmd->add_option("--workflow", workflow, "Workflow name")->default_val(workflow);
    dist_cmd->add_option("--circuit", circuit_path)->required()->check(CLI::ExistingFile);
    dist_cmd->add_option("--network", network_path)->required()->check(CLI::ExistingFile);
    dist_cmd->add_option("--seed", seed);
    dist_cmd->add_option("--anneal-iters", anneal_iters)->check(CLI::NonNegativeNumber);
    dist_cmd->add_option("--rounds", rounds)->check(CLI::NonNegativeNumber);
    dist_cmd->add_flag("--no-verify", no_verify);
    dist_cmd->add_option("--qasm", qasm_out, "Also write the distributed circuit as OpenQASM");
    dist_cmd->add_option("--out", out);

    auto* refine_cmd = app.add_subcommand("refine", "Apply refinement passes to a distribution");
    refine_cmd->add_option("--circuit", circuit_path)->required()->check(CLI::ExistingFile);
    refine_cmd->add_option("--network", network_path)->required()->check(CLI::ExistingFile);
    refine_cmd->add_option("--distribution", dist_path)->required()->check(CLI::ExistingFile);
    refine_cmd->add_option("--passes", passes, "Comma-separated: detached, eager-h, dtype-n, dtype-i")
        ->default_val(passes);
    refine_cmd->add_option("--repeat", repeat)->check(CLI::NonNegativeNumber);
    refine_cmd->add_option("--seed", seed);
    refine_cmd->add_flag("--no-verify", no_verify);
    refine_cmd->add_option("--out", out);

    auto* cost_cmd = app.add_subcommand("cost", "Ebit cost of a distribution");
    cost_cmd->add_option("--circuit", circuit_path)->required()->check(CLI::ExistingFile);
    cost_cmd->add_option("--network", network_path)->required()->check(CLI::ExistingFile);
    cost_cmd->add_option("--distribution", dist_path)->required()->check(CLI::ExistingFile);
    cost_cmd->add_option("--out", out);

    auto* verify_cmd = app.add_subcommand("verify", "Check a distributed circuit against the original");
    verify_cmd->add_option("--original", original)->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--distributed", distributed)->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--seed", seed);

    auto* stats_cmd = app.add_subcommand("stats", "Counts for a distributed circuit");
    stats_cmd->add_option("--distributed", distributed)->required()->check(CLI::ExistingFile);
    stats_cmd->add_option("--out", out);

    auto* gen_c_cmd = app.add_subcommand("gen-circuit", "Generate a benchmark circuit");
    gen_c_cmd->add_option("--class", cls, "cz_fraction, quantum_volume, pauli_gadget")->default_val(cls);
    gen_c_cmd->add_option("--qubits", qubits)->check(CLI::PositiveNumber);
    gen_c_cmd->add_option("--layers", layers, "0: as many as qubits")->check(CLI::NonNegativeNumber);
    gen_c_cmd->add_option("--p", p, "CZ fraction")->check(CLI::Range(0.0, 1.0));
    gen_c_cmd->add_option("--seed", seed);
    gen_c_cmd->add_option("--out", out);

    auto* gen_n_cmd = app.add_subcommand("gen-network", "Generate a network");
    gen_n_cmd->add_option("--kind", kind, "homogeneous, unstructured, scale_free, small_world")->default_val(kind);
    gen_n_cmd->add_option("--modules", modules)->check(CLI::PositiveNumber);
    gen_n_cmd->add_option("--qubits", qubits, "Total computation qubits")->check(CLI::PositiveNumber);
    gen_n_cmd->add_option("--link", link, "Link register per module; -1 unbounded");
    gen_n_cmd->add_option("--seed", seed);
    gen_n_cmd->add_option("--out", out);

    auto* bench_cmd = app.add_subcommand("bench", "Run an experiment config and write CSV");
    bench_cmd->add_option("--config", config)->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--jobs", jobs, "Worker threads (overrides the config)")->check(CLI::PositiveNumber);
    bench_cmd->add_option("--out", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*rebase_cmd) {
            emit(out, dqc::circuit_to_json(dqc::rebase(dqc::load_circuit(circuit_path)), 2));
        } else if (*dist_cmd) {
            auto ic = load_indexed(circuit_path);
            auto net = std::make_shared<const dqc::Network>(dqc::load_network(network_path));
            dqc::WorkflowOptions opt;
            opt.seed = seed;
            opt.anneal_iterations = anneal_iters;
            opt.rounds = rounds;
            const dqc::Workflow w = dqc::workflow_from_name(workflow);
            dqc::WorkflowResult res = dqc::run_workflow(ic, net, w, opt);
            json j = package(res.dist, res.built, !no_verify, seed);
            j["workflow"] = workflow;
            j["seed"] = seed;
            j["unbounded_ebits"] = res.unbounded_ebits;
            emit(out, j.dump(2));
            if (!qasm_out.empty()) emit(qasm_out, dqc::distributed_to_qasm(res.built));
        } else if (*refine_cmd) {
            auto ic = load_indexed(circuit_path);
            auto net = std::make_shared<const dqc::Network>(dqc::load_network(network_path));
            dqc::Distribution d = dqc::distribution_from_json(slurp(dist_path), ic, net);
            d = dqc::refine(std::move(d), dqc::parse_passes(passes), repeat, seed);
            auto [d2, built] = dqc::enforce_link_bound(d, dqc::build(d));
            json j = package(d2, built, !no_verify, seed);
            j["passes"] = passes;
            emit(out, j.dump(2));
        } else if (*cost_cmd) {
            auto ic = load_indexed(circuit_path);
            auto net = std::make_shared<const dqc::Network>(dqc::load_network(network_path));
            const dqc::Distribution d = dqc::distribution_from_json(slurp(dist_path), ic, net);
            emit(out, json::parse(dqc::cost_report_json(d)).dump(2));
        } else if (*verify_cmd) {
            const dqc::Circuit c = dqc::rebase(dqc::load_circuit(original));
            const dqc::DistributedCircuit built = dqc::distributed_from_json(slurp(distributed));
            dqc::VerifyOptions vo;
            vo.seed = seed;
            const dqc::VerifyReport rep = dqc::verify_equivalence(c, built, vo);
            json j{{"pass", rep.pass}, {"modes", rep.modes}, {"sim_wires", rep.sim_wires},
                   {"max_residual", rep.max_residual}};
            if (!rep.pass) j["message"] = rep.message;
            std::cout << j.dump(2) << '\n';
            if (!rep.pass) throw dqc::NonFactorizable(rep.message);
        } else if (*stats_cmd) {
            const dqc::DistributedCircuit built = dqc::distributed_from_json(slurp(distributed));
            emit(out, json::parse(dqc::stats_to_json(dqc::stats(built), built.module_names)).dump(2));
        } else if (*gen_c_cmd) {
            const dqc::Circuit c = dqc::gen_circuit(dqc::circuit_class_from_name(cls), qubits, layers, seed, p);
            emit(out, dqc::circuit_to_json(c, 2));
        } else if (*gen_n_cmd) {
            dqc::Network net = dqc::gen_network(dqc::network_kind_from_name(kind), modules, qubits, seed);
            if (link != -2) {
                std::vector<dqc::Module> mods = net.modules();
                for (auto& m : mods) m.link = link < 0 ? std::nullopt : std::optional<int>(link);
                std::vector<std::pair<std::string, std::string>> es;
                for (auto [a, b] : net.edges())
                    es.emplace_back(mods[static_cast<std::size_t>(a)].name, mods[static_cast<std::size_t>(b)].name);
                net = dqc::Network(std::move(mods), es);
            }
            emit(out, dqc::network_to_json(net, 2));
        } else if (*bench_cmd) {
            const std::string base = std::filesystem::path(config).parent_path().string();
            dqc::ExperimentConfig cfg = dqc::config_from_json(slurp(config), base.empty() ? "." : base);
            if (bench_cmd->count("--jobs")) cfg.jobs = jobs;
            const auto rows = dqc::run_experiment(cfg);
            emit(out, dqc::rows_to_csv(rows));
            int failed = 0;
            for (const auto& r : rows) failed += r.failed ? 1 : 0;
            if (failed) spdlog::warn("{} of {} rows failed", failed, rows.size());
        }
    } catch (const dqc::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
