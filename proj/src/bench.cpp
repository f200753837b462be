#include "dqc/bench.hpp"

#include "dqc/builder.hpp"
#include "dqc/error.hpp"
#include "dqc/verifier.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace dqc {

namespace {

double uniform01(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

// Gate list that drops H.H on one qubit as it goes.
class Peephole {
public:
    explicit Peephole(int n) : n_(n), last_(static_cast<std::size_t>(n), -1) {}

    void h(int q) {
        int& l = last_[static_cast<std::size_t>(q)];
        if (l >= 0 && gates_[static_cast<std::size_t>(l)] && gates_[static_cast<std::size_t>(l)]->kind == GateKind::H) {
            gates_[static_cast<std::size_t>(l)].reset();
            l = prev_[static_cast<std::size_t>(l)];
            return;
        }
        push({GateKind::H, q, -1, 0.0});
    }
    void rz(int q, double ph) { push({GateKind::Rz, q, -1, ph}); }
    void crz(int a, int b, double ph) { push({GateKind::CRz, a, b, ph}); }

    Circuit take() const {
        Circuit c(n_);
        for (const auto& g : gates_)
            if (g) c.add(*g);
        return c;
    }

private:
    void push(const Gate& g) {
        const int id = static_cast<int>(gates_.size());
        gates_.push_back(g);
        // A two-qubit gate blocks cancellation on both wires; prev_ only
        // matters for single-qubit gates, which have one wire.
        prev_.push_back(last_[static_cast<std::size_t>(g.q0)]);
        last_[static_cast<std::size_t>(g.q0)] = id;
        if (g.q1 >= 0) last_[static_cast<std::size_t>(g.q1)] = id;
    }

    int n_;
    std::vector<std::optional<Gate>> gates_;
    std::vector<int> prev_;
    std::vector<int> last_;
};

void euler(Circuit& c, int q, std::mt19937_64& rng) {
    c.rz(q, 2.0 * uniform01(rng)).h(q).rz(q, 2.0 * uniform01(rng)).h(q).rz(q, 2.0 * uniform01(rng));
}

void check_dims(int n, int d) {
    if (n < 1) throw InvalidParams("need at least one qubit");
    if (d < 1) throw InvalidParams("need at least one layer");
}

void pauli_gadget(Peephole& c, std::string_view s, double alpha) {
    std::vector<int> on;
    for (std::size_t q = 0; q < s.size(); ++q)
        if (s[q] != 'I') on.push_back(static_cast<int>(q));
    if (on.empty()) return;
    auto into = [&](int q) {
        if (s[static_cast<std::size_t>(q)] == 'X') c.h(q);
        if (s[static_cast<std::size_t>(q)] == 'Y') {
            c.rz(q, -0.5);
            c.h(q);
        }
    };
    auto out = [&](int q) {
        if (s[static_cast<std::size_t>(q)] == 'X') c.h(q);
        if (s[static_cast<std::size_t>(q)] == 'Y') {
            c.h(q);
            c.rz(q, 0.5);
        }
    };
    auto cx = [&](int a, int b) {
        c.h(b);
        c.crz(a, b, 1.0);
        c.h(b);
    };
    for (int q : on) into(q);
    for (std::size_t i = 0; i + 1 < on.size(); ++i) cx(on[i], on[i + 1]);
    // exp(i a Z) = e^{ia} diag(1, e^{-2ia}); Rz takes half-turns.
    c.rz(on.back(), -2.0 * alpha / std::numbers::pi);
    for (std::size_t i = on.size() - 1; i-- > 0;) cx(on[i], on[i + 1]);
    for (int q : on) out(q);
}

} // namespace

Circuit gen_cz_fraction(int n, int d, double p, std::uint64_t seed) {
    check_dims(n, d);
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidParams("p must lie in [0, 1]");
    std::mt19937_64 rng(seed);
    Circuit c(n);
    for (int t = 0; t < d; ++t) {
        std::vector<int> rest;
        for (int q = 0; q < n; ++q) {
            if (uniform01(rng) < 1.0 - p) c.h(q);
            else rest.push_back(q);
        }
        std::shuffle(rest.begin(), rest.end(), rng);
        for (std::size_t i = 0; i + 1 < rest.size(); i += 2) c.crz(rest[i], rest[i + 1], 1.0);
    }
    return c;
}

Circuit gen_quantum_volume(int n, int d, std::uint64_t seed) {
    check_dims(n, d);
    if (n % 2 != 0) throw InvalidParams("quantum volume needs an even qubit count");
    std::mt19937_64 rng(seed);
    Circuit c(n);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int t = 0; t < d; ++t) {
        for (int q = 0; q < n; ++q) perm[static_cast<std::size_t>(q)] = q;
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t i = 0; i < perm.size(); i += 2) {
            const int a = perm[i], b = perm[i + 1];
            euler(c, a, rng);
            euler(c, b, rng);
            for (int k = 0; k < 3; ++k) {
                c.crz(a, b, 1.0);
                euler(c, a, rng);
                euler(c, b, rng);
            }
        }
    }
    return c;
}

void append_pauli_gadget(Circuit& c, std::string_view paulis, double alpha) {
    if (static_cast<int>(paulis.size()) != c.qubit_count())
        throw InvalidParams("Pauli string length differs from the qubit count");
    for (char ch : paulis)
        if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') throw InvalidParams("Pauli letters are I, X, Y, Z");
    Peephole p(c.qubit_count());
    pauli_gadget(p, paulis, alpha);
    const Circuit body = p.take();
    for (const Gate& g : body.gates()) c.add(g);
}

Circuit gen_pauli_gadget(int n, int d, std::uint64_t seed) {
    check_dims(n, d);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> letter(0, 3);
    Peephole p(n);
    std::string s(static_cast<std::size_t>(n), 'I');
    for (int t = 0; t < d; ++t) {
        for (auto& ch : s) ch = "IXYZ"[letter(rng)];
        const double alpha = 2.0 * std::numbers::pi * uniform01(rng);
        pauli_gadget(p, s, alpha);
    }
    return p.take();
}

CircuitClass circuit_class_from_name(const std::string& s) {
    if (s == "cz_fraction" || s == "cz-fraction") return CircuitClass::CzFraction;
    if (s == "quantum_volume" || s == "quantum-volume") return CircuitClass::QuantumVolume;
    if (s == "pauli_gadget" || s == "pauli-gadget") return CircuitClass::PauliGadget;
    throw InvalidParams("unknown circuit class '" + s + "' (cz_fraction, quantum_volume, pauli_gadget)");
}

std::string circuit_class_name(CircuitClass c) {
    switch (c) {
    case CircuitClass::CzFraction: return "cz_fraction";
    case CircuitClass::QuantumVolume: return "quantum_volume";
    case CircuitClass::PauliGadget: return "pauli_gadget";
    }
    return "?";
}

Circuit gen_circuit(CircuitClass cls, int qubits, int layers, std::uint64_t seed, double p) {
    if (layers == 0) layers = qubits;
    switch (cls) {
    case CircuitClass::CzFraction: return gen_cz_fraction(qubits, layers, p, seed);
    case CircuitClass::QuantumVolume: return gen_quantum_volume(qubits, layers, seed);
    case CircuitClass::PauliGadget: return gen_pauli_gadget(qubits, layers, seed);
    }
    throw InvalidParams("unknown circuit class");
}

// ---------------------------------------------------------------- harness

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::string& base, const std::string& f) {
    std::filesystem::path p(f);
    return p.is_absolute() ? p : std::filesystem::path(base) / p;
}

Network with_links(const Network& net, std::optional<int> link) {
    std::vector<Module> mods = net.modules();
    for (auto& m : mods) m.link = link;
    std::vector<std::pair<std::string, std::string>> es;
    for (auto [a, b] : net.edges()) es.emplace_back(mods[static_cast<std::size_t>(a)].name, mods[static_cast<std::size_t>(b)].name);
    return Network(std::move(mods), es);
}

Network network_for(const NetworkSource& src, int circuit_qubits) {
    Network net = src.fixed ? *src.fixed
                            : gen_network(src.kind, src.modules, src.qubits > 0 ? src.qubits : circuit_qubits, src.seed);
    if (src.link) net = with_links(net, *src.link < 0 ? std::nullopt : std::optional<int>(*src.link));
    return net;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace

ExperimentConfig config_from_json(const std::string& text, const std::string& base_dir) {
    ExperimentConfig cfg;
    try {
        const json j = json::parse(text);
        if (!j.is_object()) throw ParseError("experiment config must be a JSON object");
        for (const auto& c : j.value("circuits", json::array())) {
            CircuitSource src;
            if (c.contains("file")) {
                const std::string f = c.at("file").get<std::string>();
                src.circuit = load_circuit(resolve(base_dir, f).string());
                src.label = c.value("name", f);
            } else if (c.contains("inline")) {
                src.circuit = circuit_from_json(c.at("inline").dump());
                src.label = c.value("name", std::string("inline"));
            } else {
                const auto cls = circuit_class_from_name(c.at("class").get<std::string>());
                const int n = c.at("qubits").get<int>();
                const int d = c.value("layers", 0);
                const auto seed = c.value("seed", std::uint64_t{0});
                const double p = c.value("p", 0.5);
                src.circuit = gen_circuit(cls, n, d, seed, p);
                src.label = c.value("name", circuit_class_name(cls) + "-n" + std::to_string(n) + "-d" +
                                                std::to_string(d == 0 ? n : d) + "-s" + std::to_string(seed));
            }
            cfg.circuits.push_back(std::move(src));
        }
        for (const auto& n : j.value("networks", json::array())) {
            NetworkSource src;
            if (n.contains("file")) {
                const std::string f = n.at("file").get<std::string>();
                src.fixed = load_network(resolve(base_dir, f).string());
                src.label = n.value("name", f);
            } else if (n.contains("inline")) {
                src.fixed = network_from_json(n.at("inline").dump());
                src.label = n.value("name", std::string("inline"));
            } else {
                src.kind = network_kind_from_name(n.at("kind").get<std::string>());
                src.modules = n.at("modules").get<int>();
                src.qubits = n.value("qubits", 0);
                src.seed = n.value("seed", std::uint64_t{0});
                src.label = n.value("name", network_kind_name(src.kind) + "-m" + std::to_string(src.modules) + "-s" +
                                                std::to_string(src.seed));
            }
            if (n.contains("link")) src.link = n.at("link").is_null() ? -1 : n.at("link").get<int>();
            cfg.networks.push_back(std::move(src));
        }
        if (j.contains("workflows"))
            for (const auto& w : j.at("workflows")) cfg.workflows.push_back(workflow_from_name(w.get<std::string>()));
        else
            cfg.workflows = all_workflows();
        if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
        cfg.options.anneal_iterations = j.value("anneal_iterations", cfg.options.anneal_iterations);
        cfg.options.rounds = j.value("rounds", cfg.options.rounds);
        cfg.verify = j.value("verify", false);
        cfg.jobs = j.value("jobs", 1);
    } catch (const json::exception& e) {
        throw ParseError(std::string("experiment config: ") + e.what());
    }
    if (cfg.jobs < 1) throw InvalidParams("jobs must be positive");
    return cfg;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg) {
    struct Task {
        std::size_t c, n, w, s;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cfg.circuits.size(); ++c)
        for (std::size_t n = 0; n < cfg.networks.size(); ++n)
            for (std::size_t w = 0; w < cfg.workflows.size(); ++w)
                for (std::size_t s = 0; s < cfg.seeds.size(); ++s) tasks.push_back({c, n, w, s});

    std::vector<std::shared_ptr<const IndexedCircuit>> ics;
    for (const auto& c : cfg.circuits) ics.push_back(index_circuit(rebase(c.circuit)));

    std::vector<ExperimentRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            ExperimentRow& r = rows[i];
            const Workflow w = cfg.workflows[t.w];
            r.workflow = workflow_name(w);
            r.network = cfg.networks[t.n].label;
            r.circuit = cfg.circuits[t.c].label;
            r.seed = cfg.seeds[t.s];
            try {
                auto net = std::make_shared<const Network>(network_for(cfg.networks[t.n], ics[t.c]->qubits()));
                WorkflowOptions opt = cfg.options;
                opt.seed = r.seed;
                const auto t0 = std::chrono::steady_clock::now();
                WorkflowResult res = run_workflow(ics[t.c], net, w, opt);
                r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                const BuildStats st = stats(res.built);
                r.ebits = st.ebit_count;
                r.detached = st.detached_gates;
                r.nonlocal = st.nonlocal_gates;
                r.hyperedges = st.hyperedges;
                r.peak_links = st.peak_link_max;
                if (cfg.verify && branch_wires(res.built) <= kMaxSimQubits) {
                    VerifyOptions vo;
                    vo.seed = r.seed;
                    const VerifyReport rep = verify_equivalence(ics[t.c]->circuit, res.built, vo);
                    if (!rep.pass) throw NonFactorizable(rep.message);
                }
            } catch (const std::exception& e) {
                r.failed = true;
                r.error = e.what();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(tasks.size())));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    }
    return rows;
}

std::string rows_to_csv(const std::vector<ExperimentRow>& rows) {
    std::ostringstream o;
    o << "workflow,network,circuit,seed,ebits,detached,non-local,hyperedges,peak-links,wall-time,status\n";
    for (const auto& r : rows) {
        o << csv_field(r.workflow) << ',' << csv_field(r.network) << ',' << csv_field(r.circuit) << ',' << r.seed << ',';
        if (r.failed) o << ",,,,,";
        else o << r.ebits << ',' << r.detached << ',' << r.nonlocal << ',' << r.hyperedges << ',' << r.peak_links << ',';
        o << r.wall_time << ',' << (r.failed ? csv_field("failed: " + r.error) : std::string("ok")) << '\n';
    }
    return o.str();
}

} // namespace dqc
