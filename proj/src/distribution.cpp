#include "dqc/distribution.hpp"

#include "dqc/error.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace dqc {

std::vector<Hyperedge> build_hypergraph(const IndexedCircuit& ic) {
    std::vector<Hyperedge> out;
    for (int q = 0; q < ic.qubits(); ++q) {
        Hyperedge cur{q, {}};
        for (int g : ic.timeline[static_cast<std::size_t>(q)]) {
            const Gate& gate = ic.gate(g);
            if (gate.kind == GateKind::CRz) {
                cur.gates.push_back(g);
            } else if (gate.kind == GateKind::H && !cur.gates.empty()) {
                out.push_back(cur);
                cur.gates.clear();
            }
        }
        if (!cur.gates.empty()) out.push_back(cur);
    }
    return out;
}

Distribution::Distribution(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net)
    : ic_(std::move(ic)), net_(std::move(net)) {
    phi_q.assign(static_cast<std::size_t>(ic_->qubits()), 0);
    phi_g.assign(ic_->circuit.size(), -1);
    for (std::size_t i = 0; i < ic_->circuit.size(); ++i)
        if (ic_->circuit[i].kind == GateKind::CRz) phi_g[i] = 0;
}

void Distribution::reindex() {
    hedge_of_.assign(ic_->circuit.size(), {-1, -1});
    by_root_.assign(static_cast<std::size_t>(qubits()), {});
    std::sort(hedges.begin(), hedges.end(), [](const Hyperedge& a, const Hyperedge& b) {
        if (a.root != b.root) return a.root < b.root;
        if (a.gates.empty() || b.gates.empty()) return a.gates.size() > b.gates.size();
        return a.first() < b.first();
    });
    // Empty hyperedges carry no information.
    hedges.erase(std::remove_if(hedges.begin(), hedges.end(), [](const Hyperedge& h) { return h.gates.empty(); }),
                 hedges.end());
    for (std::size_t h = 0; h < hedges.size(); ++h) {
        const auto& e = hedges[h];
        by_root_[static_cast<std::size_t>(e.root)].push_back(static_cast<int>(h));
        for (int g : e.gates) {
            if (g < 0 || g >= static_cast<int>(ic_->circuit.size())) continue;
            const Gate& gate = ic_->gate(g);
            if (gate.kind != GateKind::CRz || !gate.acts_on(e.root)) continue;
            int side = gate.q0 == e.root ? 0 : 1;
            hedge_of_[static_cast<std::size_t>(g)][static_cast<std::size_t>(side)] = static_cast<int>(h);
        }
    }
}

int Distribution::hedge_of(int g, int q) const {
    const Gate& gate = ic_->gate(g);
    return hedge_of_[static_cast<std::size_t>(g)][gate.q0 == q ? 0 : 1];
}

int Distribution::module_of(const Vertex& v) const {
    if (v.gate) {
        if (v.id < 0 || v.id >= static_cast<int>(phi_g.size()) || phi_g[static_cast<std::size_t>(v.id)] < 0)
            throw UnknownVertex("g" + std::to_string(v.id));
        return phi_g[static_cast<std::size_t>(v.id)];
    }
    if (v.id < 0 || v.id >= qubits()) throw UnknownVertex("q" + std::to_string(v.id));
    return phi_q[static_cast<std::size_t>(v.id)];
}

void Distribution::set_module(const Vertex& v, int m) {
    module_of(v);   // validates the vertex
    if (m < 0 || m >= network().size()) throw UnknownModule("module id " + std::to_string(m));
    (v.gate ? phi_g : phi_q)[static_cast<std::size_t>(v.id)] = m;
}

bool Distribution::is_nonlocal(int g) const {
    const Gate& gate = ic_->gate(g);
    return gate.kind == GateKind::CRz &&
           phi_q[static_cast<std::size_t>(gate.q0)] != phi_q[static_cast<std::size_t>(gate.q1)];
}

bool Distribution::is_detached(int g) const {
    const Gate& gate = ic_->gate(g);
    if (gate.kind != GateKind::CRz) return false;
    int m = phi_g[static_cast<std::size_t>(g)];
    return m != phi_q[static_cast<std::size_t>(gate.q0)] && m != phi_q[static_cast<std::size_t>(gate.q1)];
}

std::vector<int> Distribution::gate_vertices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < phi_g.size(); ++i)
        if (phi_g[i] >= 0) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> Distribution::qubit_load() const {
    std::vector<int> load(static_cast<std::size_t>(network().size()), 0);
    for (int m : phi_q) ++load[static_cast<std::size_t>(m)];
    return load;
}

Distribution make_distribution(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net) {
    Distribution d(ic, std::move(net));
    d.hedges = build_hypergraph(*ic);
    d.reindex();
    return d;
}

int hyperedge_lambda(const Distribution& d, int h) {
    const auto& e = d.hedges[static_cast<std::size_t>(h)];
    std::set<int> mods{d.phi_q[static_cast<std::size_t>(e.root)]};
    for (int g : e.gates) mods.insert(d.phi_g[static_cast<std::size_t>(g)]);
    return static_cast<int>(mods.size());
}

int connectivity_cost(const Distribution& d) {
    int c = 0;
    for (std::size_t h = 0; h < d.hedges.size(); ++h) c += hyperedge_lambda(d, static_cast<int>(h)) - 1;
    return c;
}

std::optional<UnitSpan> embedding_unit_at(const IndexedCircuit& ic, const std::vector<int>& phi_q, int q, int tpos,
                                          std::string* why) {
    auto fail = [&](const std::string& msg) -> std::optional<UnitSpan> {
        if (why) *why = msg;
        return std::nullopt;
    };
    const auto& tl = ic.timeline[static_cast<std::size_t>(q)];
    if (tpos < 0 || tpos >= static_cast<int>(tl.size()) || ic.gate(tl[static_cast<std::size_t>(tpos)]).kind != GateKind::H)
        return fail("not an H gate");
    int close = -1;
    for (int p = tpos + 1; p < static_cast<int>(tl.size()); ++p)
        if (ic.gate(tl[static_cast<std::size_t>(p)]).kind == GateKind::H) {
            close = p;
            break;
        }
    if (close < 0) return fail("no closing H on the root");

    UnitSpan u;
    u.root = q;
    u.first_h = tl[static_cast<std::size_t>(tpos)];
    u.last_h = tl[static_cast<std::size_t>(close)];
    const int home = phi_q[static_cast<std::size_t>(q)];
    double run = 0.0;
    int run_last = -1;
    auto close_run = [&]() -> bool {
        if (run_last < 0) return true;
        bool ok = true;
        if (phase_eq(run, 1.0)) u.z_runs.push_back(run_last);
        else if (!phase_eq(run, 0.0)) ok = false;
        run = 0.0;
        run_last = -1;
        return ok;
    };
    for (int p = tpos + 1; p < close; ++p) {
        int g = tl[static_cast<std::size_t>(p)];
        const Gate& gate = ic.gate(g);
        if (gate.kind == GateKind::Rz) {
            run += gate.phase;
            run_last = g;
            continue;
        }
        // CRz on the root.
        if (!close_run()) return fail("Rz run does not squash to 0 or pi before gate " + std::to_string(g));
        if (!phase_eq(gate.phase, 1.0)) return fail("CRz gate " + std::to_string(g) + " is not a CZ");
        int partner = phi_q[static_cast<std::size_t>(gate.other(q))];
        if (partner == home) return fail("CZ gate " + std::to_string(g) + " partner shares the root's module");
        if (u.remote >= 0 && u.remote != partner)
            return fail("CZ gate " + std::to_string(g) + " partner on a second remote module");
        u.remote = partner;
        u.czs.push_back(g);
    }
    if (!close_run()) return fail("Rz run does not squash to 0 or pi");
    return u;
}

HedgeWalk analyze_hyperedge(const Distribution& d, int h) {
    if (h < 0 || h >= static_cast<int>(d.hedges.size())) throw InvalidHyperedge("no hyperedge " + std::to_string(h));
    const auto& e = d.hedges[static_cast<std::size_t>(h)];
    const auto& ic = d.ic();
    HedgeWalk w;
    w.hedge = h;
    w.root = e.root;
    w.home = d.phi_q[static_cast<std::size_t>(e.root)];
    std::set<int> terms{w.home};
    auto bad = [&](int g, const std::string& msg) {
        return InvalidHyperedge("hyperedge " + std::to_string(h) + " (root q" + std::to_string(e.root) +
                                "), gate " + std::to_string(g) + ": " + msg);
    };
    if (e.gates.empty()) {
        w.terminals.assign(terms.begin(), terms.end());
        return w;
    }
    for (std::size_t i = 0; i < e.gates.size(); ++i) {
        int g = e.gates[i];
        if (g < 0 || g >= static_cast<int>(ic.circuit.size())) throw bad(g, "gate index out of range");
        const Gate& gate = ic.gate(g);
        if (gate.kind != GateKind::CRz) throw bad(g, "not a CRz gate");
        if (!gate.acts_on(e.root)) throw bad(g, "does not act on the root");
        if (i > 0 && g <= e.gates[i - 1]) throw bad(g, "gate-vertices out of order");
        int m = d.phi_g[static_cast<std::size_t>(g)];
        if (m < 0 || m >= d.network().size()) throw bad(g, "unallocated gate-vertex");
    }
    const auto& tl = ic.timeline[static_cast<std::size_t>(e.root)];
    int p = ic.pos_on(e.first(), e.root);
    const int end = ic.pos_on(e.last(), e.root);
    std::size_t next = 0;   // next expected member
    while (p <= end) {
        int g = tl[static_cast<std::size_t>(p)];
        const Gate& gate = ic.gate(g);
        if (gate.kind == GateKind::CRz) {
            if (next >= e.gates.size() || e.gates[next] != g) throw bad(g, "CRz inside the span is not a member");
            ++next;
            int m = d.phi_g[static_cast<std::size_t>(g)];
            w.steps.push_back({false, g});
            terms.insert(m);
        } else if (gate.kind == GateKind::H) {
            std::string why;
            auto u = embedding_unit_at(ic, d.phi_q, e.root, p, &why);
            if (!u) throw bad(g, "H does not open an embedding unit (" + why + ")");
            if (u->last_h > e.last()) throw bad(g, "embedding unit extends past the last gate-vertex");
            for (int cz : u->czs) {
                if (next >= e.gates.size() || e.gates[next] != cz) throw bad(cz, "embedded CZ is not a member");
                ++next;
                if (d.phi_g[static_cast<std::size_t>(cz)] != w.home)
                    throw bad(cz, "embedded CZ must be allocated to the root's module");
            }
            w.steps.push_back({true, static_cast<int>(w.units.size())});
            w.units.push_back(std::move(*u));
            p = ic.pos_on(w.units.back().last_h, e.root);
        }
        ++p;
    }
    if (next != e.gates.size()) throw bad(e.gates[next], "member outside the span walk");
    w.terminals.assign(terms.begin(), terms.end());
    return w;
}

std::vector<Violation> check_validity(const Distribution& d) {
    std::vector<Violation> out;
    const auto& net = d.network();
    for (int q = 0; q < d.qubits(); ++q) {
        int m = d.phi_q[static_cast<std::size_t>(q)];
        if (m < 0 || m >= net.size())
            out.push_back({"allocation", q, -1, "qubit q" + std::to_string(q) + " has no module"});
    }
    if (!out.empty()) return out;
    auto load = d.qubit_load();
    for (int m = 0; m < net.size(); ++m)
        if (load[static_cast<std::size_t>(m)] > net.module(m).comp)
            out.push_back({"capacity", m, -1,
                           "module " + net.module(m).name + " holds " + std::to_string(load[static_cast<std::size_t>(m)]) +
                               " qubits, capacity " + std::to_string(net.module(m).comp)});
    // Each CRz must be covered exactly once per acted qubit.
    std::vector<std::array<int, 2>> seen(d.circuit().size(), {0, 0});
    for (const auto& e : d.hedges)
        for (int g : e.gates)
            if (g >= 0 && g < static_cast<int>(d.circuit().size()) && d.circuit()[static_cast<std::size_t>(g)].acts_on(e.root))
                ++seen[static_cast<std::size_t>(g)][d.circuit()[static_cast<std::size_t>(g)].q0 == e.root ? 0 : 1];
    for (std::size_t g = 0; g < d.circuit().size(); ++g) {
        if (d.circuit()[g].kind != GateKind::CRz) continue;
        if (d.phi_g[g] < 0 || d.phi_g[g] >= net.size())
            out.push_back({"allocation", static_cast<int>(g), static_cast<int>(g), "gate-vertex without module"});
        for (int s = 0; s < 2; ++s)
            if (seen[g][static_cast<std::size_t>(s)] != 1)
                out.push_back({"hyperedge", -1, static_cast<int>(g),
                               "gate " + std::to_string(g) + " appears in " + std::to_string(seen[g][static_cast<std::size_t>(s)]) +
                                   " hyperedges on qubit q" + std::to_string(s == 0 ? d.circuit()[g].q0 : d.circuit()[g].q1)});
    }
    for (std::size_t h = 0; h < d.hedges.size(); ++h) {
        try {
            analyze_hyperedge(d, static_cast<int>(h));
        } catch (const InvalidHyperedge& ex) {
            out.push_back({"hyperedge", static_cast<int>(h), -1, ex.what()});
        }
    }
    return out;
}

bool is_valid(const Distribution& d) { return check_validity(d).empty(); }

// ---------------------------------------------------------------- JSON

using nlohmann::json;

std::string distribution_to_json(const Distribution& d, int ebits, int indent) {
    const auto& net = d.network();
    json phi = json::object();
    for (int q = 0; q < d.qubits(); ++q) phi["q" + std::to_string(q)] = net.module(d.phi_q[static_cast<std::size_t>(q)]).name;
    for (int g : d.gate_vertices()) phi["g" + std::to_string(g)] = net.module(d.phi_g[static_cast<std::size_t>(g)]).name;
    json hs = json::array(), mods = json::array();
    for (std::size_t h = 0; h < d.hedges.size(); ++h) {
        const auto& e = d.hedges[h];
        json row = json::array({"q" + std::to_string(e.root)});
        std::set<std::string> ms{net.module(d.phi_q[static_cast<std::size_t>(e.root)]).name};
        for (int g : e.gates) {
            row.push_back("g" + std::to_string(g));
            ms.insert(net.module(d.phi_g[static_cast<std::size_t>(g)]).name);
        }
        hs.push_back(row);
        mods.push_back(json(std::vector<std::string>(ms.begin(), ms.end())));
    }
    json j{{"phi", phi}, {"hyperedges", hs}, {"hyperedge_modules", mods}, {"ebits", ebits}};
    return j.dump(indent);
}

namespace {

Vertex parse_vertex(const std::string& s) {
    if (s.size() < 2 || (s[0] != 'q' && s[0] != 'g')) throw ParseError("bad vertex name '" + s + "'");
    try {
        return {s[0] == 'g', std::stoi(s.substr(1))};
    } catch (const std::exception&) {
        throw ParseError("bad vertex name '" + s + "'");
    }
}

} // namespace

Distribution distribution_from_json(const std::string& text, std::shared_ptr<const IndexedCircuit> ic,
                                    std::shared_ptr<const Network> net) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    // A distribute output wraps it under "distribution".
    if (j.contains("distribution")) j = j.at("distribution");
    Distribution d(ic, net);
    try {
        for (auto& [key, val] : j.at("phi").items()) d.set_module(parse_vertex(key), net->index_of(val.get<std::string>()));
        d.hedges.clear();
        for (const auto& row : j.at("hyperedges")) {
            Hyperedge e;
            bool have_root = false;
            for (const auto& v : row) {
                Vertex x = parse_vertex(v.get<std::string>());
                if (x.gate) e.gates.push_back(x.id);
                else if (!have_root) {
                    e.root = x.id;
                    have_root = true;
                } else throw ParseError("hyperedge with two qubit-vertices");
            }
            if (!have_root) throw ParseError("hyperedge without a qubit-vertex");
            if (e.root < 0 || e.root >= ic->qubits()) throw UnknownVertex("q" + std::to_string(e.root));
            std::sort(e.gates.begin(), e.gates.end());
            d.hedges.push_back(std::move(e));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("distribution JSON: ") + e.what());
    }
    d.reindex();
    return d;
}

} // namespace dqc
