#include "dqc/builder.hpp"

#include "dqc/cost.hpp"
#include "dqc/error.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

#include <spdlog/spdlog.h>

namespace dqc {

std::string_view op_kind_name(OpKind k) {
    switch (k) {
    case OpKind::H: return "H";
    case OpKind::Rz: return "Rz";
    case OpKind::CRz: return "CRz";
    case OpKind::X: return "X";
    case OpKind::Z: return "Z";
    case OpKind::CX: return "CX";
    case OpKind::CZ: return "CZ";
    case OpKind::LinkQubit: return "link_qubit";
    case OpKind::EbitPrepare: return "ebit_prepare";
    case OpKind::Measure: return "measure";
    case OpKind::CondX: return "cond_x";
    case OpKind::CondZ: return "cond_z";
    }
    return "?";
}

namespace {

enum Slot { kTeardown = 0, kStart = 1, kGate = 2, kCorrect = 3, kEnd = 4 };

// Ordering key of a protocol event relative to the original gates.
struct Key {
    int gate = 0;
    int slot = 0;
    int hedge = 0;
    int seq = 0;
    bool operator<(const Key& o) const {
        return std::tie(gate, slot, hedge, seq) < std::tie(o.gate, o.slot, o.hedge, o.seq);
    }
};

enum class Ev { Start, End, CorrH, CorrZ, CorrCZ };

struct Event {
    Key key;
    Ev kind = Ev::Start;
    int hedge = 0;
    int from = -1;     // Start: source module
    int to = -1;       // Start: new link module; End: module to release
    int gate = -1;     // CorrCZ: embedded gate
};

// Logical sweep of one hyperedge. Links are created lazily on the tree path
// from the nearest linked module and released right after their last use.
void plan_hyperedge(const Distribution& d, int h, std::vector<Event>& out) {
    HedgeWalk w = analyze_hyperedge(d, h);
    const Network& net = d.network();
    if (w.terminals.size() == 1 && w.units.empty()) return;
    auto tree = net.steiner_tree(w.terminals);

    struct Inst {
        int module;
        Key last_use;
    };
    std::vector<Inst> insts;
    std::vector<int> linked(static_cast<std::size_t>(net.size()), -1);   // module -> instance
    std::vector<char> linked_mask(static_cast<std::size_t>(net.size()), 0);
    linked_mask[static_cast<std::size_t>(w.home)] = 1;
    int seq = 0;
    auto use = [&](int module, Key k) {
        if (module == w.home) return;
        insts[static_cast<std::size_t>(linked[static_cast<std::size_t>(module)])].last_use = k;
    };

    for (const auto& step : w.steps) {
        if (!step.unit) {
            const int g = step.index;
            const int m = d.phi_g[static_cast<std::size_t>(g)];
            if (!linked_mask[static_cast<std::size_t>(m)]) {
                auto path = path_from_linked(net, *tree, m, linked_mask);
                for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                    Key k{g, kStart, h, 2 * seq++};
                    use(path[i], k);
                    Event e;
                    e.key = k;
                    e.kind = Ev::Start;
                    e.hedge = h;
                    e.from = path[i];
                    e.to = path[i + 1];
                    out.push_back(e);
                    linked[static_cast<std::size_t>(path[i + 1])] = static_cast<int>(insts.size());
                    linked_mask[static_cast<std::size_t>(path[i + 1])] = 1;
                    insts.push_back({path[i + 1], k});
                }
            }
            use(m, Key{g, kGate, h, 0});
            continue;
        }
        const UnitSpan& u = w.units[static_cast<std::size_t>(step.index)];
        if (u.remote >= 0) {
            const bool keep = linked_mask[static_cast<std::size_t>(u.remote)] != 0;
            for (int m = 0; m < net.size(); ++m) {
                if (m == w.home || !linked_mask[static_cast<std::size_t>(m)] || (keep && m == u.remote)) continue;
                linked_mask[static_cast<std::size_t>(m)] = 0;
                linked[static_cast<std::size_t>(m)] = -1;
            }
        }
        // Corrections go to whichever links are physically live at the time.
        auto corr = [&](Ev kind, int gate, int cz) {
            Event e;
            e.key = Key{gate, kCorrect, h, 0};
            e.kind = kind;
            e.hedge = h;
            e.gate = cz;
            out.push_back(e);
        };
        corr(Ev::CorrH, u.first_h, -1);
        for (int z : u.z_runs) corr(Ev::CorrZ, z, -1);
        for (int cz : u.czs) corr(Ev::CorrCZ, cz, cz);
        corr(Ev::CorrH, u.last_h, -1);
    }

    for (const auto& inst : insts) {
        Event e;
        e.kind = Ev::End;
        e.hedge = h;
        e.to = inst.module;
        e.key = inst.last_use;
        if (e.key.slot == kGate) {
            e.key.slot = kEnd;
        } else {
            e.key.seq += 1;   // right after the starting process it sourced
        }
        out.push_back(e);
    }
}

class Emitter {
public:
    Emitter(const Distribution& d, DistributedCircuit& dc) : d_(d), dc_(dc) {
        const int k = d.network().size();
        used_.assign(static_cast<std::size_t>(k), {});
        count_.assign(static_cast<std::size_t>(k), 0);
        live_.assign(d.hedges.size(), {});
    }

    Wire comp(int q) const { return {d_.phi_q[static_cast<std::size_t>(q)], q, false}; }

    // The source-side ebit half is measured straight away and is not held
    // for the protocol, so it does not count against the link register.
    Wire alloc(int module, int hedge, int anchor, int slot, bool held = true) {
        auto& used = used_[static_cast<std::size_t>(module)];
        int idx = 0;
        while (used.count(idx)) ++idx;
        used.insert(idx);
        Wire w{module, idx, true};
        push({OpKind::LinkQubit, w, {}, 0.0, -1, OpRole::Start, hedge, anchor});
        if (!held) return w;
        holder_[{module, idx}] = hedge;
        int& cnt = count_[static_cast<std::size_t>(module)];
        ++cnt;
        dc_.peak_links[static_cast<std::size_t>(module)] = std::max(dc_.peak_links[static_cast<std::size_t>(module)], cnt);
        const int cap = dc_.link_capacity[static_cast<std::size_t>(module)];
        if (cap >= 0 && cnt > cap && !dc_.overflow) {
            LinkOverflow ov;
            ov.module = module;
            ov.anchor = anchor;
            ov.slot = slot;
            std::set<int> hs;
            for (const auto& [w, hh] : holder_)
                if (w.first == module) hs.insert(hh);
            ov.holders.assign(hs.begin(), hs.end());
            dc_.overflow = ov;
        }
        return w;
    }

    void release(const Wire& w) {
        used_[static_cast<std::size_t>(w.module)].erase(w.index);
        if (holder_.erase({w.module, w.index})) --count_[static_cast<std::size_t>(w.module)];
    }

    void push(Op op) { dc_.ops.push_back(op); }

    void run(const Event& e) {
        const int h = e.hedge;
        const int root = d_.hedges[static_cast<std::size_t>(h)].root;
        auto& live = live_[static_cast<std::size_t>(h)];
        const int anchor = e.key.gate;
        switch (e.kind) {
        case Ev::Start: {
            Wire src = e.from == d_.phi_q[static_cast<std::size_t>(root)] ? comp(root) : live.at(e.from);
            Wire half = alloc(e.from, h, anchor, e.key.slot, false);
            Wire link = alloc(e.to, h, anchor, e.key.slot);
            int bit = dc_.bits++;
            push({OpKind::EbitPrepare, half, link, 0.0, -1, OpRole::Start, h, anchor});
            push({OpKind::CX, src, half, 0.0, -1, OpRole::Start, h, anchor});
            push({OpKind::Measure, half, {}, 0.0, bit, OpRole::Start, h, anchor});
            release(half);
            push({OpKind::CondX, {}, link, 0.0, bit, OpRole::Start, h, anchor});
            live[e.to] = link;
            ++dc_.ebit_count;
            ++dc_.hedge_ebits[static_cast<std::size_t>(h)];
            break;
        }
        case Ev::End: {
            Wire link = live.at(e.to);
            int bit = dc_.bits++;
            push({OpKind::H, link, {}, 0.0, -1, OpRole::End, h, anchor});
            push({OpKind::Measure, link, {}, 0.0, bit, OpRole::End, h, anchor});
            release(link);
            push({OpKind::CondZ, {}, comp(root), 0.0, bit, OpRole::End, h, anchor});
            live.erase(e.to);
            break;
        }
        case Ev::CorrH:
        case Ev::CorrZ:
            for (const auto& [m, w] : live)
                push({e.kind == Ev::CorrH ? OpKind::H : OpKind::Z, w, {}, 0.0, -1, OpRole::Correction, h, anchor});
            break;
        case Ev::CorrCZ: {
            const Gate& g = d_.circuit()[static_cast<std::size_t>(e.gate)];
            Wire partner = comp(g.other(root));
            for (const auto& [m, w] : live) {
                if (m != partner.module) throw ConflictDetected("embedding correction would be non-local");
                push({OpKind::CZ, w, partner, 0.0, -1, OpRole::Correction, h, anchor});
            }
            break;
        }
        }
    }

    // Copy of qubit q on module m while gate g runs.
    Wire copy_of(int q, int g, int m) const {
        if (d_.phi_q[static_cast<std::size_t>(q)] == m) return comp(q);
        int h = d_.hedge_of(g, q);
        if (h < 0) throw InvalidHyperedge("gate " + std::to_string(g) + " not in a hyperedge on q" + std::to_string(q));
        const auto& live = live_[static_cast<std::size_t>(h)];
        auto it = live.find(m);
        if (it == live.end())
            throw ConflictDetected("no link of q" + std::to_string(q) + " on " + d_.network().module(m).name +
                                   " for gate " + std::to_string(g));
        return it->second;
    }

    void original(int g) {
        const Gate& gate = d_.circuit()[static_cast<std::size_t>(g)];
        switch (gate.kind) {
        case GateKind::H: push({OpKind::H, comp(gate.q0), {}, 0.0, -1, OpRole::Original, -1, g}); break;
        case GateKind::Rz: push({OpKind::Rz, comp(gate.q0), {}, gate.phase, -1, OpRole::Original, -1, g}); break;
        case GateKind::CRz: {
            int m = d_.phi_g[static_cast<std::size_t>(g)];
            push({OpKind::CRz, copy_of(gate.q0, g, m), copy_of(gate.q1, g, m), gate.phase, -1, OpRole::Original, -1, g});
            break;
        }
        default: throw NotRebased("unexpected gate kind");
        }
    }

private:
    const Distribution& d_;
    DistributedCircuit& dc_;
    std::vector<std::set<int>> used_;
    std::vector<int> count_;
    std::map<std::pair<int, int>, int> holder_;
    std::vector<std::map<int, Wire>> live_;
};

} // namespace

DistributedCircuit build(const Distribution& d) {
    auto viol = check_validity(d);
    if (!viol.empty()) throw InvalidHyperedge(viol.front().message);
    const Network& net = d.network();
    DistributedCircuit dc;
    dc.qubits = d.qubits();
    dc.qubit_module = d.phi_q;
    for (const auto& m : net.modules()) {
        dc.module_names.push_back(m.name);
        dc.link_capacity.push_back(m.link ? *m.link : -1);
    }
    dc.peak_links.assign(static_cast<std::size_t>(net.size()), 0);
    dc.hedge_ebits.assign(d.hedges.size(), 0);
    dc.hyperedges = static_cast<int>(d.hedges.size());
    for (int g : d.gate_vertices()) {
        if (d.is_nonlocal(g)) ++dc.nonlocal_gates;
        if (d.is_detached(g)) ++dc.detached_gates;
    }

    std::vector<Event> events;
    for (std::size_t h = 0; h < d.hedges.size(); ++h) plan_hyperedge(d, static_cast<int>(h), events);
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.key < b.key; });

    Emitter em(d, dc);
    std::size_t e = 0;
    for (int g = 0; g < static_cast<int>(d.circuit().size()); ++g) {
        while (e < events.size() && events[e].key.gate == g && events[e].key.slot < kGate) em.run(events[e++]);
        em.original(g);
        while (e < events.size() && events[e].key.gate == g) em.run(events[e++]);
    }
    if (e != events.size()) throw ConflictDetected("protocol events past the end of the circuit");
    return dc;
}

BuildStats stats(const DistributedCircuit& dc) {
    BuildStats s;
    s.ebit_count = dc.ebit_count;
    s.peak_links = dc.peak_links;
    s.peak_link_max = dc.peak_links.empty() ? 0 : *std::max_element(dc.peak_links.begin(), dc.peak_links.end());
    s.nonlocal_gates = dc.nonlocal_gates;
    s.detached_gates = dc.detached_gates;
    s.hyperedges = dc.hyperedges;
    for (const auto& op : dc.ops) {
        bool two = op.kind == OpKind::CX || op.kind == OpKind::CZ || op.kind == OpKind::CRz;
        if (!two || op.a.module == op.b.module) continue;
        ++s.nonlocal_ops;
        if (op.role == OpRole::Correction) ++s.nonlocal_corrections;
    }
    return s;
}

// ---------------------------------------------------------------- link bound

namespace {

// Members before and after the overflow moment; the gap between them is where
// the hyperedge could be split.
bool gap_around(const Hyperedge& e, int anchor, int slot, int& before, int& after) {
    before = after = -1;
    for (int g : e.gates) {
        bool g_before = g < anchor || (g == anchor && slot > kGate);
        if (g_before) before = g;
        else if (after < 0) after = g;
    }
    return before >= 0 && after >= 0;
}

} // namespace

std::pair<Distribution, DistributedCircuit> enforce_link_bound(Distribution d, DistributedCircuit built) {
    if (!d.network().bounded_links()) return {std::move(d), std::move(built)};
    for (int m = 0; m < d.network().size(); ++m) {
        const auto& mod = d.network().module(m);
        if (mod.link && *mod.link == 0) {
            for (int g : d.gate_vertices())
                if (d.is_nonlocal(g) || d.is_detached(g)) {
                    const Gate& gate = d.circuit()[static_cast<std::size_t>(g)];
                    if (d.phi_g[static_cast<std::size_t>(g)] == m || d.phi_q[static_cast<std::size_t>(gate.q0)] == m ||
                        d.phi_q[static_cast<std::size_t>(gate.q1)] == m)
                        throw InfeasibleBound("module " + mod.name + " has no link qubits but takes part in gate " +
                                              std::to_string(g));
                }
        }
    }
    while (built.overflow) {
        const LinkOverflow ov = *built.overflow;
        // Furthest-apart gap among holders; ties to the lower hyperedge id.
        int best = -1, best_span = -1, best_before = -1, best_after = -1;
        for (int h : ov.holders) {
            int b = -1, a = -1;
            if (!gap_around(d.hedges[static_cast<std::size_t>(h)], ov.anchor, ov.slot, b, a)) continue;
            // Both halves must stay valid hyperedges.
            Distribution trial = d;
            Hyperedge& e = trial.hedges[static_cast<std::size_t>(h)];
            Hyperedge tail{e.root, {}};
            auto cut = std::find(e.gates.begin(), e.gates.end(), a);
            tail.gates.assign(cut, e.gates.end());
            e.gates.erase(cut, e.gates.end());
            trial.hedges.push_back(tail);
            const int n = static_cast<int>(trial.hedges.size());
            bool ok = true;
            for (int x : {h, n - 1}) {
                try {
                    analyze_hyperedge(trial, x);
                } catch (const InvalidHyperedge&) {
                    ok = false;
                }
            }
            if (!ok) continue;
            int span = a - b;
            if (span > best_span) {
                best = h;
                best_span = span;
                best_before = b;
                best_after = a;
            }
        }
        if (best < 0) {
            for (int h : ov.holders) {
                std::string gs;
                for (int g : d.hedges[static_cast<std::size_t>(h)].gates) gs += " " + std::to_string(g);
                spdlog::debug("link bound: holder {} (root q{}) gates{}", h, d.hedges[static_cast<std::size_t>(h)].root, gs);
            }
            throw InfeasibleBound("module " + d.network().module(ov.module).name + " exceeds its link register at gate " +
                                  std::to_string(ov.anchor) + " and no hyperedge can be split further");
        }
        spdlog::debug("link bound: module {} over at gate {}; splitting hyperedge {} between gates {} and {}",
                      d.network().module(ov.module).name, ov.anchor, best, best_before, best_after);
        Hyperedge& e = d.hedges[static_cast<std::size_t>(best)];
        auto cut = std::find(e.gates.begin(), e.gates.end(), best_after);
        Hyperedge tail{e.root, std::vector<int>(cut, e.gates.end())};
        e.gates.erase(cut, e.gates.end());
        d.hedges.push_back(std::move(tail));
        d.reindex();
        built = build(d);
    }
    return {std::move(d), std::move(built)};
}

// ---------------------------------------------------------------- export

using nlohmann::json;

namespace {

json wire_json(const DistributedCircuit& dc, const Wire& w) {
    if (!w.link) return json{{"q", w.index}, {"module", dc.module_names[static_cast<std::size_t>(w.module)]}};
    return json{{"link", w.index}, {"module", dc.module_names[static_cast<std::size_t>(w.module)]}};
}

Wire wire_from(const json& j, const std::map<std::string, int>& mods) {
    Wire w;
    w.module = mods.at(j.at("module").get<std::string>());
    if (j.contains("link")) {
        w.link = true;
        w.index = j.at("link").get<int>();
    } else {
        w.index = j.at("q").get<int>();
    }
    return w;
}

const char* role_name(OpRole r) {
    switch (r) {
    case OpRole::Original: return "gate";
    case OpRole::Start: return "start";
    case OpRole::End: return "end";
    case OpRole::Correction: return "correction";
    }
    return "?";
}

OpRole role_from(const std::string& s) {
    if (s == "start") return OpRole::Start;
    if (s == "end") return OpRole::End;
    if (s == "correction") return OpRole::Correction;
    return OpRole::Original;
}

OpKind op_kind_from(const std::string& s) {
    for (OpKind k : {OpKind::H, OpKind::Rz, OpKind::CRz, OpKind::X, OpKind::Z, OpKind::CX, OpKind::CZ, OpKind::LinkQubit,
                     OpKind::EbitPrepare, OpKind::Measure, OpKind::CondX, OpKind::CondZ})
        if (op_kind_name(k) == s) return k;
    throw ParseError("unknown op kind '" + s + "'");
}

bool two_wire(OpKind k) {
    return k == OpKind::CRz || k == OpKind::CX || k == OpKind::CZ || k == OpKind::EbitPrepare;
}

} // namespace

std::string distributed_to_json(const DistributedCircuit& dc, int indent) {
    json ops = json::array();
    for (const auto& op : dc.ops) {
        json o{{"kind", std::string(op_kind_name(op.kind))}, {"role", role_name(op.role)}};
        if (op.kind == OpKind::CondX || op.kind == OpKind::CondZ) {
            o["bit"] = op.bit;
            o["target"] = wire_json(dc, op.b);
        } else {
            o["wire"] = wire_json(dc, op.a);
            if (two_wire(op.kind)) o["wire2"] = wire_json(dc, op.b);
            if (op.kind == OpKind::Measure) o["bit"] = op.bit;
        }
        if (op.kind == OpKind::Rz || op.kind == OpKind::CRz) o["phase"] = op.phase;
        if (op.hedge >= 0) o["hyperedge"] = op.hedge;
        if (op.anchor >= 0) o["anchor"] = op.anchor;
        ops.push_back(std::move(o));
    }
    json qm = json::array();
    for (int m : dc.qubit_module) qm.push_back(dc.module_names[static_cast<std::size_t>(m)]);
    json caps = json::array();
    for (int c : dc.link_capacity) caps.push_back(c < 0 ? json(nullptr) : json(c));
    json j{{"qubits", dc.qubits},
           {"modules", dc.module_names},
           {"link_capacity", caps},
           {"qubit_module", qm},
           {"bits", dc.bits},
           {"ebits", dc.ebit_count},
           {"peak_links", dc.peak_links},
           {"hyperedge_ebits", dc.hedge_ebits},
           {"nonlocal_gates", dc.nonlocal_gates},
           {"detached_gates", dc.detached_gates},
           {"hyperedges", dc.hyperedges},
           {"ops", ops}};
    return j.dump(indent);
}

DistributedCircuit distributed_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(e.what());
    }
    // A distribute output wraps the circuit under "distributed".
    if (j.contains("distributed")) j = j.at("distributed");
    try {
        DistributedCircuit dc;
        dc.qubits = j.at("qubits").get<int>();
        dc.module_names = j.at("modules").get<std::vector<std::string>>();
        std::map<std::string, int> mods;
        for (std::size_t i = 0; i < dc.module_names.size(); ++i) mods[dc.module_names[i]] = static_cast<int>(i);
        for (const auto& c : j.at("link_capacity")) dc.link_capacity.push_back(c.is_null() ? -1 : c.get<int>());
        for (const auto& m : j.at("qubit_module")) dc.qubit_module.push_back(mods.at(m.get<std::string>()));
        dc.bits = j.at("bits").get<int>();
        dc.ebit_count = j.at("ebits").get<int>();
        dc.peak_links = j.at("peak_links").get<std::vector<int>>();
        dc.hedge_ebits = j.value("hyperedge_ebits", std::vector<int>{});
        dc.nonlocal_gates = j.value("nonlocal_gates", 0);
        dc.detached_gates = j.value("detached_gates", 0);
        dc.hyperedges = j.value("hyperedges", 0);
        for (const auto& o : j.at("ops")) {
            Op op;
            op.kind = op_kind_from(o.at("kind").get<std::string>());
            op.role = role_from(o.value("role", std::string("gate")));
            if (op.kind == OpKind::CondX || op.kind == OpKind::CondZ) {
                op.bit = o.at("bit").get<int>();
                op.b = wire_from(o.at("target"), mods);
            } else {
                op.a = wire_from(o.at("wire"), mods);
                if (two_wire(op.kind)) op.b = wire_from(o.at("wire2"), mods);
                if (op.kind == OpKind::Measure) op.bit = o.at("bit").get<int>();
            }
            op.phase = o.value("phase", 0.0);
            op.hedge = o.value("hyperedge", -1);
            op.anchor = o.value("anchor", -1);
            dc.ops.push_back(op);
        }
        return dc;
    } catch (const json::exception& e) {
        throw ParseError(std::string("distributed circuit JSON: ") + e.what());
    } catch (const std::out_of_range&) {
        throw ParseError("distributed circuit JSON: unknown module name");
    }
}

std::string distributed_to_qasm(const DistributedCircuit& dc) {
    std::ostringstream out;
    out.precision(17);
    out << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out << "qreg q[" << dc.qubits << "];\n";
    std::vector<int> width(dc.module_names.size(), 0);
    for (const auto& op : dc.ops)
        if (op.kind == OpKind::LinkQubit)
            width[static_cast<std::size_t>(op.a.module)] = std::max(width[static_cast<std::size_t>(op.a.module)], op.a.index + 1);
    for (std::size_t m = 0; m < dc.module_names.size(); ++m)
        if (width[m] > 0) out << "qreg link_" << dc.module_names[m] << "[" << width[m] << "];\n";
    for (int b = 0; b < dc.bits; ++b) out << "creg c" << b << "[1];\n";
    auto w = [&](const Wire& x) {
        std::ostringstream s;
        if (x.link) s << "link_" << dc.module_names[static_cast<std::size_t>(x.module)] << "[" << x.index << "]";
        else s << "q[" << x.index << "]";
        return s.str();
    };
    constexpr double kPi = 3.14159265358979323846;
    for (const auto& op : dc.ops) {
        switch (op.kind) {
        case OpKind::H: out << "h " << w(op.a) << ";\n"; break;
        case OpKind::X: out << "x " << w(op.a) << ";\n"; break;
        case OpKind::Z: out << "z " << w(op.a) << ";\n"; break;
        case OpKind::Rz: out << "u1(" << op.phase * kPi << ") " << w(op.a) << ";\n"; break;
        case OpKind::CRz: out << "cu1(" << op.phase * kPi << ") " << w(op.a) << "," << w(op.b) << ";\n"; break;
        case OpKind::CX: out << "cx " << w(op.a) << "," << w(op.b) << ";\n"; break;
        case OpKind::CZ: out << "cz " << w(op.a) << "," << w(op.b) << ";\n"; break;
        case OpKind::LinkQubit: out << "// link qubit " << w(op.a) << "\n"; break;
        case OpKind::EbitPrepare: out << "// ebit\nh " << w(op.a) << ";\ncx " << w(op.a) << "," << w(op.b) << ";\n"; break;
        case OpKind::Measure: out << "measure " << w(op.a) << " -> c" << op.bit << "[0];\nreset " << w(op.a) << ";\n"; break;
        case OpKind::CondX: out << "if(c" << op.bit << "==1) x " << w(op.b) << ";\n"; break;
        case OpKind::CondZ: out << "if(c" << op.bit << "==1) z " << w(op.b) << ";\n"; break;
        }
    }
    return out.str();
}

std::string stats_to_json(const BuildStats& s, const std::vector<std::string>& names, int indent) {
    json peaks = json::object();
    for (std::size_t m = 0; m < names.size() && m < s.peak_links.size(); ++m) peaks[names[m]] = s.peak_links[m];
    return json{{"ebits", s.ebit_count},
                {"peak_links", peaks},
                {"peak_links_max", s.peak_link_max},
                {"nonlocal_gates", s.nonlocal_gates},
                {"detached_gates", s.detached_gates},
                {"hyperedges", s.hyperedges},
                {"nonlocal_corrections", s.nonlocal_corrections}}
        .dump(indent);
}

} // namespace dqc
