#pragma once

#include "dqc/circuit.hpp"
#include "dqc/network.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dqc {

// One qubit-vertex (the root) plus the CRz gate-vertices it shares.
// Gate-vertices are circuit gate indices, ascending. The hyperedges rooted on
// a qubit partition its CRz gates into contiguous runs of its timeline.
struct Hyperedge {
    int root = 0;
    std::vector<int> gates;

    int first() const { return gates.front(); }
    int last() const { return gates.back(); }
    bool operator==(const Hyperedge& o) const { return root == o.root && gates == o.gates; }
};

// Per qubit, open a hyperedge and close it at every H on that qubit.
std::vector<Hyperedge> build_hypergraph(const IndexedCircuit& ic);

struct Vertex {
    bool gate = false;   // false: qubit-vertex, id is the qubit
    int id = 0;          // true:  gate-vertex, id is the circuit gate index
};

class Distribution {
public:
    Distribution(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net);

    const IndexedCircuit& ic() const { return *ic_; }
    const Circuit& circuit() const { return ic_->circuit; }
    const Network& network() const { return *net_; }
    std::shared_ptr<const IndexedCircuit> ic_ptr() const { return ic_; }
    std::shared_ptr<const Network> net_ptr() const { return net_; }

    int qubits() const { return ic_->qubits(); }

    // Structure. Call reindex() after editing hedges directly.
    std::vector<Hyperedge> hedges;
    std::vector<int> phi_q;   // per qubit
    std::vector<int> phi_g;   // per circuit gate; -1 for H/Rz

    void reindex();
    // Hyperedge on q's side holding gate g (g must act on q).
    int hedge_of(int g, int q) const;
    // Hyperedges rooted on q, in timeline order.
    const std::vector<int>& hedges_on(int q) const { return by_root_[static_cast<std::size_t>(q)]; }

    int module_of(const Vertex& v) const;
    void set_module(const Vertex& v, int m);

    bool is_nonlocal(int g) const;    // qubits on different modules
    bool is_detached(int g) const;    // gate on neither qubit's module
    std::vector<int> gate_vertices() const;
    std::vector<int> qubit_load() const;   // qubits per module

private:
    std::shared_ptr<const IndexedCircuit> ic_;
    std::shared_ptr<const Network> net_;
    std::vector<std::array<int, 2>> hedge_of_;     // per gate, by side (q0, q1)
    std::vector<std::vector<int>> by_root_;
};

// Basic hypergraph with every vertex on module 0 (callers then allocate).
Distribution make_distribution(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net);

// Sum over hyperedges of (modules touched - 1).
int connectivity_cost(const Distribution& d);
int hyperedge_lambda(const Distribution& d, int h);

// An H-delimited span on a root qubit that satisfies the embedding
// conditions: exactly two H on the root, every CRz on the root inside is a
// CZ whose partner sits on a single module `remote` != the root's module, and
// each maximal run of Rz on the root between structural gates squashes to
// 0 or 1 half-turns.
struct UnitSpan {
    int root = 0;
    int first_h = 0;    // circuit index of the opening H
    int last_h = 0;     // circuit index of the closing H
    int remote = -1;    // module of the CZ partners; -1 when there are none
    std::vector<int> czs;         // embedded CZ gates (circuit indices)
    std::vector<int> z_runs;      // circuit index of the last Rz of each run squashing to 1
};

// Unit opened by the H at timeline position `tpos` of qubit q, or nullopt with
// a reason. Only qubit allocations are consulted.
std::optional<UnitSpan> embedding_unit_at(const IndexedCircuit& ic, const std::vector<int>& phi_q, int q,
                                          int tpos, std::string* why = nullptr);

// Time-ordered structure of one hyperedge: distributed member gates and the
// embedding units between them. Throws InvalidHyperedge if not valid.
struct HedgeWalk {
    int hedge = 0;
    int root = 0;
    int home = 0;
    struct Step {
        bool unit = false;
        int index = 0;    // gate index, or index into units
    };
    std::vector<Step> steps;
    std::vector<UnitSpan> units;
    std::vector<int> terminals;   // home plus the modules of distributed members
};

HedgeWalk analyze_hyperedge(const Distribution& d, int h);

struct Violation {
    std::string kind;      // "capacity", "hyperedge", "allocation"
    int where = -1;        // module, hyperedge or gate
    int gate = -1;         // offending gate, when there is one
    std::string message;
};

std::vector<Violation> check_validity(const Distribution& d);
bool is_valid(const Distribution& d);

// {"phi":{"q0":"A","g3":"B"},"hyperedges":[["q2","g0","g1"]],"ebits":n,...}
std::string distribution_to_json(const Distribution& d, int ebits, int indent = -1);
Distribution distribution_from_json(const std::string& text, std::shared_ptr<const IndexedCircuit> ic,
                                    std::shared_ptr<const Network> net);

} // namespace dqc
