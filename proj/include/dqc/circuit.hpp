#pragma once

#include <array>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace dqc {

// Phases are stored in half-turns: Rz(1) is Z, Rz(1/2) is S.
constexpr double kPhaseTol = 1e-10;

// Reduce to [0, 2).
double wrap_phase(double p);
// a == b modulo 2 half-turns.
bool phase_eq(double a, double b, double tol = kPhaseTol);

enum class GateKind { H, Rz, CRz, X, Z, S, Sdg, T, Tdg, Rx, CZ, CX };

std::string_view kind_name(GateKind k);
// Throws UnsupportedGate for unknown names; accepts any letter case.
GateKind kind_from_name(std::string_view name);
bool is_two_qubit(GateKind k);
bool has_phase(GateKind k);

struct Gate {
    GateKind kind = GateKind::H;
    int q0 = 0;
    int q1 = -1;   // second qubit; for CX this is the target
    double phase = 0.0;

    bool acts_on(int q) const { return q0 == q || q1 == q; }
    int other(int q) const { return q0 == q ? q1 : q0; }
    bool operator==(const Gate& o) const;
};

class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int qubits);

    int qubit_count() const { return n_; }
    const std::vector<Gate>& gates() const { return gates_; }
    std::size_t size() const { return gates_.size(); }
    const Gate& operator[](std::size_t i) const { return gates_[i]; }

    Circuit& add(const Gate& g);
    Circuit& h(int q) { return add({GateKind::H, q, -1, 0.0}); }
    Circuit& rz(int q, double phase) { return add({GateKind::Rz, q, -1, phase}); }
    Circuit& crz(int a, int b, double phase) { return add({GateKind::CRz, a, b, phase}); }
    Circuit& cz(int a, int b) { return add({GateKind::CZ, a, b, 0.0}); }
    Circuit& cx(int c, int t) { return add({GateKind::CX, c, t, 0.0}); }

    bool is_rebased() const;
    int crz_count() const;

    bool operator==(const Circuit& o) const { return n_ == o.n_ && gates_ == o.gates_; }

private:
    int n_ = 0;
    std::vector<Gate> gates_;
};

// Rewrite into {H, Rz, CRz}; equal up to global phase.
Circuit rebase(const Circuit& c);

// Indices of the gates touching q, ascending.
std::vector<int> qubit_timeline(const Circuit& c, int q);

// A rebased circuit with per-qubit timelines precomputed. Shared read-only
// by every pass downstream of rebase.
struct IndexedCircuit {
    Circuit circuit;
    std::vector<std::vector<int>> timeline;   // per qubit
    std::vector<std::array<int, 2>> tpos;     // per gate: position in timeline of q0 / q1

    const Gate& gate(int i) const { return circuit[static_cast<std::size_t>(i)]; }
    int qubits() const { return circuit.qubit_count(); }
    // Position of gate i in q's timeline.
    int pos_on(int i, int q) const;
};

std::shared_ptr<const IndexedCircuit> index_circuit(Circuit c);

// JSON ({"qubits":n,"gates":[...]}) and a small OpenQASM-2 subset.
std::string circuit_to_json(const Circuit& c, int indent = -1);
Circuit circuit_from_json(const std::string& text);
Circuit circuit_from_qasm(const std::string& text);
// Loads by extension: .qasm -> QASM reader, anything else -> JSON.
Circuit load_circuit(const std::string& path);

} // namespace dqc
