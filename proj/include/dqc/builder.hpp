#pragma once

#include "dqc/distribution.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace dqc {

// Computation wires are the original qubits; link wires are slots of a
// module's link register, reused after their ending process.
struct Wire {
    int module = 0;
    int index = 0;
    bool link = false;

    bool operator==(const Wire& o) const { return module == o.module && index == o.index && link == o.link; }
    bool operator<(const Wire& o) const {
        return std::tie(link, module, index) < std::tie(o.link, o.module, o.index);
    }
};

enum class OpKind { H, Rz, CRz, X, Z, CX, CZ, LinkQubit, EbitPrepare, Measure, CondX, CondZ };
enum class OpRole { Original, Start, End, Correction };

std::string_view op_kind_name(OpKind k);

struct Op {
    OpKind kind = OpKind::H;
    Wire a;
    Wire b;               // second operand of two-wire ops; target of CondX/CondZ
    double phase = 0.0;   // Rz / CRz, half-turns
    int bit = -1;         // Measure writes it, CondX / CondZ read it
    OpRole role = OpRole::Original;
    int hedge = -1;       // owning hyperedge for protocol ops
    int anchor = -1;      // circuit gate index the op is attached to
};

struct LinkOverflow {
    int module = -1;
    int anchor = -1;     // gate index of the slot where the bound was first exceeded
    int slot = 0;        // 0 teardown, 1 starting, 2 gate, 3 correction, 4 ending
    std::vector<int> holders;   // hyperedges holding a link on `module` at that moment
};

struct DistributedCircuit {
    int qubits = 0;
    std::vector<int> qubit_module;
    std::vector<std::string> module_names;
    std::vector<int> link_capacity;   // -1 = unbounded
    std::vector<Op> ops;
    int bits = 0;
    int ebit_count = 0;
    std::vector<int> peak_links;      // per module, held links only (not the momentary ebit half)
    std::vector<int> hedge_ebits;     // starting processes per hyperedge

    // Readouts of the distribution it was built from.
    int nonlocal_gates = 0;
    int detached_gates = 0;
    int hyperedges = 0;

    std::optional<LinkOverflow> overflow;   // first link-capacity violation, if any
};

struct BuildStats {
    int ebit_count = 0;
    std::vector<int> peak_links;
    int peak_link_max = 0;
    int nonlocal_gates = 0;
    int detached_gates = 0;
    int hyperedges = 0;
    int nonlocal_corrections = 0;   // correction gates spanning two modules
    int nonlocal_ops = 0;           // any two-wire quantum op spanning modules (ebits excluded)
};

// Per-hyperedge rewrite with lazy starting processes, eager ending processes,
// embedding corrections mirrored onto live links, and pooled link registers.
DistributedCircuit build(const Distribution& d);

BuildStats stats(const DistributedCircuit& dc);

// Split hyperedges that hold links across an overloaded moment until every
// module's peak fits its link register.
std::pair<Distribution, DistributedCircuit> enforce_link_bound(Distribution d, DistributedCircuit built);

std::string distributed_to_json(const DistributedCircuit& dc, int indent = -1);
DistributedCircuit distributed_from_json(const std::string& text);
std::string distributed_to_qasm(const DistributedCircuit& dc);
std::string stats_to_json(const BuildStats& s, const std::vector<std::string>& names, int indent = -1);

} // namespace dqc
