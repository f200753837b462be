#pragma once

#include "dqc/builder.hpp"
#include "dqc/circuit.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace dqc {

using cplx = std::complex<double>;

// Row-major 2^n x 2^n matrix; basis index bit q is qubit q.
struct Matrix {
    int dim = 0;
    std::vector<cplx> a;
    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)]; }
    cplx operator()(int r, int c) const { return a[static_cast<std::size_t>(r) * static_cast<std::size_t>(dim) + static_cast<std::size_t>(c)]; }
};

constexpr int kMaxSimQubits = 14;

// Dense unitary of any supported gate set. Rx(t) means H.Rz(t).H.
Matrix unitary_of(const Circuit& c);

// Minimal statevector over `wires` qubits.
class StateVector {
public:
    explicit StateVector(int wires);
    int wires() const { return w_; }
    std::vector<cplx>& amps() { return amp_; }
    const std::vector<cplx>& amps() const { return amp_; }

    void h(int q);
    void x(int q);
    void phase(int q, double half_turns);                  // diag(1, e^{i pi t})
    void cphase(int a, int b, double half_turns);          // diag(1,1,1,e^{i pi t})
    void cx(int c, int t);
    // Project wire q onto `outcome`, scale by sqrt(2) and reset it to |0>.
    void project_reset(int q, int outcome);
    double prob_one(int q) const;

private:
    int w_;
    std::vector<cplx> amp_;
};

void apply_gate(StateVector& sv, const Gate& g);

enum class VerifyMode {
    Branch,       // fixed measurement outcome patterns, measured wires recycled
    Deferred,     // coherent controls instead of measurement; one wire per link allocation
    Stochastic,   // Born-sampled outcomes on random input states
};

struct VerifyOptions {
    double tol = 1e-8;
    int patterns = 3;          // branch mode: all zeros, all ones, then random
    int samples = 4;           // stochastic mode
    std::uint64_t seed = 1;
    bool deferred_if_fits = true;
    bool stochastic = true;
};

struct VerifyReport {
    bool pass = true;
    std::vector<std::string> modes;   // modes actually run
    int sim_wires = 0;
    double max_residual = 0.0;
    std::string message;
};

// Throws TooLarge when the branch-mode simulation would exceed kMaxSimQubits.
// Failures are reported, not thrown; see require_equivalent.
VerifyReport verify_equivalence(const Circuit& original, const DistributedCircuit& built,
                                const VerifyOptions& opt = {});
// Same, throwing NonFactorizable on failure.
void require_equivalent(const Circuit& original, const DistributedCircuit& built, const VerifyOptions& opt = {});

// Number of simulator wires the branch mode needs.
int branch_wires(const DistributedCircuit& built);

} // namespace dqc
