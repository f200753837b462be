#include "dqc/verifier.hpp"

#include "dqc/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace dqc {

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

cplx eiphi(double half_turns) { return std::polar(1.0, kPi * half_turns); }

} // namespace

StateVector::StateVector(int wires) : w_(wires), amp_(std::size_t{1} << wires, cplx(0.0, 0.0)) { amp_[0] = 1.0; }

void StateVector::h(int q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) continue;
        cplx a = amp_[i], b = amp_[i | bit];
        amp_[i] = (a + b) * kInvSqrt2;
        amp_[i | bit] = (a - b) * kInvSqrt2;
    }
}

void StateVector::x(int q) {
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if (!(i & bit)) std::swap(amp_[i], amp_[i | bit]);
}

void StateVector::phase(int q, double t) {
    const std::size_t bit = std::size_t{1} << q;
    const cplx f = eiphi(t);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if (i & bit) amp_[i] *= f;
}

void StateVector::cphase(int a, int b, double t) {
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    const cplx f = eiphi(t);
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & mask) == mask) amp_[i] *= f;
}

void StateVector::cx(int c, int t) {
    const std::size_t cb = std::size_t{1} << c, tb = std::size_t{1} << t;
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if ((i & cb) && !(i & tb)) std::swap(amp_[i], amp_[i | tb]);
}

void StateVector::project_reset(int q, int outcome) {
    const std::size_t bit = std::size_t{1} << q;
    const double s = std::sqrt(2.0);
    for (std::size_t i = 0; i < amp_.size(); ++i) {
        if (i & bit) continue;
        cplx keep = outcome ? amp_[i | bit] : amp_[i];
        amp_[i] = keep * s;
        amp_[i | bit] = 0.0;
    }
}

double StateVector::prob_one(int q) const {
    const std::size_t bit = std::size_t{1} << q;
    double p = 0.0;
    for (std::size_t i = 0; i < amp_.size(); ++i)
        if (i & bit) p += std::norm(amp_[i]);
    return p;
}

void apply_gate(StateVector& sv, const Gate& g) {
    switch (g.kind) {
    case GateKind::H: sv.h(g.q0); break;
    case GateKind::Rz: sv.phase(g.q0, g.phase); break;
    case GateKind::CRz: sv.cphase(g.q0, g.q1, g.phase); break;
    case GateKind::X: sv.x(g.q0); break;
    case GateKind::Z: sv.phase(g.q0, 1.0); break;
    case GateKind::S: sv.phase(g.q0, 0.5); break;
    case GateKind::Sdg: sv.phase(g.q0, -0.5); break;
    case GateKind::T: sv.phase(g.q0, 0.25); break;
    case GateKind::Tdg: sv.phase(g.q0, -0.25); break;
    case GateKind::Rx:
        sv.h(g.q0);
        sv.phase(g.q0, g.phase);
        sv.h(g.q0);
        break;
    case GateKind::CZ: sv.cphase(g.q0, g.q1, 1.0); break;
    case GateKind::CX: sv.cx(g.q0, g.q1); break;
    }
}

Matrix unitary_of(const Circuit& c) {
    const int n = c.qubit_count();
    if (n > kMaxSimQubits) throw TooLarge(std::to_string(n) + " qubits exceeds the " + std::to_string(kMaxSimQubits) + "-qubit limit");
    Matrix m;
    m.dim = 1 << n;
    m.a.assign(static_cast<std::size_t>(m.dim) * static_cast<std::size_t>(m.dim), 0.0);
    for (int x = 0; x < m.dim; ++x) {
        StateVector sv(n);
        sv.amps()[0] = 0.0;
        sv.amps()[static_cast<std::size_t>(x)] = 1.0;
        for (const Gate& g : c.gates()) apply_gate(sv, g);
        for (int r = 0; r < m.dim; ++r) m(r, x) = sv.amps()[static_cast<std::size_t>(r)];
    }
    return m;
}

namespace {

enum class Outcomes { Fixed, Sampled, Coherent };

// Runs the distributed circuit. Computation wire q is simulator wire q; link
// wires get simulator wires above n as they are allocated.
class Runner {
public:
    Runner(const DistributedCircuit& dc, Outcomes how) : dc_(dc), how_(how) {}

    int wires_needed() const {
        const int n = dc_.qubits;
        if (how_ == Outcomes::Coherent) {
            int links = 0;
            for (const auto& op : dc_.ops)
                if (op.kind == OpKind::LinkQubit) ++links;
            return n + links;
        }
        int live = 0, peak = 0;
        for (const auto& op : dc_.ops) {
            if (op.kind == OpKind::LinkQubit) peak = std::max(peak, ++live);
            if (op.kind == OpKind::Measure && op.a.link) --live;
        }
        return n + peak;
    }

    // fixed: outcome per classical bit (Fixed mode); rng used in Sampled mode.
    void run(StateVector& sv, const std::vector<int>& fixed, std::mt19937_64* rng) {
        sim_.clear();
        free_.clear();
        next_ = dc_.qubits;
        bit_value_.assign(static_cast<std::size_t>(dc_.bits), 0);
        bit_wire_.assign(static_cast<std::size_t>(dc_.bits), -1);
        for (const auto& op : dc_.ops) {
            switch (op.kind) {
            case OpKind::H: sv.h(w(op.a)); break;
            case OpKind::X: sv.x(w(op.a)); break;
            case OpKind::Z: sv.phase(w(op.a), 1.0); break;
            case OpKind::Rz: sv.phase(w(op.a), op.phase); break;
            case OpKind::CRz: sv.cphase(w(op.a), w(op.b), op.phase); break;
            case OpKind::CZ: sv.cphase(w(op.a), w(op.b), 1.0); break;
            case OpKind::CX: sv.cx(w(op.a), w(op.b)); break;
            case OpKind::LinkQubit: allocate(op.a); break;
            case OpKind::EbitPrepare:
                sv.h(w(op.a));
                sv.cx(w(op.a), w(op.b));
                break;
            case OpKind::Measure: measure(sv, op, fixed, rng); break;
            case OpKind::CondX:
            case OpKind::CondZ: {
                const auto b = static_cast<std::size_t>(op.bit);
                if (how_ == Outcomes::Coherent) {
                    if (op.kind == OpKind::CondX) sv.cx(bit_wire_[b], w(op.b));
                    else sv.cphase(bit_wire_[b], w(op.b), 1.0);
                } else if (bit_value_[b]) {
                    if (op.kind == OpKind::CondX) sv.x(w(op.b));
                    else sv.phase(w(op.b), 1.0);
                }
                break;
            }
            }
        }
    }

private:
    int w(const Wire& x) const {
        if (!x.link) return x.index;
        auto it = sim_.find({x.module, x.index});
        if (it == sim_.end()) throw NonFactorizable("op on an unallocated link wire");
        return it->second;
    }

    void allocate(const Wire& x) {
        int s;
        if (how_ != Outcomes::Coherent && !free_.empty()) {
            s = *free_.begin();
            free_.erase(free_.begin());
        } else {
            s = next_++;
        }
        sim_[{x.module, x.index}] = s;
    }

    void measure(StateVector& sv, const Op& op, const std::vector<int>& fixed, std::mt19937_64* rng) {
        const int s = w(op.a);
        const auto b = static_cast<std::size_t>(op.bit);
        if (op.a.link) sim_.erase({op.a.module, op.a.index});
        if (how_ == Outcomes::Coherent) {
            bit_wire_[b] = s;
            return;
        }
        int outcome;
        if (how_ == Outcomes::Fixed) {
            outcome = fixed[b];
            sv.project_reset(s, outcome);
        } else {
            double p1 = sv.prob_one(s);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            outcome = u(*rng) < p1 ? 1 : 0;
            sv.project_reset(s, outcome);
            // project_reset scales by sqrt(2); renormalize to the sampled branch.
            double p = outcome ? p1 : 1.0 - p1;
            double scale = 1.0 / std::sqrt(2.0 * std::max(p, 1e-300));
            for (auto& a : sv.amps()) a *= scale;
        }
        bit_value_[b] = outcome;
        free_.insert(s);
    }

    const DistributedCircuit& dc_;
    Outcomes how_;
    std::map<std::pair<int, int>, int> sim_;
    std::set<int> free_;
    int next_ = 0;
    std::vector<int> bit_value_;
    std::vector<int> bit_wire_;
};

struct Residual {
    double worst = 0.0;
    std::string where;
};

// Columns of the distributed circuit must be U|x> (x) eta with one eta.
Residual factorized_columns(const Circuit& original, const DistributedCircuit& dc, Runner& runner, int wires,
                            const std::vector<int>& fixed) {
    const int n = dc.qubits;
    const std::size_t comp = std::size_t{1} << n;
    const std::size_t anc = std::size_t{1} << (wires - n);
    std::vector<cplx> eta0;
    Residual r;
    for (std::size_t x = 0; x < comp; ++x) {
        StateVector u(n);
        u.amps()[0] = 0.0;
        u.amps()[x] = 1.0;
        for (const Gate& g : original.gates()) apply_gate(u, g);
        StateVector sv(wires);
        sv.amps()[0] = 0.0;
        sv.amps()[x] = 1.0;
        runner.run(sv, fixed, nullptr);
        std::vector<cplx> eta(anc, 0.0);
        for (std::size_t l = 0; l < anc; ++l)
            for (std::size_t i = 0; i < comp; ++i) eta[l] += std::conj(u.amps()[i]) * sv.amps()[i + (l << n)];
        double worst = 0.0;
        for (std::size_t l = 0; l < anc; ++l)
            for (std::size_t i = 0; i < comp; ++i)
                worst = std::max(worst, std::abs(sv.amps()[i + (l << n)] - u.amps()[i] * eta[l]));
        double norm = 0.0;
        for (auto e : eta) norm += std::norm(e);
        worst = std::max(worst, std::abs(norm - 1.0));
        if (x == 0) eta0 = eta;
        for (std::size_t l = 0; l < anc; ++l) worst = std::max(worst, std::abs(eta[l] - eta0[l]));
        if (worst > r.worst) {
            r.worst = worst;
            r.where = "basis input " + std::to_string(x);
        }
    }
    return r;
}

} // namespace

int branch_wires(const DistributedCircuit& built) { return Runner(built, Outcomes::Fixed).wires_needed(); }

VerifyReport verify_equivalence(const Circuit& original, const DistributedCircuit& built, const VerifyOptions& opt) {
    if (original.qubit_count() != built.qubits)
        throw InvalidParams("original has " + std::to_string(original.qubit_count()) + " qubits, distributed has " +
                            std::to_string(built.qubits));
    VerifyReport rep;
    Runner branch(built, Outcomes::Fixed);
    rep.sim_wires = branch.wires_needed();
    if (rep.sim_wires > kMaxSimQubits)
        throw TooLarge(std::to_string(rep.sim_wires) + " simulator wires exceeds the " + std::to_string(kMaxSimQubits) +
                       "-qubit limit");
    std::mt19937_64 rng(opt.seed);
    auto fail = [&](const std::string& mode, const Residual& r) {
        rep.max_residual = std::max(rep.max_residual, r.worst);
        if (r.worst > opt.tol && rep.pass) {
            rep.pass = false;
            std::ostringstream s;
            s << mode << ": residual " << r.worst << " at " << r.where;
            rep.message = s.str();
        }
    };

    rep.modes.push_back("branch");
    for (int p = 0; p < std::max(1, opt.patterns); ++p) {
        std::vector<int> fixed(static_cast<std::size_t>(built.bits), p == 1 ? 1 : 0);
        if (p >= 2)
            for (auto& b : fixed) b = static_cast<int>(rng() & 1U);
        fail("branch pattern " + std::to_string(p), factorized_columns(original, built, branch, rep.sim_wires, fixed));
    }

    Runner deferred(built, Outcomes::Coherent);
    const int dw = deferred.wires_needed();
    if (opt.deferred_if_fits && dw <= kMaxSimQubits) {
        rep.modes.push_back("deferred");
        fail("deferred", factorized_columns(original, built, deferred, dw, {}));
    }

    if (opt.stochastic) {
        rep.modes.push_back("stochastic");
        Runner sampled(built, Outcomes::Sampled);
        const int n = built.qubits;
        std::normal_distribution<double> gauss;
        for (int s = 0; s < opt.samples; ++s) {
            StateVector psi(n);
            double norm = 0.0;
            for (auto& a : psi.amps()) {
                a = cplx(gauss(rng), gauss(rng));
                norm += std::norm(a);
            }
            for (auto& a : psi.amps()) a /= std::sqrt(norm);
            StateVector sv(rep.sim_wires);
            sv.amps()[0] = 0.0;
            std::copy(psi.amps().begin(), psi.amps().end(), sv.amps().begin());
            for (const Gate& g : original.gates()) apply_gate(psi, g);
            sampled.run(sv, {}, &rng);
            // Links end reset, so the output is c * U|psi> on the low wires.
            cplx c = 0.0;
            for (std::size_t i = 0; i < psi.amps().size(); ++i) c += std::conj(psi.amps()[i]) * sv.amps()[i];
            Residual r;
            r.where = "sample " + std::to_string(s);
            r.worst = std::abs(std::abs(c) - 1.0);
            for (std::size_t i = 0; i < sv.amps().size(); ++i) {
                cplx want = i < psi.amps().size() ? c * psi.amps()[i] : cplx(0.0);
                r.worst = std::max(r.worst, std::abs(sv.amps()[i] - want));
            }
            fail("stochastic", r);
        }
    }
    if (rep.pass) rep.message = "equivalent";
    return rep;
}

void require_equivalent(const Circuit& original, const DistributedCircuit& built, const VerifyOptions& opt) {
    auto rep = verify_equivalence(original, built, opt);
    if (!rep.pass) throw NonFactorizable(rep.message);
}

} // namespace dqc
