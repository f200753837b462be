#pragma once
// Small hand-built instances and independent oracles shared by the tests.

#include "dqc/allocators.hpp"
#include "dqc/circuit.hpp"
#include "dqc/distribution.hpp"
#include "dqc/network.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace fx {

using dqc::Circuit;
using dqc::Distribution;
using dqc::Network;
using cplx = std::complex<double>;

inline std::shared_ptr<const Network> net(std::vector<std::pair<std::string, int>> mods,
                                          std::vector<std::pair<std::string, std::string>> edges,
                                          std::optional<int> link = std::nullopt) {
    std::vector<dqc::Module> ms;
    for (auto& [n, w] : mods) ms.push_back({n, w, link});
    return std::make_shared<const Network>(std::move(ms), edges);
}

inline std::shared_ptr<const Network> complete(int k, int comp, std::optional<int> link = std::nullopt) {
    std::vector<std::pair<std::string, int>> mods;
    std::vector<std::pair<std::string, std::string>> es;
    for (int i = 0; i < k; ++i) mods.emplace_back("M" + std::to_string(i), comp);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) es.emplace_back("M" + std::to_string(i), "M" + std::to_string(j));
    return net(mods, es, link);
}

// Distribution with the given allocation; gates default to their first qubit's
// module, hyperedges to the basic hypergraph unless given.
inline Distribution make(std::shared_ptr<const dqc::IndexedCircuit> ic, std::shared_ptr<const Network> n,
                         const std::vector<int>& phi_q, const std::map<int, int>& phi_g = {},
                         const std::vector<dqc::Hyperedge>* hedges = nullptr) {
    Distribution d = dqc::make_distribution(ic, n);
    d.phi_q = phi_q;
    for (int g : d.gate_vertices()) d.phi_g[static_cast<std::size_t>(g)] = phi_q[static_cast<std::size_t>(ic->gate(g).q0)];
    for (auto [g, m] : phi_g) d.phi_g[static_cast<std::size_t>(g)] = m;
    if (hedges) d.hedges = *hedges;
    d.reindex();
    return d;
}

// ---------------------------------------------------------------- circuits

// Two CRz sharing q0 (on A) with partners q1, q2 (on B).
inline Circuit shared_root() {
    Circuit c(3);
    c.crz(0, 1, 0.3).crz(0, 2, 0.7);
    return c;
}

// q0 q1 on A, q2 q3 on B is optimal with two cut hyperedges.
//   0 a(0,2) 1 b(1,2) 2 H2 3 H1 4 g(2,3) 5 H2 6 H3 7 d(1,2) 8 e(1,3)
inline Circuit two_module_example() {
    Circuit c(4);
    c.crz(0, 2, 0.21).crz(1, 2, 0.33).h(2).h(1).crz(2, 3, 0.47).h(2).h(3).crz(1, 2, 0.59).crz(1, 3, 0.71);
    return c;
}

// H.Z.H between two CRz from q0 (A) to q1, q2 (B).
inline Circuit z_sandwich() {
    Circuit c(3);
    c.crz(0, 1, 0.3).h(0).rz(0, 1.0).h(0).crz(0, 2, 0.6);
    return c;
}

// H.CZ.H between two CRz from q0 (A) to B; the CZ partner q2 is on B too.
inline Circuit cz_sandwich() {
    Circuit c(4);
    c.crz(0, 1, 0.3).h(0).crz(0, 2, 1.0).h(0).crz(0, 3, 0.6);
    return c;
}

// One CZ inside H-sandwiches on both of its qubits, framed by CRz so that
// both sides want to merge across it.
//   0 a(0,1) 1 H0 2 H1 3 CZ(0,1) 4 H0 5 H1 6 b(0,1)
inline Circuit cz_conflict() {
    Circuit c(2);
    c.crz(0, 1, 0.3).h(0).h(1).crz(0, 1, 1.0).h(0).h(1).crz(0, 1, 0.6);
    return c;
}

// a(A,B), b(A,C), c(B,C) with one qubit per module.
inline Circuit three_gate_line() {
    Circuit c(3);
    c.crz(0, 1, 0.3).crz(0, 2, 0.5).crz(1, 2, 0.7);
    return c;
}

// q0 on A shares gates with q1 on B and q2 on C.
inline Circuit fanout() {
    Circuit c(3);
    c.crz(0, 1, 0.3).crz(0, 2, 0.6);
    return c;
}

// q0 on A: a to C, then H.CZ(q0,q1).H with q1 on B, then b to D.
//   0 a(0,2) 1 H0 2 CZ(0,1) 3 H0 4 b(0,3)
inline Circuit embedded_cz_star() {
    Circuit c(4);
    c.crz(0, 2, 0.3).h(0).crz(0, 1, 1.0).h(0).crz(0, 3, 0.6);
    return c;
}

// ---------------------------------------------------------------- random

inline Circuit random_rebased(int n, int gates, std::uint64_t seed, double p_two = 0.5, double p_cz = 0.3) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> q(0, n - 1);
    Circuit c(n);
    for (int i = 0; i < gates; ++i) {
        const double r = u(rng);
        if (n >= 2 && r < p_two) {
            int a = q(rng), b = q(rng);
            while (b == a) b = q(rng);
            c.crz(a, b, u(rng) < p_cz ? 1.0 : std::round(u(rng) * 16.0) / 8.0);
        } else if (r < p_two + (1 - p_two) / 2) {
            c.h(q(rng));
        } else {
            const double ph = u(rng) < 0.3 ? 1.0 : std::round(u(rng) * 16.0) / 8.0;
            c.rz(q(rng), ph);
        }
    }
    return c;
}

// CRz bursts from random roots, often followed by H.(CZ | Z)*.H sandwiches on
// the root: plenty of embedding opportunities.
inline Circuit unit_rich(int n, int steps, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> q(0, n - 1);
    auto other = [&](int r) {
        int x = q(rng);
        while (x == r) x = q(rng);
        return x;
    };
    Circuit c(n);
    for (int i = 0; i < steps; ++i) {
        const int r = q(rng);
        c.crz(r, other(r), static_cast<double>(rng() % 16) / 8.0);
        if (rng() % 2) {
            c.h(r);
            for (int k = 1 + static_cast<int>(rng() % 2); k > 0; --k) {
                if (rng() % 3) c.crz(r, other(r), 1.0);
                else c.rz(r, 1.0);
            }
            c.h(r);
        }
    }
    return c;
}

// Random gate placements (detached included), then random merges of
// consecutive hyperedges on each root wherever the result stays valid.
inline Distribution random_hyperedges(std::shared_ptr<const dqc::IndexedCircuit> ic, std::shared_ptr<const Network> n,
                               std::mt19937_64& rng) {
    Distribution d = dqc::random_allocation(ic, n, rng());
    const auto k = static_cast<unsigned>(n->size());
    for (int g : d.gate_vertices()) {
        const auto& gt = ic->gate(g);
        const unsigned r = static_cast<unsigned>(rng() % 5);
        d.phi_g[static_cast<std::size_t>(g)] = r < 2 ? d.phi_q[static_cast<std::size_t>(gt.q0)]
                                               : r < 4 ? d.phi_q[static_cast<std::size_t>(gt.q1)]
                                                       : static_cast<int>(rng() % k);
    }
    for (int q = 0; q < ic->qubits(); ++q) {
        for (bool merged = true; merged;) {
            merged = false;
            const auto on = d.hedges_on(q);
            for (std::size_t i = 0; i + 1 < on.size(); ++i) {
                if (rng() % 4 == 0) continue;
                Distribution t = d;
                auto& a = t.hedges[static_cast<std::size_t>(on[i])];
                const auto& b = t.hedges[static_cast<std::size_t>(on[i + 1])];
                a.gates.insert(a.gates.end(), b.gates.begin(), b.gates.end());
                t.hedges.erase(t.hedges.begin() + on[i + 1]);
                t.reindex();
                if (dqc::is_valid(t)) {
                    d = std::move(t);
                    merged = true;
                    break;
                }
            }
        }
    }
    return d;
}

// ---------------------------------------------------------------- oracles

using Dense = std::vector<std::vector<cplx>>;

inline Dense identity(int dim) {
    Dense m(static_cast<std::size_t>(dim), std::vector<cplx>(static_cast<std::size_t>(dim)));
    for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;
    return m;
}

inline Dense mul(const Dense& a, const Dense& b) {
    const std::size_t n = a.size();
    Dense r(n, std::vector<cplx>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            if (a[i][k] != cplx(0))
                for (std::size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

// Full-size matrix of one gate, straight from its definition. Bit q of a
// basis index is qubit q.
inline Dense gate_matrix(const dqc::Gate& g, int n) {
    const int dim = 1 << n;
    Dense m(static_cast<std::size_t>(dim), std::vector<cplx>(static_cast<std::size_t>(dim)));
    const double s = 1.0 / std::sqrt(2.0);
    auto e = [](double t) { return std::polar(1.0, std::numbers::pi * t); };
    auto bit = [](int x, int q) { return (x >> q) & 1; };
    using K = dqc::GateKind;
    for (int col = 0; col < dim; ++col) {
        auto put = [&](int row, cplx v) { m[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] += v; };
        switch (g.kind) {
        case K::H: {
            const int b = bit(col, g.q0);
            put(col & ~(1 << g.q0), s);
            put(col | (1 << g.q0), b ? -s : s);
            break;
        }
        case K::X: put(col ^ (1 << g.q0), 1.0); break;
        case K::Rz: put(col, bit(col, g.q0) ? e(g.phase) : cplx(1)); break;
        case K::Z: put(col, bit(col, g.q0) ? -1.0 : 1.0); break;
        case K::S: put(col, bit(col, g.q0) ? e(0.5) : cplx(1)); break;
        case K::Sdg: put(col, bit(col, g.q0) ? e(-0.5) : cplx(1)); break;
        case K::T: put(col, bit(col, g.q0) ? e(0.25) : cplx(1)); break;
        case K::Tdg: put(col, bit(col, g.q0) ? e(-0.25) : cplx(1)); break;
        case K::CRz: put(col, bit(col, g.q0) && bit(col, g.q1) ? e(g.phase) : cplx(1)); break;
        case K::CZ: put(col, bit(col, g.q0) && bit(col, g.q1) ? -1.0 : 1.0); break;
        case K::CX: put(bit(col, g.q0) ? col ^ (1 << g.q1) : col, 1.0); break;
        case K::Rx: {
            // H.Rz(t).H = [[1+e, 1-e], [1-e, 1+e]] / 2
            const cplx ph = e(g.phase);
            const int b = bit(col, g.q0);
            put(col & ~(1 << g.q0), b ? (1.0 - ph) / 2.0 : (1.0 + ph) / 2.0);
            put(col | (1 << g.q0), b ? (1.0 + ph) / 2.0 : (1.0 - ph) / 2.0);
            break;
        }
        }
    }
    return m;
}

inline Dense naive_unitary(const Circuit& c) {
    Dense u = identity(1 << c.qubit_count());
    for (const auto& g : c.gates()) u = mul(gate_matrix(g, c.qubit_count()), u);
    return u;
}

// max |a - e^{i t} b| over entries, t fitted at b's largest entry.
inline double phase_distance(const Dense& a, const Dense& b) {
    std::size_t bi = 0, bj = 0;
    double best = -1;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (std::abs(b[i][j]) > best) {
                best = std::abs(b[i][j]);
                bi = i;
                bj = j;
            }
    const cplx ph = a[bi][bj] / b[bi][bj];
    const cplx unit = ph / std::abs(ph);
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[i][j] - unit * b[i][j]));
    return worst;
}

// Connectivity metric recounted from hyperedges and the allocation alone.
inline int recount_connectivity(const Distribution& d) {
    int total = 0;
    for (const auto& e : d.hedges) {
        std::set<int> ms{d.phi_q[static_cast<std::size_t>(e.root)]};
        for (int g : e.gates) ms.insert(d.phi_g[static_cast<std::size_t>(g)]);
        total += static_cast<int>(ms.size()) - 1;
    }
    return total;
}

// Minimum over every connected edge subset containing the terminals.
inline int exhaustive_steiner(const Network& n, const std::vector<int>& terminals) {
    if (terminals.size() <= 1) return 0;
    const auto& es = n.edges();
    const int m = static_cast<int>(es.size());
    int best = 1 << 30;
    for (int mask = 0; mask < (1 << m); ++mask) {
        const int cnt = __builtin_popcount(static_cast<unsigned>(mask));
        if (cnt >= best) continue;
        std::vector<int> parent(static_cast<std::size_t>(n.size()));
        for (int i = 0; i < n.size(); ++i) parent[static_cast<std::size_t>(i)] = i;
        auto find = [&](int x) {
            while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
            return x;
        };
        for (int k = 0; k < m; ++k)
            if (mask >> k & 1) parent[static_cast<std::size_t>(find(es[static_cast<std::size_t>(k)].first))] = find(es[static_cast<std::size_t>(k)].second);
        const int r = find(terminals.front());
        bool ok = true;
        for (int t : terminals) ok = ok && find(t) == r;
        if (ok) best = cnt;
    }
    return best;
}

// Exhaustive minimum vertex cover.
inline int exhaustive_cover(int n, const std::vector<std::pair<int, int>>& edges) {
    int best = n;
    for (int mask = 0; mask < (1 << n); ++mask) {
        const int cnt = __builtin_popcount(static_cast<unsigned>(mask));
        if (cnt >= best) continue;
        bool ok = true;
        for (auto [a, b] : edges) ok = ok && ((mask >> a & 1) || (mask >> b & 1));
        if (ok) best = cnt;
    }
    return best;
}

// Exhaustive minimum connectivity over capacity-valid qubit allocations and
// endpoint gate placements, basic hypergraph.
inline int exhaustive_partition(std::shared_ptr<const dqc::IndexedCircuit> ic, std::shared_ptr<const Network> n) {
    const int q = ic->qubits(), k = n->size();
    Distribution d = dqc::make_distribution(ic, n);
    const auto gates = d.gate_vertices();
    int best = 1 << 30;
    std::vector<int> phi(static_cast<std::size_t>(q), 0);
    for (long code = 0;; ++code) {
        long c = code;
        for (int i = 0; i < q; ++i) {
            phi[static_cast<std::size_t>(i)] = static_cast<int>(c % k);
            c /= k;
        }
        if (c) break;
        std::vector<int> load(static_cast<std::size_t>(k), 0);
        bool fits = true;
        for (int m : phi) fits = fits && ++load[static_cast<std::size_t>(m)] <= n->module(m).comp;
        if (!fits) continue;
        d.phi_q = phi;
        // Each gate independently: each endpoint choice only touches its two
        // hyperedges, so try all 2^|G| when small, else greedy per gate is
        // not exact - keep instances small.
        const int ng = static_cast<int>(gates.size());
        for (int gm = 0; gm < (1 << ng); ++gm) {
            for (int i = 0; i < ng; ++i) {
                const auto& g = ic->gate(gates[static_cast<std::size_t>(i)]);
                d.phi_g[static_cast<std::size_t>(gates[static_cast<std::size_t>(i)])] =
                    phi[static_cast<std::size_t>((gm >> i & 1) ? g.q1 : g.q0)];
            }
            best = std::min(best, recount_connectivity(d));
        }
    }
    return best;
}

} // namespace fx
