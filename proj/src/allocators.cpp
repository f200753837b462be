#include "dqc/allocators.hpp"

#include "dqc/cost.hpp"
#include "dqc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <set>

namespace dqc {

void check_capacity(const IndexedCircuit& ic, const Network& net) {
    if (net.total_comp() < ic.qubits())
        throw Infeasible("network holds " + std::to_string(net.total_comp()) + " qubits, circuit needs " +
                         std::to_string(ic.qubits()));
}

namespace {

void gates_with_first_qubit(Distribution& d) {
    for (int g : d.gate_vertices()) d.phi_g[static_cast<std::size_t>(g)] = d.phi_q[static_cast<std::size_t>(d.circuit()[static_cast<std::size_t>(g)].q0)];
}

// Slots module ids once per free computation qubit, shuffled.
std::vector<int> random_slots(const Network& net, std::mt19937_64& rng) {
    std::vector<int> slots;
    for (int m = 0; m < net.size(); ++m)
        for (int i = 0; i < net.module(m).comp; ++i) slots.push_back(m);
    std::shuffle(slots.begin(), slots.end(), rng);
    return slots;
}

// ------------------------------------------------------------ k-way FM

class Fm {
public:
    Fm(Distribution& d, std::mt19937_64& rng) : d_(d), rng_(rng) {
        n_ = d.qubits();
        k_ = d.network().size();
        for (int g : d.gate_vertices()) gates_.push_back(g);
        nv_ = n_ + static_cast<int>(gates_.size());
        inc_.resize(static_cast<std::size_t>(nv_));
        for (std::size_t h = 0; h < d.hedges.size(); ++h) {
            const auto& e = d.hedges[h];
            inc_[static_cast<std::size_t>(e.root)].push_back(static_cast<int>(h));
        }
        for (std::size_t i = 0; i < gates_.size(); ++i) {
            int v = n_ + static_cast<int>(i);
            const Gate& gt = d.circuit()[static_cast<std::size_t>(gates_[i])];
            for (int q : {gt.q0, gt.q1}) {
                int h = d.hedge_of(gates_[i], q);
                if (h >= 0) inc_[static_cast<std::size_t>(v)].push_back(h);
            }
        }
        cap_.resize(static_cast<std::size_t>(k_));
        for (int m = 0; m < k_; ++m) cap_[static_cast<std::size_t>(m)] = d.network().module(m).comp;
    }

    int part(int v) const {
        return v < n_ ? d_.phi_q[static_cast<std::size_t>(v)] : d_.phi_g[static_cast<std::size_t>(gates_[static_cast<std::size_t>(v - n_)])];
    }
    void set(int v, int m) {
        if (v < n_) d_.phi_q[static_cast<std::size_t>(v)] = m;
        else d_.phi_g[static_cast<std::size_t>(gates_[static_cast<std::size_t>(v - n_)])] = m;
    }

    void rebuild_pins() {
        pins_.assign(d_.hedges.size() * static_cast<std::size_t>(k_), 0);
        load_.assign(static_cast<std::size_t>(k_), 0);
        for (int v = 0; v < nv_; ++v) {
            for (int h : inc_[static_cast<std::size_t>(v)]) ++pin(h, part(v));
            if (v < n_) ++load_[static_cast<std::size_t>(part(v))];
        }
    }

    int connectivity() const {
        int c = 0;
        for (std::size_t h = 0; h < d_.hedges.size(); ++h) {
            int lam = 0;
            for (int m = 0; m < k_; ++m) lam += pins_[h * static_cast<std::size_t>(k_) + static_cast<std::size_t>(m)] > 0;
            c += lam - 1;
        }
        return c;
    }

    // Improve with FM passes until one pass gains nothing.
    void run(int max_passes = 20) {
        rebuild_pins();
        for (int p = 0; p < max_passes; ++p)
            if (pass() <= 0) break;
    }

private:
    int& pin(int h, int m) { return pins_[static_cast<std::size_t>(h) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(m)]; }

    int gain(int v, int to) {
        const int from = part(v);
        int g = 0;
        for (int h : inc_[static_cast<std::size_t>(v)]) {
            if (pin(h, from) == 1) ++g;
            if (pin(h, to) == 0) --g;
        }
        return g;
    }

    void move(int v, int to) {
        const int from = part(v);
        for (int h : inc_[static_cast<std::size_t>(v)]) {
            --pin(h, from);
            ++pin(h, to);
        }
        if (v < n_) {
            --load_[static_cast<std::size_t>(from)];
            ++load_[static_cast<std::size_t>(to)];
        }
        set(v, to);
    }

    struct Step {
        int v, from, to;
        int w = -1, wfrom = -1;   // swap partner
    };

    int pass() {
        std::vector<char> locked(static_cast<std::size_t>(nv_), 0);
        std::vector<int> order(static_cast<std::size_t>(nv_));
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng_);
        std::vector<Step> steps;
        int cum = 0, best = 0;
        std::size_t best_len = 0;
        for (int iter = 0; iter < nv_; ++iter) {
            int bg = std::numeric_limits<int>::min();
            Step bs{-1, -1, -1};
            for (int v : order) {
                if (locked[static_cast<std::size_t>(v)]) continue;
                const int from = part(v);
                // Only modules already holding a pin of v's hyperedges can gain.
                std::set<int> targets;
                for (int h : inc_[static_cast<std::size_t>(v)])
                    for (int m = 0; m < k_; ++m)
                        if (m != from && pin(h, m) > 0) targets.insert(m);
                for (int to : targets) {
                    if (v >= n_ || load_[static_cast<std::size_t>(to)] < cap_[static_cast<std::size_t>(to)]) {
                        int g = gain(v, to);
                        if (g > bg) {
                            bg = g;
                            bs = {v, from, to};
                        }
                        continue;
                    }
                    // Full: swap with a qubit living there.
                    int g1 = gain(v, to);
                    move(v, to);
                    for (int w = 0; w < n_; ++w) {
                        if (w == v || locked[static_cast<std::size_t>(w)] || part(w) != to) continue;
                        int g = g1 + gain(w, from);
                        if (g > bg) {
                            bg = g;
                            bs = {v, from, to, w, to};
                        }
                    }
                    move(v, from);
                }
            }
            if (bs.v < 0) break;
            move(bs.v, bs.to);
            locked[static_cast<std::size_t>(bs.v)] = 1;
            if (bs.w >= 0) {
                move(bs.w, bs.from);
                locked[static_cast<std::size_t>(bs.w)] = 1;
            }
            steps.push_back(bs);
            cum += bg;
            if (cum > best) {
                best = cum;
                best_len = steps.size();
            }
        }
        while (steps.size() > best_len) {
            Step s = steps.back();
            steps.pop_back();
            if (s.w >= 0) move(s.w, s.wfrom);
            move(s.v, s.from);
        }
        return best;
    }

    Distribution& d_;
    std::mt19937_64& rng_;
    int n_ = 0, k_ = 0, nv_ = 0;
    std::vector<int> gates_;
    std::vector<std::vector<int>> inc_;
    std::vector<int> pins_;
    std::vector<int> load_;
    std::vector<int> cap_;
};

// Fill modules in a random order, each time pulling in the unplaced qubit
// that interacts most with the module so far.
void greedy_growth(Distribution& d, std::mt19937_64& rng) {
    const auto& ic = d.ic();
    const int n = d.qubits();
    std::vector<std::vector<int>> w(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    for (const Gate& g : ic.circuit.gates())
        if (g.kind == GateKind::CRz) {
            ++w[static_cast<std::size_t>(g.q0)][static_cast<std::size_t>(g.q1)];
            ++w[static_cast<std::size_t>(g.q1)][static_cast<std::size_t>(g.q0)];
        }
    std::vector<int> mods(static_cast<std::size_t>(d.network().size()));
    std::iota(mods.begin(), mods.end(), 0);
    std::shuffle(mods.begin(), mods.end(), rng);
    std::vector<char> placed(static_cast<std::size_t>(n), 0);
    int left = n;
    for (int m : mods) {
        int room = d.network().module(m).comp;
        std::vector<int> score(static_cast<std::size_t>(n), 0);
        bool first = true;
        while (room > 0 && left > 0) {
            int pick = -1;
            if (first) {
                std::vector<int> free;
                for (int q = 0; q < n; ++q)
                    if (!placed[static_cast<std::size_t>(q)]) free.push_back(q);
                pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
                first = false;
            } else {
                for (int q = 0; q < n; ++q)
                    if (!placed[static_cast<std::size_t>(q)] && (pick < 0 || score[static_cast<std::size_t>(q)] > score[static_cast<std::size_t>(pick)]))
                        pick = q;
            }
            placed[static_cast<std::size_t>(pick)] = 1;
            d.phi_q[static_cast<std::size_t>(pick)] = m;
            for (int q = 0; q < n; ++q) score[static_cast<std::size_t>(q)] += w[static_cast<std::size_t>(pick)][static_cast<std::size_t>(q)];
            --room;
            --left;
        }
    }
    gates_with_first_qubit(d);
}

// Every gate-vertex to the cheaper of its qubits' modules.
void gates_to_endpoints(Distribution& d) {
    for (int g : d.gate_vertices()) {
        const Gate& gt = d.circuit()[static_cast<std::size_t>(g)];
        int a = d.phi_q[static_cast<std::size_t>(gt.q0)], b = d.phi_q[static_cast<std::size_t>(gt.q1)];
        int cur = d.phi_g[static_cast<std::size_t>(g)];
        if (cur != a && cur != b) d.phi_g[static_cast<std::size_t>(g)] = cur = a;
        int other = cur == a ? b : a;
        if (other != cur && move_gain(d, {true, g}, other) > 0) d.phi_g[static_cast<std::size_t>(g)] = other;
    }
}

} // namespace

Distribution random_allocation(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net,
                               std::uint64_t seed) {
    check_capacity(*ic, *net);
    std::mt19937_64 rng(seed);
    Distribution d = make_distribution(ic, net);
    auto slots = random_slots(*net, rng);
    for (int q = 0; q < d.qubits(); ++q) d.phi_q[static_cast<std::size_t>(q)] = slots[static_cast<std::size_t>(q)];
    gates_with_first_qubit(d);
    return d;
}

Distribution initial_partition(std::shared_ptr<const IndexedCircuit> ic, std::shared_ptr<const Network> net,
                               std::uint64_t seed, int starts) {
    check_capacity(*ic, *net);
    std::mt19937_64 rng(seed);
    std::optional<Distribution> best;
    int best_cost = 0, best_conn = 0;
    for (int s = 0; s < std::max(1, starts); ++s) {
        Distribution d = make_distribution(ic, net);
        if (s % 2 == 0) {
            greedy_growth(d, rng);
        } else {
            auto slots = random_slots(*net, rng);
            for (int q = 0; q < d.qubits(); ++q) d.phi_q[static_cast<std::size_t>(q)] = slots[static_cast<std::size_t>(q)];
            gates_with_first_qubit(d);
        }
        Fm fm(d, rng);
        fm.run();
        gates_to_endpoints(d);
        int cost = total_cost(d), conn = connectivity_cost(d);
        if (!best || cost < best_cost || (cost == best_cost && conn < best_conn)) {
            best = std::move(d);
            best_cost = cost;
            best_conn = conn;
        }
    }
    return std::move(*best);
}

// ------------------------------------------------------------ annealing

namespace {

struct Mover {
    Distribution& d;
    CostCache& cache;
    std::vector<int> load;

    // Applies the move, returns gain (old - new); undo() restores.
    int apply(const Move& m) {
        int before = cache.total();
        hs = affected_hedges(d, m.vertex);
        if (m.swap_with) {
            auto more = affected_hedges(d, {false, *m.swap_with});
            hs.insert(hs.end(), more.begin(), more.end());
            std::sort(hs.begin(), hs.end());
            hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
            d.phi_q[static_cast<std::size_t>(*m.swap_with)] = m.from;
        } else if (!m.vertex.gate) {
            --load[static_cast<std::size_t>(m.from)];
            ++load[static_cast<std::size_t>(m.to)];
        }
        d.set_module(m.vertex, m.to);
        cache.refresh(d, hs);
        return before - cache.total();
    }

    void undo(const Move& m) {
        d.set_module(m.vertex, m.from);
        if (m.swap_with) d.phi_q[static_cast<std::size_t>(*m.swap_with)] = m.to;
        else if (!m.vertex.gate) {
            ++load[static_cast<std::size_t>(m.from)];
            --load[static_cast<std::size_t>(m.to)];
        }
        cache.refresh(d, hs);
    }

    std::vector<int> hs;
};

std::vector<Vertex> all_vertices(const Distribution& d) {
    std::vector<Vertex> vs;
    for (int q = 0; q < d.qubits(); ++q) vs.push_back({false, q});
    for (int g : d.gate_vertices()) vs.push_back({true, g});
    return vs;
}

// Qubit move into a full module becomes a swap with a random resident.
std::optional<Move> make_move(const Distribution& d, const std::vector<int>& load, const Vertex& v, int to,
                              std::mt19937_64& rng) {
    Move m{v, d.module_of(v), to, std::nullopt};
    if (m.from == to) return std::nullopt;
    if (!v.gate && load[static_cast<std::size_t>(to)] >= d.network().module(to).comp) {
        std::vector<int> there;
        for (int q = 0; q < d.qubits(); ++q)
            if (d.phi_q[static_cast<std::size_t>(q)] == to) there.push_back(q);
        if (there.empty()) return std::nullopt;
        m.swap_with = there[std::uniform_int_distribution<std::size_t>(0, there.size() - 1)(rng)];
    }
    return m;
}

} // namespace

Distribution anneal(Distribution d, const AnnealParams& p) {
    if (p.iterations < 0) throw InvalidParams("iterations must be non-negative");
    if (!(p.cooling > 0.0 && p.cooling < 1.0)) throw InvalidParams("cooling rate must lie in (0,1)");
    const int k = d.network().size();
    if (p.iterations == 0 || k < 2) return d;
    std::mt19937_64 rng(p.seed);
    CostCache cache(d);
    Mover mv{d, cache, d.qubit_load(), {}};
    auto vs = all_vertices(d);
    if (vs.empty()) return d;
    std::uniform_int_distribution<std::size_t> pick_v(0, vs.size() - 1);
    std::uniform_int_distribution<int> pick_m(0, k - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto propose = [&]() -> std::optional<Move> {
        const Vertex v = vs[pick_v(rng)];
        int to = pick_m(rng);
        if (to == d.module_of(v)) to = (to + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(k - 1))) % k;
        return make_move(d, mv.load, v, to, rng);
    };

    double t = p.initial_temperature;
    if (t <= 0.0) {
        double sum = 0.0;
        int cnt = 0;
        for (int i = 0; i < 50; ++i) {
            auto m = propose();
            if (!m) continue;
            int g = mv.apply(*m);
            mv.undo(*m);
            if (std::abs(g) < kInvalidPenalty / 2) {
                sum += std::abs(g);
                ++cnt;
            }
        }
        t = cnt && sum > 0 ? sum / cnt : 1.0;
    }

    auto best_q = d.phi_q;
    auto best_g = d.phi_g;
    int best = cache.total();
    for (int it = 0; it < p.iterations; ++it, t *= p.cooling) {
        auto m = propose();
        if (!m) continue;
        int g = mv.apply(*m);
        bool accept = g >= 0 || (t > 0.0 && unit(rng) < std::exp(static_cast<double>(g) / t));
        if (!accept) {
            mv.undo(*m);
            continue;
        }
        if (cache.total() < best) {
            best = cache.total();
            best_q = d.phi_q;
            best_g = d.phi_g;
        }
    }
    d.phi_q = best_q;
    d.phi_g = best_g;
    return d;
}

// ------------------------------------------------------------ boundary

Distribution boundary_reallocate(Distribution d, const BoundaryOptions& opt) {
    if (opt.max_rounds < 0) throw InvalidParams("max_rounds must be non-negative");
    const int k = d.network().size();
    if (k < 2) return d;
    std::mt19937_64 rng(opt.seed);
    CostCache cache(d);
    Mover mv{d, cache, d.qubit_load(), {}};

    std::set<int> frozen;
    if (opt.freeze_embedded)
        for (std::size_t h = 0; h < d.hedges.size(); ++h) {
            try {
                for (const auto& u : analyze_hyperedge(d, static_cast<int>(h)).units)
                    frozen.insert(u.czs.begin(), u.czs.end());
            } catch (const InvalidHyperedge&) {
            }
        }

    for (int round = 0; round < opt.max_rounds; ++round) {
        const int start = cache.total();
        // Vertices of every hyperedge that currently costs something.
        std::set<std::pair<int, int>> seen;   // (gate?, id)
        std::vector<Vertex> boundary;
        auto add = [&](Vertex v) {
            if (seen.insert({v.gate, v.id}).second) boundary.push_back(v);
        };
        for (std::size_t h = 0; h < d.hedges.size(); ++h) {
            if (cache.hedge(static_cast<int>(h)) == 0) continue;
            const auto& e = d.hedges[h];
            if (!opt.gates_only) add({false, e.root});
            for (int g : e.gates)
                if (!frozen.count(g)) add({true, g});
        }
        for (const Vertex& v : boundary) {
            const int from = d.module_of(v);
            std::set<int> targets;
            if (opt.any_module) {
                for (int m = 0; m < k; ++m) targets.insert(m);
            } else {
                for (int h : affected_hedges(d, v)) {
                    const auto& e = d.hedges[static_cast<std::size_t>(h)];
                    targets.insert(d.phi_q[static_cast<std::size_t>(e.root)]);
                    for (int g : e.gates) targets.insert(d.phi_g[static_cast<std::size_t>(g)]);
                }
            }
            targets.erase(from);
            int best_gain = -1, ties = 0;
            std::optional<Move> best;
            auto consider = [&](const Move& m) {
                int g = mv.apply(m);
                mv.undo(m);
                if (g > best_gain) {
                    best_gain = g;
                    best = m;
                    ties = 1;
                } else if (g == best_gain && best_gain >= 0) {
                    // Reservoir sampling among equally good moves.
                    if (std::uniform_int_distribution<int>(0, ties)(rng) == 0) best = m;
                    ++ties;
                }
            };
            for (int to : targets) {
                if (v.gate || mv.load[static_cast<std::size_t>(to)] < d.network().module(to).comp) {
                    consider({v, from, to, std::nullopt});
                    continue;
                }
                for (int q = 0; q < d.qubits(); ++q)
                    if (d.phi_q[static_cast<std::size_t>(q)] == to) consider({v, from, to, q});
            }
            if (best && best_gain >= 0) mv.apply(*best);
        }
        if (cache.total() >= start) break;
    }
    return d;
}

Distribution boundary_reallocate(Distribution d, int max_rounds, std::uint64_t seed) {
    BoundaryOptions o;
    o.max_rounds = max_rounds;
    o.seed = seed;
    return boundary_reallocate(std::move(d), o);
}

} // namespace dqc
