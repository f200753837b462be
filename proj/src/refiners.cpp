#include "dqc/refiners.hpp"

#include "dqc/allocators.hpp"
#include "dqc/cost.hpp"
#include "dqc/error.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>

namespace dqc {

Distribution refine_detached(Distribution d, std::uint64_t seed) {
    BoundaryOptions o;
    o.gates_only = true;
    o.any_module = true;
    o.freeze_embedded = true;
    o.seed = seed;
    return boundary_reallocate(std::move(d), o);
}

namespace {

int sum_cost(const Distribution& d, const std::set<int>& hs) {
    int s = 0;
    for (int h : hs) s += hedge_cost_or_penalty(d, h);
    return s;
}

// Hyperedges of `d` that hold any of `gates` on either side.
std::set<int> holders(const Distribution& d, const std::vector<int>& gates) {
    std::set<int> hs;
    for (int g : gates) {
        const Gate& gt = d.circuit()[static_cast<std::size_t>(g)];
        for (int q : {gt.q0, gt.q1}) {
            int h = d.hedge_of(g, q);
            if (h >= 0) hs.insert(h);
        }
    }
    return hs;
}

// Merge hyperedges hs (consecutive, same root) into one; returns the trial.
Distribution merged(const Distribution& d, const std::vector<int>& hs) {
    Distribution t = d;
    auto& into = t.hedges[static_cast<std::size_t>(hs.front())];
    for (std::size_t i = 1; i < hs.size(); ++i) {
        auto& e = t.hedges[static_cast<std::size_t>(hs[i])];
        into.gates.insert(into.gates.end(), e.gates.begin(), e.gates.end());
        e.gates.clear();
    }
    t.reindex();
    return t;
}

bool h_between(const Distribution& d, int q, int a, int b) {
    const auto& ic = d.ic();
    const auto& tl = ic.timeline[static_cast<std::size_t>(q)];
    for (int p = ic.pos_on(a, q) + 1; p < ic.pos_on(b, q); ++p)
        if (ic.gate(tl[static_cast<std::size_t>(p)]).kind == GateKind::H) return true;
    return false;
}

// Try to merge hyperedges a and b (consecutive on one root, no H between).
bool try_seam_merge(Distribution& d, int a, int b) {
    const auto& ea = d.hedges[static_cast<std::size_t>(a)];
    const auto& eb = d.hedges[static_cast<std::size_t>(b)];
    if (ea.root != eb.root || h_between(d, ea.root, ea.last(), eb.first())) return false;
    const int before = hedge_cost_or_penalty(d, a) + hedge_cost_or_penalty(d, b);
    if (before >= kInvalidPenalty) return false;
    Distribution t = merged(d, {a, b});
    const int h = t.hedge_of(ea.first(), ea.root);
    const int after = hedge_cost_or_penalty(t, h);
    if (after > before) return false;
    d = std::move(t);
    return true;
}

// Merge adjacent pairs in the given order of pair positions on each root;
// positions refer to hedges_on(q) at the moment of the attempt.
Distribution seam_scan(Distribution d, bool interleaved) {
    for (int q = 0; q < d.qubits(); ++q) {
        if (!interleaved) {
            std::size_t i = 0;
            while (i + 1 < d.hedges_on(q).size()) {
                const auto& on = d.hedges_on(q);
                if (!try_seam_merge(d, on[i], on[i + 1])) ++i;   // on success retry the grown hyperedge
            }
            continue;
        }
        for (int parity : {1, 0}) {
            std::size_t i = static_cast<std::size_t>(parity);
            while (i + 1 < d.hedges_on(q).size()) {
                const auto& on = d.hedges_on(q);
                if (try_seam_merge(d, on[i], on[i + 1])) ++i;   // pair consumed
                else i += 2;
            }
        }
        for (std::size_t i = d.hedges_on(q).size(); i-- > 1;) {
            if (i >= d.hedges_on(q).size()) continue;
            const auto& on = d.hedges_on(q);
            try_seam_merge(d, on[i - 1], on[i]);
        }
    }
    return d;
}

} // namespace

Distribution refine_dtype_neighbouring(Distribution d) { return seam_scan(std::move(d), false); }
Distribution refine_dtype_intertwined(Distribution d) { return seam_scan(std::move(d), true); }

Distribution refine_eager_h_merge(Distribution d, int window) {
    for (int q = 0; q < d.qubits(); ++q) {
        const int home = d.phi_q[static_cast<std::size_t>(q)];
        std::size_t i = 0;
        while (i + 1 < d.hedges_on(q).size()) {
            const auto on = d.hedges_on(q);
            int best_gain = -1;
            std::optional<Distribution> best;
            std::vector<int> span{on[i]};
            for (std::size_t j = i + 1; j < on.size() && static_cast<int>(j - i) <= window; ++j) {
                span.push_back(on[j]);
                Distribution t = merged(d, span);
                const auto& e = t.hedges[static_cast<std::size_t>(t.hedge_of(d.hedges[static_cast<std::size_t>(on[i])].first(), q))];
                // Embedded CZs of every unit in the merged span go home.
                std::vector<int> moved;
                bool ok = true, fatal = false;
                const auto& ic = t.ic();
                const auto& tl = ic.timeline[static_cast<std::size_t>(q)];
                for (int p = ic.pos_on(e.first(), q); p <= ic.pos_on(e.last(), q); ++p) {
                    if (ic.gate(tl[static_cast<std::size_t>(p)]).kind != GateKind::H) continue;
                    auto u = embedding_unit_at(ic, t.phi_q, q, p);
                    if (!u) {
                        fatal = true;   // a longer span keeps this H
                        break;
                    }
                    if (u->last_h > e.last()) {
                        ok = false;     // a longer span may close the unit
                        break;
                    }
                    for (int cz : u->czs) {
                        if (d.is_detached(cz)) fatal = true;
                        if (t.phi_g[static_cast<std::size_t>(cz)] != home) {
                            t.phi_g[static_cast<std::size_t>(cz)] = home;
                            moved.push_back(cz);
                        }
                    }
                    p = ic.pos_on(u->last_h, q);
                }
                if (fatal) break;
                if (!ok) continue;
                std::vector<int> touched = moved;
                for (int h : span)
                    touched.insert(touched.end(), d.hedges[static_cast<std::size_t>(h)].gates.begin(),
                                   d.hedges[static_cast<std::size_t>(h)].gates.end());
                std::set<int> before_set = holders(d, touched), after_set = holders(t, touched);
                const int before = sum_cost(d, before_set), after = sum_cost(t, after_set);
                if (after >= kInvalidPenalty) continue;   // a partner side would conflict
                if (before - after > best_gain || (before - after == best_gain && best_gain >= 0)) {
                    best_gain = before - after;
                    best = std::move(t);
                }
            }
            if (best && best_gain >= 0) d = std::move(*best);
            ++i;
        }
    }
    return d;
}

Pass pass_from_name(const std::string& s) {
    if (s == "detached") return Pass::Detached;
    if (s == "eager-h") return Pass::EagerH;
    if (s == "dtype-n") return Pass::DtypeN;
    if (s == "dtype-i") return Pass::DtypeI;
    throw InvalidParams("unknown refiner pass '" + s + "' (detached, eager-h, dtype-n, dtype-i)");
}

std::string pass_name(Pass p) {
    switch (p) {
    case Pass::Detached: return "detached";
    case Pass::EagerH: return "eager-h";
    case Pass::DtypeN: return "dtype-n";
    case Pass::DtypeI: return "dtype-i";
    }
    return "?";
}

std::vector<Pass> parse_passes(const std::string& csv) {
    std::vector<Pass> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(pass_from_name(item));
    return out;
}

Distribution apply_pass(Distribution d, Pass p, std::uint64_t seed) {
    switch (p) {
    case Pass::Detached: return refine_detached(std::move(d), seed);
    case Pass::EagerH: return refine_eager_h_merge(std::move(d));
    case Pass::DtypeN: return refine_dtype_neighbouring(std::move(d));
    case Pass::DtypeI: return refine_dtype_intertwined(std::move(d));
    }
    return d;
}

Distribution refine(Distribution d, const std::vector<Pass>& passes, int repeat, std::uint64_t seed) {
    if (repeat < 0) throw InvalidParams("repeat must be non-negative");
    for (int r = 0; r < repeat; ++r)
        for (Pass p : passes) d = apply_pass(std::move(d), p, seed + static_cast<std::uint64_t>(r));
    return d;
}

} // namespace dqc
