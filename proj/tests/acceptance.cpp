// One PASS/FAIL line per acceptance criterion. Criterion 9 is soft: it
// prints WARN instead of FAIL and never affects the exit code.

#include "dqc/allocators.hpp"
#include "dqc/bench.hpp"
#include "dqc/builder.hpp"
#include "dqc/cost.hpp"
#include "dqc/cover.hpp"
#include "dqc/error.hpp"
#include "dqc/refiners.hpp"
#include "dqc/verifier.hpp"
#include "dqc/workflows.hpp"
#include "fixtures.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

using namespace dqc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::shared_ptr<const Network> with_links(const Network& base, std::optional<int> link) {
    std::vector<Module> ms = base.modules();
    for (auto& m : ms) m.link = link;
    std::vector<std::pair<std::string, std::string>> es;
    for (auto [a, b] : base.edges()) es.emplace_back(ms[static_cast<std::size_t>(a)].name, ms[static_cast<std::size_t>(b)].name);
    return std::make_shared<const Network>(ms, es);
}

Outcome c1() {
    const auto t0 = Clock::now();
    auto ic = index_circuit(fx::two_module_example());
    auto n = fx::net({{"A", 2}, {"B", 2}}, {{"A", "B"}});
    int best = 1 << 30, seed_hit = -1;
    for (std::uint64_t s = 0; s < 8 && seed_hit < 0; ++s) {
        auto r = run_workflow(ic, n, Workflow::Partition, {s});
        best = std::min(best, r.built.ebit_count);
        if (r.built.ebit_count == 2) seed_hit = static_cast<int>(s);
    }
    const int opt = fx::exhaustive_partition(ic, n);
    const double t = seconds_since(t0);
    std::ostringstream o;
    o << "best " << best << " ebits (seed " << seed_hit << "), exhaustive optimum " << opt << ", " << t << " s";
    return {best == 2 && opt == 2 && t < 1.0, o.str()};
}

Outcome c2() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    int bad = 0;
    for (int i = 0; i < 200; ++i) {
        const int q = 2 + static_cast<int>(rng() % 7);
        const int k = 2 + static_cast<int>(rng() % 3);
        const int crz = 1 + static_cast<int>(rng() % 25);
        Circuit c(q);
        while (c.crz_count() < crz) {
            Circuit step = fx::random_rebased(q, 1, rng(), 0.6);
            c.add(step[0]);
        }
        auto ic = index_circuit(c);
        auto n = fx::complete(k, q);
        Distribution d = make_distribution(ic, n);
        for (int& m : d.phi_q) m = static_cast<int>(rng() % static_cast<unsigned>(k));
        for (int g : d.gate_vertices()) {
            const auto& gt = ic->gate(g);
            d.phi_g[static_cast<std::size_t>(g)] = d.phi_q[static_cast<std::size_t>(rng() % 2 ? gt.q0 : gt.q1)];
        }
        if (i % 2) d = initial_partition(ic, n, rng(), 2);
        bad += build(d).ebit_count != connectivity_cost(d);
    }
    const double t = seconds_since(t0);
    std::ostringstream o;
    o << bad << "/200 mismatches, " << t << " s";
    return {bad == 0 && t < 30.0, o.str()};
}

Outcome c3() {
    auto ic = index_circuit(fx::fanout());
    auto line = fx::net({{"A", 1}, {"B", 1}, {"C", 1}}, {{"A", "B"}, {"B", "C"}});
    auto tee = fx::net({{"A", 1}, {"B", 1}, {"C", 1}, {"D", 0}}, {{"A", "D"}, {"B", "D"}, {"C", "D"}});
    auto dl = fx::make(ic, line, {0, 1, 2}, {{0, 1}, {1, 2}});
    auto dt = fx::make(ic, tee, {0, 1, 2}, {{0, 1}, {1, 2}});
    const int l = build(dl).ebit_count, t = build(dt).ebit_count;
    const int paths = line->shortest_path_len(0, 1) + line->shortest_path_len(0, 2);
    std::ostringstream o;
    o << "line " << l << " (separate paths " << paths << "), T " << t;
    return {l == 2 && total_cost(dl) == 2 && paths == 3 && t == 3 && total_cost(dt) == 3, o.str()};
}

Outcome c4() {
    auto ic = index_circuit(fx::embedded_cz_star());
    auto star = fx::net({{"A", 1}, {"B", 1}, {"C", 1}, {"D", 1}}, {{"A", "B"}, {"B", "C"}, {"B", "D"}});
    std::vector<Hyperedge> hs{{0, {0, 2, 4}}, {1, {2}}, {2, {0}}, {3, {4}}};
    auto d = fx::make(ic, star, {0, 1, 2, 3}, {{0, 2}, {2, 0}, {4, 3}}, &hs);
    auto dc = build(d);
    const int h = d.hedges_on(0).front();
    const int e = dc.hedge_ebits[static_cast<std::size_t>(h)];
    const int corr = stats(dc).nonlocal_corrections;
    const bool ok = verify_equivalence(ic->circuit, dc).pass;
    std::ostringstream o;
    o << "root hyperedge " << e << " ebits, " << corr << " non-local corrections, circuit total " << dc.ebit_count
      << (ok ? ", verified" : ", NOT equivalent");
    return {e == 3 && corr == 0 && ok, o.str()};
}

// Sizes keep the branch-mode simulation within the simulator's wire limit:
// qubits + 2 links per module + one momentary ebit half.
Outcome c5() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(55);
    const NetworkKind kinds[] = {NetworkKind::Homogeneous, NetworkKind::Unstructured, NetworkKind::ScaleFree,
                                 NetworkKind::SmallWorld};
    int runs = 0, fails = 0, too_large = 0;
    std::string first;
    for (int i = 0; i < 50; ++i) {
        const int k = 2 + static_cast<int>(rng() % 3);
        const int qmax = k == 2 ? 8 : k == 3 ? 6 : 5;
        int q = std::max(k, 3 + static_cast<int>(rng() % static_cast<unsigned>(qmax - 2)));
        const auto cls = static_cast<CircuitClass>(i % 3);
        if (cls == CircuitClass::QuantumVolume && q % 2) q += q < qmax ? 1 : -1;
        Circuit c = gen_circuit(cls, q, std::min(q, 6), rng());
        auto n = with_links(gen_network(kinds[rng() % 4], k, q, rng()), 2);
        auto ic = index_circuit(c);
        for (Workflow w : all_workflows()) {
            ++runs;
            try {
                auto r = run_workflow(ic, n, w, {static_cast<std::uint64_t>(i)});
                auto rep = verify_equivalence(c, r.built);
                if (!rep.pass) {
                    ++fails;
                    if (first.empty()) first = workflow_name(w) + " instance " + std::to_string(i) + ": " + rep.message;
                }
            } catch (const TooLarge& e) {
                ++too_large;
                if (first.empty()) first = workflow_name(w) + " instance " + std::to_string(i) + ": " + e.what();
            } catch (const std::exception& e) {
                ++fails;
                if (first.empty()) first = workflow_name(w) + " instance " + std::to_string(i) + ": " + e.what();
            }
        }
    }
    const double t = seconds_since(t0);
    std::ostringstream o;
    o << runs << " runs, " << fails << " failures, " << too_large << " too large, " << t << " s";
    if (!first.empty()) o << "; first: " << first;
    return {fails == 0 && too_large == 0 && t < 300.0, o.str()};
}

Outcome c6() {
    std::mt19937_64 rng(66);
    const std::vector<Pass> passes{Pass::Detached, Pass::EagerH, Pass::DtypeN, Pass::DtypeI};
    const auto& wfs = all_workflows();
    int raised = 0, order_es = 0, order_esd = 0, pairs = 0;
    for (int i = 0; i < 100; ++i) {
        const int q = 4 + static_cast<int>(rng() % 7);
        const int k = 2 + static_cast<int>(rng() % 3);
        Circuit c = gen_circuit(static_cast<CircuitClass>(i % 3), q - (i % 3 == 1 ? q % 2 : 0), 0, rng());
        auto n = std::make_shared<const Network>(gen_network(static_cast<NetworkKind>(rng() % 4), k, c.qubit_count(), rng()));
        auto ic = index_circuit(c);
        WorkflowOptions opt{static_cast<std::uint64_t>(i), 2000};
        const Workflow w = wfs[static_cast<std::size_t>(i) % wfs.size()];
        auto d = distribute(ic, n, w, opt);
        const int before = total_cost(d);
        for (Pass p : passes) raised += total_cost(apply_pass(d, p, opt.seed)) > before;

        {
            ++pairs;
            const int e = total_cost(distribute(ic, n, Workflow::Embed, opt));
            const int es = total_cost(distribute(ic, n, Workflow::EmbedSteiner, opt));
            const int esd = total_cost(distribute(ic, n, Workflow::EmbedSteinerDetach, opt));
            order_es += es > e;
            order_esd += esd > es;
        }
    }
    std::ostringstream o;
    o << "100 triples: " << raised << " passes raised the cost; over " << pairs << " instances embed-steiner > embed "
      << order_es << " times, embed-steiner-detach > embed-steiner " << order_esd << " times";
    return {raised == 0 && order_es == 0 && order_esd == 0, o.str()};
}

Outcome c7() {
    std::mt19937_64 rng(77);
    int bad = 0;
    for (int i = 0; i < 500; ++i) {
        const int l = 1 + static_cast<int>(rng() % 8), r = 1 + static_cast<int>(rng() % 8);
        std::vector<std::pair<int, int>> es;
        const unsigned density = 1 + static_cast<unsigned>(rng() % 4);
        for (int a = 0; a < l; ++a)
            for (int b = 0; b < r; ++b)
                if (rng() % 5 < density) es.emplace_back(a, l + b);
        auto c = min_vertex_cover_bipartite(l + r, es, rng());
        std::set<int> s(c.begin(), c.end());
        bool covers = true;
        for (auto [a, b] : es) covers = covers && (s.count(a) || s.count(b));
        bad += !covers || static_cast<int>(c.size()) != fx::exhaustive_cover(l + r, es);
    }
    return {bad == 0, std::to_string(bad) + "/500 mismatches"};
}

Outcome c8() {
    std::mt19937_64 rng(88);
    int over = 0, cheaper = 0, max_peak = 0;
    for (int i = 0; i < 50; ++i) {
        const int q = 6 + static_cast<int>(rng() % 7);
        const int k = 2 + static_cast<int>(rng() % 3);
        auto n = with_links(gen_network(static_cast<NetworkKind>(rng() % 4), k, q, rng()), 3);
        auto ic = index_circuit(gen_pauli_gadget(q, q, rng()));
        auto r = run_workflow(ic, n, Workflow::EmbedSteinerDetach, {static_cast<std::uint64_t>(i), 2000});
        auto st = stats(r.built);
        max_peak = std::max(max_peak, st.peak_link_max);
        over += st.peak_link_max > 3 || r.built.overflow.has_value();
        cheaper += st.ebit_count < r.unbounded_ebits;
    }
    std::ostringstream o;
    o << "max peak " << max_peak << ", " << over << " over the bound, " << cheaper << " cheaper than unbounded";
    return {over == 0 && cheaper == 0, o.str()};
}

Outcome c9() {
    std::vector<int> embed, part;
    auto n = std::make_shared<const Network>(gen_network(NetworkKind::Homogeneous, 2, 8, 0));
    for (std::uint64_t s = 0; s < 24; ++s) {
        auto ic = index_circuit(gen_cz_fraction(8, 8, 0.5, s));
        embed.push_back(run_workflow(ic, n, Workflow::Embed, {s}).built.ebit_count);
        part.push_back(run_workflow(ic, n, Workflow::Partition, {s}).built.ebit_count);
    }
    auto median = [](std::vector<int> v) {
        std::sort(v.begin(), v.end());
        return (v[v.size() / 2 - 1] + v[v.size() / 2]) / 2.0;
    };
    const double me = median(embed), mp = median(part);
    std::ostringstream o;
    o << "median embed " << me << ", median partition " << mp << " over 24 seeds";
    return {me <= mp, o.str()};
}

Outcome c10() {
    std::mt19937_64 rng(1010);
    int hedges = 0, bad = 0, with_units = 0, with_teardowns = 0;
    const auto& wfs = all_workflows();
    for (int inst = 0; hedges < 1000; ++inst) {
        const int q = 3 + static_cast<int>(rng() % 6);
        const int k = 2 + static_cast<int>(rng() % 3);
        // Every other instance is Clifford-heavy so that embedding units show up.
        Circuit c = inst % 2 ? fx::unit_rich(q, 12, rng())
                             : gen_circuit(static_cast<CircuitClass>(rng() % 3), q + (q % 2), 0, rng());
        auto n = std::make_shared<const Network>(gen_network(static_cast<NetworkKind>(rng() % 4), k, c.qubit_count(), rng()));
        auto ic = index_circuit(c);
        const Workflow w = wfs[rng() % wfs.size()];
        Distribution d = inst % 2 ? fx::random_hyperedges(ic, n, rng) : distribute(ic, n, w, {rng(), 500});
        auto dc = build(d);
        std::vector<int> counted(d.hedges.size(), 0);
        for (const auto& op : dc.ops)
            if (op.kind == OpKind::EbitPrepare && op.hedge >= 0) ++counted[static_cast<std::size_t>(op.hedge)];
        for (int h = 0; h < static_cast<int>(d.hedges.size()) && hedges < 1000; ++h) {
            const auto br = hyperedge_cost(d, h);
            bad += br.total != counted[static_cast<std::size_t>(h)] ||
                   dc.hedge_ebits[static_cast<std::size_t>(h)] != br.total;
            with_units += !analyze_hyperedge(d, h).units.empty();
            with_teardowns += !br.teardowns.empty();
            ++hedges;
        }
    }
    std::ostringstream o;
    o << bad << "/" << hedges << " mismatches (" << with_units << " with embedding units, " << with_teardowns
      << " with link teardowns)";
    return {bad == 0, o.str()};
}

} // namespace

int main() {
    spdlog::set_level(spdlog::level::err);
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5}, {6, c6}, {7, c7}, {8, c8}, {9, c9}, {10, c10}};
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        Outcome r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const bool soft = id == 9;
        const char* tag = r.pass ? "PASS" : soft ? "WARN" : "FAIL";
        std::printf("criterion %d: %s - %s\n", id, tag, r.detail.c_str());
        std::fflush(stdout);
        failed += !r.pass && !soft;
    }
    return failed ? 1 : 0;
}
