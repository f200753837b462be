#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dqc/distribution.hpp"
#include "dqc/error.hpp"
#include "fixtures.hpp"

using namespace dqc;

namespace {

std::set<std::pair<int, std::vector<int>>> as_set(const std::vector<Hyperedge>& hs) {
    std::set<std::pair<int, std::vector<int>>> s;
    for (const auto& h : hs) s.insert({h.root, h.gates});
    return s;
}

auto two_modules() { return fx::net({{"A", 2}, {"B", 2}}, {{"A", "B"}}); }

} // namespace

TEST_CASE("basic hypergraph splits at every H") {
    auto ic = index_circuit(fx::two_module_example());
    std::set<std::pair<int, std::vector<int>>> want{
        {0, {0}}, {1, {1}}, {1, {7, 8}}, {2, {0, 1}}, {2, {4}}, {2, {7}}, {3, {4}}, {3, {8}}};
    CHECK(as_set(build_hypergraph(*ic)) == want);

    auto d = make_distribution(ic, two_modules());
    CHECK(d.hedges_on(2).size() == 3);
    CHECK(d.hedge_of(7, 1) == d.hedge_of(8, 1));
    CHECK(d.hedge_of(0, 2) == d.hedge_of(1, 2));
    CHECK(d.hedge_of(0, 2) != d.hedge_of(4, 2));
}

TEST_CASE("connectivity of the two-module optimum") {
    auto ic = index_circuit(fx::two_module_example());
    auto n = two_modules();
    auto d = fx::make(ic, n, {0, 0, 1, 1}, {{0, 0}, {1, 0}, {7, 1}, {8, 1}});
    CHECK(is_valid(d));
    CHECK(connectivity_cost(d) == 2);
    CHECK(fx::recount_connectivity(d) == 2);
    CHECK(fx::exhaustive_partition(ic, n) == 2);
    CHECK(d.is_nonlocal(0));
    CHECK_FALSE(d.is_nonlocal(4));
    CHECK_FALSE(d.is_detached(0));
}

TEST_CASE("connectivity recount on random allocations") {
    for (std::uint64_t s = 0; s < 100; ++s) {
        auto ic = index_circuit(fx::random_rebased(5, 20, s));
        auto n = fx::complete(3, 2);
        std::mt19937_64 rng(s);
        std::vector<int> phi{0, 0, 1, 1, 2};
        std::shuffle(phi.begin(), phi.end(), rng);
        std::map<int, int> pg;
        for (int g : make_distribution(ic, n).gate_vertices()) {
            const auto& gt = ic->gate(g);
            pg[g] = phi[static_cast<std::size_t>(rng() % 2 ? gt.q0 : gt.q1)];
        }
        auto d = fx::make(ic, n, phi, pg);
        CHECK(connectivity_cost(d) == fx::recount_connectivity(d));
    }
}

TEST_CASE("validity checks") {
    auto n = two_modules();
    SUBCASE("capacity") {
        auto ic = index_circuit(fx::two_module_example());
        auto d = fx::make(ic, n, {0, 0, 0, 1});
        auto v = check_validity(d);
        REQUIRE_FALSE(v.empty());
        CHECK(v.front().kind == "capacity");
    }
    SUBCASE("hyperedge across a non-embeddable span") {
        Circuit c(2);
        c.crz(0, 1, 0.3).h(0).rz(0, 0.5).h(0).crz(0, 1, 0.6);
        auto ic = index_circuit(c);
        std::vector<Hyperedge> hs{{0, {0, 4}}, {1, {0}}, {1, {4}}};
        auto d = fx::make(ic, n, {0, 1}, {{0, 1}, {4, 1}}, &hs);
        CHECK_FALSE(is_valid(d));
        CHECK_THROWS_AS(analyze_hyperedge(d, 0), InvalidHyperedge);
    }
    SUBCASE("same span with a Z is embeddable") {
        auto ic = index_circuit(fx::z_sandwich());
        std::vector<Hyperedge> hs{{0, {0, 4}}, {1, {0}}, {2, {4}}};
        auto d = fx::make(ic, n, {0, 1, 1}, {{0, 1}, {4, 1}}, &hs);
        CHECK(is_valid(d));
        auto w = analyze_hyperedge(d, 0);
        CHECK(w.units.size() == 1);
    }
    SUBCASE("gate off its qubits' modules is detached, still valid") {
        auto three = fx::net({{"A", 1}, {"B", 1}, {"C", 1}}, {{"A", "B"}, {"B", "C"}});
        auto ic = index_circuit(fx::three_gate_line());
        auto d = fx::make(ic, three, {0, 1, 2}, {{1, 1}});
        CHECK(d.is_detached(1));
        CHECK(is_valid(d));
    }
}

TEST_CASE("distribution json round trip") {
    auto ic = index_circuit(fx::two_module_example());
    auto n = two_modules();
    auto d = fx::make(ic, n, {0, 0, 1, 1}, {{0, 0}, {1, 0}, {7, 1}, {8, 1}});
    auto back = distribution_from_json(distribution_to_json(d, 2), ic, n);
    CHECK(back.phi_q == d.phi_q);
    CHECK(back.phi_g == d.phi_g);
    CHECK(as_set(back.hedges) == as_set(d.hedges));
}
