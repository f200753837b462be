#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dqc/allocators.hpp"
#include "dqc/cost.hpp"
#include "dqc/error.hpp"
#include "fixtures.hpp"

using namespace dqc;

namespace {

bool fits(const Distribution& d) {
    auto load = d.qubit_load();
    for (int m = 0; m < d.network().size(); ++m)
        if (load[static_cast<std::size_t>(m)] > d.network().module(m).comp) return false;
    return true;
}

} // namespace

TEST_CASE("partitioning finds the two-module optimum") {
    auto ic = index_circuit(fx::two_module_example());
    auto n = fx::net({{"A", 2}, {"B", 2}}, {{"A", "B"}});
    bool hit = false;
    for (std::uint64_t s = 0; s < 8 && !hit; ++s) {
        auto d = initial_partition(ic, n, s);
        CHECK(fits(d));
        CHECK(is_valid(d));
        hit = connectivity_cost(d) == 2;
        if (hit) {
            CHECK(d.phi_q[0] == d.phi_q[1]);
            CHECK(d.phi_q[2] == d.phi_q[3]);
        }
    }
    CHECK(hit);
}

TEST_CASE("partitioning against exhaustive search") {
    for (std::uint64_t s = 0; s < 25; ++s) {
        auto ic = index_circuit(fx::random_rebased(6, 14, s, 0.7));
        auto n = fx::complete(3, 2);
        const int opt = fx::exhaustive_partition(ic, n);
        auto d = initial_partition(ic, n, s);
        CHECK(fits(d));
        const int got = connectivity_cost(d);
        CHECK(got >= opt);
        CHECK(got <= std::max(2 * opt, opt + 1));
    }
}

TEST_CASE("random allocation respects capacities") {
    auto ic = index_circuit(fx::random_rebased(9, 30, 1));
    auto n = fx::net({{"A", 5}, {"B", 2}, {"C", 2}}, {{"A", "B"}, {"B", "C"}});
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto d = random_allocation(ic, n, s);
        CHECK(fits(d));
        CHECK(is_valid(d));
    }
    CHECK_THROWS_AS(check_capacity(*ic, *fx::complete(2, 4)), Infeasible);
    CHECK_THROWS_AS(initial_partition(ic, fx::complete(2, 4), 0), Infeasible);
}

TEST_CASE("annealing") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        auto n = std::make_shared<const Network>(gen_network(NetworkKind::SmallWorld, 3, 9, s));
        auto ic = index_circuit(fx::random_rebased(8, 40, s));
        auto start = random_allocation(ic, n, s);

        AnnealParams none;
        none.iterations = 0;
        none.seed = s;
        auto same = anneal(start, none);
        CHECK(same.phi_q == start.phi_q);
        CHECK(same.phi_g == start.phi_g);

        AnnealParams p;
        p.iterations = 2000;
        p.seed = s;
        auto out = anneal(start, p);
        CHECK(fits(out));
        CHECK(is_valid(out));
        CHECK(total_cost(out) <= total_cost(start));

        auto again = anneal(start, p);
        CHECK(again.phi_q == out.phi_q);
    }
}

TEST_CASE("boundary reallocation never raises the cost") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        auto n = std::make_shared<const Network>(gen_network(NetworkKind::Unstructured, 4, 10, s));
        auto ic = index_circuit(fx::random_rebased(8, 40, s + 50));
        auto start = random_allocation(ic, n, s);
        auto out = boundary_reallocate(start, 20, s);
        CHECK(fits(out));
        CHECK(is_valid(out));
        CHECK(total_cost(out) <= total_cost(start));

        BoundaryOptions go;
        go.gates_only = true;
        go.any_module = true;
        go.seed = s;
        auto g = boundary_reallocate(start, go);
        CHECK(g.phi_q == start.phi_q);
        CHECK(total_cost(g) <= total_cost(start));

        BoundaryOptions zero;
        zero.max_rounds = 0;
        CHECK(boundary_reallocate(start, zero).phi_q == start.phi_q);
    }
}
