#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dqc/error.hpp"
#include "dqc/network.hpp"
#include "fixtures.hpp"

#include <queue>

using namespace dqc;

namespace {

int bfs_len(const Network& n, int a, int b) {
    std::vector<int> dist(static_cast<std::size_t>(n.size()), -1);
    std::queue<int> q;
    dist[static_cast<std::size_t>(a)] = 0;
    q.push(a);
    while (!q.empty()) {
        int x = q.front();
        q.pop();
        for (auto [u, v] : n.edges()) {
            for (auto [s, t] : {std::pair{u, v}, std::pair{v, u}})
                if (s == x && dist[static_cast<std::size_t>(t)] < 0) {
                    dist[static_cast<std::size_t>(t)] = dist[static_cast<std::size_t>(x)] + 1;
                    q.push(t);
                }
        }
    }
    return dist[static_cast<std::size_t>(b)];
}

std::shared_ptr<const Network> random_connected(int k, std::mt19937_64& rng) {
    std::vector<std::pair<std::string, int>> mods;
    std::set<std::pair<int, int>> es;
    for (int i = 0; i < k; ++i) mods.emplace_back("M" + std::to_string(i), 2);
    for (int i = 1; i < k; ++i) es.insert({static_cast<int>(rng() % static_cast<unsigned>(i)), i});
    for (int extra = static_cast<int>(rng() % 4); extra > 0; --extra) {
        int a = static_cast<int>(rng() % k), b = static_cast<int>(rng() % k);
        if (a != b) es.insert({std::min(a, b), std::max(a, b)});
    }
    std::vector<std::pair<std::string, std::string>> named;
    for (auto [a, b] : es) named.emplace_back("M" + std::to_string(a), "M" + std::to_string(b));
    return fx::net(mods, named);
}

} // namespace

TEST_CASE("Steiner trees on small networks") {
    auto line = fx::net({{"A", 1}, {"B", 1}, {"C", 1}}, {{"A", "B"}, {"B", "C"}});
    CHECK(line->steiner_tree_named({"A", "C"}).cost() == 2);
    CHECK(line->steiner_tree_named({"A", "B", "C"}).cost() == 2);
    CHECK(line->steiner_tree_named({"B"}).cost() == 0);
    CHECK(line->steiner_tree_named({"B", "B"}).cost() == 0);

    auto tee = fx::net({{"A", 1}, {"B", 1}, {"C", 1}, {"D", 1}}, {{"A", "D"}, {"B", "D"}, {"C", "D"}});
    auto t = tee->steiner_tree_named({"A", "B", "C"});
    CHECK(t.cost() == 3);
    CHECK(t.contains(tee->index_of("D")));
    CHECK(tee->shortest_path_len("A", "C") == 2);
}

TEST_CASE("Steiner heuristic against exhaustive search") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto n = random_connected(6, rng);
        std::vector<int> terms;
        for (int m = 0; m < 6; ++m)
            if (rng() % 2) terms.push_back(m);
        if (terms.empty()) terms.push_back(0);
        const int opt = fx::exhaustive_steiner(*n, terms);
        const int got = n->steiner_tree(terms)->cost();
        CHECK(got >= opt);
        CHECK(got <= 2 * opt);
        // Never worse than joining terminals along shortest paths from the first.
        int star = 0;
        for (int t : terms) star += n->shortest_path_len(terms.front(), t);
        CHECK(got <= star);
        if (terms.size() == 2) CHECK(got == n->shortest_path_len(terms[0], terms[1]));
    }
}

TEST_CASE("shortest paths match breadth-first search") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        auto n = random_connected(7, rng);
        for (int a = 0; a < 7; ++a)
            for (int b = 0; b < 7; ++b) {
                CHECK(n->shortest_path_len(a, b) == bfs_len(*n, a, b));
                auto p = n->shortest_path(a, b);
                CHECK(static_cast<int>(p.size()) == n->shortest_path_len(a, b) + 1);
            }
    }
}

TEST_CASE("generated networks") {
    Network k4 = gen_network(NetworkKind::Homogeneous, 4, 32, 0);
    CHECK(k4.size() == 4);
    CHECK(k4.edges().size() == 6);
    for (const auto& m : k4.modules()) CHECK(m.comp == 8);
    CHECK(k4.homogeneous());

    for (NetworkKind kind : {NetworkKind::Unstructured, NetworkKind::ScaleFree, NetworkKind::SmallWorld}) {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            Network n = gen_network(kind, 6, 30, seed);
            CHECK(n.size() == 6);
            CHECK(n.total_comp() >= 30);
            for (int m = 1; m < n.size(); ++m) CHECK(bfs_len(n, 0, m) > 0);
            CHECK(network_to_json(gen_network(kind, 6, 30, seed)) == network_to_json(n));
        }
    }
}

TEST_CASE("network json and errors") {
    Network n = gen_network(NetworkKind::SmallWorld, 4, 10, 5);
    CHECK(network_to_json(network_from_json(network_to_json(n))) == network_to_json(n));
    auto line = fx::net({{"A", 1}, {"B", 1}}, {{"A", "B"}});
    CHECK_THROWS_AS(line->index_of("Z"), UnknownModule);
    CHECK_THROWS_AS(network_kind_from_name("torus"), InvalidParams);
}
