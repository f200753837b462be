#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dqc/packing.hpp"
#include "fixtures.hpp"

using namespace dqc;

namespace {

const Packet* find_packet(const std::vector<Packet>& ps, int root, int first_gate) {
    for (const auto& p : ps)
        if (p.root == root && p.gates.front() == first_gate) return &p;
    return nullptr;
}

} // namespace

TEST_CASE("two gates towards one module share a packet") {
    auto ic = index_circuit(fx::shared_root());
    auto ps = identify_packets(*ic, {0, 1, 1});
    CHECK(ps.size() == 3);
    auto p = find_packet(ps, 0, 0);
    REQUIRE(p);
    CHECK(p->gates == std::vector<int>{0, 1});
    CHECK(p->remote == 1);
}

TEST_CASE("local gates never form packets") {
    auto ic = index_circuit(fx::shared_root());
    CHECK(identify_packets(*ic, {0, 0, 0}).empty());
    auto ps = identify_packets(*ic, {0, 0, 1});
    CHECK(ps.size() == 2);
}

TEST_CASE("every non-local gate lands in exactly two packets") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        auto ic = index_circuit(fx::random_rebased(5, 30, s));
        std::vector<int> phi{0, 1, 2, 0, 1};
        auto ps = identify_packets(*ic, phi);
        std::map<int, int> seen;
        for (const auto& p : ps)
            for (int g : p.gates) ++seen[g];
        for (int g = 0; g < static_cast<int>(ic->circuit.size()); ++g) {
            const auto& gt = ic->gate(g);
            const bool nonlocal = gt.kind == GateKind::CRz && phi[static_cast<std::size_t>(gt.q0)] != phi[static_cast<std::size_t>(gt.q1)];
            CHECK(seen[g] == (nonlocal ? 2 : 0));
        }
    }
}

TEST_CASE("H.Z.H forms a unit without CZ and lets packets merge") {
    auto ic = index_circuit(fx::z_sandwich());
    const std::vector<int> phi{0, 1, 1};
    auto units = identify_embedding_units(*ic, phi);
    REQUIRE(units.size() == 1);
    CHECK(units[0].root == 0);
    CHECK(units[0].first_h == 1);
    CHECK(units[0].last_h == 3);
    CHECK(units[0].czs.empty());
    CHECK(units[0].z_runs == std::vector<int>{2});

    auto ps = identify_packets(*ic, phi);
    CHECK(ps.size() == 4);
    auto m = merge_packets(*ic, phi, ps, units);
    auto p = find_packet(m.packets, 0, 0);
    REQUIRE(p);
    CHECK(p->gates == std::vector<int>{0, 4});
    CHECK(p->units.size() == 1);
    CHECK(m.conflicts.edges.empty());
}

TEST_CASE("H.CZ.H embeds the CZ when its partner is on the remote module") {
    auto ic = index_circuit(fx::cz_sandwich());
    auto units = identify_embedding_units(*ic, {0, 1, 1, 1});
    REQUIRE(units.size() == 1);
    CHECK(units[0].czs == std::vector<int>{2});
    CHECK(units[0].remote == 1);
    auto m = merge_packets(*ic, {0, 1, 1, 1}, identify_packets(*ic, {0, 1, 1, 1}), units);
    auto p = find_packet(m.packets, 0, 0);
    REQUIRE(p);
    CHECK(p->gates == std::vector<int>{0, 4});
    CHECK(p->embedded == std::vector<int>{2});

    // Partner on a third module: the unit points there, so it cannot bridge towards B.
    auto far = identify_embedding_units(*ic, {0, 1, 2, 1});
    REQUIRE(far.size() == 1);
    CHECK(far[0].remote == 2);
    auto apart = merge_packets(*ic, {0, 1, 2, 1}, identify_packets(*ic, {0, 1, 2, 1}), far);
    CHECK(find_packet(apart.packets, 0, 0)->gates == std::vector<int>{0});
    // Forbidding the unit leaves the packets apart.
    auto split = merge_packets(*ic, {0, 1, 1, 1}, identify_packets(*ic, {0, 1, 1, 1}), units, {0});
    CHECK(find_packet(split.packets, 0, 0)->gates == std::vector<int>{0});
}

TEST_CASE("non-Clifford phase inside the span blocks the unit") {
    Circuit c(3);
    c.crz(0, 1, 0.3).h(0).rz(0, 0.5).h(0).crz(0, 2, 0.6);
    auto ic = index_circuit(c);
    CHECK(identify_embedding_units(*ic, {0, 1, 1}).empty());
    std::string why;
    CHECK_FALSE(embedding_unit_at(*ic, {0, 1, 1}, 0, 1, &why));
    CHECK_FALSE(why.empty());

    // Rz(1/2) twice squashes to Z: embeddable again.
    Circuit c2(3);
    c2.crz(0, 1, 0.3).h(0).rz(0, 0.5).rz(0, 0.5).h(0).crz(0, 2, 0.6);
    CHECK(identify_embedding_units(*index_circuit(c2), {0, 1, 1}).size() == 1);
}

TEST_CASE("a CZ wanted by units on both of its qubits is a conflict") {
    auto ic = index_circuit(fx::cz_conflict());
    const std::vector<int> phi{0, 1};
    auto units = identify_embedding_units(*ic, phi);
    REQUIRE(units.size() == 2);
    auto m = merge_packets(*ic, phi, identify_packets(*ic, phi), units);
    REQUIRE(m.conflicts.edges.size() == 1);
    CHECK(m.conflicts.edge_gate[0] == 3);
    std::vector<int> colour;
    CHECK(two_colour(static_cast<int>(m.conflicts.units.size()), m.conflicts.edges, colour));
}

TEST_CASE("two-colouring") {
    std::vector<int> col;
    CHECK(two_colour(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, col));
    CHECK(col[0] != col[1]);
    CHECK(col[0] == col[2]);
    CHECK_FALSE(two_colour(3, {{0, 1}, {1, 2}, {2, 0}}, col));
}
