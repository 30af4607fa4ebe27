#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "topo/dk.hpp"
#include "topo/error.hpp"

using namespace topo;

static std::vector<int> counts(const SSet& X) {
    std::vector<int> c;
    for (int d = 0; d <= X.dim(); ++d) c.push_back(X.n_cells(d));
    return c;
}

static FinCat chain_poset(int n) {
    FinCat C;
    for (int i = 0; i <= n; ++i) C.add_object(std::to_string(i));
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            C.add_arrow("m" + std::to_string(i) + std::to_string(j), std::to_string(i),
                        std::to_string(j));
    for (int i = 0; i <= n; ++i)
        C.set_identity(std::to_string(i), "m" + std::to_string(i) + std::to_string(i));
    for (int i = 0; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int k = j; k <= n; ++k)
                C.set_composite("m" + std::to_string(i) + std::to_string(j),
                                "m" + std::to_string(j) + std::to_string(k),
                                "m" + std::to_string(i) + std::to_string(k));
    C.check();
    return C;
}

TEST_CASE("interval categories assemble and validate") {
    FinCat C = delta_op_interval(0, 3);  // check() runs inside
    CHECK(C.objects.size() == 4);
    // arrows [a]->[b] are injections [b] -> [a]
    int total = 0;
    for (const auto& arr : C.arrows) total += 1, (void)arr;
    CHECK(total == 1 + 3 + 7 + 15);  // sum over a of sum_b C(a+1,b+1)
    CHECK(C.nonidentity_acyclic());
    CHECK(delta_op_arrow_name(make_injection(1, 3, {1, 3})) == "d0d2@3");
}

TEST_CASE("acyclicity guard rejects idempotent endomorphisms") {
    FinCat C;
    C.add_object("a");
    C.add_arrow("id", "a", "a");
    C.add_arrow("e", "a", "a");
    C.set_identity("a", "id");
    C.set_composite("id", "id", "id");
    C.set_composite("id", "e", "e");
    C.set_composite("e", "id", "e");
    C.set_composite("e", "e", "e");
    C.check();
    CHECK(!C.nonidentity_acyclic());
    CHECK_THROWS_AS(dk_mapping_space(C, "a", "a", 1), InvariantError);
}

TEST_CASE("mapping space of a chain poset") {
    FinCat C = chain_poset(3);
    SSet M = dk_mapping_space(C, "0", "3", 3);
    CHECK(counts(M) == std::vector<int>{4, 5, 2});
    // identity mapping space is a single vertex (the empty word)
    SSet I = dk_mapping_space(C, "1", "1", 2);
    CHECK(counts(I) == std::vector<int>{1});
    CHECK(I.cells[0][0] == "m11");
}

TEST_CASE("gap one spaces are discrete") {
    for (int m = 1; m <= 4; ++m) {
        FinCat C = delta_op_interval(m - 1, m);
        SSet M = dk_mapping_space(C, "[" + std::to_string(m) + "]",
                                  "[" + std::to_string(m - 1) + "]", 1);
        CHECK(counts(M) == std::vector<int>{m + 1});
    }
}

TEST_CASE("gap two components are subdivided intervals") {
    FinCat C = delta_op_interval(0, 2);
    SSet M = dk_mapping_space(C, "[2]", "[0]", 2);
    CHECK(components(M).size() == 3);
    for (const auto& theta : enumerate_injections(0, 2)) {
        SSet comp = component_of(C, M, delta_op_arrow_name(theta));
        CHECK(counts(comp) == std::vector<int>{3, 2});
        // each edge joins the composed word to the split word, in that order
        for (const auto& e : comp.cells[1]) {
            const auto& fs = comp.faces.at(e);
            CHECK(fs[0].cell.find('|') != std::string::npos);
            CHECK(fs[1].cell.find('|') == std::string::npos);
            CHECK(leaf_composite(C, fs[1].cell) ==
                  leaf_composite(C, fs[0].cell.substr(0, fs[0].cell.find('<'))));
        }
        // boundary of an interval: two endpoints
        SSet bd = component_boundary(C, M, delta_op_arrow_name(theta));
        CHECK(counts(bd) == std::vector<int>{2});
    }
}

TEST_CASE("gap three components are subdivided hexagons") {
    FinCat C = delta_op_interval(0, 3);
    SSet M = dk_mapping_space(C, "[3]", "[0]", 3);
    CHECK(components(M).size() == 4);
    for (const auto& theta : enumerate_injections(0, 3)) {
        SSet comp = component_of(C, M, delta_op_arrow_name(theta));
        CHECK(counts(comp) == std::vector<int>{13, 24, 12});
        CHECK(euler_characteristic(comp) == 1);
        auto h = homology_z(comp);
        CHECK(h[0] == ZHomology{1, {}});
        CHECK(h[1] == ZHomology{0, {}});
        CHECK(h[2] == ZHomology{0, {}});
        SSet bd = component_boundary(C, M, delta_op_arrow_name(theta));
        CHECK(counts(bd) == std::vector<int>{12, 12});
        auto hb = homology_z(bd);
        CHECK(hb[0] == ZHomology{1, {}});
        CHECK(hb[1] == ZHomology{1, {}});
    }
    // every face of a nondegenerate cell is again nondegenerate
    for (const auto& [name, fs] : M.faces)
        for (const auto& e : fs) CHECK(e.deg.empty());
}

TEST_CASE("gap four component census") {
    FinCat C = delta_op_interval(0, 4);
    SSet M = dk_mapping_space(C, "[4]", "[0]", 4);
    CHECK(components(M).size() == 5);
    SSet comp = component_of(C, M, delta_op_arrow_name(make_injection(0, 4, {0})));
    CHECK(counts(comp) == std::vector<int>{75, 290, 360, 144});
    CHECK(euler_characteristic(comp) == 1);
}

TEST_CASE("nested word validation and degeneracy") {
    FinCat C = delta_op_interval(0, 2);
    int a1 = C.arrow_index.at("d0@2"), a2 = C.arrow_index.at("d0@1");
    NestedWord w{{a1, a2}, {}};
    CHECK(!is_degenerate(C, w));
    CHECK(!is_degenerate(C, {{a1, a2}, {{2}}}));
    CHECK(is_degenerate(C, {{a1, a2}, {{1, 1}}}));
    CHECK(is_degenerate(C, {{a1, a2}, {{2}, {2}}}));
    CHECK(is_degenerate(C, {{a1, a2}, {{2}, {1, 1}}}));
    CHECK_THROWS_AS(validate_nested(C, {{a1, a2}, {{1, 1}, {2}}}), SchemaError);
    CHECK_THROWS_AS(validate_nested(C, {{a2, a1}, {}}), InvariantError);  // not composable
    int id2 = C.arrow_index.at("id@2");
    CHECK_THROWS_AS(validate_nested(C, {{id2}, {}}), InvariantError);
}
