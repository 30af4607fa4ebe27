#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "topo/dk.hpp"
#include "topo/error.hpp"
#include "topo/perm.hpp"
#include "topo/simplex_cat.hpp"

using namespace topo;

static std::vector<int> counts(const SSet& X) {
    std::vector<int> c;
    for (int d = 0; d <= X.dim(); ++d) c.push_back(X.n_cells(d));
    return c;
}

static SSet cube(int k) {
    SSet c = standard_simplex(1);
    for (int i = 1; i < k; ++i) c = product(c, standard_simplex(1));
    return c;
}

TEST_CASE("ordered partitions and refinement") {
    CHECK(ordered_partitions_of(0).size() == 1);
    CHECK(ordered_partitions_of(2).size() == 13);
    CHECK(ordered_partitions_of(3).size() == 75);
    CHECK(partition_name({{0, 1}, {2}}) == "01,2");
    CHECK(partition_name({{2}, {0, 1}}) == "2,01");

    // both vertex orders tile the edge of P^1
    CHECK(partition_refines({{0}, {1}}, {{0, 1}}));
    CHECK(partition_refines({{1}, {0}}, {{0, 1}}));
    // refinement respects block order
    CHECK_FALSE(partition_refines({{1}, {0}}, {{0}, {1}}));
    CHECK(partition_refines({{0}, {1}, {2}}, {{0, 1}, {2}}));
    CHECK_FALSE(partition_refines({{0}, {2}, {1}}, {{0, 1}, {2}}));
    CHECK(partition_refines({{0, 1}, {2}}, {{0, 1}, {2}}));
    CHECK_FALSE(partition_refines({{0, 1}, {2}}, {{0}, {1}, {2}}));

    CHECK_THROWS_AS(ordered_partitions_of(-1), SchemaError);
    CHECK_THROWS_AS(ordered_partitions_of(8), SchemaError);
}

TEST_CASE("face lattice censuses") {
    FaceLattice p0 = face_lattice(0);
    CHECK(p0.faces[0].size() == 1);

    FaceLattice p1 = face_lattice(1);
    CHECK(p1.faces[0].size() == 2);
    CHECK(p1.faces[1].size() == 1);
    CHECK(p1.covering[0].size() == 2);

    FaceLattice p2 = face_lattice(2);
    CHECK(p2.faces[0].size() == 6);
    CHECK(p2.faces[1].size() == 6);
    CHECK(p2.faces[2].size() == 1);
    // hexagon: each edge covers two vertices, the maximum covers all edges
    CHECK(p2.covering[0].size() == 12);
    CHECK(p2.covering[1].size() == 6);

    FaceLattice p3 = face_lattice(3);
    CHECK(p3.faces[0].size() == 24);
    CHECK(p3.faces[1].size() == 36);
    CHECK(p3.faces[2].size() == 14);
    CHECK(p3.faces[3].size() == 1);

    // k-face counts are the ordered-partition counts, up through P^5
    for (int n = 0; n <= 5; ++n) {
        FaceLattice L = face_lattice(n);
        for (int d = 0; d <= n; ++d)
            CHECK(L.faces[d].size() == ordered_partitions(n + 1, n + 1 - d).size());
    }
    CHECK_THROWS_AS(face_lattice(6), SchemaError);
}

TEST_CASE("order complexes: f-vectors, cone contractibility") {
    SSet oc1 = order_complex(1);
    CHECK(counts(oc1) == std::vector<int>{3, 2});

    SSet oc2 = order_complex(2);
    CHECK(counts(oc2) == std::vector<int>{13, 24, 12});
    CHECK(euler_characteristic(oc2) == 1);

    SSet oc3 = order_complex(3);
    CHECK(counts(oc3) == std::vector<int>{75, 290, 360, 144});
    CHECK(euler_characteristic(oc3) == 1);

    for (int n = 1; n <= 3; ++n) {
        auto h = homology_z(order_complex(n));
        CHECK(h[0].betti == 1);
        for (size_t d = 0; d < h.size(); ++d) {
            if (d > 0) CHECK(h[d].betti == 0);
            CHECK(h[d].torsion.empty());
        }
    }
    CHECK_THROWS_AS(order_complex(5), SchemaError);
}

TEST_CASE("boundary complexes are spheres") {
    SSet b1 = order_complex_boundary(1);
    CHECK(counts(b1) == std::vector<int>{2});

    SSet b2 = order_complex_boundary(2);
    CHECK(counts(b2) == std::vector<int>{12, 12});
    CHECK(euler_characteristic(b2) == 0);
    auto h2 = homology_z(b2);
    CHECK(h2[0].betti == 1);
    CHECK(h2[1].betti == 1);

    SSet b3 = order_complex_boundary(3);
    CHECK(counts(b3) == std::vector<int>{74, 216, 144});
    CHECK(euler_characteristic(b3) == 2);
    auto h3 = homology_z(b3);
    CHECK(h3[0].betti == 1);
    CHECK(h3[1].betti == 0);
    CHECK(h3[2].betti == 1);
    for (const auto& z : h3) CHECK(z.torsion.empty());
}

TEST_CASE("order complex of P^4 and its boundary 3-sphere") {
    SSet oc4 = order_complex(4);
    CHECK(counts(oc4) == std::vector<int>{541, 3960, 9180, 8640, 2880});
    auto h = homology_z(oc4);
    CHECK(h[0].betti == 1);
    for (size_t d = 1; d < h.size(); ++d) {
        CHECK(h[d].betti == 0);
        CHECK(h[d].torsion.empty());
    }

    SSet b4 = order_complex_boundary(4);
    CHECK(counts(b4) == std::vector<int>{540, 3420, 5760, 2880});
    CHECK(euler_characteristic(b4) == 0);
    auto hb = homology_z(b4);
    CHECK(hb[0].betti == 1);
    CHECK(hb[1].betti == 0);
    CHECK(hb[2].betti == 0);
    CHECK(hb[3].betti == 1);
    for (const auto& z : hb) CHECK(z.torsion.empty());
}

TEST_CASE("boundary coequalizer assembly reproduces the boundary spheres") {
    CoeqReport r1 = boundary_coequalizer_check(1);
    CHECK(r1.piece_count == 2);
    CHECK(r1.cells_glued == 2);
    CHECK(r1.pass());

    CoeqReport r2 = boundary_coequalizer_check(2);
    CHECK(r2.piece_count == 6);
    CHECK(r2.f_vector == std::vector<std::size_t>{12, 12});
    CHECK(r2.faces_consistent);
    CHECK(r2.iso_ok);
    CHECK(r2.sphere_ok);

    CoeqReport r3 = boundary_coequalizer_check(3);
    CHECK(r3.piece_count == 14);
    CHECK(r3.f_vector == std::vector<std::size_t>{74, 216, 144});
    CHECK(r3.cells_disjoint > r3.cells_glued);
    CHECK(r3.pass());

    CoeqReport r4 = boundary_coequalizer_check(4);
    CHECK(r4.piece_count == 30);
    CHECK(r4.f_vector == std::vector<std::size_t>{540, 3420, 5760, 2880});
    CHECK(r4.pass());

    CHECK_THROWS_AS(boundary_coequalizer_check(0), SchemaError);
    CHECK_THROWS_AS(boundary_coequalizer_check(5), SchemaError);
}

TEST_CASE("mapping-space components triangulate the order complexes") {
    // gap 2: every component of Map([2], [0]) is the subdivided interval
    {
        FinCat C = delta_op_interval(0, 2);
        SSet M = dk_mapping_space(C, "[2]", "[0]", 2);
        SSet oc = order_complex(1);
        for (const auto& theta : enumerate_injections(0, 2)) {
            SSet comp = component_of(C, M, delta_op_arrow_name(theta));
            CHECK(iso_check(comp, oc));
        }
    }
    // gap 3: every component of Map([3], [0]) is the subdivided hexagon
    {
        FinCat C = delta_op_interval(0, 3);
        SSet M = dk_mapping_space(C, "[3]", "[0]", 3);
        SSet oc = order_complex(2);
        for (const auto& theta : enumerate_injections(0, 3)) {
            SSet comp = component_of(C, M, delta_op_arrow_name(theta));
            CHECK(iso_check(comp, oc));
            SSet bd = component_boundary(C, M, delta_op_arrow_name(theta));
            CHECK(iso_check(bd, order_complex_boundary(2)));
        }
    }
    // gap 4: the component over d0 matches the triangulated 3-permutahedron
    {
        FinCat C = delta_op_interval(0, 4);
        SSet M = dk_mapping_space(C, "[4]", "[0]", 4);
        SSet comp = component_of(C, M, delta_op_arrow_name(make_injection(0, 4, {0})));
        CHECK(iso_check(comp, order_complex(3)));
    }
}

TEST_CASE("obstruction boundary labels for the hexagon") {
    ObstructionLabels lab = label_obstruction_boundary(4, 2);
    CHECK(lab.theta == "d0d1d2");
    CHECK(lab.basepoint == "0,1,2");
    CHECK(lab.facets.size() == 6);

    std::map<std::string, const LabeledFacet*> by_render;
    int zeros = 0, coherences = 0, choices = 0;
    for (const auto& f : lab.facets) {
        by_render[f.render] = &f;
        if (f.label == "zero") ++zeros;
        if (f.label == "coherence") ++coherences;
        if (f.label.rfind("choice", 0) == 0) ++choices;
    }
    CHECK(zeros == 3);
    CHECK(coherences == 1);
    CHECK(choices == 2);

    const LabeledFacet* h = by_render.at("(d0d1)(f)");
    CHECK(h->label == "coherence");
    CHECK(h->gname == "H{0,1}f");
    CHECK(h->s2 == std::vector<int>{0});

    const LabeledFacet* g1 = by_render.at("(d0)(d0f)");
    CHECK(g1->label == "choice(stage 1)");
    CHECK(g1->gname == "d0G1");
    CHECK(g1->s2 == std::vector<int>{0, 1});

    const LabeledFacet* g2 = by_render.at("(d0)(d1f)");
    CHECK(g2->label == "choice(stage 1)");
    CHECK(g2->gname == "d0G2");
    CHECK(g2->s2 == std::vector<int>{0, 2});

    for (const auto& f : lab.facets)
        if (f.label == "zero") {
            CHECK(f.gname == "0");
            CHECK(f.s2[0] != 0);
        }
}

TEST_CASE("obstruction labels at page three: the two new fill-ins") {
    ObstructionLabels lab = label_obstruction_boundary(3, 3);
    CHECK(lab.facets.size() == 14);

    std::map<std::string, int> census;
    std::set<std::string> fresh;
    for (const auto& f : lab.facets) {
        ++census[f.label];
        if (f.is_new) fresh.insert(f.render);
    }
    CHECK(census["zero"] == 7);
    CHECK(census["coherence"] == 1);
    CHECK(census["choice(stage 1)"] == 3);
    CHECK(census["choice(stage 2)"] == 3);
    CHECK(fresh == std::set<std::string>{"(d0)(d0d1f)", "(d0)(d0d2f)"});

    // the always-zero pattern: first factor {r} alone never contains d_0
    for (const auto& f : lab.facets)
        if (f.s2 == std::vector<int>{3}) CHECK(f.label == "zero");

    CHECK_THROWS_AS(label_obstruction_boundary(2, 3), SchemaError);
    CHECK_THROWS_AS(label_obstruction_boundary(4, 1), SchemaError);
}

TEST_CASE("dual witness complexes are the cubes") {
    SSet w1 = dual_witness_complex(1);
    CHECK(counts(w1) == std::vector<int>{4, 5, 2});
    CHECK(iso_check(w1, cube(2)));

    SSet w2 = dual_witness_complex(2);
    CHECK(counts(w2) == std::vector<int>{8, 19, 18, 6});
    CHECK(w2.n_cells(3) == 6);   // one top cell per vertex of P^2
    CHECK(w2.n_cells(2) == 18);  // 6*4 facets minus one per edge of P^2
    CHECK(iso_check(w2, cube(3)));

    SSet w3 = dual_witness_complex(3);
    CHECK(counts(w3) == std::vector<int>{16, 65, 110, 84, 24});
    CHECK(w3.n_cells(4) == 24);
    CHECK(w3.n_cells(3) == 120 - 36);
    CHECK(iso_check(w3, cube(4)));
    auto h = homology_z(w3);
    CHECK(h[0].betti == 1);
    for (size_t d = 1; d < h.size(); ++d) CHECK(h[d].betti == 0);

    CHECK_THROWS_AS(dual_witness_complex(0), SchemaError);
    CHECK_THROWS_AS(dual_witness_complex(4), SchemaError);
}
