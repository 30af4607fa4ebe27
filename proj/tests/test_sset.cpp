#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "topo/error.hpp"
#include "topo/sset.hpp"

using namespace topo;

static std::vector<int> counts(const SSet& X) {
    std::vector<int> c;
    for (int d = 0; d <= X.dim(); ++d) c.push_back(X.n_cells(d));
    return c;
}

TEST_CASE("surjection tables round trip") {
    std::vector<int> S{0, 2};
    auto v = surjection_values(S, 3);
    CHECK(v == std::vector<int>{0, 0, 1, 1});
    CHECK(collapse_set_of(v) == S);
    CHECK(surjection_values({}, 2) == std::vector<int>{0, 1, 2});
}

TEST_CASE("standard simplices, boundaries, horns") {
    CHECK(counts(standard_simplex(0)) == std::vector<int>{1});
    CHECK(counts(standard_simplex(2)) == std::vector<int>{3, 3, 1});
    CHECK(counts(boundary(3)) == std::vector<int>{4, 6, 4});
    CHECK(counts(horn(2, 0)) == std::vector<int>{3, 2});
    CHECK(boundary(0).total_cells() == 0);
    CHECK_THROWS_AS(horn(2, 3), SchemaError);
}

TEST_CASE("face and degeneracy identities on formal simplices") {
    SSet X = standard_simplex(2);
    FormalSimplex top{{}, "012"};
    for (int j = 0; j <= 2; ++j) {
        FormalSimplex s = X.degenerate(top, j);
        CHECK(X.formal_dim(s) == 3);
        CHECK(X.face(s, j) == top);
        CHECK(X.face(s, j + 1) == top);
    }
    // d_0 s_1 = s_0 d_0 on the top cell
    CHECK(X.face(X.degenerate(top, 1), 0) == X.degenerate(X.face(top, 0), 0));
}

TEST_CASE("quotients collapse a subcomplex to the basepoint") {
    SSet D2 = standard_simplex(2);
    std::vector<std::string> bdry;
    for (int d = 0; d < 2; ++d)
        for (const auto& c : D2.cells[d]) bdry.push_back(c);
    SSet S2 = quotient(D2, bdry);
    CHECK(counts(S2) == std::vector<int>{1, 0, 1});
    CHECK(S2.basepoint == "*");
    auto h = homology_z(S2);
    CHECK(h[0] == ZHomology{1, {}});
    CHECK(h[2] == ZHomology{1, {}});
    CHECK(homology_fp(S2, 2) == std::vector<int>{1, 0, 1});

    SSet D1 = standard_simplex(1);
    SSet S1 = quotient(D1, {"0", "1"});
    auto h1 = homology_z(S1);
    CHECK(h1[0] == ZHomology{1, {}});
    CHECK(h1[1] == ZHomology{1, {}});

    std::vector<std::string> everything;
    for (int d = 0; d <= D2.dim(); ++d)
        for (const auto& c : D2.cells[d]) everything.push_back(c);
    SSet pt = quotient(D2, everything);
    CHECK(pt.total_cells() == 1);

    CHECK_THROWS_AS(quotient(D2, {"01"}), InvariantError);  // not face-closed
}

TEST_CASE("cones and the subdivided simplex") {
    SSet T2 = tr_simplex(2);
    CHECK(T2.n_cells(0) == 4);
    CHECK(T2.n_cells(2) == 3);
    SSet T3 = tr_simplex(3);
    CHECK(T3.n_cells(3) == 4);
    auto h = homology_z(cone(boundary(3)));
    CHECK(h[0] == ZHomology{1, {}});
    for (size_t d = 1; d < h.size(); ++d) CHECK(h[d] == ZHomology{0, {}});
}

TEST_CASE("products count shuffles") {
    SSet I = standard_simplex(1);
    SSet sq = product(I, I);
    CHECK(counts(sq) == std::vector<int>{4, 5, 2});
    SSet prism = product(I, standard_simplex(2));
    CHECK(prism.n_cells(3) == 3);
    auto hp = homology_z(prism);
    CHECK(hp[0] == ZHomology{1, {}});
    for (size_t d = 1; d < hp.size(); ++d) CHECK(hp[d] == ZHomology{0, {}});
    CHECK(iso_check(product(boundary(2), point()), boundary(2)));
}

TEST_CASE("fattened simplices are contractible") {
    for (int n = 1; n <= 3; ++n) {
        SSet F = fattened_simplex(n);
        auto h = homology_z(F);
        CHECK(h[0] == ZHomology{1, {}});
        for (size_t d = 1; d < h.size(); ++d) CHECK(h[d] == ZHomology{0, {}});
    }
    // the collar really is fatter than the simplex alone
    CHECK(fattened_simplex(2).n_cells(2) > 1);
}

TEST_CASE("sphere and horn homology through dimension five") {
    for (int n = 1; n <= 5; ++n) {
        auto h = homology_z(boundary(n));
        REQUIRE((int)h.size() == n);  // top cells sit in dimension n-1
        CHECK(h[0].betti == (n == 1 ? 2 : 1));
        for (int d = 1; d < n - 1; ++d) CHECK(h[d] == ZHomology{0, {}});
        if (n >= 2) CHECK(h[n - 1] == ZHomology{1, {}});
        for (const auto& hd : h) CHECK(hd.torsion.empty());

        auto hh = homology_z(horn(n, 0));
        CHECK(hh[0].betti == 1);
        for (size_t d = 1; d < hh.size(); ++d) CHECK(hh[d] == ZHomology{0, {}});

        SSet Dn = standard_simplex(n);
        std::vector<std::string> bdry;
        for (int d = 0; d < n; ++d)
            for (const auto& c : Dn.cells[d]) bdry.push_back(c);
        auto hq = homology_z(quotient(Dn, bdry));
        CHECK(hq[0].betti == 1);
        CHECK(hq[n].betti == 1);
        for (int d = 1; d < n; ++d) CHECK(hq[d] == ZHomology{0, {}});
    }
}

TEST_CASE("euler characteristic agrees with homology over two primes") {
    auto check_chi = [](const SSet& X) {
        long long chi = euler_characteristic(X);
        for (int64_t p : {2, 3}) {
            long long alt = 0;
            auto h = homology_fp(X, p);
            for (size_t d = 0; d < h.size(); ++d) alt += (d % 2 ? -1LL : 1LL) * h[d];
            CHECK(alt == chi);
        }
    };
    check_chi(boundary(3));
    check_chi(tr_simplex(3));
    check_chi(fattened_simplex(2));
    check_chi(product(standard_simplex(1), standard_simplex(2)));
}

TEST_CASE("torsion shows up through the smith form") {
    // projective plane: one cell per dimension, middle face degenerate
    SSet P;
    P.add_cell("*", 0);
    P.add_cell("a", 1, {{{}, "*"}, {{}, "*"}});
    P.add_cell("s", 2, {{{}, "a"}, {{0}, "*"}, {{}, "a"}});
    P.check_identities();
    auto h = homology_z(P);
    CHECK(h[0] == ZHomology{1, {}});
    CHECK(h[1] == ZHomology{0, {2}});
    CHECK(h[2] == ZHomology{0, {}});
    CHECK(homology_fp(P, 2) == std::vector<int>{1, 1, 1});
    CHECK(homology_fp(P, 3) == std::vector<int>{1, 0, 0});
    CHECK(euler_characteristic(P) == 1);
}

TEST_CASE("components partition the cells") {
    SSet two;
    two.add_cell("p", 0);
    two.add_cell("q", 0);
    two.add_cell("r", 0);
    two.add_cell("e", 1, {{{}, "q"}, {{}, "p"}});
    two.check_identities();
    auto comps = components(two);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0] == std::vector<std::string>{"p", "q", "e"});
    CHECK(comps[1] == std::vector<std::string>{"r"});
    CHECK(components(boundary(3)).size() == 1);
}

TEST_CASE("isomorphism checking distinguishes complexes with equal f-vectors") {
    // square circle vs two bigons: both have four vertices and four edges
    SSet square;
    for (const char* v : {"a", "b", "c", "d"}) square.add_cell(v, 0);
    square.add_cell("ab", 1, {{{}, "b"}, {{}, "a"}});
    square.add_cell("bc", 1, {{{}, "c"}, {{}, "b"}});
    square.add_cell("cd", 1, {{{}, "d"}, {{}, "c"}});
    square.add_cell("da", 1, {{{}, "a"}, {{}, "d"}});
    square.check_identities();
    SSet bigons;
    for (const char* v : {"p", "q", "r", "s"}) bigons.add_cell(v, 0);
    bigons.add_cell("e1", 1, {{{}, "q"}, {{}, "p"}});
    bigons.add_cell("e2", 1, {{{}, "q"}, {{}, "p"}});
    bigons.add_cell("f1", 1, {{{}, "s"}, {{}, "r"}});
    bigons.add_cell("f2", 1, {{{}, "s"}, {{}, "r"}});
    bigons.check_identities();
    CHECK(!iso_check(square, bigons));
    CHECK(iso_check(square, square));
    CHECK(iso_check(bigons, bigons));
    CHECK(!iso_check(boundary(2), horn(2, 0)));
}

TEST_CASE("constructors reject malformed input") {
    SSet bad;
    bad.add_cell("v", 0);
    CHECK_THROWS_AS(bad.add_cell("v", 0), SchemaError);
    CHECK_THROWS_AS(bad.add_cell("e", 1, {}), SchemaError);
    SSet loopy;
    loopy.add_cell("v", 0);
    loopy.add_cell("e", 1, {{{}, "v"}, {{}, "w"}});
    CHECK_THROWS_AS(loopy.check_identities(), InvariantError);
}
