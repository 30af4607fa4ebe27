#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "topo/error.hpp"
#include "topo/fp.hpp"
#include "topo/matrix.hpp"
#include "topo/rng.hpp"

using namespace topo;

TEST_CASE("prime field scalar arithmetic") {
    CHECK(is_prime(2));
    CHECK(is_prime(65521));
    CHECK(!is_prime(1));
    CHECK(!is_prime(65536));
    CHECK_THROWS_AS(require_prime(65537), SchemaError);  // cap, not primality
    CHECK(fp_norm(-1, 5) == 4);
    CHECK(fp_mul(3, 4, 5) == 2);
    for (int64_t x = 1; x < 7; ++x) CHECK(fp_mul(x, fp_inv(x, 7), 7) == 1);
    CHECK_THROWS_AS(fp_inv(0, 5), InvariantError);
}

TEST_CASE("rref, rank, nullspace, solve over F_p") {
    Matrix m(3, 4);
    int64_t data[3][4] = {{1, 2, 0, 1}, {2, 4, 1, 0}, {0, 0, 1, 3}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) m.at(i, j) = data[i][j];
    auto rr = rref(m, 5);
    CHECK(rr.pivots == std::vector<int>{0, 2});
    CHECK(rank(m, 5) == 2);
    Matrix ns = nullspace(m, 5);
    CHECK(ns.cols == 2);
    Matrix prod = mat_mul(m, ns, 5);
    CHECK(is_zero(prod));
    // solve returns a particular solution when one exists
    Matrix b = col(mat_mul(m, ns, 5), 0);  // zero target
    auto x0 = solve(m, b, 5);
    REQUIRE(x0.has_value());
    CHECK(is_zero(mat_mul(m, *x0, 5)));
    // inconsistent target
    Matrix bad(3, 1);
    bad.at(0, 0) = 0;
    bad.at(1, 0) = 0;
    bad.at(2, 0) = 1;
    Matrix m2(3, 1);
    m2.at(0, 0) = 1;
    m2.at(1, 0) = 2;
    m2.at(2, 0) = 0;
    CHECK(!solve(m2, bad, 5).has_value());
}

TEST_CASE("col_basis spans the column space deterministically") {
    Matrix m(2, 3);
    m.at(0, 0) = 1;
    m.at(0, 1) = 2;
    m.at(0, 2) = 0;
    m.at(1, 0) = 2;
    m.at(1, 1) = 4;
    m.at(1, 2) = 1;
    Matrix cb = col_basis(m, 5);
    CHECK(cb.cols == 2);
    CHECK(cb.at(0, 0) == 1);  // first pivot column is the original first column
    CHECK(cb.at(1, 0) == 2);
}

TEST_CASE("smith normal form") {
    Matrix m(2, 2);
    m.at(0, 0) = 2;
    m.at(0, 1) = 4;
    m.at(1, 0) = -2;
    m.at(1, 1) = 6;
    Snf s = snf(m);
    CHECK(mat_mul_int(mat_mul_int(s.U, m), s.V) == s.D);
    CHECK(s.D.at(0, 0) == 2);
    CHECK(s.D.at(1, 1) == 10);
    CHECK(s.D.at(0, 1) == 0);
    CHECK(s.D.at(1, 0) == 0);

    // divisibility chain on a stress matrix
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        int r = 1 + (int)rng.below(5), c = 1 + (int)rng.below(5);
        Matrix a(r, c);
        for (auto& v : a.a) v = rng.range(-9, 9);
        Snf t = snf(a);
        CHECK(mat_mul_int(mat_mul_int(t.U, a), t.V) == t.D);
        int64_t prev = 0;
        for (int i = 0; i < std::min(r, c); ++i) {
            int64_t d = t.D.at(i, i);
            CHECK(d >= 0);
            if (prev > 0) CHECK((d == 0 || d % prev == 0));
            prev = d;
            for (int j = 0; j < c; ++j)
                if (j != i) CHECK(t.D.at(i, j) == 0);
        }
    }
}

TEST_CASE("subquotients compute homology dimensions") {
    // circle as a chain complex over F_2: two vertices, two edges
    Matrix d1(2, 2);
    d1.at(0, 0) = 1;
    d1.at(0, 1) = 1;
    d1.at(1, 0) = 1;
    d1.at(1, 1) = 1;
    Matrix z = nullspace(d1, 2);                    // cycles in degree 1
    Matrix zero_bound(2, 0);                        // nothing above
    Subquotient h1 = make_subquotient(z, zero_bound, 2, 2);
    CHECK(h1.dim() == 1);
    Matrix all0 = Matrix::identity(2);              // degree-0 cycles: everything
    Subquotient h0 = make_subquotient(all0, d1, 2, 2);
    CHECK(h0.dim() == 1);

    // coords/basis_lift round trip
    Matrix lift = h0.basis_lift();
    CHECK(lift.cols == 1);
    Matrix c = h0.coords(col(lift, 0));
    CHECK(c.rows == 1);
    CHECK(fp_norm(c.at(0, 0), 2) == 1);
    CHECK(h0.in_subspace(col(lift, 0)));

    // a boundary has coordinates zero in the quotient
    Matrix bvec = col(d1, 0);
    Matrix cb = h0.coords(bvec);
    CHECK(is_zero(mat_mod(cb, 2)));
}

TEST_CASE("make_subquotient rejects boundaries outside the cycle space") {
    Matrix z(2, 1);
    z.at(0, 0) = 1;
    z.at(1, 0) = 0;
    Matrix b(2, 1);
    b.at(0, 0) = 0;
    b.at(1, 0) = 1;
    CHECK_THROWS_AS(make_subquotient(z, b, 2, 5), InvariantError);
}

TEST_CASE("seeded rng is reproducible and rejection sampling is unbiased at the edges") {
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(a.below(13) == b.below(13));
    Rng c(8);
    for (int i = 0; i < 100; ++i) {
        int64_t v = c.range(-3, 3);
        CHECK(v >= -3);
        CHECK(v <= 3);
    }
    CHECK(Rng(5).below(1) == 0);
}

// ------------------------------------------------------------------ complexes

#include "topo/homalg.hpp"

namespace {

Matrix mk(int rows, int cols, std::initializer_list<int64_t> vals) {
    Matrix m(rows, cols);
    int i = 0;
    for (auto v : vals) m.a[i++] = v;
    return m;
}

// Boundary matrices of the hollow tetrahedron: 4 vertices, 6 edges
// (01,02,03,12,13,23), 4 triangles (012,013,023,123), integer signs.
ChainComplex hollow_tetrahedron(int64_t ring) {
    ChainComplex C;
    C.ring = ring;
    C.dims = {4, 6, 4};
    Matrix d1 = mk(4, 6,
                   {-1, -1, -1, 0, 0, 0,
                    1, 0, 0, -1, -1, 0,
                    0, 1, 0, 1, 0, -1,
                    0, 0, 1, 0, 1, 1});
    Matrix d2 = mk(6, 4,
                   {1, 1, 0, 0,
                    -1, 0, 1, 0,
                    0, -1, -1, 0,
                    1, 0, 0, 1,
                    0, 1, 0, -1,
                    0, 0, 1, 1});
    if (ring != 0) {
        d1 = mat_mod(d1, ring);
        d2 = mat_mod(d2, ring);
    }
    C.d = {Matrix(0, 4), d1, d2};
    return C;
}

// The mapping cone of the identity of W: degrees 0..top(W)+1, contractible.
ChainComplex cone_of(const ChainComplex& W) {
    int64_t p = W.ring;
    int top = W.top() + 1;
    ChainComplex C;
    C.ring = p;
    C.dims.resize(top + 1);
    C.d.resize(top + 1);
    for (int q = 0; q <= top; ++q) C.dims[q] = W.dim(q - 1) + W.dim(q);
    C.d[0] = Matrix(0, C.dim(0));
    for (int q = 1; q <= top; ++q) {
        Matrix m(C.dim(q - 1), C.dim(q));
        Matrix dq1 = W.diff(q - 1), dq = W.diff(q);
        for (int i = 0; i < dq1.rows; ++i)
            for (int j = 0; j < dq1.cols; ++j) m.at(i, j) = fp_sub(0, dq1.at(i, j), p);
        int ro = W.dim(q - 2), co = W.dim(q - 1);
        for (int j = 0; j < W.dim(q - 1); ++j) m.at(ro + j, j) = 1;
        for (int i = 0; i < dq.rows; ++i)
            for (int j = 0; j < dq.cols; ++j) m.at(ro + i, co + j) = dq.at(i, j);
        C.d[q] = m;
    }
    C.check();
    return C;
}

bool same_span(const Matrix& a, const Matrix& b, int64_t p) {
    int ra = rank(a, p), rb = rank(b, p);
    return ra == rb && rank(hstack(a, b), p) == ra;
}

}

TEST_CASE("chain complex check rejects malformed data") {
    ChainComplex C;
    C.ring = 2;
    C.dims = {1, 1};
    C.d = {Matrix(0, 1)};
    CHECK_THROWS_AS(C.check(), SchemaError);  // missing slot
    C.d.push_back(Matrix(1, 1));
    C.d[1].at(0, 0) = 3;  // not a canonical residue mod 2
    CHECK_THROWS_AS(C.check(), SchemaError);
    C.d[1].at(0, 0) = 1;
    C.check();

    ChainComplex bad;
    bad.ring = 2;
    bad.dims = {1, 1, 1};
    bad.d = {Matrix(0, 1), Matrix::identity(1), Matrix::identity(1)};
    CHECK_THROWS_AS(bad.check(), InvariantError);  // dd != 0
}

TEST_CASE("homology of the hollow tetrahedron and a real projective plane") {
    ChainComplex Z = hollow_tetrahedron(0);
    auto h = homology_int(Z);
    REQUIRE(h.size() == 3);
    CHECK(h[0] == IntHomology{1, {}});
    CHECK(h[1] == IntHomology{0, {}});
    CHECK(h[2] == IntHomology{1, {}});
    for (int64_t p : {2, 3, 5}) {
        auto hp = homology_dims(hollow_tetrahedron(p));
        CHECK(hp == std::vector<int>{1, 0, 1});
    }

    // one cell per dimension, attaching degree 2
    ChainComplex rp2;
    rp2.ring = 0;
    rp2.dims = {1, 1, 1};
    rp2.d = {Matrix(0, 1), Matrix(1, 1), mk(1, 1, {2})};
    auto hr = homology_int(rp2);
    CHECK(hr[0] == IntHomology{1, {}});
    CHECK(hr[1] == IntHomology{0, {2}});
    CHECK(hr[2] == IntHomology{0, {}});
    rp2.ring = 2;
    rp2.d[2] = mk(1, 1, {0});
    CHECK(homology_dims(rp2) == std::vector<int>{1, 1, 1});
    rp2.ring = 3;
    rp2.d[2] = mk(1, 1, {2});
    CHECK(homology_dims(rp2) == std::vector<int>{1, 0, 0});
}

TEST_CASE("homology_space agrees with homology_dims and random cones are contractible") {
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        int64_t p = trial % 2 == 0 ? 2 : 3;
        ChainComplex C = random_complex(rng, p, 3, 3);
        auto h = homology_dims(C);
        for (int n = 0; n <= C.top(); ++n) {
            Subquotient s = homology_space(C, n);
            CHECK(s.dim() == h[n]);
            // representatives really are cycles
            CHECK(is_zero(mat_mul(C.diff(n), s.basis_lift(), p)));
        }
        ChainComplex cone = cone_of_identity(rng, p, 4, 3);
        auto hc = homology_dims(cone);
        for (int v : hc) CHECK(v == 0);
    }
}

TEST_CASE("induced map of the identity is the identity on homology") {
    Rng rng(57);
    ChainComplex C = random_complex(rng, 3, 3, 3);
    std::vector<Matrix> id;
    for (int n = 0; n <= C.top(); ++n) id.push_back(Matrix::identity(C.dim(n)));
    for (int n = 0; n <= C.top(); ++n) {
        Matrix m = induced_map(C, C, id, n);
        CHECK(m == Matrix::identity(homology_space(C, n).dim()));
    }
    // a non-chain-map is rejected
    if (C.dim(1) > 0 && C.dim(0) > 0) {
        std::vector<Matrix> bad = id;
        bool flipped = false;
        for (int n = 1; n <= C.top() && !flipped; ++n)
            if (C.dim(n) > 0 && !is_zero(C.diff(n))) {
                bad[n] = Matrix(C.dim(n), C.dim(n));  // zero in one degree only
                flipped = true;
            }
        if (flipped) CHECK_THROWS_AS(induced_map(C, C, bad, 0), InvariantError);
    }
}

TEST_CASE("connecting map of the cone sequence is an isomorphism") {
    Rng rng(73);
    for (int64_t p : {2, 5}) {
        ChainComplex A = random_complex(rng, p, 3, 3);
        ChainComplex B = cone_of(A);
        // quotient = A shifted up one degree, differential negated
        ChainComplex S;
        S.ring = p;
        S.dims.resize(B.top() + 1);
        S.d.resize(B.top() + 1);
        for (int q = 0; q <= B.top(); ++q) S.dims[q] = A.dim(q - 1);
        S.d[0] = Matrix(0, S.dims[0]);
        for (int q = 1; q <= B.top(); ++q) S.d[q] = mat_scale(A.diff(q - 1), p - 1, p);
        std::vector<Matrix> incl(B.top() + 1), proj(B.top() + 1);
        for (int q = 0; q <= B.top(); ++q) {
            Matrix in(B.dim(q), A.dim(q));
            for (int i = 0; i < A.dim(q); ++i) in.at(A.dim(q - 1) + i, i) = 1;
            Matrix pr(S.dim(q), B.dim(q));
            for (int i = 0; i < A.dim(q - 1); ++i) pr.at(i, i) = 1;
            incl[q] = in;
            proj[q] = pr;
        }
        for (int q = 1; q <= B.top(); ++q) {
            Matrix delta = connecting_map(A, B, S, incl, proj, q);
            int hs = homology_space(S, q).dim();
            int ha = homology_space(A, q - 1).dim();
            CHECK(hs == ha);
            CHECK(delta.rows == ha);
            CHECK(delta.cols == hs);
            CHECK(rank(delta, p) == ha);  // the zig-zag inverts the shift
        }
    }
}

TEST_CASE("random extensions have exact homology sequences and seed-independent lifts") {
    Rng rng(101);
    for (int trial = 0; trial < 30; ++trial) {
        int64_t p = std::vector<int64_t>{2, 3, 5}[trial % 3];
        ChainComplex A = random_complex(rng, p, 3, 3);
        ChainComplex C = random_complex(rng, p, 3, 3);
        Extension e = random_extension(rng, A, C);
        int T = e.total.top();
        for (int t = 0; t <= T; ++t) {
            Matrix i_t = induced_map(A, e.total, e.incl, t);
            Matrix p_t = induced_map(e.total, C, e.proj, t);
            Matrix delta = connecting_map(A, e.total, C, e.incl, e.proj, t);
            // im(incl) = ker(proj) in H_t(B)
            CHECK(same_span(i_t, nullspace(p_t, p), p));
            // im(proj) = ker(delta) in H_t(C)
            CHECK(same_span(p_t, nullspace(delta, p), p));
            // im(delta) = ker(incl) in H_{t-1}(A)
            if (t >= 1) {
                Matrix i_tm1 = induced_map(A, e.total, e.incl, t - 1);
                CHECK(same_span(delta, nullspace(i_tm1, p), p));
            }
            // zig-zag answer independent of which lift the solver picks
            for (uint64_t seed : {1u, 99u})
                CHECK(connecting_map(A, e.total, C, e.incl, e.proj, t, seed) == delta);
        }
    }
}

// --------------------------------------------------------------- bicomplexes

TEST_CASE("bicomplex check, flip, and totalization") {
    Bicomplex B;
    B.p = 3;
    B.dims = {{1, 1}, {1, 1}};
    B.dh[{1, 0}] = mk(1, 1, {1});
    B.dh[{1, 1}] = mk(1, 1, {1});
    B.dv[{0, 1}] = mk(1, 1, {1});
    B.dv[{1, 1}] = mk(1, 1, {2});  // squares commute only if this is 1
    CHECK_THROWS_AS(B.check(), InvariantError);
    B.dv[{1, 1}] = mk(1, 1, {1});
    B.check();

    ChainComplex T = total(B);
    CHECK(T.dims == std::vector<int>{1, 2, 1});
    // the diagonal square with identity maps is acyclic
    CHECK(homology_dims(T) == std::vector<int>{0, 0, 0});
    CHECK(homology_dims(total(flip(B))) == homology_dims(T));

    Bicomplex shape;
    shape.p = 3;
    shape.dims = {{1}};
    shape.dh[{0, 0}] = Matrix(1, 1);
    CHECK_THROWS_AS(shape.check(), SchemaError);  // dh out of a corner has 0 rows
}

TEST_CASE("one-cell bicomplex: every page is that cell and the abutment sees it") {
    Bicomplex B;
    B.p = 2;
    B.dims = {{0, 0}, {0, 1}};  // single F_2 in bidegree (1,1)
    auto st = staircase_pages(B, Filtration::column, 4);
    for (const auto& pg : st) {
        CHECK(pg.dims == (std::map<std::pair<int, int>, int>{{{1, 1}, 1}}));
        CHECK(pg.d.empty());
    }
    ExactCouple c = filtration_couple(B, Filtration::column, 4);
    CHECK(couple_check(c).ok);
    CHECK(pages_match(pages(c, 4), st));
    CHECK(homology_dims(total(B)) == std::vector<int>{0, 0, 1});
}

TEST_CASE("two cells joined by an isomorphism die on the second page") {
    Bicomplex B;
    B.p = 5;
    B.dims = {{1}, {1}};
    B.dh[{1, 0}] = mk(1, 1, {2});
    auto st = staircase_pages(B, Filtration::column, 3);
    CHECK(st[0].dims ==
          (std::map<std::pair<int, int>, int>{{{0, 0}, 1}, {{1, 0}, 1}}));
    CHECK(st[0].rank_out(1, 0) == 1);
    CHECK(st[1].dims.empty());
    CHECK(st[2].dims.empty());
    ExactCouple c = filtration_couple(B, Filtration::column, 3);
    CHECK(couple_check(c).ok);
    CHECK(pages_match(pages(c, 3), st));
    check_page_bookkeeping(st);
}

// ------------------------------------------------------------- exact couples

namespace {

// A couple with alpha = 0: E(n,0) = D(n,0) + D(n-1,0), beta the inclusion,
// gamma the projection.  Exact, and everything dies on page two.
ExactCouple zero_alpha_couple(bool store_alpha) {
    ExactCouple c;
    c.p = 2;
    c.D[{0, 0}] = 1;
    c.D[{1, 0}] = 1;
    c.E[{0, 0}] = 1;
    c.E[{1, 0}] = 2;
    c.E[{2, 0}] = 1;
    if (store_alpha) {
        c.alpha[{0, 0}] = Matrix(0, 1);  // D(1,-1) = 0
        c.alpha[{1, 0}] = Matrix(0, 1);
    }
    c.beta[{0, 0}] = mk(1, 1, {1});
    c.beta[{1, 0}] = mk(2, 1, {1, 0});
    c.gamma[{1, 0}] = mk(1, 2, {0, 1});
    c.gamma[{2, 0}] = mk(1, 1, {1});
    return c;
}

}

TEST_CASE("zero-alpha couple: exactness report and collapse on page two") {
    ExactCouple c = zero_alpha_couple(true);
    CHECK(couple_check(c).ok);

    auto pgs = pages(c, 3);
    CHECK(pgs[0].dims ==
          (std::map<std::pair<int, int>, int>{{{0, 0}, 1}, {{1, 0}, 2}, {{2, 0}, 1}}));
    CHECK(pgs[0].rank_out(1, 0) == 1);
    CHECK(pgs[0].rank_out(2, 0) == 1);
    CHECK(pgs[1].dims.empty());
    CHECK(pgs[2].dims.empty());
    check_page_bookkeeping(pgs);

    ExactCouple dc = derived_couple(c);
    CHECK(dc.stage == 2);
    CHECK(dc.D.empty());  // im alpha = 0
    CHECK(dc.E.empty());
    CHECK(couple_check(dc).ok);
    CHECK_THROWS_AS(pages(dc, 2), SchemaError);  // pages want stage 1
}

TEST_CASE("stored zero alpha is judged, absent alpha is out of scope") {
    // drop the node that rescues exactness at D(1,0)
    ExactCouple c = zero_alpha_couple(true);
    c.E.erase({2, 0});
    c.gamma.erase({2, 0});
    auto rep = couple_check(c);
    CHECK(!rep.ok);
    REQUIRE(rep.defects.size() == 1);
    CHECK(rep.defects[0].where == 3);
    CHECK(rep.defects[0].n == 1);
    CHECK(rep.defects[0].k == 0);
    CHECK(rep.defects[0].defect == 1);
    CHECK(rep.defects[0].contained);
    // the base-edge escape hatch silences exactly this class of defect
    CHECK(couple_check(c, true).ok);
    // and an absent alpha entry is not judged at all
    ExactCouple loose = zero_alpha_couple(false);
    loose.E.erase({2, 0});
    loose.gamma.erase({2, 0});
    CHECK(couple_check(loose).ok);
}

// ------------------------------------- staircase against the couple pages

TEST_CASE("filtration couple pages match the staircase on seeded bicomplexes") {
    int seed_count = 0, live_d2 = 0, live_d3 = 0;
    for (int seed = 0; seed < 54; ++seed) {
        Rng rng(9000 + seed);
        int64_t p = std::vector<int64_t>{2, 3, 5}[seed % 3];
        int N = 2 + seed % 2, Q = 2 + (seed / 2) % 2;
        Bicomplex B = random_bicomplex(rng, p, N, Q, 2);
        for (Filtration f : {Filtration::column, Filtration::row}) {
            int cols = f == Filtration::column ? N : Q;
            int rows = f == Filtration::column ? Q : N;
            int r_hi = std::max(cols + 1, rows + 2);
            auto st = staircase_pages(B, f, r_hi);
            ExactCouple c = filtration_couple(B, f, r_hi);
            CHECK(couple_check(c).ok);
            auto pg = pages(c, r_hi);
            CHECK(pages_match(pg, st));
            check_page_bookkeeping(st);
            check_page_bookkeeping(pg);
            ++seed_count;
            for (const auto& [key, m] : st[1].d) live_d2 += rank(m, p) > 0;
            for (const auto& [key, m] : st[2].d) live_d3 += rank(m, p) > 0;

            // every node freezes once differentials can no longer reach it
            for (int n = 0; n <= cols; ++n)
                for (int k = 0; k <= rows; ++k) {
                    int stab = std::max(n + 1, k + 2);
                    for (int r = stab; r <= r_hi; ++r)
                        CHECK(st[r - 1].dim(n, k) == st[stab - 1].dim(n, k));
                }

            // abutment: the frozen page assembles the total homology
            auto h = homology_dims(total(B));
            for (int t = 0; t <= cols + rows; ++t) {
                int sum = 0;
                for (int s = 0; s <= cols; ++s) sum += st[r_hi - 1].dim(s, t - s);
                CHECK(sum == h[t]);
            }
        }
    }
    CHECK(seed_count >= 100);
    // the corpus genuinely exercises higher differentials
    CHECK(live_d2 >= 5);
    CHECK(live_d3 >= 1);
}

TEST_CASE("derived couple carries the second page") {
    for (int seed = 0; seed < 12; ++seed) {
        Rng rng(500 + seed);
        int64_t p = seed % 2 == 0 ? 2 : 3;
        Bicomplex B = random_bicomplex(rng, p, 2, 2, 2);
        ExactCouple c = filtration_couple(B, Filtration::column, 4);
        ExactCouple dc = derived_couple(c);
        CHECK(couple_check(dc).ok);
        auto pg = pages(c, 3);
        CHECK(dc.E == pg[1].dims);
        for (const auto& [key, dim2] : dc.E) {
            auto [n, k] = key;
            Matrix d2 = mat_mul(dc.beta_at(n - 1, k), dc.gamma_at(n, k), p);
            CHECK(rank(d2, p) == pg[1].rank_out(n, k));
            (void)dim2;
        }
    }
}
