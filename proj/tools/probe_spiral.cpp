// Manual probe for the spiral machinery against the frozen corpus data.
// Not part of the build: compile by hand against libtopocore.

#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "topo/error.hpp"
#include "topo/homalg.hpp"
#include "topo/matrix.hpp"
#include "topo/rng.hpp"
#include "topo/spiral.hpp"

using namespace topo;

static int failures = 0;

static void expect(bool ok, const std::string& what) {
    std::printf("%s  %s\n", ok ? "ok  " : "FAIL", what.c_str());
    if (!ok) ++failures;
}

static Matrix M(std::vector<std::vector<int64_t>> rows) {
    Matrix m((int)rows.size(), rows.empty() ? 0 : (int)rows[0].size());
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) m.at(i, j) = rows[i][j];
    return m;
}

static Bicomplex frozen_seed2() {
    Bicomplex B;
    B.p = 2;
    B.dims = {{3, 1, 1, 1}, {5, 2, 3, 1}, {3, 3, 4, 1}, {2, 4, 5, 3}};
    B.dh[{1, 0}] = M({{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}});
    B.dh[{1, 1}] = M({{1, 0}});
    B.dh[{1, 2}] = M({{1, 0, 0}});
    B.dh[{1, 3}] = M({{1}});
    B.dh[{2, 0}] = M({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    B.dh[{2, 1}] = M({{0, 0, 0}, {1, 0, 0}});
    B.dh[{2, 2}] = M({{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}});
    B.dh[{2, 3}] = M({{0}});
    B.dh[{3, 0}] = M({{0, 0}, {0, 0}, {1, 0}});
    B.dh[{3, 1}] = M({{0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}});
    B.dh[{3, 2}] = M({{0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}});
    B.dh[{3, 3}] = M({{1, 0, 0}});
    B.dv[{0, 1}] = M({{1}, {1}, {0}});
    B.dv[{0, 2}] = M({{0}});
    B.dv[{0, 3}] = M({{0}});
    B.dv[{1, 1}] = M({{1, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}});
    B.dv[{1, 2}] = M({{0, 0, 0}, {0, 0, 1}});
    B.dv[{1, 3}] = M({{0}, {1}, {0}});
    B.dv[{2, 1}] = M({{0, 0, 0}, {0, 0, 0}, {0, 0, 1}});
    B.dv[{2, 2}] = M({{0, 1, 0, 0}, {1, 0, 1, 0}, {0, 0, 0, 0}});
    B.dv[{2, 3}] = M({{0}, {0}, {0}, {0}});
    B.dv[{3, 1}] = M({{0, 1, 0, 0}, {0, 1, 1, 0}});
    B.dv[{3, 2}] = M({{1, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 0, 0, 0}, {0, 0, 1, 1, 0}});
    B.dv[{3, 3}] = M({{0, 0, 0}, {0, 0, 0}, {0, 1, 0}, {0, 1, 0}, {0, 0, 1}});
    B.check();
    return B;
}

static Bicomplex frozen_seed7() {
    Bicomplex B;
    B.p = 3;
    B.dims = {{0, 1, 2, 1}, {2, 1, 4, 1}, {3, 2, 4, 0}, {1, 4, 6, 2}};
    B.dh[{1, 1}] = M({{1}});
    B.dh[{1, 2}] = M({{1, 0, 0, 0}, {0, 1, 0, 0}});
    B.dh[{1, 3}] = M({{1}});
    B.dh[{2, 0}] = M({{1, 0, 0}, {0, 1, 0}});
    B.dh[{2, 1}] = M({{0, 0}});
    B.dh[{2, 2}] = M({{0, 0, 0, 0}, {0, 0, 0, 0}, {1, 0, 0, 0}, {0, 1, 0, 0}});
    B.dh[{3, 0}] = M({{0}, {0}, {1}});
    B.dh[{3, 1}] = M({{1, 0, 0, 0}, {0, 1, 0, 0}});
    B.dh[{3, 2}] = M({{0, 0, 0, 0, 0, 0},
                      {0, 0, 0, 0, 0, 0},
                      {1, 0, 0, 0, 0, 0},
                      {0, 1, 0, 0, 0, 0}});
    B.dv[{0, 2}] = M({{0, 2}});
    B.dv[{0, 3}] = M({{0}, {0}});
    B.dv[{1, 1}] = M({{0}, {0}});
    B.dv[{1, 2}] = M({{0, 2, 0, 0}});
    B.dv[{1, 3}] = M({{0}, {0}, {1}, {2}});
    B.dv[{2, 1}] = M({{0, 0}, {0, 0}, {0, 1}});
    B.dv[{2, 2}] = M({{2, 0, 0, 0}, {0, 0, 0, 0}});
    B.dv[{3, 1}] = M({{0, 1, 0, 0}});
    B.dv[{3, 2}] = M({{0, 0, 0, 0, 0, 0},
                      {0, 0, 0, 0, 0, 0},
                      {1, 1, 1, 0, 0, 1},
                      {1, 0, 0, 1, 2, 2}});
    B.dv[{3, 3}] = M({{0, 0}, {0, 0}, {0, 2}, {1, 1}, {1, 0}, {0, 1}});
    B.check();
    return B;
}

static std::string page_dims(const Page& pg) {
    std::string s;
    for (const auto& [k, d] : pg.dims)
        s += "((" + std::to_string(k.first) + "," + std::to_string(k.second) + ")," +
             std::to_string(d) + ") ";
    return s;
}

static std::map<std::pair<int, int>, int> dims_of(const Page& pg) { return pg.dims; }

static void check_frozen(const char* name, const Bicomplex& B,
                         const std::map<std::pair<int, int>, int>& r1,
                         const std::map<std::pair<int, int>, int>& r2,
                         const std::map<std::pair<int, int>, int>& r3,
                         const std::map<std::pair<int, int>, int>& r4,
                         const std::map<std::pair<int, int>, int>& d2rk,
                         const std::map<std::pair<int, int>, int>& d3rk) {
    auto t0 = std::chrono::steady_clock::now();
    BisimplicialVS X = dold_kan_inverse2(B);
    auto t1 = std::chrono::steady_clock::now();
    ExactCouple c = spiral_couple(X);
    CoupleReport rep = couple_check(c, false);
    expect(rep.ok && rep.defects.empty(), std::string(name) + ": couple exact");
    std::vector<Page> sp = pages(c, 4);
    std::vector<Page> st = staircase_pages(B, Filtration::column, 4);
    expect(pages_match(sp, st), std::string(name) + ": spiral pages == staircase pages");
    auto t2 = std::chrono::steady_clock::now();
    expect(dims_of(sp[0]) == r1, std::string(name) + ": r=1 dims  got " + page_dims(sp[0]));
    expect(dims_of(sp[1]) == r2, std::string(name) + ": r=2 dims  got " + page_dims(sp[1]));
    expect(dims_of(sp[2]) == r3, std::string(name) + ": r=3 dims  got " + page_dims(sp[2]));
    expect(dims_of(sp[3]) == r4, std::string(name) + ": r=4 dims  got " + page_dims(sp[3]));
    std::map<std::pair<int, int>, int> g2, g3;
    for (const auto& [k, m] : sp[1].d)
        if (rank(m, c.p) > 0) g2[k] = rank(m, c.p);
    for (const auto& [k, m] : sp[2].d)
        if (rank(m, c.p) > 0) g3[k] = rank(m, c.p);
    expect(g2 == d2rk, std::string(name) + ": d2 ranks");
    expect(g3 == d3rk, std::string(name) + ": d3 ranks");
    std::printf("     %s: gamma2 %lld ms, couple+pages %lld ms\n", name,
                (long long)std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count(),
                (long long)std::chrono::duration_cast<std::chrono::milliseconds>(t2 - t1).count());

    Lemma41Report l41 = lemma41_check(X);
    expect(l41.ok, std::string(name) + ": lemma41 ok");
    AbutmentReport ab = abutment_check(X);
    expect(ab.ok, std::string(name) + ": abutment ok");
    auto t3 = std::chrono::steady_clock::now();
    std::printf("     %s: lemma41+abutment %lld ms\n", name,
                (long long)std::chrono::duration_cast<std::chrono::milliseconds>(t3 - t2).count());
}

static Matrix block_of(const Bicomplex& B, const Matrix& amb, int t, int n) {
    for (const TotBlock& b : total_layout(B, t))
        if (b.n == n) {
            Matrix out(B.dim(b.n, b.q), amb.cols);
            for (int i = 0; i < out.rows; ++i)
                for (int j = 0; j < out.cols; ++j) out.at(i, j) = amb.at(b.offset + i, j);
            return out;
        }
    return Matrix(0, amb.cols);
}

int main() {
    // ---- frozen tower instances
    Bicomplex B2 = frozen_seed2();
    check_frozen("seed2", B2,
                 {{{0, 0}, 2}, {{0, 2}, 1}, {{0, 3}, 1}, {{1, 0}, 4}, {{1, 2}, 1},
                  {{2, 0}, 2}, {{2, 2}, 2}, {{2, 3}, 1}, {{3, 2}, 1}, {{3, 3}, 1}},
                 {{{0, 3}, 1}, {{2, 2}, 1}}, {}, {}, {{{2, 2}, 1}}, {});
    Bicomplex B7 = frozen_seed7();
    check_frozen("seed7", B7,
                 {{{0, 2}, 1}, {{0, 3}, 1}, {{1, 0}, 2}, {{1, 2}, 2}, {{2, 0}, 2},
                  {{2, 2}, 3}, {{3, 1}, 1}, {{3, 2}, 2}},
                 {{{0, 3}, 1}, {{3, 1}, 1}}, {{{0, 3}, 1}, {{3, 1}, 1}}, {}, {},
                 {{{3, 1}, 1}});

    // ---- single entry at (2,1) on the N=Q=3 window: inexact couple
    {
        Bicomplex B;
        B.p = 2;
        B.dims.assign(4, std::vector<int>(4, 0));
        B.dims[2][1] = 1;
        B.check();
        BisimplicialVS X = dold_kan_inverse2(B);
        ExactCouple c = spiral_couple(X);
        CoupleReport rep = couple_check(c, false);
        bool one = rep.defects.size() == 1 && rep.defects[0].where == 3 &&
                   rep.defects[0].n == 2 && rep.defects[0].k == 1 &&
                   rep.defects[0].defect == 1;
        expect(!rep.ok && one, "single-entry: exactly one alpha defect at (2,1)");
        std::vector<Page> st = staircase_pages(B, Filtration::column, 4);
        bool pin = true;
        for (int r = 1; r <= 4; ++r) {
            std::map<std::pair<int, int>, int> want = {{{2, 1}, 1}};
            if (dims_of(st[r - 1]) != want) pin = false;
        }
        expect(pin, "single-entry: staircase pages pinned to ((2,1),1) for r=1..4");
        AbutmentReport ab = abutment_check(X);
        expect(ab.ok && ab.einf[3] == 1 && ab.total_h[3] == 1,
               "single-entry: abutment sees one class in degree 3");
        FibrancyReport fr = fibrancy_check(X);
        std::printf("     single-entry fibrancy: matching=%d kernel=%d dbar=%d fail=(%d,%d)\n",
                    (int)fr.matching_fibration, (int)fr.kernel_is_chains, (int)fr.dbar_onto,
                    fr.fail_n, fr.fail_q);
        expect(!fr.dbar_onto && fr.kernel_is_chains,
               "single-entry: dbar_onto fails, kernel clause holds");
    }

    // ---- chain-level lifting against the frozen differentials
    {
        std::vector<Page> st = staircase_pages(B2, Filtration::column, 4);
        BisimplicialVS X = dold_kan_inverse2(B2);
        Subquotient S = staircase_space(B2, Filtration::column, 2, 2, 2);
        expect(S.dim() == 1, "seed2: E^2(2,2) staircase space has dim 1");
        Matrix rep = block_of(B2, S.basis_lift(), 4, 2);
        LiftResult lr = lifting_differential(X, 2, 2, 2, rep);
        const Matrix& d2 = st[1].d.at({2, 2});
        expect(lr.page_class.rows == d2.rows && lr.page_class.cols == 1 &&
                   lr.page_class.a == d2.a,
               "seed2: lifted d2 class == staircase d2 matrix column");
        // a class that dies at page 1: its d1 is nonzero
        Matrix dead(3, 1);
        dead.at(0, 0) = 1;
        bool threw = false;
        try {
            lifting_differential(X, 1, 2, 2, dead);
        } catch (const InvariantError& e) {
            threw = std::string(e.what()).find("dies at page 1") != std::string::npos;
        }
        expect(threw, "seed2: class at (1,2) dies at page 1");
        // rejection: a non-cycle representative
        Matrix nc(4, 1);
        nc.at(1, 0) = 1;
        bool threw2 = false;
        try {
            lifting_differential(X, 2, 2, 2, nc);
        } catch (const InvariantError& e) {
            threw2 = std::string(e.what()).find("vertical cycle") != std::string::npos;
        }
        expect(threw2, "seed2: non-cycle representative rejected");
    }
    {
        std::vector<Page> st = staircase_pages(B7, Filtration::column, 4);
        BisimplicialVS X = dold_kan_inverse2(B7);
        Subquotient S = staircase_space(B7, Filtration::column, 3, 3, 1);
        expect(S.dim() == 1, "seed7: E^3(3,1) staircase space has dim 1");
        Matrix rep = block_of(B7, S.basis_lift(), 4, 3);
        LiftResult lr = lifting_differential(X, 3, 1, 3, rep);
        const Matrix& d3 = st[2].d.at({3, 1});
        expect(lr.page_class.rows == d3.rows && lr.page_class.cols == 1 &&
                   lr.page_class.a == d3.a,
               "seed7: lifted d3 class == staircase d3 matrix column");
        LiftResult lr2 = lifting_differential(X, 3, 1, 2, rep);
        expect(lr2.page_class.rows == 0 || is_zero(lr2.page_class),
               "seed7: the same class has vanishing d2");
    }

    // ---- tower corpus smoke + fibrancy
    {
        auto t0 = std::chrono::steady_clock::now();
        int bad = 0, d2n = 0, d3n = 0;
        for (int seed = 0; seed < 12; ++seed) {
            int64_t p = seed % 2 == 0 ? 2 : 3;
            Rng rng(1000 + (uint64_t)seed);
            Bicomplex B = tower_bicomplex(rng, p, 3, 3, 3);
            BisimplicialVS X = dold_kan_inverse2(B);
            ExactCouple c = spiral_couple(X);
            CoupleReport rep = couple_check(c, false);
            if (!rep.ok) ++bad;
            std::vector<Page> sp = pages(c, 4);
            std::vector<Page> st = staircase_pages(B, Filtration::column, 4);
            if (!pages_match(sp, st)) ++bad;
            for (const auto& [k, m] : sp[1].d)
                if (rank(m, p) > 0) { ++d2n; break; }
            for (const auto& [k, m] : sp[2].d)
                if (rank(m, p) > 0) { ++d3n; break; }
        }
        auto t1 = std::chrono::steady_clock::now();
        expect(bad == 0, "towers 0..11: exact couples, pages match staircase");
        std::printf("     12 towers took %lld ms; %d with nonzero d2, %d with d3\n",
                    (long long)std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                        .count(),
                    d2n, d3n);
        Rng rng(1000);
        Bicomplex B = tower_bicomplex(rng, 2, 3, 3, 3);
        BisimplicialVS X = dold_kan_inverse2(B);
        auto t2 = std::chrono::steady_clock::now();
        FibrancyReport fr = fibrancy_check(X);
        auto t3 = std::chrono::steady_clock::now();
        expect(fr.ok(), "tower seed 0: fibrancy_check all clauses");
        std::printf("     fibrancy on one N=Q=3 tower: %lld ms\n",
                    (long long)std::chrono::duration_cast<std::chrono::milliseconds>(t3 - t2)
                        .count());
        auto t4 = std::chrono::steady_clock::now();
        X.check();
        auto t5 = std::chrono::steady_clock::now();
        std::printf("     X.check() on that tower: %lld ms\n",
                    (long long)std::chrono::duration_cast<std::chrono::milliseconds>(t5 - t4)
                        .count());
    }

    // ---- uniform bicomplexes: couples break, staircase does not
    {
        int broken = 0;
        for (int seed = 0; seed < 12; ++seed) {
            Rng rng(2000 + (uint64_t)seed);
            Bicomplex B = random_bicomplex(rng, 2, 3, 3, 2);
            BisimplicialVS X = dold_kan_inverse2(B);
            bool bad = false;
            try {
                ExactCouple c = spiral_couple(X);
                bad = !couple_check(c, false).ok;
            } catch (const InvariantError&) {
                bad = true;
            }
            if (bad) ++broken;
            staircase_pages(B, Filtration::column, 4);
        }
        std::printf("     uniform bicomplexes broken couples: %d/12\n", broken);
        expect(broken == 12, "uniform bicomplexes: all couples throw or report defects");
    }

    std::printf("\n%s (%d failures)\n", failures == 0 ? "ALL OK" : "PROBE FAILED", failures);
    return failures == 0 ? 0 : 1;
}
