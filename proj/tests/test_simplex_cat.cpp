#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "topo/error.hpp"
#include "topo/simplex_cat.hpp"

using namespace topo;

TEST_CASE("identities and composition") {
    Injection id2 = inj_identity(2);
    CHECK(id2.image == std::vector<int>{0, 1, 2});
    Injection f = make_injection(1, 3, {0, 2});
    CHECK(compose(inj_identity(1), f) == f);
    CHECK(compose(f, inj_identity(3)) == f);
    Injection g = make_injection(0, 1, {1});
    Injection gf = compose(g, f);
    CHECK(gf.src == 0);
    CHECK(gf.tgt == 3);
    CHECK(gf.image == std::vector<int>{2});
    CHECK_THROWS_AS(compose(f, g), InvariantError);
}

TEST_CASE("word evaluation matches the hand calculus") {
    CHECK(eval_word({0, 1}, 2).image == std::vector<int>{2});
    CHECK(eval_word({0, 0}, 2).image == std::vector<int>{2});
    CHECK(eval_word({1, 0}, 2).image == std::vector<int>{1});
    CHECK_THROWS_AS(eval_word({2, 0}, 2), InvariantError);
    CHECK(normal_form(make_injection(0, 2, {1})) == FaceWord{0, 2});
    CHECK(normal_form(eval_word({1, 0}, 2)) == FaceWord{0, 2});
    CHECK(eval_word(normal_form(make_injection(1, 4, {1, 3})), 4).image ==
          std::vector<int>{1, 3});
    CHECK(word_name({0, 2}) == "d0d2");
    CHECK(arrow_name(inj_identity(3)) == "id");
}

static int count_valid_words(int n, int k) {
    // odometer over all k-letter alphabets bounded by the max legal letter
    std::vector<int> w(k, 0);
    int valid = 0;
    std::set<std::vector<int>> arrows;
    while (true) {
        bool ok = true;
        try {
            arrows.insert(eval_word(w, n).image);
        } catch (const InvariantError&) {
            ok = false;
        }
        if (ok) ++valid;
        int j = k - 1;
        while (j >= 0 && w[j] == n) --j;
        if (j < 0) break;
        ++w[j];
        for (int i = j + 1; i < k; ++i) w[i] = 0;
    }
    return valid;
}

TEST_CASE("valid word counts per target and length") {
    CHECK(count_valid_words(1, 1) == 2);
    CHECK(count_valid_words(2, 1) == 3);
    CHECK(count_valid_words(2, 2) == 6);
    CHECK(count_valid_words(3, 1) == 4);
    CHECK(count_valid_words(3, 2) == 12);
    CHECK(count_valid_words(3, 3) == 24);
}

TEST_CASE("injection enumeration is complete and ordered") {
    CHECK(enumerate_injections(0, 2).size() == 3);
    CHECK(enumerate_injections(-1, 3).size() == 1);
    CHECK(enumerate_injections(1, 3).size() == 6);
    CHECK(enumerate_injections(2, 4).size() == 10);
    auto all = enumerate_injections(1, 3);
    for (size_t i = 0; i + 1 < all.size(); ++i) CHECK(all[i].image < all[i + 1].image);
    CHECK(all.front().image == std::vector<int>{0, 1});
    CHECK(all.back().image == std::vector<int>{2, 3});
}

TEST_CASE("two-step factorizations") {
    auto check_theta = [](const Injection& theta) {
        auto fac = factorizations2(theta);
        CHECK((int)fac.size() == (1 << theta.gap()));
        std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
        for (const auto& [g, f] : fac) {
            CHECK(compose(g, f) == theta);
            seen.insert({g.image, f.image});
        }
        CHECK(seen.size() == fac.size());
    };
    check_theta(make_injection(0, 2, {0}));
    check_theta(make_injection(1, 3, {1, 3}));
    check_theta(make_injection(0, 5, {3}));
    check_theta(inj_identity(2));
}

TEST_CASE("factorization chains") {
    Injection theta = make_injection(0, 3, {0});  // gap 3
    CHECK(factorization_chains(theta, 1, true).size() == 1);
    CHECK(factorization_chains(theta, 2, true).size() == 6);
    CHECK(factorization_chains(theta, 3, true).size() == 6);
    CHECK(factorization_chains(theta, 4, true).empty());
    // without the nonidentity flag: k^gap flags
    CHECK(factorization_chains(theta, 2, false).size() == 8);
    for (const auto& chain : factorization_chains(theta, 3, true)) {
        Injection acc = chain[0];
        for (size_t i = 1; i < chain.size(); ++i) acc = compose(acc, chain[i]);
        CHECK(acc == theta);
        for (const auto& g : chain) CHECK(!g.is_identity());
    }
    // identity: single empty-refinement chain at every k without the flag
    CHECK(factorization_chains(inj_identity(2), 3, false).size() == 1);
    CHECK(factorization_chains(inj_identity(2), 1, true).empty());
}

TEST_CASE("ordered partition counts follow the Fubini numbers") {
    CHECK(ordered_partitions(4, 2).size() == 14);
    CHECK(ordered_partitions(3, 3).size() == 6);
    long long fubini3 = 0;
    for (int b = 1; b <= 3; ++b) fubini3 += (long long)ordered_partitions(3, b).size();
    CHECK(fubini3 == 13);
    long long fubini5 = 0;
    for (int b = 1; b <= 5; ++b) fubini5 += (long long)ordered_partitions(5, b).size();
    CHECK(fubini5 == 541);
    for (const auto& a : ordered_partitions(3, 2)) {
        std::set<int> blocks(a.begin(), a.end());
        CHECK(blocks.size() == 2);
    }
}
