#ifndef TOPO_SIMPLEX_CAT_HPP
#define TOPO_SIMPLEX_CAT_HPP

#include <string>
#include <utility>
#include <vector>

namespace topo {

// The restricted (injections-only) augmented simplex category.  Objects are
// ordinals [n] with n >= -1 ([-1] is the empty ordinal); arrows are stored
// covariantly as strictly monotone injections, the canonical form being the
// image set.  Opposite-category composites are handled by the callers (the
// word calculus below and the DK machinery) by reversing order at the API
// boundary.
struct Injection {
    int src = -1, tgt = -1;        // ordinals [src] -> [tgt]
    std::vector<int> image;        // strictly ascending, length src+1

    bool operator==(const Injection&) const = default;
    bool operator<(const Injection& o) const {
        if (tgt != o.tgt) return tgt < o.tgt;
        if (src != o.src) return src < o.src;
        return image < o.image;
    }
    bool is_identity() const { return src == tgt; }
    int gap() const { return tgt - src; }
};

Injection inj_identity(int n);
Injection make_injection(int src, int tgt, std::vector<int> image);

// compose(g, f) for g: [m]->[m'] and f: [m']->[n]: the set-map composite
// f o g, i.e. result.image = f.image indexed by g.image.
Injection compose(const Injection& g, const Injection& f);

// A word [i1, ..., ik] denotes the composite d_{i1} d_{i2} ... d_{ik} in the
// opposite category.  Operationally the LAST letter's coface is the innermost
// one, so evaluation applies cofaces left to right: the leftmost letter acts
// first, at the stage [n-k] -> [n-k+1], and the letter at (1-based) position
// t must satisfy 0 <= i_t <= n-k+t.  A word is in normal form iff its letters
// strictly ascend; the normal form of an injection is the complement of its
// image.
using FaceWord = std::vector<int>;

// Evaluate a word at target ordinal [n].  Throws InvariantError on an index
// out of range at some stage.
Injection eval_word(const FaceWord& w, int n);

// The unique strictly ascending word evaluating to theta.
FaceWord normal_form(const Injection& theta);

// All C(n+1, m+1) injections [m] -> [n], lexicographic by image.
std::vector<Injection> enumerate_injections(int m, int n);

// All pairs (g: [m]->[m'], f: [m']->[n]) with compose(g, f) = theta.  The
// list order realizes the subset bijection: entry index b corresponds to the
// subset of the image-complement with characteristic bitmask b, so the count
// is exactly 2^(n-m).
std::vector<std::pair<Injection, Injection>> factorizations2(const Injection& theta);

// All length-k composable chains (g_1, ..., g_k), source to target, with
// g_k o ... o g_1 = theta.  With nonidentity_only, every factor must be a
// non-identity, which puts the chains in bijection with ordered partitions
// of the image-complement into k nonempty blocks.
std::vector<std::vector<Injection>> factorization_chains(const Injection& theta, int k,
                                                         bool nonidentity_only = false);

// Ordered partitions of {0..s-1} into b nonempty blocks, emitted as
// assignment vectors (element -> block index), lexicographic order.
std::vector<std::vector<int>> ordered_partitions(int s, int b);

// "d3d1" style rendering of the normal form; identities render as "id".
std::string word_name(const FaceWord& w);
std::string arrow_name(const Injection& theta);

}

#endif
