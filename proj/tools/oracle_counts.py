#!/usr/bin/env python3
"""Independent combinatorial oracle.

Derives, by brute force and from first principles only (no shared code with
the C++ library), the reference values frozen into the test suite:

  * order-preserving injection counts and the face-word calculus
    (evaluation, validity, normal forms, rewrite closures),
  * two-step factorization and chain counts for injections,
  * permutohedron face-lattice / order-complex / dual-witness cell counts,
  * free-resolution mapping-space cell counts (nested-word model) and the
    gap-3 component vs order-complex comparison,
  * shuffle counts for products of simplices.

Run:  python3 tools/oracle_counts.py   (output is deterministic)
"""

from itertools import combinations, permutations
from math import comb

# ---------------------------------------------------------------- injections


def injections(m, n):
    """All order-preserving injections [m] -> [n] as image tuples."""
    if m < -1 or n < -1 or m > n:
        return []
    if m == -1:
        return [()]
    return [tuple(c) for c in combinations(range(n + 1), m + 1)]


def word_valid(word, n):
    """Validity of a face word targeting [n]: the word is a composite of face
    maps in the opposite simplex category, so the letter at position t
    (1-based, leftmost = first coface applied) builds the stage
    [n-k+t-1] -> [n-k+t] and must satisfy 0 <= i_t <= n-k+t."""
    k = len(word)
    if k > n + 1:
        return False
    for t in range(1, k + 1):
        if not (0 <= word[t - 1] <= n - k + t):
            return False
    return True


def delta(i, m):
    """Coface delta_i : [m-1] -> [m] as an image tuple (omits i)."""
    return tuple(j for j in range(m + 1) if j != i)


def compose_inj(g, f):
    """Composite g . f of injections given as image tuples."""
    return tuple(g[j] for j in f)


def eval_word(word, n):
    """Injection [n-k] -> [n] named by the word (leftmost coface applied
    first, i.e. the composite d_{i_1} ... d_{i_k} in the opposite category)."""
    k = len(word)
    assert word_valid(word, n), (word, n)
    inj = tuple(range(n - k + 1))  # identity on [n-k]
    m = n - k
    for t in range(1, k + 1):
        inj = compose_inj(delta(word[t - 1], m + 1), inj)
        m += 1
    return inj


def normal_form(inj, n):
    """Strictly ascending word = complement of the image in [n]."""
    img = set(inj)
    return tuple(i for i in range(n + 1) if i not in img)


def rewrite_class(word, n):
    """Closure of {word} under d_a d_b = d_b d_{a+1} (a >= b) both ways,
    applied at any adjacent position."""
    seen = {tuple(word)}
    frontier = [tuple(word)]
    while frontier:
        w = frontier.pop()
        for t in range(len(w) - 1):
            a, b = w[t], w[t + 1]
            if a >= b:  # d_a d_b -> d_b d_{a+1}
                w2 = w[:t] + (b, a + 1) + w[t + 2:]
                if word_valid(w2, n) and w2 not in seen:
                    seen.add(w2)
                    frontier.append(w2)
            if b >= a + 1:  # d_a d_b -> d_{b-1} d_a  (inverse move)
                w2 = w[:t] + (b - 1, a) + w[t + 2:]
                if word_valid(w2, n) and w2 not in seen:
                    seen.add(w2)
                    frontier.append(w2)
    return sorted(seen)


def check_words():
    print("== face words ==")
    # counts
    for (m, n) in [(0, 2), (-1, 3), (1, 3), (2, 4)]:
        print(f"injections({m},{n}): {len(injections(m, n))}")
    # every valid word evaluates to an injection; same image <=> same arrow
    for n in range(1, 5):
        for k in range(1, n + 1):
            classes = {}
            count_valid = 0
            from itertools import product as iproduct
            for word in iproduct(range(n + 1), repeat=k):
                if word_valid(word, n):
                    count_valid += 1
                    classes.setdefault(eval_word(word, n), []).append(word)
            # words per arrow must all rewrite into each other
            for inj, ws in classes.items():
                nf = normal_form(inj, n)
                assert nf in ws, (inj, nf, ws)
                cls = set(rewrite_class(nf, n))
                assert set(ws) == cls, (inj, sorted(ws), sorted(cls))
            if k <= 3 and n <= 3:
                print(f"n={n} k={k}: valid words {count_valid}, arrows {len(classes)}")
    # the specific identities used in the tests
    print("eval([0,1],2) =", eval_word((0, 1), 2))
    print("eval([0,0],2) =", eval_word((0, 0), 2))
    print("eval([1,0],2) =", eval_word((1, 0), 2))
    print("valid([2,0],2) =", word_valid((2, 0), 2))
    print("normal_form(image {1} in [2]) =", normal_form((1,), 2))
    print("normal_form(eval([1,0],2)) =", normal_form(eval_word((1, 0), 2), 2))
    print("rewrite_class([0,1,2], n=3):")
    for w in rewrite_class((0, 1, 2), 3):
        print("   ", list(w))


# ----------------------------------------------------- factorizations/chains


def factorizations2(theta, n):
    """All pairs (g, f) of injections with g.f = theta, f: [m]->[l], g: [l]->[n],
    m <= l <= n (identity factors allowed)."""
    m = len(theta) - 1
    out = []
    for l in range(m, n + 1):
        for f in injections(m, l):
            for g in injections(l, n):
                if compose_inj(g, f) == theta:
                    out.append((g, f))
    return out


def chains(theta, n, k):
    """Ordered k-fold factorizations theta = g_k . ... . g_1 into non-identity
    injections (recursive split by two-step factorizations)."""

    def is_identity(arrow, top):
        return len(arrow) - 1 == top and arrow == tuple(range(top + 1))

    def split(arrow, top, parts):
        if parts == 1:
            if not is_identity(arrow, top):
                yield (arrow,)
            return
        for g, f in factorizations2(arrow, top):
            l = len(g) - 1
            if is_identity(f, l):
                continue
            for rest in split(g, top, parts - 1):
                yield rest + (f,)

    return list(split(theta, n, k))


def fubini(n):
    """Ordered set partitions of an n-set."""
    if n == 0:
        return 1
    total = 0
    for k in range(1, n + 1):
        total += comb(n, k) * fubini(n - k)  # choose last block? (standard rec)
    return total


def ordered_partitions(n, k):
    """Ordered partitions of an n-set into exactly k nonempty blocks:
    k! * S(n,k)."""
    # Stirling second kind
    S = [[0] * (k + 1) for _ in range(n + 1)]
    S[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, k + 1):
            S[i][j] = j * S[i - 1][j] + S[i - 1][j - 1]
    f = 1
    for i in range(2, k + 1):
        f *= i
    return f * S[n][k]


def check_factorizations():
    print("== factorizations ==")
    print("fubini:", [fubini(i) for i in range(6)])
    print("ordered_partitions(4,2) =", ordered_partitions(4, 2))
    print("ordered_partitions(3,3) =", ordered_partitions(3, 3))
    # gap-g arrow: factorizations2 count = 2^g
    for n, theta in [(2, (0,)), (3, (1, 3))]:
        f2 = factorizations2(theta, n)
        g = n - (len(theta) - 1)
        print(f"factorizations2({list(theta)} into [{n}]): {len(f2)} (expect {2 ** g})")
    # chains of a gap-3 arrow: k-chains of non-identities
    theta = (1, 2, 4)  # [2] -> [5], complement {0, 3, 5}
    n = 5
    for k in (1, 2, 3):
        c = chains(theta, n, k)
        print(f"{k}-chains of gap-3 arrow: {len(c)} (expect {ordered_partitions(3, k)})")


# ------------------------------------------------------------- permutohedron


def opartitions_of(elems):
    """All ordered partitions (tuples of frozensets) of a list: the first
    block is an arbitrary nonempty subset, then recurse on the rest."""
    elems = list(elems)
    if not elems:
        return [()]
    out = []
    n = len(elems)
    for k in range(1, n + 1):
        for block in combinations(elems, k):
            bs = frozenset(block)
            remain = [e for e in elems if e not in bs]
            for tail in opartitions_of(remain):
                out.append((bs,) + tail)
    return out


def perm_face_counts(n):
    """P^n faces by codimension: a face with b blocks has dim n+1-b, so
    codim b-1."""
    allp = opartitions_of(range(n + 1))
    by_blocks = {}
    for p in allp:
        by_blocks.setdefault(len(p), []).append(p)
    return {b - 1: len(ps) for b, ps in by_blocks.items()}


def order_complex_cells(n):
    """Nondegenerate k-cells of the order complex of ordered partitions of
    {0..n} under refinement (coarsest first strict chains), including the
    one-block maximum."""
    allp = opartitions_of(range(n + 1))

    def refines(fine, coarse):
        # every block of fine contained in a block of coarse, order compatible
        if len(fine) < len(coarse):
            return False
        # expand coarse into consecutive groups matching fine?
        i = 0
        for cb in coarse:
            acc = set()
            while i < len(fine) and acc != cb:
                if not fine[i] <= cb:
                    return False
                acc |= fine[i]
                i += 1
            if acc != cb:
                return False
        return i == len(fine)

    def strictly(c, f):
        return c != f and refines(f, c)

    cells = {0: [(p,) for p in allp]}
    k = 0
    while cells[k]:
        nxt = []
        for ch in cells[k]:
            for p in allp:
                if strictly(ch[-1], p):
                    nxt.append(ch + (p,))
        k += 1
        cells[k] = nxt
    return {j: len(cs) for j, cs in cells.items() if cs}


def dual_witness_counts(r):
    """Words [i_0..i_r] with i_t <= t; each gives a Delta^{r+1}; glue along
    rewrite moves at adjacent positions.  Count words and distinct glued
    codim-1 faces."""
    def words(r):
        out = [()]
        for t in range(r + 1):
            out = [w + (i,) for w in out for i in range(t + 1)]
        return out

    ws = words(r)
    # facets: each word has r+2 facets d_0..d_{r+1}; rewrite at position t
    # glues facet d_{r-t} hmm -- count distinct facets after gluing.
    # Gluing rule (independent derivation): words w, w' differ by one rewrite
    # at adjacent positions (t,t+1) <=> they share the facet opposite vertex
    # r-t of ... ; for the oracle we only need the face count of the quotient:
    # total facets = len(ws)*(r+2) minus one per glued pair.
    pairs = 0
    wset = set(ws)
    for w in ws:
        for t in range(r):
            a, b = w[t], w[t + 1]
            if a >= b:
                w2 = w[:t] + (b, a + 1) + w[t + 2:]
                if w2 in wset:
                    pairs += 1
    total = len(ws) * (r + 2) - pairs
    return len(ws), pairs, total


def check_perm():
    print("== permutohedron ==")
    for n in (1, 2, 3):
        print(f"P^{n} faces by codim:", perm_face_counts(n))
    for n in (2, 3):
        oc = order_complex_cells(n)
        chi = sum((-1) ** k * c for k, c in oc.items())
        print(f"order_complex({n}) cells:", oc, "chi:", chi)
    for r in (1, 2, 3):
        nw, pairs, total = dual_witness_counts(r)
        print(f"dual_witness(r={r}): words {nw}, glued pairs {pairs}, facets {total}")


# ------------------------------------------- nested-word mapping-space cells


def dk_cells_chain_poset(K, max_dim=3):
    """Mapping space 0 -> K in the free resolution of the chain poset
    0 < 1 < ... < K: nondegenerate cell counts by dimension."""
    # arrows: (i,j) i<j; words: composable sequences (classical order,
    # rightmost first) with total 0 -> K
    def leafwords():
        out = []

        def rec(cur):  # build from target side? build forward from 0
            pass

        def forward(path):  # path: 0 = c0 < c1 < ... ; word letters reversed
            last = path[-1]
            if last == K:
                word = tuple((path[t], path[t + 1]) for t in range(len(path) - 1))
                out.append(tuple(reversed(word)))  # rightmost = first applied
                return
            for nxt in range(last + 1, K + 1):
                forward(path + [nxt])

        forward([0])
        return out

    def interval_partitions(k):
        """partitions of positions 0..k-1 into contiguous blocks."""
        if k == 0:
            return [()]
        out = []
        for first in range(1, k + 1):
            for rest in interval_partitions(k - first):
                shifted = tuple(tuple(x + first for x in b) for b in rest)
                out.append((tuple(range(first)),) + shifted)
        return out

    def refines_strictly_or_eq(fine, coarse):
        i = 0
        for cb in coarse:
            acc = []
            while i < len(fine) and tuple(acc) != cb:
                acc.extend(fine[i])
                i += 1
            if tuple(acc) != cb:
                return False
        return i == len(fine)

    counts = {}
    for L in leafwords():
        k = len(L)
        parts = interval_partitions(k)
        singles = tuple((i,) for i in range(k))
        # enumerate flags part_1 >= part_2 >= ... >= part_n (weakly refining,
        # nondegenerate: strictly different consecutive, and part_n != singles)
        def flags(n):
            if n == 0:
                return [()]
            out = []
            for fl in flags(n - 1):
                prev = fl[-1] if fl else None
                for p in parts:
                    if prev is None or (p != prev and refines_strictly_or_eq(p, prev)):
                        if fl or True:
                            out.append(fl + (p,))
            return out

        for n in range(0, max_dim + 1):
            for fl in flags(n):
                # nondegenerate: consecutive distinct (ensured) and last != singles
                if n >= 1 and fl[-1] == singles:
                    continue
                counts[n] = counts.get(n, 0) + 1
    return counts


def dk_cells_injection_gap3(max_dim=3):
    """Component C_theta for a gap-3 injection in the category of injections
    [m] -> [n] (restricted simplex category): nondegenerate cells by dim."""
    # objects: [m] for m in 0..5; arrows: injections; theta: [2] -> [5]
    theta = (1, 2, 4)
    src_obj, tgt_obj = 2, 5

    def nonid_inj(m, n):
        return [f for f in injections(m, n) if not (m == n)]

    # leaf words: composable non-identity injections with composite theta
    def leafwords():
        out = []

        def rec(word, cur_arrow, cur_src):
            # word composes to cur_arrow: [cur_src] -> [5]
            if cur_src == src_obj and cur_arrow == theta:
                out.append(tuple(word))
            # extend with f: [m] -> [cur_src] non-identity, appended at right
            for m in range(-1, cur_src):
                for f in injections(m, cur_src):
                    newa = compose_inj(cur_arrow, f)
                    # prune: need image(theta) subset image(newa)
                    if set(theta) <= set(newa):
                        rec(word + [f], newa, m)

        for m in range(-1, tgt_obj):
            for g in injections(m, tgt_obj):
                if set(theta) <= set(g):
                    rec([g], g, m)
        return [w for w in out]

    Ls = leafwords()

    def interval_partitions(k):
        if k == 0:
            return [()]
        out = []
        for first in range(1, k + 1):
            for rest in interval_partitions(k - first):
                shifted = tuple(tuple(x + first for x in b) for b in rest)
                out.append((tuple(range(first)),) + shifted)
        return out

    def refines(fine, coarse):
        i = 0
        for cb in coarse:
            acc = []
            while i < len(fine) and tuple(acc) != cb:
                acc.extend(fine[i])
                i += 1
            if tuple(acc) != cb:
                return False
        return i == len(fine)

    counts = {}
    for L in Ls:
        k = len(L)
        parts = interval_partitions(k)
        singles = tuple((i,) for i in range(k))

        def flags(n):
            if n == 0:
                return [()]
            out = []
            for fl in flags(n - 1):
                prev = fl[-1] if fl else None
                for p in parts:
                    if prev is None or (p != prev and refines(p, prev)):
                        out.append(fl + (p,))
            return out

        for n in range(0, max_dim + 1):
            for fl in flags(n):
                if n >= 1 and fl[-1] == singles:
                    continue
                counts[n] = counts.get(n, 0) + 1
    return len(Ls), counts


def check_dk():
    print("== mapping spaces (nested words) ==")
    print("chain poset 0<1<2<3, cells 0->3:", dk_cells_chain_poset(3))
    nwords, counts = dk_cells_injection_gap3()
    print(f"gap-3 injection component: {nwords} leaf words, cells {counts}")
    oc = order_complex_cells(2)
    print("order_complex(2) cells for comparison:", oc)


# -------------------------------------------------------------------- extras


def shuffles(p, q):
    return comb(p + q, p)


def check_extras():
    print("== extras ==")
    print("shuffles(1,1) =", shuffles(1, 1), " shuffles(1,2) =", shuffles(1, 2))
    # Euler characteristics: boundary dP^{n} ~ S^{n-1}
    for n in (2, 3):
        fc = perm_face_counts(n)
        chi = sum((-1) ** (n - codim) * c for codim, c in fc.items() if codim >= 1)
        print(f"chi(boundary P^{n}) = {chi}")


if __name__ == "__main__":
    check_words()
    check_factorizations()
    check_perm()
    check_dk()
    check_extras()
