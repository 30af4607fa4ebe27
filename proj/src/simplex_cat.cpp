#include "topo/simplex_cat.hpp"

#include <algorithm>

#include "topo/error.hpp"

namespace topo {

Injection inj_identity(int n) {
    Injection r;
    r.src = r.tgt = n;
    r.image.resize(n + 1);
    for (int i = 0; i <= n; ++i) r.image[i] = i;
    return r;
}

Injection make_injection(int src, int tgt, std::vector<int> image) {
    if (src < -1 || tgt < -1 || (int)image.size() != src + 1)
        throw SchemaError("injection: image length must be src+1");
    for (int i = 0; i + 1 < (int)image.size(); ++i)
        if (image[i] >= image[i + 1]) throw SchemaError("injection: image must strictly ascend");
    if (!image.empty() && (image.front() < 0 || image.back() > tgt))
        throw SchemaError("injection: image out of range");
    Injection r;
    r.src = src;
    r.tgt = tgt;
    r.image = std::move(image);
    return r;
}

Injection compose(const Injection& g, const Injection& f) {
    if (g.tgt != f.src)
        throw InvariantError("compose: target of first factor must equal source of second");
    Injection r;
    r.src = g.src;
    r.tgt = f.tgt;
    r.image.reserve(g.image.size());
    for (int i : g.image) r.image.push_back(f.image[i]);
    return r;
}

Injection eval_word(const FaceWord& w, int n) {
    int k = (int)w.size();
    if (n - k < -1) throw InvariantError("eval_word: word longer than target dimension allows");
    Injection r = inj_identity(n - k);
    r.tgt = n;  // image stays the initial segment; only the ambient ordinal grows
    for (int t = 0; t < k; ++t) {
        int cur = n - k + t;  // the coface at step t is d_i: [cur] -> [cur+1]
        int i = w[t];
        if (i < 0 || i > cur + 1)
            throw InvariantError("eval_word: letter " + std::to_string(i) + " at position " +
                                 std::to_string(t) + " exceeds stage ordinal " +
                                 std::to_string(cur + 1));
        for (int& x : r.image)
            if (x >= i) ++x;
    }
    return r;
}

FaceWord normal_form(const Injection& theta) {
    FaceWord w;
    w.reserve(theta.gap());
    int pos = 0;
    for (int v = 0; v <= theta.tgt; ++v) {
        if (pos < (int)theta.image.size() && theta.image[pos] == v)
            ++pos;
        else
            w.push_back(v);
    }
    return w;
}

std::vector<Injection> enumerate_injections(int m, int n) {
    std::vector<Injection> out;
    if (m > n) return out;
    if (m == -1) {
        Injection e;
        e.src = -1;
        e.tgt = n;
        out.push_back(e);
        return out;
    }
    // lexicographically next (m+1)-subset of {0..n}
    std::vector<int> s(m + 1);
    for (int i = 0; i <= m; ++i) s[i] = i;
    while (true) {
        Injection r;
        r.src = m;
        r.tgt = n;
        r.image = s;
        out.push_back(std::move(r));
        int j = m;
        while (j >= 0 && s[j] == n - (m - j)) --j;
        if (j < 0) break;
        ++s[j];
        for (int i = j + 1; i <= m; ++i) s[i] = s[i - 1] + 1;
    }
    return out;
}

std::vector<std::pair<Injection, Injection>> factorizations2(const Injection& theta) {
    // Middle objects correspond to subsets S of the complement of the image:
    // f has image theta.image united with S, and g hits exactly the slots of
    // theta's values inside that union.  Bitmask order over the complement.
    std::vector<int> comp;
    {
        FaceWord nf = normal_form(theta);
        comp.assign(nf.begin(), nf.end());
    }
    int c = (int)comp.size();
    if (c > 30) throw InvariantError("factorizations2: gap too large to enumerate");
    std::vector<std::pair<Injection, Injection>> out;
    out.reserve((size_t)1 << c);
    for (unsigned mask = 0; mask < (1u << c); ++mask) {
        std::vector<int> fim = theta.image;
        for (int b = 0; b < c; ++b)
            if (mask & (1u << b)) fim.push_back(comp[b]);
        std::sort(fim.begin(), fim.end());
        int mid = (int)fim.size() - 1;
        Injection f;
        f.src = mid;
        f.tgt = theta.tgt;
        f.image = fim;
        Injection g;
        g.src = theta.src;
        g.tgt = mid;
        for (int v : theta.image) {
            int slot = (int)(std::lower_bound(fim.begin(), fim.end(), v) - fim.begin());
            g.image.push_back(slot);
        }
        out.emplace_back(std::move(g), std::move(f));
    }
    return out;
}

std::vector<std::vector<Injection>> factorization_chains(const Injection& theta, int k,
                                                         bool nonidentity_only) {
    if (k < 1) throw SchemaError("factorization_chains: k must be >= 1");
    std::vector<std::vector<Injection>> out;
    std::vector<int> comp;
    {
        FaceWord nf = normal_form(theta);
        comp.assign(nf.begin(), nf.end());
    }
    int c = (int)comp.size();

    // A chain through [m] = V_0 <= V_1 <= ... <= V_k = [n] is determined by a
    // weakly increasing flag of subsets of {0..n} containing the image, i.e.
    // by an assignment of each complement element to the first flag level
    // containing it (levels 1..k, or level k+1 meaning "never", impossible
    // since V_k is everything -- so levels 1..k).  nonidentity_only forces
    // every level to be hit, i.e. an ordered partition into k nonempty blocks.
    std::vector<int> assign(c, 0);
    auto emit = [&]() {
        // build the k factors from the flag
        std::vector<std::vector<int>> level_sets(k + 1);
        level_sets[0] = theta.image;
        for (int l = 1; l <= k; ++l) {
            level_sets[l] = level_sets[l - 1];
            for (int b = 0; b < c; ++b)
                if (assign[b] == l) level_sets[l].push_back(comp[b]);
            std::sort(level_sets[l].begin(), level_sets[l].end());
        }
        std::vector<Injection> chain;
        chain.reserve(k);
        for (int l = 1; l <= k; ++l) {
            const auto& lo = level_sets[l - 1];
            const auto& hi = level_sets[l];
            Injection g;
            g.src = (int)lo.size() - 1;
            g.tgt = (int)hi.size() - 1;
            for (int v : lo) {
                int slot = (int)(std::lower_bound(hi.begin(), hi.end(), v) - hi.begin());
                g.image.push_back(slot);
            }
            chain.push_back(std::move(g));
        }
        out.push_back(std::move(chain));
    };

    if (nonidentity_only) {
        if (c < k) return out;
        for (const auto& part : ordered_partitions(c, k)) {
            for (int b = 0; b < c; ++b) assign[b] = part[b] + 1;
            emit();
        }
    } else {
        // odometer over levels 1..k for each complement element
        std::fill(assign.begin(), assign.end(), 1);
        while (true) {
            emit();
            int j = c - 1;
            while (j >= 0 && assign[j] == k) --j;
            if (j < 0) break;
            ++assign[j];
            for (int i = j + 1; i < c; ++i) assign[i] = 1;
        }
    }
    return out;
}

std::vector<std::vector<int>> ordered_partitions(int s, int b) {
    std::vector<std::vector<int>> out;
    if (b < 1 || b > s) return out;
    std::vector<int> a(s, 0);
    auto surjective = [&]() {
        std::vector<char> hit(b, 0);
        for (int x : a) hit[x] = 1;
        for (char h : hit)
            if (!h) return false;
        return true;
    };
    while (true) {
        if (surjective()) out.push_back(a);
        int j = s - 1;
        while (j >= 0 && a[j] == b - 1) --j;
        if (j < 0) break;
        ++a[j];
        for (int i = j + 1; i < s; ++i) a[i] = 0;
    }
    return out;
}

std::string word_name(const FaceWord& w) {
    if (w.empty()) return "id";
    std::string s;
    for (int i : w) s += "d" + std::to_string(i);
    return s;
}

std::string arrow_name(const Injection& theta) { return word_name(normal_form(theta)); }

}
