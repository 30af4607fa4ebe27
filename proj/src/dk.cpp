#include "topo/dk.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "topo/error.hpp"

namespace topo {

int FinCat::add_object(const std::string& name) {
    objects.push_back(name);
    return (int)objects.size() - 1;
}

int FinCat::add_arrow(const std::string& name, const std::string& src, const std::string& tgt) {
    if (arrow_index.count(name)) throw SchemaError("duplicate arrow name '" + name + "'");
    arrow_index[name] = (int)arrows.size();
    arrows.push_back({name, src, tgt});
    return (int)arrows.size() - 1;
}

void FinCat::set_identity(const std::string& obj, const std::string& arrow) {
    identity_of[obj] = arrow_index.at(arrow);
}

void FinCat::set_composite(const std::string& g, const std::string& f, const std::string& gf) {
    comp[{arrow_index.at(g), arrow_index.at(f)}] = arrow_index.at(gf);
}

bool FinCat::is_identity_arrow(int a) const {
    auto it = identity_of.find(arrows[a].src);
    return it != identity_of.end() && it->second == a;
}

int FinCat::compose2(int g, int f) const {
    auto it = comp.find({g, f});
    if (it == comp.end())
        throw InvariantError("arrows '" + arrows[g].name + "' and '" + arrows[f].name +
                             "' do not compose");
    return it->second;
}

void FinCat::check() const {
    for (const auto& obj : objects) {
        auto it = identity_of.find(obj);
        if (it == identity_of.end())
            throw InvariantError("object '" + obj + "' has no identity arrow");
        const Arrow& id = arrows[it->second];
        if (id.src != obj || id.tgt != obj)
            throw InvariantError("identity of '" + obj + "' has wrong endpoints");
    }
    int n = (int)arrows.size();
    for (int g = 0; g < n; ++g)
        for (int f = 0; f < n; ++f) {
            bool composable = arrows[g].tgt == arrows[f].src;
            bool tabled = comp.count({g, f}) != 0;
            if (composable != tabled)
                throw InvariantError("composition table does not match arrow endpoints at ('" +
                                     arrows[g].name + "','" + arrows[f].name + "')");
            if (!composable) continue;
            int gf = comp.at({g, f});
            if (arrows[gf].src != arrows[g].src || arrows[gf].tgt != arrows[f].tgt)
                throw InvariantError("composite '" + arrows[gf].name + "' has wrong endpoints");
        }
    for (int f = 0; f < n; ++f) {
        int li = identity_of.at(arrows[f].src), ri = identity_of.at(arrows[f].tgt);
        if (comp.at({li, f}) != f || comp.at({f, ri}) != f)
            throw InvariantError("unit law fails at arrow '" + arrows[f].name + "'");
    }
    for (int g = 0; g < n; ++g)
        for (int f = 0; f < n; ++f) {
            if (arrows[g].tgt != arrows[f].src) continue;
            for (int h = 0; h < n; ++h) {
                if (arrows[f].tgt != arrows[h].src) continue;
                if (comp.at({comp.at({g, f}), h}) != comp.at({g, comp.at({f, h})}))
                    throw InvariantError("associativity fails at ('" + arrows[g].name + "','" +
                                         arrows[f].name + "','" + arrows[h].name + "')");
            }
        }
}

bool FinCat::nonidentity_acyclic() const {
    std::map<std::string, std::vector<std::string>> adj;
    for (int a = 0; a < (int)arrows.size(); ++a)
        if (!is_identity_arrow(a)) adj[arrows[a].src].push_back(arrows[a].tgt);
    std::map<std::string, int> state;  // 0 new, 1 open, 2 done
    std::function<bool(const std::string&)> dfs = [&](const std::string& v) -> bool {
        state[v] = 1;
        for (const auto& w : adj[v]) {
            if (state[w] == 1) return false;
            if (state[w] == 0 && !dfs(w)) return false;
        }
        state[v] = 2;
        return true;
    };
    for (const auto& obj : objects)
        if (state[obj] == 0 && !dfs(obj)) return false;
    return true;
}

std::string delta_op_arrow_name(const Injection& theta) {
    return arrow_name(theta) + "@" + std::to_string(theta.tgt);
}

FinCat delta_op_interval(int lo, int hi) {
    if (lo < -1 || lo > hi) throw SchemaError("delta_op_interval: need -1 <= lo <= hi");
    FinCat C;
    for (int n = hi; n >= lo; --n) C.add_object("[" + std::to_string(n) + "]");
    std::vector<Injection> all;
    for (int a = hi; a >= lo; --a)
        for (int b = a; b >= lo; --b)
            for (const auto& inj : enumerate_injections(b, a)) all.push_back(inj);
    for (const auto& inj : all)
        C.add_arrow(delta_op_arrow_name(inj), "[" + std::to_string(inj.tgt) + "]",
                    "[" + std::to_string(inj.src) + "]");
    for (int n = lo; n <= hi; ++n)
        C.set_identity("[" + std::to_string(n) + "]", delta_op_arrow_name(inj_identity(n)));
    // opposite-category composition: [a] -> [b] -> [c] is the injection
    // composite [c] -> [b] -> [a]
    for (const auto& g : all)
        for (const auto& f : all) {
            if (g.src != f.tgt) continue;
            Injection gf = compose(f, g);
            C.set_composite(delta_op_arrow_name(g), delta_op_arrow_name(f),
                            delta_op_arrow_name(gf));
        }
    C.check();
    return C;
}

void validate_nested(const FinCat& C, const NestedWord& w) {
    if (w.leaves.empty()) throw SchemaError("nested word: empty leaf word");
    int k = (int)w.leaves.size();
    for (size_t t = 0; t < w.leaves.size(); ++t) {
        int a = w.leaves[t];
        if (a < 0 || a >= (int)C.arrows.size()) throw SchemaError("nested word: bad arrow index");
        if (C.is_identity_arrow(a))
            throw InvariantError("nested word: identity leaf '" + C.arrows[a].name + "'");
        if (t + 1 < w.leaves.size() &&
            C.arrows[a].tgt != C.arrows[w.leaves[t + 1]].src)
            throw InvariantError("nested word: leaves do not compose");
    }
    const std::vector<int>* prev = nullptr;
    for (const auto& level : w.levels) {
        int sum = 0;
        for (int b : level) {
            if (b <= 0) throw SchemaError("nested word: empty block");
            sum += b;
        }
        if (sum != k) throw SchemaError("nested word: level does not cover the leaves");
        if (prev) {
            // finer level must split each coarser block into whole sub-blocks
            size_t fi = 0;
            for (int b : *prev) {
                int acc = 0;
                while (acc < b) {
                    if (fi >= level.size()) throw SchemaError("nested word: levels do not nest");
                    acc += level[fi++];
                }
                if (acc != b) throw SchemaError("nested word: levels do not nest");
            }
        }
        prev = &level;
    }
}

bool is_degenerate(const FinCat& C, const NestedWord& w) {
    validate_nested(C, w);
    if (w.levels.empty()) return false;
    for (size_t l = 0; l + 1 < w.levels.size(); ++l)
        if (w.levels[l] == w.levels[l + 1]) return true;
    const auto& finest = w.levels.back();
    return std::all_of(finest.begin(), finest.end(), [](int b) { return b == 1; });
}

// ------------------------------------------------------- the mapping space

// All composable words of non-identity arrows from a to b, depth-first in
// arrow-index order; bounded because the non-identity graph is acyclic.
static void enumerate_words(const FinCat& C, const std::string& at, const std::string& b,
                            std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (at == b && !cur.empty()) out.push_back(cur);
    for (int a = 0; a < (int)C.arrows.size(); ++a) {
        if (C.arrows[a].src != at || C.is_identity_arrow(a)) continue;
        cur.push_back(a);
        enumerate_words(C, C.arrows[a].tgt, b, cur, out);
        cur.pop_back();
    }
}

// does `fine` strictly-or-trivially refine `coarse`, i.e. can fine's letters
// be grouped contiguously so that the groups compose to coarse's letters?
static bool word_refines(const FinCat& C, const std::vector<int>& coarse,
                         const std::vector<int>& fine) {
    std::function<bool(size_t, size_t)> go = [&](size_t ci, size_t fi) -> bool {
        if (ci == coarse.size()) return fi == fine.size();
        if (fi == fine.size()) return false;
        int acc = fine[fi];
        size_t j = fi + 1;
        while (true) {
            if (acc == coarse[ci] && go(ci + 1, j)) return true;
            if (j == fine.size()) return false;
            acc = C.compose2(acc, fine[j]);
            ++j;
        }
    };
    return go(0, 0);
}

static std::string word_label(const FinCat& C, const std::vector<int>& w) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += "|";
        s += C.arrows[w[i]].name;
    }
    return s;
}

SSet dk_mapping_space(const FinCat& C, const std::string& a, const std::string& b,
                      int max_dim) {
    if (std::find(C.objects.begin(), C.objects.end(), a) == C.objects.end() ||
        std::find(C.objects.begin(), C.objects.end(), b) == C.objects.end())
        throw SchemaError("dk_mapping_space: unknown object");
    if (max_dim < 0) throw SchemaError("dk_mapping_space: max_dim must be >= 0");
    if (!C.nonidentity_acyclic())
        throw InvariantError(
            "dk_mapping_space: non-identity arrows form a cycle, the free words are unbounded");

    std::vector<std::vector<int>> words;
    std::vector<int> cur;
    if (a == b) words.push_back({});  // the empty word is the identity vertex
    enumerate_words(C, a, b, cur, words);
    int V = (int)words.size();

    // refinement order: finer[v] = all strictly finer words
    std::vector<std::vector<int>> finer(V);
    for (int v = 0; v < V; ++v)
        for (int u = 0; u < V; ++u)
            if (words[u].size() > words[v].size() && word_refines(C, words[v], words[u]))
                finer[v].push_back(u);

    std::vector<std::string> names(V);
    for (int v = 0; v < V; ++v)
        names[v] = words[v].empty() ? C.arrows[C.identity_of.at(a)].name
                                    : word_label(C, words[v]);

    SSet X;
    for (int v = 0; v < V; ++v) X.add_cell(names[v], 0);
    std::vector<std::vector<int>> chains;  // current dimension's chains, by vertex ids
    for (int v = 0; v < V; ++v) chains.push_back({v});
    auto chain_name = [&](const std::vector<int>& ch) {
        std::string s;
        for (size_t i = 0; i < ch.size(); ++i) {
            if (i) s += "<";
            s += names[ch[i]];
        }
        return s;
    };
    for (int d = 1; d <= max_dim; ++d) {
        std::vector<std::vector<int>> next;
        for (const auto& ch : chains)
            for (int u : finer[ch.back()]) {
                std::vector<int> ext = ch;
                ext.push_back(u);
                std::vector<FormalSimplex> fs;
                for (int i = 0; i <= d; ++i) {
                    std::vector<int> sub = ext;
                    sub.erase(sub.begin() + i);
                    fs.push_back({{}, chain_name(sub)});
                }
                X.add_cell(chain_name(ext), d, std::move(fs));
                next.push_back(std::move(ext));
            }
        if (next.empty()) break;
        chains = std::move(next);
    }
    X.check_identities();
    return X;
}

std::string leaf_composite(const FinCat& C, const std::string& vertex) {
    std::vector<int> w;
    size_t pos = 0;
    while (pos <= vertex.size()) {
        size_t bar = vertex.find('|', pos);
        if (bar == std::string::npos) bar = vertex.size();
        std::string leaf = vertex.substr(pos, bar - pos);
        auto it = C.arrow_index.find(leaf);
        if (it == C.arrow_index.end())
            throw SchemaError("leaf_composite: unknown arrow '" + leaf + "'");
        w.push_back(it->second);
        pos = bar + 1;
        if (bar == vertex.size()) break;
    }
    int acc = w[0];
    for (size_t i = 1; i < w.size(); ++i) acc = C.compose2(acc, w[i]);
    return C.arrows[acc].name;
}

SSet component_of(const FinCat& C, const SSet& space, const std::string& theta_name) {
    if (!C.arrow_index.count(theta_name))
        throw SchemaError("component_of: unknown arrow '" + theta_name + "'");
    std::vector<std::string> gens;
    for (int d = 0; d <= space.dim(); ++d)
        for (const auto& name : space.cells[d]) {
            std::string head = name.substr(0, name.find('<'));
            if (leaf_composite(C, head) == theta_name) gens.push_back(name);
        }
    if (gens.empty())
        throw InvariantError("component_of: no cells with composite '" + theta_name + "'");
    return subcomplex(space, gens);
}

SSet component_boundary(const FinCat& C, const SSet& space, const std::string& theta_name) {
    SSet comp = component_of(C, space, theta_name);
    std::vector<std::string> gens;
    for (int d = 0; d <= comp.dim(); ++d)
        for (const auto& name : comp.cells[d]) {
            std::string head = name.substr(0, name.find('<'));
            if (head != theta_name) gens.push_back(name);
        }
    return subcomplex(comp, gens);
}

}
