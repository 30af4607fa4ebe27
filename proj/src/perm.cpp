#include "topo/perm.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "topo/error.hpp"
#include "topo/simplex_cat.hpp"

namespace topo {

namespace {

void combinations_rec(const std::vector<int>& elems, int k, size_t start, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
    if ((int)cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (size_t i = start; i < elems.size(); ++i) {
        cur.push_back(elems[i]);
        combinations_rec(elems, k, i + 1, cur, out);
        cur.pop_back();
    }
}

std::vector<std::vector<int>> combinations(const std::vector<int>& elems, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    combinations_rec(elems, k, 0, cur, out);
    return out;
}

void partitions_rec(const std::vector<int>& rest, OrderedPartition& cur,
                    std::vector<OrderedPartition>& out) {
    if (rest.empty()) {
        out.push_back(cur);
        return;
    }
    for (int k = 1; k <= (int)rest.size(); ++k)
        for (const auto& block : combinations(rest, k)) {
            std::vector<int> remain;
            std::set_difference(rest.begin(), rest.end(), block.begin(), block.end(),
                                std::back_inserter(remain));
            cur.push_back(block);
            partitions_rec(remain, cur, out);
            cur.pop_back();
        }
}

}  // namespace

std::vector<OrderedPartition> ordered_partitions_of(int n) {
    if (n < 0 || n > 7)
        throw SchemaError("ordered_partitions_of: n must be between 0 and 7, got " +
                          std::to_string(n));
    std::vector<int> elems(n + 1);
    std::iota(elems.begin(), elems.end(), 0);
    std::vector<OrderedPartition> out;
    OrderedPartition cur;
    partitions_rec(elems, cur, out);
    return out;
}

std::string partition_name(const OrderedPartition& p) {
    std::string s;
    for (size_t b = 0; b < p.size(); ++b) {
        if (b) s += ',';
        for (int x : p[b]) s += char('0' + x);
    }
    return s;
}

bool partition_refines(const OrderedPartition& fine, const OrderedPartition& coarse) {
    size_t i = 0;
    for (const auto& cb : coarse) {
        std::vector<int> acc;
        while (i < fine.size() && acc != cb) {
            if (!std::includes(cb.begin(), cb.end(), fine[i].begin(), fine[i].end())) return false;
            acc.insert(acc.end(), fine[i].begin(), fine[i].end());
            std::sort(acc.begin(), acc.end());
            ++i;
        }
        if (acc != cb) return false;
    }
    return i == fine.size();
}

// ------------------------------------------------------------- face lattice

FaceLattice face_lattice(int n) {
    if (n < 0 || n > 5)
        throw SchemaError("face_lattice: n must be between 0 and 5, got " + std::to_string(n));
    FaceLattice L;
    L.n = n;
    L.faces.assign(n + 1, {});
    for (auto& p : ordered_partitions_of(n)) {
        int d = n + 1 - (int)p.size();
        L.faces[d].push_back(std::move(p));
    }
    long long atoms = 1;
    for (int i = 2; i <= n + 1; ++i) atoms *= i;
    if ((long long)L.faces[0].size() != atoms)
        throw InvariantError("face_lattice: atom count is not (n+1)!");
    if (L.faces[n].size() != 1)
        throw InvariantError("face_lattice: the maximum is not unique");
    L.covering.assign(n, {});
    for (int d = 0; d + 1 <= n; ++d) {
        std::vector<int> covered(L.faces[d].size(), 0), covers(L.faces[d + 1].size(), 0);
        for (size_t i = 0; i < L.faces[d + 1].size(); ++i)
            for (size_t j = 0; j < L.faces[d].size(); ++j)
                if (partition_refines(L.faces[d][j], L.faces[d + 1][i])) {
                    L.covering[d].emplace_back((int)i, (int)j);
                    ++covered[j];
                    ++covers[i];
                }
        for (size_t j = 0; j < covered.size(); ++j)
            if (!covered[j])
                throw InvariantError("face_lattice: face " + partition_name(L.faces[d][j]) +
                                     " is covered by nothing");
        for (size_t i = 0; i < covers.size(); ++i)
            if (!covers[i])
                throw InvariantError("face_lattice: face " + partition_name(L.faces[d + 1][i]) +
                                     " covers nothing");
    }
    return L;
}

// ------------------------------------------------------------ order complex

namespace {

std::string chain_name(const std::vector<std::string>& pnames, const std::vector<int>& chain) {
    std::string s;
    for (size_t t = 0; t < chain.size(); ++t) {
        if (t) s += '<';
        s += pnames[chain[t]];
    }
    return s;
}

SSet partition_nerve(int n, bool include_max) {
    if (n < 0 || n > 4)
        throw SchemaError("order_complex: n must be between 0 and 4, got " + std::to_string(n));
    std::vector<OrderedPartition> parts;
    for (auto& p : ordered_partitions_of(n))
        if (include_max || p.size() > 1) parts.push_back(std::move(p));
    std::vector<std::string> pnames(parts.size());
    for (size_t i = 0; i < parts.size(); ++i) pnames[i] = partition_name(parts[i]);
    std::vector<std::vector<int>> finer(parts.size());
    for (size_t i = 0; i < parts.size(); ++i)
        for (size_t j = 0; j < parts.size(); ++j)
            if (i != j && partition_refines(parts[j], parts[i])) finer[i].push_back((int)j);

    SSet S;
    std::vector<std::vector<int>> chains;
    for (size_t i = 0; i < parts.size(); ++i) {
        chains.push_back({(int)i});
        S.add_cell(pnames[i], 0);
    }
    int d = 1;
    while (!chains.empty()) {
        std::vector<std::vector<int>> nxt;
        for (const auto& ch : chains)
            for (int j : finer[ch.back()]) {
                auto ext = ch;
                ext.push_back(j);
                nxt.push_back(std::move(ext));
            }
        for (const auto& ch : nxt) {
            std::vector<FormalSimplex> fs;
            for (size_t i = 0; i < ch.size(); ++i) {
                auto sub = ch;
                sub.erase(sub.begin() + i);
                fs.push_back({{}, chain_name(pnames, sub)});
            }
            S.add_cell(chain_name(pnames, ch), d, std::move(fs));
        }
        chains = std::move(nxt);
        ++d;
    }
    S.check_identities();
    return S;
}

}  // namespace

SSet order_complex(int n) { return partition_nerve(n, true); }

SSet order_complex_boundary(int n) { return partition_nerve(n, false); }

// ---------------------------------------------------- boundary coequalizer

namespace {

// the t-th vertex of a nondegenerate cell, by composing face maps
std::string vertex_of(const SSet& P, const std::string& x, int t) {
    int d = P.dim_of.at(x);
    FormalSimplex cur{{}, x};
    for (int k = 0; k < d - t; ++k) cur = P.face(cur, t + 1);
    for (int k = 0; k < t; ++k) cur = P.face(cur, 0);
    if (!cur.deg.empty())
        throw InvariantError("boundary_coequalizer_check: degenerate vertex of " + x);
    return cur.cell;
}

OrderedPartition parse_partition(const std::string& s) {
    OrderedPartition p(1);
    for (char c : s) {
        if (c == ',')
            p.emplace_back();
        else
            p.back().push_back(c - '0');
    }
    return p;
}

// cell-for-cell equality of two complexes under their given names: an
// explicit isomorphism, used where the name-blind search would be too slow
bool same_complex(const SSet& A, const SSet& B) {
    if (A.dim() != B.dim() || A.basepoint != B.basepoint) return false;
    for (int d = 0; d <= A.dim(); ++d) {
        std::set<std::string> a(A.cells[d].begin(), A.cells[d].end());
        std::set<std::string> b(B.cells[d].begin(), B.cells[d].end());
        if (a != b) return false;
    }
    for (int d = 1; d <= A.dim(); ++d)
        for (const auto& name : A.cells[d])
            if (A.faces.at(name) != B.faces.at(name)) return false;
    return true;
}

// decode a product-piece vertex "(pA|pB)" into the global partition it names,
// relabeling each local partition through its facet block
OrderedPartition global_partition(const std::string& vname, const std::vector<int>& s1,
                                  const std::vector<int>& s2) {
    if (vname.size() < 2 || vname.front() != '(' || vname.back() != ')')
        throw InvariantError("boundary_coequalizer_check: unexpected vertex name " + vname);
    std::string body = vname.substr(1, vname.size() - 2);
    size_t bar = body.find('|');
    if (bar == std::string::npos || body.find('|', bar + 1) != std::string::npos)
        throw InvariantError("boundary_coequalizer_check: unexpected vertex name " + vname);
    OrderedPartition global;
    for (int side = 0; side < 2; ++side) {
        const auto& lookup = side == 0 ? s1 : s2;
        OrderedPartition local =
            parse_partition(side == 0 ? body.substr(0, bar) : body.substr(bar + 1));
        for (auto& block : local) {
            for (int& x : block) x = lookup[x];
            std::sort(block.begin(), block.end());
            global.push_back(std::move(block));
        }
    }
    return global;
}

}  // namespace

CoeqReport boundary_coequalizer_check(int n) {
    if (n < 1 || n > 4)
        throw SchemaError("boundary_coequalizer_check: n must be between 1 and 4, got " +
                          std::to_string(n));
    CoeqReport rep;
    rep.n = n;
    rep.faces_consistent = true;

    std::vector<SSet> oc_cache(n);  // order_complex(k) for k = 0..n-1
    for (int k = 0; k < n; ++k) oc_cache[k] = order_complex(k);

    // global chain name -> dimension, plus per-piece decodings for the face
    // consistency pass
    std::map<std::string, int> glued_dim;
    for (int mask = 1; mask < (1 << (n + 1)) - 1; ++mask) {
        std::vector<int> s1, s2;
        for (int v = 0; v <= n; ++v) (mask >> v & 1 ? s1 : s2).push_back(v);
        SSet piece = product(oc_cache[s1.size() - 1], oc_cache[s2.size() - 1]);
        ++rep.piece_count;
        rep.cells_disjoint += (size_t)piece.total_cells();

        // decode every cell of the piece into its global chain
        std::map<std::string, std::vector<std::string>> chain_of;
        for (int d = 0; d <= piece.dim(); ++d)
            for (const auto& x : piece.cells[d]) {
                std::vector<std::string> chain;
                OrderedPartition prev;
                for (int t = 0; t <= d; ++t) {
                    OrderedPartition g = global_partition(vertex_of(piece, x, t), s1, s2);
                    if (t > 0 && !(g != prev && partition_refines(g, prev)))
                        throw InvariantError(
                            "boundary_coequalizer_check: piece chain is not strict at " + x);
                    chain.push_back(partition_name(g));
                    prev = std::move(g);
                }
                chain_of[x] = chain;
                std::string gname;
                for (size_t t = 0; t < chain.size(); ++t) gname += (t ? "<" : "") + chain[t];
                auto [it, fresh] = glued_dim.emplace(gname, d);
                if (!fresh && it->second != d) rep.faces_consistent = false;
            }

        // induced faces must be the chain with one entry deleted
        for (int d = 1; d <= piece.dim(); ++d)
            for (const auto& x : piece.cells[d]) {
                const auto& chain = chain_of.at(x);
                for (int i = 0; i <= d; ++i) {
                    FormalSimplex f = piece.face(FormalSimplex{{}, x}, i);
                    if (!f.deg.empty()) {
                        rep.faces_consistent = false;
                        continue;
                    }
                    auto sub = chain;
                    sub.erase(sub.begin() + i);
                    if (chain_of.at(f.cell) != sub) rep.faces_consistent = false;
                }
            }
    }

    // assemble the glued complex directly from the surviving global chains
    SSet glued;
    int top = 0;
    for (const auto& [name, d] : glued_dim) top = std::max(top, d);
    for (int d = 0; d <= top; ++d)
        for (const auto& [name, dd] : glued_dim) {
            if (dd != d) continue;
            std::vector<FormalSimplex> fs;
            if (d >= 1) {
                std::vector<std::string> chain;
                std::string cur;
                for (char c : name) {
                    if (c == '<') {
                        chain.push_back(cur);
                        cur.clear();
                    } else
                        cur += c;
                }
                chain.push_back(cur);
                for (int i = 0; i <= d; ++i) {
                    std::string sub;
                    for (size_t t = 0; t < chain.size(); ++t) {
                        if ((int)t == i) continue;
                        sub += (sub.empty() ? "" : "<") + chain[t];
                    }
                    fs.push_back({{}, sub});
                }
            }
            glued.add_cell(name, d, std::move(fs));
        }
    glued.check_identities();
    rep.cells_glued = (size_t)glued.total_cells();
    for (int d = 0; d <= glued.dim(); ++d) rep.f_vector.push_back(glued.cells[d].size());

    // the glued cells carry canonical chain names, so the isomorphism with
    // the boundary nerve can be exhibited directly; the name-blind search
    // re-confirms it where it is cheap
    SSet bd = order_complex_boundary(n);
    rep.iso_ok = same_complex(glued, bd) && (n > 3 || iso_check(glued, bd));

    auto h = homology_z(glued);
    rep.sphere_ok = true;
    for (int d = 0; d < (int)h.size(); ++d) {
        int want = (d == 0 ? 1 : 0) + (d == n - 1 ? 1 : 0);
        if (h[d].betti != want || !h[d].torsion.empty()) rep.sphere_ok = false;
    }
    if ((int)h.size() != std::max(n - 1, 0) + 1) rep.sphere_ok = false;
    return rep;
}

// ------------------------------------------------------- obstruction labels

ObstructionLabels label_obstruction_boundary(int n, int r) {
    if (r < 2 || r > 8)
        throw SchemaError("label_obstruction_boundary: page must be between 2 and 8, got " +
                          std::to_string(r));
    if (n < r)
        throw SchemaError("label_obstruction_boundary: need simplicial degree n >= r, got n = " +
                          std::to_string(n));
    ObstructionLabels out;
    out.n = n;
    out.r = r;
    FaceWord theta(r + 1);
    std::iota(theta.begin(), theta.end(), 0);
    out.theta = word_name(theta);
    {
        OrderedPartition singles;
        for (int i = 0; i <= r; ++i) singles.push_back({i});
        out.basepoint = partition_name(singles);
    }

    std::vector<int> all(r + 1);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<int>> s2s;
    for (int size = 1; size <= r; ++size)
        for (auto& c : combinations(all, size)) s2s.push_back(std::move(c));

    auto render_letters = [](const std::vector<int>& letters) {
        std::string s;
        for (int a : letters) s += "d" + std::to_string(a);
        return s;
    };
    for (const auto& s2 : s2s) {
        LabeledFacet f;
        f.s2 = s2;
        std::set_difference(all.begin(), all.end(), s2.begin(), s2.end(),
                            std::back_inserter(f.s1));
        bool has0 = !s2.empty() && s2[0] == 0;
        bool has1 = std::binary_search(s2.begin(), s2.end(), 1);

        // second-applied letters shift down past the first-applied block
        std::vector<int> t1;
        for (int a : f.s1) {
            int below = (int)(std::lower_bound(s2.begin(), s2.end(), a) - s2.begin());
            t1.push_back(a - below);
        }
        std::string left = render_letters(t1);
        std::string right;
        if (has0) {
            std::vector<int> t2;
            for (int a : s2)
                if (a != 0) t2.push_back(a - 1);
            right = render_letters(t2) + "f";
        } else {
            right = render_letters(s2) + "f";
        }
        f.render = "(" + left + ")(" + right + ")";

        if (!has0) {
            f.label = "zero";
            f.gname = "0";
        } else if (s2.size() == 1) {
            f.label = "coherence";
            std::string hs;
            for (size_t i = 0; i < t1.size(); ++i) hs += (i ? "," : "") + std::to_string(t1[i]);
            f.gname = "H{" + hs + "}f";
        } else {
            f.label = "choice(stage " + std::to_string((int)s2.size() - 1) + ")";
            if (s2.size() == 2) f.gname = left + "G" + std::to_string(s2[1]);
            f.is_new = (int)s2.size() == r && has1;
        }
        out.facets.push_back(std::move(f));
    }
    if (out.facets.size() != (size_t)((1 << (r + 1)) - 2))
        throw InvariantError("label_obstruction_boundary: facet count mismatch");
    return out;
}

// ----------------------------------------------------- dual witness complex

SSet dual_witness_complex(int r) {
    if (r < 1 || r > 3)
        throw SchemaError("dual_witness_complex: r must be between 1 and 3, got " +
                          std::to_string(r));
    std::vector<std::vector<int>> ws = {{}};
    for (int t = 0; t <= r; ++t) {
        std::vector<std::vector<int>> nxt;
        for (const auto& w : ws)
            for (int i = 0; i <= t; ++i) {
                auto w2 = w;
                w2.push_back(i);
                nxt.push_back(std::move(w2));
            }
        ws = std::move(nxt);
    }
    std::map<std::vector<int>, int> widx;
    for (size_t w = 0; w < ws.size(); ++w) widx[ws[w]] = (int)w;

    const int V = r + 2;       // vertices of each top simplex
    const int M = 1 << V;      // vertex subsets
    std::vector<int> dsu(ws.size() * M);
    std::iota(dsu.begin(), dsu.end(), 0);
    std::function<int(int)> find = [&](int x) { return dsu[x] == x ? x : dsu[x] = find(dsu[x]); };

    // one gluing per adjacent rewrite d_a d_b = d_b d_{a+1} (a >= b) at word
    // positions (t, t+1): the shared facet omits the intermediate vertex t+1
    for (size_t w = 0; w < ws.size(); ++w)
        for (int t = 0; t + 1 <= r; ++t) {
            int a = ws[w][t], b = ws[w][t + 1];
            if (a < b) continue;
            auto w2 = ws[w];
            w2[t] = b;
            w2[t + 1] = a + 1;
            auto it = widx.find(w2);
            if (it == widx.end()) continue;
            for (int mask = 1; mask < M; ++mask)
                if (!(mask & (1 << (t + 1))))
                    dsu[find((int)w * M + mask)] = find(it->second * M + mask);
        }

    // canonical name per class: its lexicographically least (word, mask) member
    std::map<int, std::pair<int, int>> least;
    for (size_t w = 0; w < ws.size(); ++w)
        for (int mask = 1; mask < M; ++mask) {
            int root = find((int)w * M + mask);
            auto key = std::make_pair((int)w, mask);
            auto [it, fresh] = least.emplace(root, key);
            if (!fresh && key < it->second) it->second = key;
        }
    auto cname = [&](int w, int mask) {
        auto [lw, lm] = least.at(find(w * M + mask));
        std::string s = "w";
        for (int x : ws[lw]) s += char('0' + x);
        s += ':';
        for (int v = 0; v < V; ++v)
            if (lm & (1 << v)) s += char('0' + v);
        return s;
    };

    SSet S;
    for (int d = 0; d <= r + 1; ++d) {
        std::set<std::string> done;
        for (size_t w = 0; w < ws.size(); ++w)
            for (int mask = 1; mask < M; ++mask) {
                if (__builtin_popcount((unsigned)mask) != d + 1) continue;
                std::string name = cname((int)w, mask);
                if (!done.insert(name).second) continue;
                std::vector<FormalSimplex> fs;
                if (d >= 1) {
                    std::vector<int> verts;
                    for (int v = 0; v < V; ++v)
                        if (mask & (1 << v)) verts.push_back(v);
                    for (int i = 0; i <= d; ++i)
                        fs.push_back({{}, cname((int)w, mask & ~(1 << verts[i]))});
                }
                S.add_cell(name, d, std::move(fs));
            }
    }
    S.check_identities();
    return S;
}

}
