#include "topo/sset.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "topo/error.hpp"
#include "topo/matrix.hpp"

namespace topo {

std::vector<int> surjection_values(const std::vector<int>& S, int m) {
    std::vector<int> v(m + 1);
    std::set<int> s(S.begin(), S.end());
    v[0] = 0;
    for (int x = 1; x <= m; ++x) v[x] = v[x - 1] + (s.count(x - 1) ? 0 : 1);
    return v;
}

std::vector<int> collapse_set_of(const std::vector<int>& values) {
    std::vector<int> S;
    for (int x = 0; x + 1 < (int)values.size(); ++x)
        if (values[x] == values[x + 1]) S.push_back(x);
    return S;
}

long long SSet::total_cells() const {
    long long t = 0;
    for (const auto& layer : cells) t += (long long)layer.size();
    return t;
}

void SSet::add_cell(const std::string& name, int d, std::vector<FormalSimplex> fs) {
    if (d < 0) throw SchemaError("add_cell: negative dimension");
    if (has_cell(name)) throw SchemaError("add_cell: duplicate cell name '" + name + "'");
    if (d >= 1 && (int)fs.size() != d + 1)
        throw SchemaError("add_cell: cell '" + name + "' needs " + std::to_string(d + 1) +
                          " faces");
    if ((int)cells.size() <= d) cells.resize(d + 1);
    cells[d].push_back(name);
    dim_of[name] = d;
    if (d >= 1) faces[name] = std::move(fs);
}

int SSet::formal_dim(const FormalSimplex& x) const {
    auto it = dim_of.find(x.cell);
    if (it == dim_of.end()) throw InvariantError("unknown cell '" + x.cell + "'");
    return it->second + (int)x.deg.size();
}

FormalSimplex SSet::face(const FormalSimplex& x, int i) const {
    int m = formal_dim(x);
    if (m == 0 || i < 0 || i > m) throw InvariantError("face index out of range");
    int d = m - (int)x.deg.size();
    std::vector<int> eta = surjection_values(x.deg, m);
    std::vector<int> f(m);
    for (int t = 0; t < m; ++t) f[t] = eta[t < i ? t : t + 1];
    bool onto = (m > 0) && (f[0] == 0 && f[m - 1] == d);
    if (onto)
        for (int t = 0; t + 1 < m; ++t)
            if (f[t + 1] - f[t] > 1) {
                onto = false;
                break;
            }
    if (m == 0) onto = false;
    if (onto || d == 0) {
        if (d == 0) f.assign(m, 0);
        return {collapse_set_of(f), x.cell};
    }
    // exactly one value is skipped: the one only i was hitting
    int v = eta[i];
    const FormalSimplex& sub = faces.at(x.cell)[v];
    std::vector<int> etak = surjection_values(sub.deg, d - 1);
    std::vector<int> g(m);
    for (int t = 0; t < m; ++t) g[t] = etak[f[t] > v ? f[t] - 1 : f[t]];
    return {collapse_set_of(g), sub.cell};
}

FormalSimplex SSet::degenerate(const FormalSimplex& x, int j) const {
    int m = formal_dim(x);
    if (j < 0 || j > m) throw InvariantError("degeneracy index out of range");
    std::vector<int> eta = surjection_values(x.deg, m);
    std::vector<int> g(m + 2);
    for (int t = 0; t <= m + 1; ++t) g[t] = eta[t <= j ? t : t - 1];
    return {collapse_set_of(g), x.cell};
}

void SSet::check_identities() const {
    if (!basepoint.empty()) {
        auto it = dim_of.find(basepoint);
        if (it == dim_of.end() || it->second != 0)
            throw InvariantError("basepoint '" + basepoint + "' is not a vertex");
    }
    for (int d = 1; d <= dim(); ++d) {
        for (const auto& name : cells[d]) {
            const auto& fs = faces.at(name);
            if ((int)fs.size() != d + 1)
                throw InvariantError("cell '" + name + "' has wrong face count");
            for (const auto& e : fs) {
                auto it = dim_of.find(e.cell);
                if (it == dim_of.end())
                    throw InvariantError("cell '" + name + "' has missing face target '" +
                                         e.cell + "'");
                if (it->second + (int)e.deg.size() != d - 1)
                    throw InvariantError("cell '" + name + "' has a face of the wrong dimension");
                for (size_t t = 0; t < e.deg.size(); ++t) {
                    if (e.deg[t] < 0 || e.deg[t] > d - 2 ||
                        (t + 1 < e.deg.size() && e.deg[t] >= e.deg[t + 1]))
                        throw InvariantError("cell '" + name + "' has a malformed collapse set");
                }
            }
            if (d < 2) continue;
            FormalSimplex top{{}, name};
            for (int j = 1; j <= d; ++j)
                for (int i = 0; i < j; ++i) {
                    FormalSimplex a = face(face(top, j), i);
                    FormalSimplex b = face(face(top, i), j - 1);
                    if (!(a == b))
                        throw InvariantError("simplicial identity fails on cell '" + name +
                                             "' at (i,j)=(" + std::to_string(i) + "," +
                                             std::to_string(j) + ")");
                }
        }
    }
}

// ---------------------------------------------------------------- simplices

static std::string vtx_name(const std::vector<int>& verts) {
    std::string s;
    for (int v : verts) s += std::to_string(v);
    return s;
}

SSet standard_simplex(int n) {
    if (n < 0 || n > 9) throw SchemaError("standard_simplex: need 0 <= n <= 9");
    SSet X;
    // nonempty vertex subsets, by size then lexicographic
    for (int d = 0; d <= n; ++d) {
        std::vector<int> idx(d + 1);
        for (int i = 0; i <= d; ++i) idx[i] = i;
        while (true) {
            if (d == 0)
                X.add_cell(vtx_name(idx), 0);
            else {
                std::vector<FormalSimplex> fs;
                for (int i = 0; i <= d; ++i) {
                    std::vector<int> sub = idx;
                    sub.erase(sub.begin() + i);
                    fs.push_back({{}, vtx_name(sub)});
                }
                X.add_cell(vtx_name(idx), d, std::move(fs));
            }
            int j = d;
            while (j >= 0 && idx[j] == n - (d - j)) --j;
            if (j < 0) break;
            ++idx[j];
            for (int i = j + 1; i <= d; ++i) idx[i] = idx[i - 1] + 1;
        }
    }
    X.check_identities();
    return X;
}

bool is_subcomplex(const SSet& X, const std::vector<std::string>& names) {
    std::set<std::string> keep(names.begin(), names.end());
    for (const auto& name : names) {
        if (!X.has_cell(name)) return false;
        if (X.dim_of.at(name) >= 1)
            for (const auto& e : X.faces.at(name))
                if (!keep.count(e.cell)) return false;
    }
    return true;
}

SSet subcomplex(const SSet& X, const std::vector<std::string>& generators) {
    std::set<std::string> keep;
    std::vector<std::string> stack = generators;
    while (!stack.empty()) {
        std::string name = stack.back();
        stack.pop_back();
        if (!X.has_cell(name)) throw SchemaError("subcomplex: unknown cell '" + name + "'");
        if (!keep.insert(name).second) continue;
        if (X.dim_of.at(name) >= 1)
            for (const auto& e : X.faces.at(name)) stack.push_back(e.cell);
    }
    SSet Y;
    for (int d = 0; d <= X.dim(); ++d)
        for (const auto& name : X.cells[d])
            if (keep.count(name)) {
                if (d == 0)
                    Y.add_cell(name, 0);
                else
                    Y.add_cell(name, d, X.faces.at(name));
            }
    if (!X.basepoint.empty() && keep.count(X.basepoint)) Y.basepoint = X.basepoint;
    Y.check_identities();
    return Y;
}

SSet boundary(int n) {
    if (n < 0) throw SchemaError("boundary: need n >= 0");
    SSet X = standard_simplex(n);
    std::vector<std::string> gens;
    for (int d = 0; d < n; ++d)
        for (const auto& name : X.cells[d]) gens.push_back(name);
    if (gens.empty()) return SSet{};  // boundary of a point is empty
    return subcomplex(X, gens);
}

SSet horn(int n, int k) {
    if (n < 1 || k < 0 || k > n) throw SchemaError("horn: need n >= 1 and 0 <= k <= n");
    SSet X = standard_simplex(n);
    std::vector<int> opposite;
    for (int v = 0; v <= n; ++v)
        if (v != k) opposite.push_back(v);
    std::string drop = vtx_name(opposite);
    std::vector<std::string> gens;
    for (int d = 0; d < n; ++d)
        for (const auto& name : X.cells[d])
            if (name != drop) gens.push_back(name);
    return subcomplex(X, gens);
}

SSet point() { return standard_simplex(0); }

SSet quotient(const SSet& X, const std::vector<std::string>& subcomplex_cells) {
    if (!is_subcomplex(X, subcomplex_cells))
        throw InvariantError("quotient: the given cells do not form a subcomplex");
    std::set<std::string> dead(subcomplex_cells.begin(), subcomplex_cells.end());
    if (X.has_cell("*")) throw SchemaError("quotient: cell name '*' already taken");
    SSet Y;
    Y.add_cell("*", 0);
    Y.basepoint = "*";
    for (int d = 0; d <= X.dim(); ++d)
        for (const auto& name : X.cells[d]) {
            if (dead.count(name)) continue;
            if (d == 0) {
                Y.add_cell(name, 0);
                continue;
            }
            std::vector<FormalSimplex> fs;
            for (const auto& e : X.faces.at(name)) {
                if (dead.count(e.cell)) {
                    std::vector<int> full(d - 1);
                    for (int t = 0; t < d - 1; ++t) full[t] = t;
                    fs.push_back({full, "*"});
                } else {
                    fs.push_back(e);
                }
            }
            Y.add_cell(name, d, std::move(fs));
        }
    Y.check_identities();
    return Y;
}

SSet cone(const SSet& X) {
    SSet Y;
    if (X.has_cell("cpt")) throw SchemaError("cone: cell name 'cpt' already taken");
    Y.add_cell("cpt", 0);
    for (int d = 0; d <= X.dim(); ++d)
        for (const auto& name : X.cells[d]) {
            if (d == 0)
                Y.add_cell(name, 0);
            else
                Y.add_cell(name, d, X.faces.at(name));
        }
    // cone cell over each base cell, apex joined last
    for (int d = 0; d <= X.dim(); ++d)
        for (const auto& name : X.cells[d]) {
            std::vector<FormalSimplex> fs;
            if (d == 0)
                fs.push_back({{}, "cpt"});
            else
                for (const auto& e : X.faces.at(name)) fs.push_back({e.deg, e.cell + "_cpt"});
            fs.push_back({{}, name});
            Y.add_cell(name + "_cpt", d + 1, std::move(fs));
        }
    Y.basepoint = X.basepoint;
    Y.check_identities();
    return Y;
}

SSet tr_simplex(int n) {
    if (n < 1) throw SchemaError("tr_simplex: need n >= 1");
    return cone(boundary(n));
}

// ------------------------------------------------------------------ product

static std::string formal_name(const std::vector<int>& S, const std::string& cell) {
    if (S.empty()) return cell;
    std::string s = cell + "{";
    for (size_t i = 0; i < S.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(S[i]);
    }
    return s + "}";
}

static std::string pair_name(const std::vector<int>& Sx, const std::string& cx,
                             const std::vector<int>& Sy, const std::string& cy) {
    return "(" + formal_name(Sx, cx) + "|" + formal_name(Sy, cy) + ")";
}

static std::vector<std::vector<int>> k_subsets(const std::vector<int>& pool, int k) {
    std::vector<std::vector<int>> out;
    int n = (int)pool.size();
    if (k < 0 || k > n) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        std::vector<int> s(k);
        for (int i = 0; i < k; ++i) s[i] = pool[idx[i]];
        out.push_back(std::move(s));
        if (k == 0) break;
        int j = k - 1;
        while (j >= 0 && idx[j] == n - (k - j)) --j;
        if (j < 0) break;
        ++idx[j];
        for (int i = j + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return out;
}

SSet product(const SSet& X, const SSet& Y) {
    SSet P;
    int dmax = X.dim() + Y.dim();
    for (int q = 0; q <= dmax; ++q) {
        std::vector<int> all(q);
        for (int t = 0; t < q; ++t) all[t] = t;
        for (int a = 0; a <= std::min(q, X.dim()); ++a)
            for (int b = 0; b <= std::min(q, Y.dim()); ++b) {
                if (a + b < q) continue;
                for (const auto& cx : X.cells[a])
                    for (const auto& cy : Y.cells[b])
                        for (const auto& Sx : k_subsets(all, q - a)) {
                            std::vector<int> rest;
                            std::set<int> used(Sx.begin(), Sx.end());
                            for (int t = 0; t < q; ++t)
                                if (!used.count(t)) rest.push_back(t);
                            for (const auto& Sy : k_subsets(rest, q - b)) {
                                std::string name = pair_name(Sx, cx, Sy, cy);
                                if (q == 0) {
                                    P.add_cell(name, 0);
                                    continue;
                                }
                                std::vector<FormalSimplex> fs;
                                for (int i = 0; i <= q; ++i) {
                                    FormalSimplex fx = X.face({Sx, cx}, i);
                                    FormalSimplex fy = Y.face({Sy, cy}, i);
                                    std::vector<int> C;
                                    std::set_intersection(fx.deg.begin(), fx.deg.end(),
                                                          fy.deg.begin(), fy.deg.end(),
                                                          std::back_inserter(C));
                                    auto reindex = [&](const std::vector<int>& S) {
                                        std::vector<int> r;
                                        for (int j : S) {
                                            if (std::binary_search(C.begin(), C.end(), j))
                                                continue;
                                            int below = (int)(std::lower_bound(C.begin(),
                                                                               C.end(), j) -
                                                              C.begin());
                                            r.push_back(j - below);
                                        }
                                        return r;
                                    };
                                    fs.push_back(
                                        {C, pair_name(reindex(fx.deg), fx.cell,
                                                      reindex(fy.deg), fy.cell)});
                                }
                                P.add_cell(name, q, std::move(fs));
                            }
                        }
            }
    }
    if (!X.basepoint.empty() && !Y.basepoint.empty())
        P.basepoint = pair_name({}, X.basepoint, {}, Y.basepoint);
    P.check_identities();
    return P;
}

SSet fattened_simplex(int n) {
    if (n < 1 || n > 8) throw SchemaError("fattened_simplex: need 1 <= n <= 8");
    SSet P = product(standard_simplex(n), standard_simplex(1));
    // generators: the base copy of the n-simplex at interval end 0, and every
    // boundary-facet prism
    std::vector<std::string> gens;
    std::vector<int> base_deg(n);
    std::vector<int> full(n + 1);
    for (int t = 0; t < n; ++t) base_deg[t] = t;
    for (int t = 0; t <= n; ++t) full[t] = t;
    gens.push_back(pair_name({}, vtx_name(full), base_deg, "0"));
    // every boundary-facet prism: top cells of facet x interval are the
    // (n-1,1)-shuffles, i.e. Sx a singleton and Sy its complement in {0..n-1}
    for (int i = 0; i <= n; ++i) {
        std::vector<int> facet = full;
        facet.erase(facet.begin() + i);
        for (int s = 0; s < n; ++s) {
            std::vector<int> Sy;
            for (int t = 0; t < n; ++t)
                if (t != s) Sy.push_back(t);
            gens.push_back(pair_name({s}, vtx_name(facet), Sy, "01"));
        }
    }
    return subcomplex(P, gens);
}

// ----------------------------------------------------------------- homology

static Matrix boundary_matrix(const SSet& X, int d) {
    int rows = X.n_cells(d - 1), cols = X.n_cells(d);
    Matrix D(rows, cols);
    if (rows == 0 || cols == 0) return D;
    std::map<std::string, int> row_of;
    for (int i = 0; i < rows; ++i) row_of[X.cells[d - 1][i]] = i;
    for (int j = 0; j < cols; ++j) {
        const auto& fs = X.faces.at(X.cells[d][j]);
        for (int i = 0; i <= d; ++i)
            if (fs[i].deg.empty()) D.at(row_of.at(fs[i].cell), j) += (i % 2 ? -1 : 1);
    }
    return D;
}

static std::vector<SparseEntry> boundary_entries(const SSet& X, int d) {
    std::vector<SparseEntry> es;
    if (X.n_cells(d - 1) == 0 || X.n_cells(d) == 0) return es;
    std::map<std::string, int> row_of;
    for (int i = 0; i < X.n_cells(d - 1); ++i) row_of[X.cells[d - 1][i]] = i;
    for (int j = 0; j < X.n_cells(d); ++j) {
        const auto& fs = X.faces.at(X.cells[d][j]);
        for (int i = 0; i <= d; ++i)
            if (fs[i].deg.empty())
                es.push_back({row_of.at(fs[i].cell), j, i % 2 ? -1 : 1});
    }
    return es;
}

std::vector<ZHomology> homology_z(const SSet& X) {
    int top = X.dim();
    std::vector<ZHomology> H(std::max(0, top + 1));
    std::vector<ZDiagonal> diag(top + 2);
    for (int d = 0; d <= top + 1; ++d)
        diag[d] = sparse_z_diagonal(X.n_cells(d - 1), X.n_cells(d), boundary_entries(X, d));
    for (int d = 0; d <= top; ++d) {
        H[d].betti = X.n_cells(d) - diag[d].rank - diag[d + 1].rank;
        H[d].torsion = diag[d + 1].nonunit_factors;
    }
    return H;
}

std::vector<int> homology_fp(const SSet& X, int64_t p) {
    require_prime(p);
    int top = X.dim();
    std::vector<int> H(std::max(0, top + 1));
    for (int d = 0; d <= top; ++d) {
        Matrix Dd = boundary_matrix(X, d);
        Matrix Dd1 = boundary_matrix(X, d + 1);
        int cycles = X.n_cells(d) - rank(Dd, p);
        H[d] = cycles - rank(Dd1, p);
    }
    return H;
}

long long euler_characteristic(const SSet& X) {
    long long chi = 0;
    for (int d = 0; d <= X.dim(); ++d) chi += (d % 2 ? -1LL : 1LL) * X.n_cells(d);
    return chi;
}

std::vector<std::vector<std::string>> components(const SSet& X) {
    std::vector<std::string> order;
    std::map<std::string, int> id;
    for (int d = 0; d <= X.dim(); ++d)
        for (const auto& name : X.cells[d]) {
            id[name] = (int)order.size();
            order.push_back(name);
        }
    std::vector<int> parent(order.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = (int)i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
    for (const auto& [name, fs] : X.faces)
        for (const auto& e : fs) unite(id.at(name), id.at(e.cell));
    std::map<int, std::vector<std::string>> buckets;
    for (const auto& name : order) buckets[find(id.at(name))].push_back(name);
    std::vector<std::vector<std::string>> out;
    std::set<int> seen;
    for (const auto& name : order) {
        int r = find(id.at(name));
        if (seen.insert(r).second) out.push_back(buckets.at(r));
    }
    return out;
}

// ---------------------------------------------------------------- iso check

namespace {

// integer-indexed incidence view of a complex, ids in (dimension, cell-list)
// order so face targets always have smaller ids
struct IsoView {
    std::vector<int> dim;                                            // per id
    std::vector<int> is_base;                                        // per id
    std::vector<std::vector<std::pair<std::vector<int>, int>>> fac;  // slot -> (deg, target)
    std::vector<std::vector<std::pair<int, int>>> cof;               // (slot, parent)
};

IsoView make_iso_view(const SSet& X) {
    IsoView V;
    std::map<std::string, int> id;
    for (int d = 0; d <= X.dim(); ++d)
        for (const auto& name : X.cells[d]) {
            id[name] = (int)V.dim.size();
            V.dim.push_back(d);
            V.is_base.push_back(name == X.basepoint ? 1 : 0);
        }
    V.fac.resize(V.dim.size());
    V.cof.resize(V.dim.size());
    for (int d = 1; d <= X.dim(); ++d)
        for (const auto& name : X.cells[d]) {
            int me = id.at(name);
            const auto& fs = X.faces.at(name);
            for (int i = 0; i < (int)fs.size(); ++i) {
                int tgt = id.at(fs[i].cell);
                V.fac[me].emplace_back(fs[i].deg, tgt);
                V.cof[tgt].emplace_back(i, me);
            }
        }
    return V;
}

}  // namespace

bool iso_check(const SSet& X, const SSet& Y, long long max_cells) {
    if (X.total_cells() != Y.total_cells()) return false;
    if (X.dim() != Y.dim()) return false;
    for (int d = 0; d <= X.dim(); ++d)
        if (X.n_cells(d) != Y.n_cells(d)) return false;
    if (X.basepoint.empty() != Y.basepoint.empty()) return false;
    if (X.total_cells() > max_cells)
        throw InvariantError("iso_check: complexes too large for exact isomorphism search");

    IsoView A = make_iso_view(X), B = make_iso_view(Y);
    const size_t T = A.dim.size();

    // joint color refinement over both face and coface incidences; the rank
    // table is shared by the two complexes so colors stay comparable, and the
    // loop stops once the class count stabilizes
    std::vector<long long> colA(T), colB(T);
    for (size_t v = 0; v < T; ++v) colA[v] = 2 * A.dim[v] + A.is_base[v];
    for (size_t v = 0; v < T; ++v) colB[v] = 2 * B.dim[v] + B.is_base[v];
    auto sigs = [T](const IsoView& V, const std::vector<long long>& col) {
        std::vector<std::string> out(T);
        for (size_t v = 0; v < T; ++v) {
            std::string s = std::to_string(col[v]);
            s += '|';
            for (const auto& [deg, t] : V.fac[v]) {
                s += '[';
                for (int j : deg) {
                    s += std::to_string(j);
                    s += ',';
                }
                s += ':';
                s += std::to_string(col[t]);
                s += ']';
            }
            std::vector<std::string> co;
            co.reserve(V.cof[v].size());
            for (const auto& [slot, par] : V.cof[v])
                co.push_back(std::to_string(slot) + ":" + std::to_string(col[par]));
            std::sort(co.begin(), co.end());
            s += '/';
            for (const auto& c : co) {
                s += c;
                s += ';';
            }
            out[v] = std::move(s);
        }
        return out;
    };
    long long prev_classes = -1;
    for (int round = 0; round < 64; ++round) {
        auto sa = sigs(A, colA), sb = sigs(B, colB);
        std::map<std::string, long long> rank;
        for (const auto& s : sa) rank.emplace(s, 0);
        for (const auto& s : sb) rank.emplace(s, 0);
        long long r = 0;
        for (auto& [s, v] : rank) v = r++;
        for (size_t i = 0; i < T; ++i) colA[i] = rank.at(sa[i]);
        for (size_t i = 0; i < T; ++i) colB[i] = rank.at(sb[i]);
        if (r == prev_classes) break;
        prev_classes = r;
    }
    std::map<long long, long long> countA;
    std::map<long long, std::vector<int>> classB;
    for (size_t v = 0; v < T; ++v) ++countA[colA[v]];
    for (size_t v = 0; v < T; ++v) classB[colB[v]].push_back((int)v);
    if (countA.size() != classB.size()) return false;
    for (const auto& [c, cnt] : countA) {
        auto it = classB.find(c);
        if (it == classB.end() || (long long)it->second.size() != cnt) return false;
    }

    // backtracking search for a face-preserving bijection.  Cells are placed
    // only after all their faces, and a cell all of whose faces are placed is
    // preferred over a fresh vertex, so contradictions surface immediately.
    // The ready list grows and truncates in lockstep with place/unplace.
    std::vector<int> matchA(T, -1), usedB(T, 0), pending(T, 0);
    for (size_t v = 0; v < T; ++v) pending[v] = (int)A.fac[v].size();
    std::vector<int> ready;  // non-vertex cells whose faces are all placed
    std::vector<int> vtx_order;
    for (size_t v = 0; v < T; ++v)
        if (A.dim[v] == 0) vtx_order.push_back((int)v);
    std::sort(vtx_order.begin(), vtx_order.end(), [&](int a, int b) {
        long long ca = countA.at(colA[a]), cb = countA.at(colA[b]);
        if (ca != cb) return ca < cb;
        if (colA[a] != colA[b]) return colA[a] < colA[b];
        return a < b;
    });
    size_t placed = 0;

    auto place = [&](int x, int y) {
        matchA[x] = y;
        usedB[y] = 1;
        ++placed;
        for (const auto& [slot, par] : A.cof[x])
            if (--pending[par] == 0) ready.push_back(par);
    };
    auto unplace = [&](int x, size_t mark) {
        usedB[matchA[x]] = 0;
        matchA[x] = -1;
        --placed;
        for (const auto& [slot, par] : A.cof[x]) ++pending[par];
        ready.resize(mark);
    };
    auto pick_next = [&]() -> int {
        for (size_t i = ready.size(); i-- > 0;) {
            int x = ready[i];
            if (matchA[x] < 0) return x;
        }
        for (int v : vtx_order)
            if (matchA[v] < 0) return v;
        return -1;
    };
    auto candidates = [&](int x) {
        std::vector<int> out;
        if (A.dim[x] == 0) {
            for (int y : classB.at(colA[x]))
                if (!usedB[y]) out.push_back(y);
            return out;
        }
        const auto& fx = A.fac[x];
        int anchor = matchA[fx[0].second];
        for (const auto& [slot, y] : B.cof[anchor]) {
            if (slot != 0 || usedB[y] || colB[y] != colA[x]) continue;
            const auto& fy = B.fac[y];
            if (fy.size() != fx.size()) continue;
            bool ok = true;
            for (size_t i = 0; i < fx.size() && ok; ++i)
                ok = fx[i].first == fy[i].first && matchA[fx[i].second] == fy[i].second;
            if (ok) out.push_back(y);
        }
        return out;
    };

    struct Frame {
        int x;
        std::vector<int> cands;
        size_t idx;
        size_t mark;
    };
    std::vector<Frame> stack;
    {
        int x0 = pick_next();
        if (x0 < 0) return T == 0;
        stack.push_back({x0, candidates(x0), 0, ready.size()});
    }
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.idx > 0) unplace(f.x, f.mark);
        if (f.idx == f.cands.size()) {
            stack.pop_back();
            if (!stack.empty()) continue;
            return false;
        }
        int y = f.cands[f.idx++];
        place(f.x, y);
        if (placed == T) return true;
        int nx = pick_next();
        stack.push_back({nx, candidates(nx), 0, ready.size()});
    }
    return false;
}

}
