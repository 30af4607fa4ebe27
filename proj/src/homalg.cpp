#include "topo/homalg.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "topo/error.hpp"

namespace topo {

namespace {

std::string at_node(int n, int k) {
    return "(" + std::to_string(n) + "," + std::to_string(k) + ")";
}

// Rows `idx` of m, in the given order.
Matrix take_rows(const Matrix& m, const std::vector<int>& idx) {
    Matrix r((int)idx.size(), m.cols);
    for (int i = 0; i < (int)idx.size(); ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = m.at(idx[i], j);
    return r;
}

// First `rows` rows of m.
Matrix head_rows(const Matrix& m, int rows) {
    Matrix r(rows, m.cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(i, j) = m.at(i, j);
    return r;
}

void require_reduced(const Matrix& m, int64_t p, const std::string& what) {
    for (auto v : m.a)
        if (v < 0 || v >= p) throw SchemaError(what + ": entries must be canonical residues mod p");
}

Matrix random_matrix(Rng& rng, int rows, int cols, int64_t p) {
    Matrix m(rows, cols);
    for (auto& v : m.a) v = (int64_t)rng.below((uint64_t)p);
    return m;
}

// Uniform element(s) of the column span of K.
Matrix random_combination(Rng& rng, const Matrix& K, int cols, int64_t p) {
    return mat_mul(K, random_matrix(rng, K.cols, cols, p), p);
}

// Deterministic Fisher-Yates driven by Rng::below.
std::vector<int> shuffled_indices(int n, Rng& rng) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[i], perm[(int)rng.below((uint64_t)i + 1)]);
    return perm;
}

// Solve m x = b; with rng, permute the columns first so the free-variable
// choice (and hence the particular lift) changes while staying a solution.
Matrix lift_solve(const Matrix& m, const Matrix& b, int64_t p, Rng* rng,
                  const char* what) {
    if (!rng) {
        auto x = solve(m, b, p);
        if (!x) throw InvariantError(std::string(what) + ": lift has no solution");
        return *x;
    }
    std::vector<int> perm = shuffled_indices(m.cols, *rng);
    auto x = solve(take_cols(m, perm), b, p);
    if (!x) throw InvariantError(std::string(what) + ": lift has no solution");
    Matrix out(m.cols, b.cols);
    for (int i = 0; i < m.cols; ++i)
        for (int j = 0; j < b.cols; ++j) out.at(perm[i], j) = x->at(i, j);
    return out;
}

}

// ---------------------------------------------------------------- complexes

Matrix ChainComplex::diff(int n) const {
    if (n >= 1 && n <= top() && n < (int)d.size()) return d[n];
    return Matrix(dim(n - 1), dim(n));
}

void ChainComplex::check() const {
    if (ring != 0) require_prime(ring);
    if (dims.empty()) throw SchemaError("complex: empty grading");
    if (d.size() != dims.size())
        throw SchemaError("complex: need one differential slot per degree");
    for (int n = 0; n <= top(); ++n) {
        if (dims[n] < 0) throw SchemaError("complex: negative dimension");
        int want_rows = n == 0 ? 0 : dim(n - 1);
        if (d[n].rows != want_rows || d[n].cols != dim(n))
            throw SchemaError("complex: differential shape mismatch at degree " +
                              std::to_string(n));
        if (ring != 0) require_reduced(d[n], ring, "complex differential");
    }
    for (int n = 2; n <= top(); ++n) {
        Matrix z = ring != 0 ? mat_mul(d[n - 1], d[n], ring) : mat_mul_int(d[n - 1], d[n]);
        if (!is_zero(z))
            throw InvariantError("complex: dd != 0 at degree " + std::to_string(n));
    }
}

std::vector<int> homology_dims(const ChainComplex& C) {
    C.check();
    if (C.ring == 0) throw SchemaError("homology_dims: integer complex, use homology_int");
    std::vector<int> h(C.top() + 1);
    for (int n = 0; n <= C.top(); ++n)
        h[n] = C.dim(n) - rank(C.diff(n), C.ring) - rank(C.diff(n + 1), C.ring);
    return h;
}

std::vector<IntHomology> homology_int(const ChainComplex& C) {
    C.check();
    if (C.ring != 0) throw SchemaError("homology_int: complex is not over the integers");
    std::vector<int> ranks(C.top() + 2, 0);
    std::vector<std::vector<int64_t>> tors(C.top() + 2);
    for (int n = 1; n <= C.top(); ++n) {
        Snf s = snf(C.diff(n));
        for (int i = 0; i < std::min(s.D.rows, s.D.cols); ++i) {
            int64_t v = s.D.at(i, i);
            if (v == 0) continue;
            ++ranks[n];
            if (v > 1) tors[n].push_back(v);
        }
    }
    std::vector<IntHomology> h(C.top() + 1);
    for (int n = 0; n <= C.top(); ++n) {
        h[n].betti = C.dim(n) - ranks[n] - ranks[n + 1];
        h[n].torsion = tors[n + 1];
    }
    return h;
}

Subquotient homology_space(const ChainComplex& C, int n) {
    if (C.ring == 0) throw SchemaError("homology_space: needs field coefficients");
    if (n < 0 || n > C.top()) return make_subquotient(Matrix(0, 0), Matrix(0, 0), 0, C.ring);
    return make_subquotient(nullspace(C.diff(n), C.ring), C.diff(n + 1), C.dim(n), C.ring);
}

namespace {

Matrix map_at(const std::vector<Matrix>& f, int n, int rows, int cols, const char* what) {
    if (n < 0 || n >= (int)f.size()) return Matrix(rows, cols);
    if (f[n].rows != rows || f[n].cols != cols)
        throw SchemaError(std::string(what) + ": shape mismatch at degree " + std::to_string(n));
    return f[n];
}

void check_chain_map(const ChainComplex& A, const ChainComplex& B,
                     const std::vector<Matrix>& f, const char* what) {
    if (A.ring != B.ring || A.ring == 0)
        throw SchemaError(std::string(what) + ": complexes must share a prime field");
    int64_t p = A.ring;
    int t = std::max(A.top(), B.top());
    for (int n = 1; n <= t; ++n) {
        Matrix lhs = mat_mul(map_at(f, n - 1, B.dim(n - 1), A.dim(n - 1), what), A.diff(n), p);
        Matrix rhs = mat_mul(B.diff(n), map_at(f, n, B.dim(n), A.dim(n), what), p);
        if (!(lhs == rhs))
            throw InvariantError(std::string(what) + ": not a chain map at degree " +
                                 std::to_string(n));
    }
}

}

Matrix induced_map(const ChainComplex& A, const ChainComplex& B,
                   const std::vector<Matrix>& f, int n) {
    check_chain_map(A, B, f, "induced_map");
    Subquotient ha = homology_space(A, n);
    Subquotient hb = homology_space(B, n);
    Matrix fn = map_at(f, n, B.dim(n), A.dim(n), "induced_map");
    return hb.coords(mat_mul(fn, ha.basis_lift(), A.ring));
}

Matrix connecting_map(const ChainComplex& A, const ChainComplex& B,
                      const ChainComplex& C, const std::vector<Matrix>& incl,
                      const std::vector<Matrix>& proj, int p_deg,
                      uint64_t lift_seed) {
    A.check();
    B.check();
    C.check();
    if (A.ring != B.ring || B.ring != C.ring || A.ring == 0)
        throw SchemaError("connecting_map: complexes must share a prime field");
    if (p_deg < 0) throw SchemaError("connecting_map: negative degree");
    int64_t p = A.ring;
    check_chain_map(A, B, incl, "connecting_map inclusion");
    check_chain_map(B, C, proj, "connecting_map projection");
    int t = std::max({A.top(), B.top(), C.top()});
    for (int n = 0; n <= t; ++n) {
        Matrix in = map_at(incl, n, B.dim(n), A.dim(n), "connecting_map inclusion");
        Matrix pn = map_at(proj, n, C.dim(n), B.dim(n), "connecting_map projection");
        if (rank(in, p) != A.dim(n))
            throw InvariantError("connecting_map: inclusion not injective at degree " +
                                 std::to_string(n));
        if (rank(pn, p) != C.dim(n))
            throw InvariantError("connecting_map: projection not surjective at degree " +
                                 std::to_string(n));
        if (!is_zero(mat_mul(pn, in, p)))
            throw InvariantError("connecting_map: proj . incl != 0 at degree " +
                                 std::to_string(n));
        if (A.dim(n) + C.dim(n) != B.dim(n))
            throw InvariantError("connecting_map: not exact in the middle at degree " +
                                 std::to_string(n));
    }
    Subquotient hc = homology_space(C, p_deg);
    Subquotient ha = homology_space(A, p_deg - 1);
    if (p_deg == 0) return Matrix(0, hc.dim());

    Rng rng(lift_seed);
    Rng* shuffle = lift_seed != 0 ? &rng : nullptr;
    Matrix pn = map_at(proj, p_deg, C.dim(p_deg), B.dim(p_deg), "connecting_map projection");
    Matrix in = map_at(incl, p_deg - 1, B.dim(p_deg - 1), A.dim(p_deg - 1),
                       "connecting_map inclusion");
    Matrix x = lift_solve(pn, hc.basis_lift(), p, shuffle, "connecting_map");
    Matrix w = mat_mul(B.diff(p_deg), x, p);
    Matrix a = lift_solve(in, w, p, shuffle, "connecting_map");
    return ha.coords(a);
}

// ---------------------------------------------------------------- bicomplex

int Bicomplex::Q() const {
    int q = 0;
    for (const auto& c : dims) q = std::max(q, (int)c.size());
    return q - 1;
}

int Bicomplex::dim(int n, int q) const {
    if (n < 0 || n >= (int)dims.size() || q < 0 || q >= (int)dims[n].size()) return 0;
    return dims[n][q];
}

Matrix Bicomplex::dh_at(int n, int q) const {
    auto it = dh.find({n, q});
    if (it != dh.end()) return it->second;
    return Matrix(dim(n - 1, q), dim(n, q));
}

Matrix Bicomplex::dv_at(int n, int q) const {
    auto it = dv.find({n, q});
    if (it != dv.end()) return it->second;
    return Matrix(dim(n, q - 1), dim(n, q));
}

void Bicomplex::check() const {
    require_prime(p);
    for (const auto& c : dims)
        for (int v : c)
            if (v < 0) throw SchemaError("bicomplex: negative dimension");
    for (const auto& [key, m] : dh) {
        auto [n, q] = key;
        if (m.rows != dim(n - 1, q) || m.cols != dim(n, q))
            throw SchemaError("bicomplex: dh shape mismatch at " + at_node(n, q));
        require_reduced(m, p, "bicomplex dh");
    }
    for (const auto& [key, m] : dv) {
        auto [n, q] = key;
        if (m.rows != dim(n, q - 1) || m.cols != dim(n, q))
            throw SchemaError("bicomplex: dv shape mismatch at " + at_node(n, q));
        require_reduced(m, p, "bicomplex dv");
    }
    for (int n = 0; n <= N(); ++n)
        for (int q = 0; q <= Q(); ++q) {
            if (dim(n, q) == 0) continue;
            if (!is_zero(mat_mul(dh_at(n - 1, q), dh_at(n, q), p)))
                throw InvariantError("bicomplex: dh dh != 0 at " + at_node(n, q));
            if (!is_zero(mat_mul(dv_at(n, q - 1), dv_at(n, q), p)))
                throw InvariantError("bicomplex: dv dv != 0 at " + at_node(n, q));
            Matrix a = mat_mul(dh_at(n, q - 1), dv_at(n, q), p);
            Matrix b = mat_mul(dv_at(n - 1, q), dh_at(n, q), p);
            if (!(a == b))
                throw InvariantError("bicomplex: dh dv != dv dh at " + at_node(n, q));
        }
}

Bicomplex flip(const Bicomplex& B) {
    Bicomplex F;
    F.p = B.p;
    F.dims.assign(B.Q() + 1, std::vector<int>(B.N() + 1, 0));
    for (int n = 0; n <= B.N(); ++n)
        for (int q = 0; q <= B.Q(); ++q) F.dims[q][n] = B.dim(n, q);
    for (int m = 0; m <= B.Q(); ++m)
        for (int l = 0; l <= B.N(); ++l) {
            if (F.dims[m][l] == 0) continue;
            if (m >= 1 && B.dim(l, m - 1) > 0) F.dh[{m, l}] = B.dv_at(l, m);
            if (l >= 1 && B.dim(l - 1, m) > 0) F.dv[{m, l}] = B.dh_at(l, m);
        }
    return F;
}

namespace {

// Block layout of the degree-t part of the total complex, columns <= smax.
struct TotLayout {
    std::vector<std::pair<int, int>> blocks;  // (n, q), ascending n
    std::vector<int> off;
    int dim = 0;
};

TotLayout layout_of(const Bicomplex& B, int t, int smax) {
    TotLayout L;
    for (int n = 0; n <= std::min(smax, B.N()); ++n) {
        int q = t - n;
        if (q < 0 || q > B.Q() || B.dim(n, q) == 0) continue;
        L.blocks.push_back({n, q});
        L.off.push_back(L.dim);
        L.dim += B.dim(n, q);
    }
    return L;
}

// Differential of the (columns <= smax)-truncated total complex at degree t.
Matrix total_diff(const Bicomplex& B, int t, int smax) {
    TotLayout src = layout_of(B, t, smax);
    TotLayout tgt = layout_of(B, t - 1, smax);
    std::map<std::pair<int, int>, int> pos;
    for (size_t i = 0; i < tgt.blocks.size(); ++i) pos[tgt.blocks[i]] = tgt.off[i];
    Matrix M(tgt.dim, src.dim);
    for (size_t b = 0; b < src.blocks.size(); ++b) {
        auto [n, q] = src.blocks[b];
        int co = src.off[b];
        if (auto it = pos.find({n - 1, q}); it != pos.end()) {
            Matrix dh = B.dh_at(n, q);
            for (int i = 0; i < dh.rows; ++i)
                for (int j = 0; j < dh.cols; ++j)
                    M.at(it->second + i, co + j) =
                        fp_add(M.at(it->second + i, co + j), dh.at(i, j), B.p);
        }
        if (auto it = pos.find({n, q - 1}); it != pos.end()) {
            Matrix dvm = B.dv_at(n, q);
            int64_t sgn = n % 2 == 0 ? 1 : B.p - 1;
            for (int i = 0; i < dvm.rows; ++i)
                for (int j = 0; j < dvm.cols; ++j)
                    M.at(it->second + i, co + j) = fp_add(
                        M.at(it->second + i, co + j), fp_mul(sgn, dvm.at(i, j), B.p), B.p);
        }
    }
    return M;
}

ChainComplex truncated_total(const Bicomplex& B, int smax) {
    ChainComplex T;
    T.ring = B.p;
    int tmax = B.N() + B.Q();
    T.dims.resize(tmax + 1);
    T.d.resize(tmax + 1);
    for (int t = 0; t <= tmax; ++t) T.dims[t] = layout_of(B, t, smax).dim;
    T.d[0] = Matrix(0, T.dims[0]);
    for (int t = 1; t <= tmax; ++t) T.d[t] = total_diff(B, t, smax);
    return T;
}

// Coordinate inclusion of the (columns <= s_from) truncation into the
// (columns <= s_to) one at degree t, s_from <= s_to.
Matrix truncation_embed(const Bicomplex& B, int t, int s_from, int s_to) {
    TotLayout from = layout_of(B, t, s_from);
    TotLayout to = layout_of(B, t, s_to);
    std::map<std::pair<int, int>, int> pos;
    for (size_t i = 0; i < to.blocks.size(); ++i) pos[to.blocks[i]] = to.off[i];
    Matrix M(to.dim, from.dim);
    for (size_t b = 0; b < from.blocks.size(); ++b) {
        int ro = pos.at(from.blocks[b]);
        for (int i = 0; i < B.dim(from.blocks[b].first, from.blocks[b].second); ++i)
            M.at(ro + i, from.off[b] + i) = 1;
    }
    return M;
}

}

ChainComplex total(const Bicomplex& B) {
    B.check();
    ChainComplex T = truncated_total(B, B.N());
    T.check();
    return T;
}

// ------------------------------------------------------------ exact couples

namespace {

int map_dim(const std::map<std::pair<int, int>, int>& m, int n, int k) {
    auto it = m.find({n, k});
    return it == m.end() ? 0 : it->second;
}

}

int ExactCouple::ddim(int n, int k) const { return map_dim(D, n, k); }
int ExactCouple::edim(int n, int k) const { return map_dim(E, n, k); }

Matrix ExactCouple::alpha_at(int n, int k) const {
    auto it = alpha.find({n, k});
    if (it != alpha.end()) return it->second;
    return Matrix(ddim(n + 1, k - 1), ddim(n, k));
}

Matrix ExactCouple::beta_at(int n, int k) const {
    auto it = beta.find({n, k});
    if (it != beta.end()) return it->second;
    return Matrix(edim(n - (stage - 1), k + (stage - 1)), ddim(n, k));
}

Matrix ExactCouple::gamma_at(int n, int k) const {
    auto it = gamma.find({n, k});
    if (it != gamma.end()) return it->second;
    return Matrix(ddim(n - 1, k), edim(n, k));
}

void ExactCouple::check_shapes() const {
    require_prime(p);
    if (stage < 1) throw SchemaError("couple: stage must be >= 1");
    for (const auto& [key, v] : D)
        if (v <= 0) throw SchemaError("couple: stored D dimension must be positive");
    for (const auto& [key, v] : E)
        if (v <= 0) throw SchemaError("couple: stored E dimension must be positive");
    int s = stage - 1;
    for (const auto& [key, m] : alpha) {
        auto [n, k] = key;
        if (m.rows != ddim(n + 1, k - 1) || m.cols != ddim(n, k))
            throw SchemaError("couple: alpha shape mismatch at " + at_node(n, k));
        require_reduced(m, p, "couple alpha");
    }
    for (const auto& [key, m] : beta) {
        auto [n, k] = key;
        if (m.rows != edim(n - s, k + s) || m.cols != ddim(n, k))
            throw SchemaError("couple: beta shape mismatch at " + at_node(n, k));
        require_reduced(m, p, "couple beta");
    }
    for (const auto& [key, m] : gamma) {
        auto [n, k] = key;
        if (m.rows != ddim(n - 1, k) || m.cols != edim(n, k))
            throw SchemaError("couple: gamma shape mismatch at " + at_node(n, k));
        require_reduced(m, p, "couple gamma");
    }
}

CoupleReport couple_check(const ExactCouple& c, bool skip_base_alpha) {
    c.check_shapes();
    CoupleReport rep;
    int s = c.stage - 1;
    auto record = [&](int where, int n, int k, const Matrix& ker_basis, const Matrix& image) {
        int kd = ker_basis.cols;
        int id = rank(image, c.p);
        bool contained = rank(hstack(ker_basis, image), c.p) == kd;
        if (kd - id != 0 || !contained) {
            rep.ok = false;
            rep.defects.push_back({where, n, k, kd - id, contained});
        }
    };
    for (const auto& [key, dd] : c.D) {
        auto [n, k] = key;
        record(1, n, k, nullspace(c.beta_at(n, k), c.p), c.alpha_at(n - 1, k + 1));
        if (c.alpha.count(key) && !(skip_base_alpha && k == 0))
            record(3, n, k, nullspace(c.alpha_at(n, k), c.p), c.gamma_at(n + 1, k));
        (void)dd;
    }
    for (const auto& [key, ed] : c.E) {
        auto [n, k] = key;
        record(2, n, k, nullspace(c.gamma_at(n, k), c.p), c.beta_at(n + s, k - s));
        (void)ed;
    }
    return rep;
}

ExactCouple derived_couple(const ExactCouple& c) {
    c.check_shapes();
    int64_t p = c.p;
    int s = c.stage - 1;
    ExactCouple out;
    out.p = p;
    out.stage = c.stage + 1;

    // D' = im alpha, coordinatized by the pivot columns of the arriving alpha.
    std::map<std::pair<int, int>, Matrix> dbasis;
    for (const auto& [key, dd] : c.D) {
        auto [n, k] = key;
        Matrix P = col_basis(c.alpha_at(n - 1, k + 1), p);
        if (P.cols == 0) continue;
        dbasis[key] = P;
        out.D[key] = P.cols;
        (void)dd;
    }
    // E' = ker(beta gamma) / im(beta gamma).
    std::map<std::pair<int, int>, Subquotient> esub;
    for (const auto& [key, ed] : c.E) {
        auto [n, k] = key;
        Matrix d_out = mat_mul(c.beta_at(n - 1, k), c.gamma_at(n, k), p);
        Matrix d_in = mat_mul(c.beta_at(n + s, k - s), c.gamma_at(n + 1 + s, k - s), p);
        Subquotient sq = make_subquotient(nullspace(d_out, p), d_in, ed, p);
        esub.emplace(key, sq);
        if (sq.dim() > 0) out.E[key] = sq.dim();
    }
    for (const auto& [key, P] : dbasis) {
        auto [n, k] = key;
        // alpha' restricts alpha to the image.
        Matrix aP = mat_mul(c.alpha_at(n, k), P, p);
        auto tgt = dbasis.find({n + 1, k - 1});
        if (tgt == dbasis.end()) {
            if (!is_zero(aP))
                throw InvariantError("derived couple: alpha leaves im alpha at " + at_node(n, k));
        } else if (c.alpha.count(key)) {
            auto m = solve(tgt->second, aP, p);
            if (!m)
                throw InvariantError("derived couple: alpha does not restrict at " + at_node(n, k));
            out.alpha[key] = *m;
        }
        // beta'(alpha x) = [beta x].
        Matrix x = lift_solve(c.alpha_at(n - 1, k + 1), P, p, nullptr, "derived couple beta");
        Matrix bx = mat_mul(c.beta_at(n - 1, k + 1), x, p);
        auto et = esub.find({n - 1 - s, k + 1 + s});
        if (et != esub.end()) {
            Matrix co = et->second.coords(bx);
            if (et->second.dim() > 0) out.beta[key] = co;
        }
    }
    for (const auto& [key, sq] : esub) {
        if (sq.dim() == 0) continue;
        auto [n, k] = key;
        // gamma' sends a class to gamma of a representative, which lies in
        // im alpha precisely when the input couple was exact.
        Matrix g = mat_mul(c.gamma_at(n, k), sq.basis_lift(), p);
        auto tgt = dbasis.find({n - 1, k});
        if (tgt == dbasis.end()) {
            if (!is_zero(g))
                throw InvariantError("derived couple: gamma misses im alpha at " + at_node(n, k));
        } else {
            auto m = solve(tgt->second, g, p);
            if (!m)
                throw InvariantError("derived couple: gamma misses im alpha at " + at_node(n, k));
            out.gamma[key] = *m;
        }
    }
    out.check_shapes();
    return out;
}

// ------------------------------------------------------------------- pages

int Page::dim(int n, int k) const { return map_dim(dims, n, k); }

int Page::rank_out(int n, int k) const {
    auto it = d.find({n, k});
    return it == d.end() ? 0 : rank(it->second, p);
}

std::vector<Page> pages(const ExactCouple& c, int r_max) {
    c.check_shapes();
    if (c.stage != 1)
        throw SchemaError("pages: expected an underived (stage 1) couple");
    if (r_max < 1) throw SchemaError("pages: r_max must be >= 1");
    int64_t p = c.p;

    // alpha composed `steps` times leaving D(n,k); absent entries act as zero.
    auto alpha_pow = [&](int n, int k, int steps) {
        Matrix M = Matrix::identity(c.ddim(n, k));
        int cn = n, ck = k;
        for (int i = 0; i < steps; ++i) {
            M = mat_mul(c.alpha_at(cn, ck), M, p);
            ++cn;
            --ck;
        }
        return M;
    };

    std::vector<Page> out;
    for (int r = 1; r <= r_max; ++r) {
        Page pg;
        pg.p = p;
        pg.r = r;
        std::map<std::pair<int, int>, Subquotient> reps;
        for (const auto& [key, e] : c.E) {
            auto [n, k] = key;
            // Z^r = gamma^{-1}(im alpha^{r-1}), B^r = beta(ker alpha^{r-1}).
            Matrix G = c.gamma_at(n, k);
            Matrix Z;
            if (c.ddim(n - 1, k) == 0) {
                Z = Matrix::identity(e);
            } else {
                Matrix A = alpha_pow(n - r, k + r - 1, r - 1);
                Matrix ns = nullspace(hstack(G, mat_scale(A, p - 1, p)), p);
                Z = col_basis(head_rows(ns, e), p);
            }
            Matrix K = nullspace(alpha_pow(n, k, r - 1), p);
            Matrix B = mat_mul(c.beta_at(n, k), K, p);
            Subquotient sq = make_subquotient(Z, B, e, p);
            if (sq.dim() == 0) continue;
            reps.emplace(key, sq);
            pg.dims[key] = sq.dim();
        }
        for (const auto& [key, sq] : reps) {
            auto [n, k] = key;
            auto tgt = reps.find({n - r, k + r - 1});
            if (tgt == reps.end()) continue;
            Matrix ge = mat_mul(c.gamma_at(n, k), sq.basis_lift(), p);
            Matrix A = alpha_pow(n - r, k + r - 1, r - 1);
            auto x = solve(A, ge, p);
            if (!x)
                throw InvariantError("pages: differential lift failed at " + at_node(n, k) +
                                     " (couple not exact along the staircase)");
            Matrix bx = mat_mul(c.beta_at(n - r, k + r - 1), *x, p);
            pg.d[key] = tgt->second.coords(bx);
        }
        for (const auto& [key, m] : pg.d) {
            auto [n, k] = key;
            auto next = pg.d.find({n - r, k + r - 1});
            if (next != pg.d.end() && !is_zero(mat_mul(next->second, m, p)))
                throw InvariantError("pages: d^r d^r != 0 at " + at_node(n, k));
        }
        out.push_back(std::move(pg));
    }
    return out;
}

void check_page_bookkeeping(const std::vector<Page>& pgs) {
    for (size_t i = 0; i + 1 < pgs.size(); ++i) {
        const Page& cur = pgs[i];
        const Page& nxt = pgs[i + 1];
        int r = cur.r;
        std::set<std::pair<int, int>> keys;
        for (const auto& [key, v] : cur.dims) keys.insert(key);
        for (const auto& [key, v] : nxt.dims) keys.insert(key);
        for (auto [n, k] : keys) {
            int rank_in = 0;
            if (auto it = cur.d.find({n + r, k - r + 1}); it != cur.d.end())
                rank_in = rank(it->second, cur.p);
            int expect = cur.dim(n, k) - cur.rank_out(n, k) - rank_in;
            if (expect != nxt.dim(n, k))
                throw InvariantError(
                    "page bookkeeping: dim E^" + std::to_string(nxt.r) + at_node(n, k) +
                    " = " + std::to_string(nxt.dim(n, k)) + ", expected " +
                    std::to_string(expect) + " from page " + std::to_string(r));
        }
    }
}

bool pages_match(const std::vector<Page>& a, const std::vector<Page>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].r != b[i].r || a[i].dims != b[i].dims) return false;
        std::set<std::pair<int, int>> keys;
        for (const auto& [key, m] : a[i].d) keys.insert(key);
        for (const auto& [key, m] : b[i].d) keys.insert(key);
        for (auto [n, k] : keys)
            if (a[i].rank_out(n, k) != b[i].rank_out(n, k)) return false;
    }
    return true;
}

// -------------------------------------------- filtration spectral sequences

namespace {

// Shared machinery of the staircase constructions: total-degree layouts,
// total differentials, and the filtration subspaces
//   Z(s,t,r) = { x in F_s of degree t : d x in F_{s-r} }.
struct Staircase {
    const Bicomplex& B;
    int64_t p;
    int N, Q, tmax;
    std::vector<TotLayout> lay;
    std::vector<Matrix> Dt;

    explicit Staircase(const Bicomplex& B_)
        : B(B_), p(B_.p), N(B_.N()), Q(B_.Q()), tmax(N + Q), lay(tmax + 1), Dt(tmax + 1) {
        for (int t = 0; t <= tmax; ++t) {
            lay[t] = layout_of(B, t, N);
            Dt[t] = total_diff(B, t, N);
        }
    }

    // Coordinates of the blocks in columns > bound at degree t.
    std::vector<int> high_rows(int t, int bound) const {
        std::vector<int> idx;
        if (t < 0 || t > tmax) return idx;
        const TotLayout& L = lay[t];
        for (size_t b = 0; b < L.blocks.size(); ++b)
            if (L.blocks[b].first > bound)
                for (int i = 0; i < B.dim(L.blocks[b].first, L.blocks[b].second); ++i)
                    idx.push_back(L.off[b] + i);
        return idx;
    }

    // Coordinate inclusion of F_s into the full degree-t space.
    Matrix fmat(int s, int t) const {
        const TotLayout& L = lay[t];
        std::vector<int> idx;
        for (size_t b = 0; b < L.blocks.size(); ++b)
            if (L.blocks[b].first <= s)
                for (int i = 0; i < B.dim(L.blocks[b].first, L.blocks[b].second); ++i)
                    idx.push_back(L.off[b] + i);
        Matrix M(L.dim, (int)idx.size());
        for (int j = 0; j < (int)idx.size(); ++j) M.at(idx[j], j) = 1;
        return M;
    }

    // Basis of Z(s,t,r), as ambient columns.
    Matrix zmat(int s, int t, int r) const {
        if (t < 0 || t > tmax) return Matrix(0, 0);
        if (s < 0) return Matrix(lay[t].dim, 0);
        Matrix F = fmat(s, t);
        Matrix R = take_rows(mat_mul(Dt[t], F, p), high_rows(t - 1, s - r));
        return mat_mul(F, nullspace(R, p), p);
    }

    // E^r(s,k) = Z(s,t,r) / (Z(s-1,t,r-1) + d Z(s+r-1,t+1,r-1)), t = s + k.
    Subquotient space(int r, int s, int k) const {
        int t = s + k;
        Matrix Znum = zmat(s, t, r);
        Matrix Zden = zmat(s - 1, t, r - 1);
        Matrix Zup = zmat(s + r - 1, t + 1, r - 1);
        Matrix bdry = t + 1 <= tmax ? mat_mul(Dt[t + 1], Zup, p) : Matrix(lay[t].dim, 0);
        return make_subquotient(Znum, hstack(Zden, bdry), lay[t].dim, p);
    }
};

}

std::vector<Page> staircase_pages(const Bicomplex& Bin, Filtration f, int r_max) {
    if (r_max < 1) throw SchemaError("staircase_pages: r_max must be >= 1");
    Bicomplex B = f == Filtration::row ? flip(Bin) : Bin;
    B.check();
    Staircase st(B);

    std::vector<Page> out;
    for (int r = 1; r <= r_max; ++r) {
        Page pg;
        pg.p = st.p;
        pg.r = r;
        std::map<std::pair<int, int>, Subquotient> sq;
        for (int s = 0; s <= st.N; ++s)
            for (int q = 0; q <= st.Q; ++q) {
                Subquotient S = st.space(r, s, q);
                if (S.dim() == 0) continue;
                sq.emplace(std::make_pair(s, q), S);
                pg.dims[{s, q}] = S.dim();
            }
        for (const auto& [key, S] : sq) {
            auto [s, q] = key;
            auto tgt = sq.find({s - r, q + r - 1});
            if (tgt == sq.end()) continue;
            Matrix dx = mat_mul(st.Dt[s + q], S.basis_lift(), st.p);
            pg.d[key] = tgt->second.coords(dx);
        }
        out.push_back(std::move(pg));
    }
    return out;
}

std::vector<TotBlock> total_layout(const Bicomplex& B, int t) {
    std::vector<TotBlock> out;
    if (t < 0 || t > B.N() + B.Q()) return out;
    TotLayout L = layout_of(B, t, B.N());
    for (size_t b = 0; b < L.blocks.size(); ++b)
        out.push_back({L.blocks[b].first, L.blocks[b].second, L.off[b]});
    return out;
}

Subquotient staircase_space(const Bicomplex& Bin, Filtration f, int r, int s, int k) {
    if (r < 1) throw SchemaError("staircase_space: r must be >= 1");
    Bicomplex B = f == Filtration::row ? flip(Bin) : Bin;
    B.check();
    if (s < 0 || s > B.N() || k < 0 || k > B.Q())
        throw SchemaError("staircase_space: node outside the window");
    return Staircase(B).space(r, s, k);
}

ExactCouple filtration_couple(const Bicomplex& Bin, Filtration f, int r_pad) {
    Bicomplex B = f == Filtration::row ? flip(Bin) : Bin;
    B.check();
    int64_t p = B.p;
    int N = B.N(), Q = B.Q();
    int S = N + std::max(r_pad, 1);
    int tmax = N + Q;

    std::vector<ChainComplex> F(S + 1);
    for (int s = 0; s <= S; ++s) F[s] = truncated_total(B, std::min(s, N));

    // F_s/F_{s-1} is column s reindexed by total degree; the differential
    // carries the totalization sign (-1)^s so the projection is a chain map.
    auto quotient = [&](int s) {
        ChainComplex Qc;
        Qc.ring = p;
        Qc.dims.assign(tmax + 1, 0);
        Qc.d.assign(tmax + 1, Matrix());
        for (int t = 0; t <= tmax; ++t) Qc.dims[t] = B.dim(s, t - s);
        Qc.d[0] = Matrix(0, Qc.dims[0]);
        for (int t = 1; t <= tmax; ++t) {
            Matrix dv = B.dv_at(s, t - s);
            Qc.d[t] = s % 2 == 0 ? dv : mat_scale(dv, p - 1, p);
        }
        return Qc;
    };

    auto select = [&](int s) {
        std::vector<Matrix> pr(tmax + 1);
        for (int t = 0; t <= tmax; ++t) {
            TotLayout L = layout_of(B, t, std::min(s, N));
            Matrix m(B.dim(s, t - s), L.dim);
            for (size_t b = 0; b < L.blocks.size(); ++b)
                if (L.blocks[b].first == s)
                    for (int i = 0; i < B.dim(s, t - s); ++i) m.at(i, L.off[b] + i) = 1;
            pr[t] = m;
        }
        return pr;
    };

    ExactCouple c;
    c.p = p;
    c.stage = 1;
    for (int s = 0; s <= S; ++s) {
        std::vector<int> h = homology_dims(F[s]);
        for (int t = 0; t <= tmax; ++t)
            if (h[t] > 0) c.D[{s, t - s}] = h[t];
    }
    for (int s = 0; s <= N; ++s) {
        std::vector<int> h = homology_dims(quotient(s));
        for (int t = 0; t <= tmax; ++t)
            if (h[t] > 0) c.E[{s, t - s}] = h[t];
    }
    for (int s = 0; s < S; ++s) {
        std::vector<Matrix> emb(tmax + 1);
        for (int t = 0; t <= tmax; ++t)
            emb[t] = truncation_embed(B, t, std::min(s, N), std::min(s + 1, N));
        for (int t = 0; t <= tmax; ++t)
            if (c.ddim(s, t - s) > 0)
                c.alpha[{s, t - s}] = induced_map(F[s], F[s + 1], emb, t);
    }
    for (int s = 0; s <= N; ++s) {
        ChainComplex Qc = quotient(s);
        std::vector<Matrix> pr = select(s);
        std::vector<Matrix> emb(tmax + 1);
        for (int t = 0; t <= tmax; ++t)
            emb[t] = truncation_embed(B, t, std::min(s - 1, N), std::min(s, N));
        for (int t = 0; t <= tmax; ++t) {
            int k = t - s;
            if (c.edim(s, k) == 0) continue;
            if (c.ddim(s, k) > 0) c.beta[{s, k}] = induced_map(F[s], Qc, pr, t);
            if (s >= 1 && c.ddim(s - 1, k) > 0)
                c.gamma[{s, k}] = connecting_map(F[s - 1], F[s], Qc, emb, pr, t);
        }
    }
    c.check_shapes();
    return c;
}

// ------------------------------------------------------------- generators

ChainComplex random_complex(Rng& rng, int64_t p, int top, int maxdim) {
    require_prime(p);
    if (top < 0 || maxdim < 0) throw SchemaError("random_complex: bad bounds");
    ChainComplex C;
    C.ring = p;
    C.dims.resize(top + 1);
    C.d.resize(top + 1);
    for (int q = 0; q <= top; ++q) C.dims[q] = (int)rng.below((uint64_t)maxdim + 1);
    C.d[0] = Matrix(0, C.dim(0));
    for (int q = 1; q <= top; ++q) {
        Matrix K = nullspace(C.diff(q - 1), p);
        C.d[q] = random_combination(rng, K, C.dim(q), p);
    }
    C.check();
    return C;
}

ChainComplex cone_of_identity(Rng& rng, int64_t p, int top, int maxdim) {
    require_prime(p);
    if (top < 1) {
        ChainComplex C;
        C.ring = p;
        C.dims = {0};
        C.d = {Matrix(0, 0)};
        return C;
    }
    ChainComplex W = random_complex(rng, p, top - 1, maxdim);
    ChainComplex C;
    C.ring = p;
    C.dims.resize(top + 1);
    C.d.resize(top + 1);
    for (int q = 0; q <= top; ++q) C.dims[q] = W.dim(q - 1) + W.dim(q);
    C.d[0] = Matrix(0, C.dim(0));
    for (int q = 1; q <= top; ++q) {
        // d(a, b) = (-da, a + db) on W_{q-1} + W_q.
        Matrix m(C.dim(q - 1), C.dim(q));
        Matrix dq1 = W.diff(q - 1);
        Matrix dq = W.diff(q);
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

Extension random_extension(Rng& rng, const ChainComplex& A, const ChainComplex& C) {
    A.check();
    C.check();
    if (A.ring != C.ring || A.ring == 0)
        throw SchemaError("random_extension: complexes must share a prime field");
    int64_t p = A.ring;
    int T = std::max(A.top(), C.top());

    // Unknowns: entries of psi_q: C_q -> A_{q-1}.  The glued differential
    // squares to zero iff dA psi + psi dC = 0 in every degree.
    std::vector<int> off(T + 1, 0);
    int nvar = 0;
    for (int q = 1; q <= T; ++q) {
        off[q] = nvar;
        nvar += A.dim(q - 1) * C.dim(q);
    }
    auto vid = [&](int q, int i, int j) { return off[q] + i * C.dim(q) + j; };

    int neq = 0;
    for (int q = 2; q <= T; ++q) neq += A.dim(q - 2) * C.dim(q);
    Matrix Eq(neq, nvar);
    int row = 0;
    for (int q = 2; q <= T; ++q) {
        Matrix dA = A.diff(q - 1), dC = C.diff(q);
        for (int i = 0; i < A.dim(q - 2); ++i)
            for (int j = 0; j < C.dim(q); ++j) {
                for (int k = 0; k < A.dim(q - 1); ++k)
                    Eq.at(row, vid(q, k, j)) =
                        fp_add(Eq.at(row, vid(q, k, j)), dA.at(i, k), p);
                for (int l = 0; l < C.dim(q - 1); ++l)
                    Eq.at(row, vid(q - 1, i, l)) =
                        fp_add(Eq.at(row, vid(q - 1, i, l)), dC.at(l, j), p);
                ++row;
            }
    }
    Matrix v = random_combination(rng, nullspace(Eq, p), 1, p);

    Extension ext;
    ChainComplex& Bc = ext.total;
    Bc.ring = p;
    Bc.dims.resize(T + 1);
    Bc.d.resize(T + 1);
    for (int q = 0; q <= T; ++q) Bc.dims[q] = A.dim(q) + C.dim(q);
    Bc.d[0] = Matrix(0, Bc.dim(0));
    for (int q = 1; q <= T; ++q) {
        Matrix m(Bc.dim(q - 1), Bc.dim(q));
        Matrix dA = A.diff(q), dC = C.diff(q);
        for (int i = 0; i < dA.rows; ++i)
            for (int j = 0; j < dA.cols; ++j) m.at(i, j) = dA.at(i, j);
        for (int i = 0; i < A.dim(q - 1); ++i)
            for (int j = 0; j < C.dim(q); ++j) m.at(i, A.dim(q) + j) = v.at(vid(q, i, j), 0);
        for (int i = 0; i < dC.rows; ++i)
            for (int j = 0; j < dC.cols; ++j) m.at(A.dim(q - 1) + i, A.dim(q) + j) = dC.at(i, j);
        Bc.d[q] = m;
    }
    Bc.check();
    ext.incl.resize(T + 1);
    ext.proj.resize(T + 1);
    for (int q = 0; q <= T; ++q) {
        Matrix in(Bc.dim(q), A.dim(q));
        for (int i = 0; i < A.dim(q); ++i) in.at(i, i) = 1;
        Matrix pr(C.dim(q), Bc.dim(q));
        for (int i = 0; i < C.dim(q); ++i) pr.at(i, A.dim(q) + i) = 1;
        ext.incl[q] = in;
        ext.proj[q] = pr;
    }
    return ext;
}

Bicomplex random_bicomplex(Rng& rng, int64_t p, int N, int Q, int maxdim) {
    require_prime(p);
    if (N < 0 || Q < 0 || maxdim < 0) throw SchemaError("random_bicomplex: bad bounds");
    std::vector<ChainComplex> cols;
    for (int n = 0; n <= N; ++n) cols.push_back(random_complex(rng, p, Q, maxdim));
    Bicomplex B;
    B.p = p;
    B.dims.assign(N + 1, std::vector<int>(Q + 1, 0));
    for (int n = 0; n <= N; ++n)
        for (int q = 0; q <= Q; ++q) B.dims[n][q] = cols[n].dim(q);
    for (int n = 0; n <= N; ++n)
        for (int q = 1; q <= Q; ++q)
            if (B.dim(n, q) > 0 && B.dim(n, q - 1) > 0) B.dv[{n, q}] = cols[n].diff(q);

    // Each dh_n is drawn uniformly from the chain maps col_n -> col_{n-1}
    // that also compose to zero with the previous dh.
    std::vector<std::vector<Matrix>> dh(N + 1);
    for (int n = 1; n <= N; ++n) {
        const ChainComplex& src = cols[n];
        const ChainComplex& tgt = cols[n - 1];
        std::vector<int> off(Q + 1, 0);
        int nvar = 0;
        for (int q = 0; q <= Q; ++q) {
            off[q] = nvar;
            nvar += tgt.dim(q) * src.dim(q);
        }
        auto vid = [&](int q, int i, int j) { return off[q] + i * src.dim(q) + j; };

        int neq = 0;
        for (int q = 1; q <= Q; ++q) neq += tgt.dim(q - 1) * src.dim(q);
        if (n >= 2)
            for (int q = 0; q <= Q; ++q) neq += cols[n - 2].dim(q) * src.dim(q);
        Matrix Eq(neq, nvar);
        int row = 0;
        for (int q = 1; q <= Q; ++q) {
            Matrix dt = tgt.diff(q), ds = src.diff(q);
            for (int i = 0; i < tgt.dim(q - 1); ++i)
                for (int j = 0; j < src.dim(q); ++j) {
                    for (int k = 0; k < tgt.dim(q); ++k)
                        Eq.at(row, vid(q, k, j)) =
                            fp_add(Eq.at(row, vid(q, k, j)), dt.at(i, k), p);
                    for (int l = 0; l < src.dim(q - 1); ++l)
                        Eq.at(row, vid(q - 1, i, l)) =
                            fp_sub(Eq.at(row, vid(q - 1, i, l)), ds.at(l, j), p);
                    ++row;
                }
        }
        if (n >= 2)
            for (int q = 0; q <= Q; ++q) {
                const Matrix& prev = dh[n - 1][q];
                for (int i = 0; i < cols[n - 2].dim(q); ++i)
                    for (int j = 0; j < src.dim(q); ++j) {
                        for (int k = 0; k < tgt.dim(q); ++k)
                            Eq.at(row, vid(q, k, j)) =
                                fp_add(Eq.at(row, vid(q, k, j)), prev.at(i, k), p);
                        ++row;
                    }
            }
        Matrix v = random_combination(rng, nullspace(Eq, p), 1, p);
        dh[n].resize(Q + 1);
        for (int q = 0; q <= Q; ++q) {
            Matrix m(tgt.dim(q), src.dim(q));
            for (int i = 0; i < m.rows; ++i)
                for (int j = 0; j < m.cols; ++j) m.at(i, j) = v.at(vid(q, i, j), 0);
            dh[n][q] = m;
            if (m.rows > 0 && m.cols > 0) B.dh[{n, q}] = m;
        }
    }
    B.check();
    return B;
}

}
