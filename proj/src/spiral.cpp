// Homotopy spectral sequence of a bisimplicial vector space: Moore towers,
// inverse Dold-Kan, matching-space fibrancy diagnostics, the homotopy exact
// couple, and its chain-level lifting differentials.

#include "topo/spiral.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "topo/error.hpp"
#include "topo/fp.hpp"
#include "topo/sset.hpp"

namespace topo {

namespace {

std::string at_nq(int n, int q) {
    return "(" + std::to_string(n) + ", " + std::to_string(q) + ")";
}

bool same_matrix(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
}

void require_entries(const Matrix& m, int64_t p, const std::string& what) {
    for (int64_t v : m.a)
        if (v < 0 || v >= p) throw SchemaError(what + ": entries must be reduced mod p");
}

// Induced matrix of op on chosen subspace bases: the unique f with
// tgt_incl f = op src_incl, which exists precisely when op preserves the
// subspaces.
Matrix restrict_to(const Matrix& tgt_incl, const Matrix& op, const Matrix& src_incl,
                   int64_t p, const std::string& what) {
    auto f = solve(tgt_incl, mat_mul(op, src_incl, p), p);
    if (!f) throw InvariantError(what + ": operator does not preserve the subspace");
    return *f;
}

Matrix stack_faces(const std::vector<Matrix>& face, int cols, int lo, int hi) {
    Matrix st(0, cols);
    for (int i = lo; i <= hi; ++i) st = vstack(st, face[i]);
    return st;
}

// Block-diagonal sum of `copies` copies of m, acting componentwise on
// tuples.
Matrix tuple_op(const Matrix& m, int copies) {
    Matrix M(m.rows * copies, m.cols * copies);
    for (int c = 0; c < copies; ++c)
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) M.at(c * m.rows + i, c * m.cols + j) = m.at(i, j);
    return M;
}

void put_block(Matrix& M, int r0, int c0, const Matrix& blk) {
    for (int i = 0; i < blk.rows; ++i)
        for (int j = 0; j < blk.cols; ++j) M.at(r0 + i, c0 + j) = blk.at(i, j);
}

void put_identity(Matrix& M, int r0, int c0, int d) {
    for (int i = 0; i < d; ++i) M.at(r0 + i, c0 + i) = 1;
}

// The internal simplicial vector space sitting in column n of a bicomplex
// (vertical differential only).
ChainComplex column_complex(const Bicomplex& B, int n) {
    ChainComplex C;
    C.ring = B.p;
    int QQ = B.Q();
    C.dims.resize(QQ + 1);
    C.d.resize(QQ + 1);
    for (int q = 0; q <= QQ; ++q) C.dims[q] = B.dim(n, q);
    C.d[0] = Matrix(0, C.dims[0]);
    for (int q = 1; q <= QQ; ++q) C.d[q] = B.dv_at(n, q);
    return C;
}

}

// ----------------------------------------------------------- SimplicialVS

void SimplicialVS::check() const {
    require_prime(p);
    if (dims.empty()) throw SchemaError("simplicial space: level 0 is required");
    for (int v : dims)
        if (v < 0) throw SchemaError("simplicial space: negative dimension");
    int T = top();
    if ((int)face.size() != T + 1 || (int)degen.size() != T + 1)
        throw SchemaError("simplicial space: operator tables must cover every level");
    if (!face[0].empty()) throw SchemaError("simplicial space: level 0 has no faces");
    if (!degen[T].empty())
        throw SchemaError("simplicial space: degeneracies out of the top level leave the window");
    for (int q = 1; q <= T; ++q) {
        if ((int)face[q].size() != q + 1)
            throw SchemaError("simplicial space: level " + std::to_string(q) + " needs " +
                              std::to_string(q + 1) + " faces");
        for (int i = 0; i <= q; ++i) {
            const Matrix& m = face[q][i];
            if (m.rows != dims[q - 1] || m.cols != dims[q])
                throw SchemaError("simplicial space: face shape mismatch at level " +
                                  std::to_string(q));
            require_entries(m, p, "simplicial space");
        }
    }
    for (int q = 0; q < T; ++q) {
        if ((int)degen[q].size() != q + 1)
            throw SchemaError("simplicial space: level " + std::to_string(q) + " needs " +
                              std::to_string(q + 1) + " degeneracies");
        for (int i = 0; i <= q; ++i) {
            const Matrix& m = degen[q][i];
            if (m.rows != dims[q + 1] || m.cols != dims[q])
                throw SchemaError("simplicial space: degeneracy shape mismatch at level " +
                                  std::to_string(q));
            require_entries(m, p, "simplicial space");
        }
    }
    for (int q = 2; q <= T; ++q)
        for (int j = 1; j <= q; ++j)
            for (int i = 0; i < j; ++i)
                if (!same_matrix(mat_mul(face[q - 1][i], face[q][j], p),
                                 mat_mul(face[q - 1][j - 1], face[q][i], p)))
                    throw InvariantError("simplicial space: d_i d_j identity fails at level " +
                                         std::to_string(q));
    for (int q = 0; q + 2 <= T; ++q)
        for (int j = 0; j <= q; ++j)
            for (int i = 0; i <= j; ++i)
                if (!same_matrix(mat_mul(degen[q + 1][i], degen[q][j], p),
                                 mat_mul(degen[q + 1][j + 1], degen[q][i], p)))
                    throw InvariantError("simplicial space: s_i s_j identity fails at level " +
                                         std::to_string(q));
    for (int q = 0; q < T; ++q)
        for (int j = 0; j <= q; ++j)
            for (int i = 0; i <= q + 1; ++i) {
                Matrix lhs = mat_mul(face[q + 1][i], degen[q][j], p);
                Matrix rhs;
                if (i == j || i == j + 1) rhs = Matrix::identity(dims[q]);
                else if (i < j) rhs = mat_mul(degen[q - 1][j - 1], face[q][i], p);
                else rhs = mat_mul(degen[q - 1][j], face[q][i - 1], p);
                if (!same_matrix(lhs, rhs))
                    throw InvariantError("simplicial space: d_i s_j identity fails at level " +
                                         std::to_string(q));
            }
}

Normalization normalize(const SimplicialVS& X) {
    int T = X.top();
    Normalization N;
    N.incl.resize(T + 1);
    N.cx.ring = X.p;
    N.cx.dims.resize(T + 1);
    N.cx.d.resize(T + 1);
    for (int q = 0; q <= T; ++q) {
        N.incl[q] = q == 0 ? Matrix::identity(X.dims[0])
                           : nullspace(stack_faces(X.face[q], X.dims[q], 1, q), X.p);
        N.cx.dims[q] = N.incl[q].cols;
    }
    N.cx.d[0] = Matrix(0, N.cx.dims[0]);
    for (int q = 1; q <= T; ++q)
        N.cx.d[q] = restrict_to(N.incl[q - 1], X.face[q][0], N.incl[q], X.p, "normalize");
    return N;
}

std::vector<int> pi_dims(const SimplicialVS& X) { return homology_dims(normalize(X).cx); }

// --------------------------------------------------------- BisimplicialVS

int BisimplicialVS::Q() const { return dims.empty() ? -1 : (int)dims[0].size() - 1; }

int BisimplicialVS::dim(int n, int q) const {
    if (n < 0 || n > N() || q < 0 || q > Q()) return 0;
    return dims[n][q];
}

SimplicialVS BisimplicialVS::column(int n) const {
    SimplicialVS C;
    C.p = p;
    C.dims = dims[n];
    C.face = vface[n];
    C.degen = vdegen[n];
    return C;
}

SimplicialVS BisimplicialVS::row(int q) const {
    SimplicialVS R;
    R.p = p;
    int NN = N();
    R.dims.resize(NN + 1);
    R.face.resize(NN + 1);
    R.degen.resize(NN + 1);
    for (int n = 0; n <= NN; ++n) {
        R.dims[n] = dims[n][q];
        R.face[n] = hface[n][q];
        R.degen[n] = hdegen[n][q];
    }
    return R;
}

void BisimplicialVS::check() const {
    require_prime(p);
    if (dims.empty() || dims[0].empty())
        throw SchemaError("bisimplicial: level (0, 0) is required");
    int NN = N(), QQ = Q();
    for (const auto& row : dims)
        if ((int)row.size() != QQ + 1)
            throw SchemaError("bisimplicial: ragged dimension table");
    if ((int)hface.size() != NN + 1 || (int)hdegen.size() != NN + 1 ||
        (int)vface.size() != NN + 1 || (int)vdegen.size() != NN + 1)
        throw SchemaError("bisimplicial: operator tables must cover every external level");
    for (int n = 0; n <= NN; ++n)
        if ((int)hface[n].size() != QQ + 1 || (int)hdegen[n].size() != QQ + 1 ||
            (int)vface[n].size() != QQ + 1 || (int)vdegen[n].size() != QQ + 1)
            throw SchemaError("bisimplicial: operator tables must cover every internal level");
    for (int n = 0; n <= NN; ++n) column(n).check();
    for (int q = 0; q <= QQ; ++q) row(q).check();
    // Every horizontal operator commutes with every vertical one; the four
    // families below cover face/degeneracy in both directions.
    for (int n = 1; n <= NN; ++n)
        for (int q = 0; q <= QQ; ++q)
            for (int i = 0; i <= n; ++i) {
                for (int j = 1; j <= q; ++j)
                    if (!same_matrix(mat_mul(vface[n - 1][q][j], hface[n][q][i], p),
                                     mat_mul(hface[n][q - 1][i], vface[n][q][j], p)))
                        throw InvariantError("bisimplicial: dh_i dv_j commutation fails at " +
                                             at_nq(n, q));
                for (int j = 0; j < QQ && j <= q; ++j)
                    if (q < QQ &&
                        !same_matrix(mat_mul(vdegen[n - 1][q][j], hface[n][q][i], p),
                                     mat_mul(hface[n][q + 1][i], vdegen[n][q][j], p)))
                        throw InvariantError("bisimplicial: dh_i sv_j commutation fails at " +
                                             at_nq(n, q));
            }
    for (int n = 0; n < NN; ++n)
        for (int q = 0; q <= QQ; ++q)
            for (int i = 0; i <= n; ++i) {
                for (int j = 1; j <= q; ++j)
                    if (!same_matrix(mat_mul(vface[n + 1][q][j], hdegen[n][q][i], p),
                                     mat_mul(hdegen[n][q - 1][i], vface[n][q][j], p)))
                        throw InvariantError("bisimplicial: sh_i dv_j commutation fails at " +
                                             at_nq(n, q));
                for (int j = 0; j < QQ && j <= q; ++j)
                    if (q < QQ &&
                        !same_matrix(mat_mul(vdegen[n + 1][q][j], hdegen[n][q][i], p),
                                     mat_mul(hdegen[n][q + 1][i], vdegen[n][q][j], p)))
                        throw InvariantError("bisimplicial: sh_i sv_j commutation fails at " +
                                             at_nq(n, q));
            }
}

// -------------------------------------------------------- inverse Dold-Kan

namespace {

// Collapse sets of monotone surjections out of [k], identity first: by the
// number of collapsed positions, then lexicographically.  The identity-first
// order is what makes the normalization of the rebuilt object sit as the
// leading coordinate block, so the round trip recovers the input on the
// nose instead of up to a change of basis.
struct SummandTable {
    std::vector<std::vector<int>> sets;
    std::map<std::vector<int>, int> index;
};

SummandTable summands(int k) {
    SummandTable T;
    for (int sz = 0; sz <= k; ++sz) {
        std::vector<int> c(sz);
        std::iota(c.begin(), c.end(), 0);
        while (true) {
            T.index[c] = (int)T.sets.size();
            T.sets.push_back(c);
            if (sz == 0) break;
            int i = sz - 1;
            while (i >= 0 && c[i] == k - sz + i) --i;
            if (i < 0) break;
            ++c[i];
            for (int j = i + 1; j < sz; ++j) c[j] = c[j - 1] + 1;
        }
    }
    return T;
}

// Epi-mono factorization of (surjection with collapse set S) composed with
// the i-th coface: the epi part is returned as a collapse set one level
// down, and the mono part acts on the summand value as the identity, as the
// Moore boundary (when exactly the bottom value is missed), or as zero.
struct FaceFactor {
    std::vector<int> collapse;
    int kind = 2;  // 0 identity, 1 Moore boundary, 2 zero
};

FaceFactor face_factor(const std::vector<int>& S, int k, int i) {
    std::vector<int> v = surjection_values(S, k);
    std::vector<int> w(k);
    for (int j = 0; j < k; ++j) w[j] = v[j < i ? j : j + 1];
    std::vector<int> vals;
    for (int x : w)
        if (vals.empty() || vals.back() != x) vals.push_back(x);
    std::vector<int> nv(k);
    for (int j = 0; j < k; ++j)
        nv[j] = (int)(std::lower_bound(vals.begin(), vals.end(), w[j]) - vals.begin());
    FaceFactor f;
    f.collapse = collapse_set_of(nv);
    int a = k - (int)S.size();
    int m = (int)vals.size() - 1;
    if (m == a) f.kind = 0;
    else if (m == a - 1 && vals[0] == 1) f.kind = 1;
    return f;
}

std::vector<int> degen_collapse(const std::vector<int>& S, int k, int i) {
    std::vector<int> v = surjection_values(S, k);
    std::vector<int> w(k + 2);
    for (int j = 0; j <= k + 1; ++j) w[j] = v[j <= i ? j : j - 1];
    return collapse_set_of(w);
}

}

BisimplicialVS dold_kan_inverse2(const Bicomplex& Bin) {
    Bin.check();
    int NN = Bin.N(), QQ = Bin.Q();
    int64_t p = Bin.p;
    std::vector<SummandTable> H(NN + 1), V(QQ + 1);
    for (int n = 0; n <= NN; ++n) H[n] = summands(n);
    for (int q = 0; q <= QQ; ++q) V[q] = summands(q);

    BisimplicialVS X;
    X.p = p;
    X.dims.assign(NN + 1, std::vector<int>(QQ + 1, 0));
    // Level (n, q) is one copy of B(a, b) per summand pair; offsets index
    // pairs with the horizontal summand major, so (identity, identity) is
    // the leading block.
    std::vector<std::vector<std::vector<int>>> off(NN + 1,
                                                   std::vector<std::vector<int>>(QQ + 1));
    auto pair_at = [&](int n, int q, int ih, int iv) { return ih * (int)V[q].sets.size() + iv; };
    for (int n = 0; n <= NN; ++n)
        for (int q = 0; q <= QQ; ++q) {
            int tot = 0;
            off[n][q].resize(H[n].sets.size() * V[q].sets.size());
            for (size_t ih = 0; ih < H[n].sets.size(); ++ih)
                for (size_t iv = 0; iv < V[q].sets.size(); ++iv) {
                    off[n][q][pair_at(n, q, (int)ih, (int)iv)] = tot;
                    tot += Bin.dim(n - (int)H[n].sets[ih].size(), q - (int)V[q].sets[iv].size());
                }
            X.dims[n][q] = tot;
        }

    X.hface.assign(NN + 1, std::vector<std::vector<Matrix>>(QQ + 1));
    X.hdegen.assign(NN + 1, std::vector<std::vector<Matrix>>(QQ + 1));
    X.vface.assign(NN + 1, std::vector<std::vector<Matrix>>(QQ + 1));
    X.vdegen.assign(NN + 1, std::vector<std::vector<Matrix>>(QQ + 1));
    for (int n = 0; n <= NN; ++n)
        for (int q = 0; q <= QQ; ++q) {
            if (n >= 1) X.hface[n][q].assign(n + 1, Matrix(X.dims[n - 1][q], X.dims[n][q]));
            if (n < NN) X.hdegen[n][q].assign(n + 1, Matrix(X.dims[n + 1][q], X.dims[n][q]));
            if (q >= 1) X.vface[n][q].assign(q + 1, Matrix(X.dims[n][q - 1], X.dims[n][q]));
            if (q < QQ) X.vdegen[n][q].assign(q + 1, Matrix(X.dims[n][q + 1], X.dims[n][q]));
        }

    for (int n = 0; n <= NN; ++n)
        for (int q = 0; q <= QQ; ++q)
            for (size_t ih = 0; ih < H[n].sets.size(); ++ih)
                for (size_t iv = 0; iv < V[q].sets.size(); ++iv) {
                    int a = n - (int)H[n].sets[ih].size();
                    int b = q - (int)V[q].sets[iv].size();
                    int d = Bin.dim(a, b);
                    if (d == 0) continue;
                    int so = off[n][q][pair_at(n, q, (int)ih, (int)iv)];
                    for (int i = 0; n >= 1 && i <= n; ++i) {
                        FaceFactor f = face_factor(H[n].sets[ih], n, i);
                        if (f.kind == 2) continue;
                        int to = off[n - 1][q][pair_at(n - 1, q, H[n - 1].index.at(f.collapse),
                                                       (int)iv)];
                        Matrix& M = X.hface[n][q][i];
                        if (f.kind == 0) put_identity(M, to, so, d);
                        else put_block(M, to, so, Bin.dh_at(a, b));
                    }
                    for (int i = 0; q >= 1 && i <= q; ++i) {
                        FaceFactor f = face_factor(V[q].sets[iv], q, i);
                        if (f.kind == 2) continue;
                        int to = off[n][q - 1][pair_at(n, q - 1, (int)ih,
                                                       V[q - 1].index.at(f.collapse))];
                        Matrix& M = X.vface[n][q][i];
                        if (f.kind == 0) put_identity(M, to, so, d);
                        else put_block(M, to, so, Bin.dv_at(a, b));
                    }
                    for (int i = 0; n < NN && i <= n; ++i) {
                        int to = off[n + 1][q][pair_at(
                            n + 1, q, H[n + 1].index.at(degen_collapse(H[n].sets[ih], n, i)),
                            (int)iv)];
                        put_identity(X.hdegen[n][q][i], to, so, d);
                    }
                    for (int i = 0; q < QQ && i <= q; ++i) {
                        int to = off[n][q + 1][pair_at(
                            n, q + 1, (int)ih,
                            V[q + 1].index.at(degen_collapse(V[q].sets[iv], q, i)))];
                        put_identity(X.vdegen[n][q][i], to, so, d);
                    }
                }

    // The double normalization must give back the input exactly — not just
    // up to isomorphism — because of the identity-first summand order.
    MooreBicomplex MB = double_normalization(X);
    bool ok = MB.B.dims == Bin.dims;
    for (int n = 0; ok && n <= NN; ++n)
        for (int q = 0; ok && q <= QQ; ++q)
            ok = same_matrix(MB.B.dh_at(n, q), Bin.dh_at(n, q)) &&
                 same_matrix(MB.B.dv_at(n, q), Bin.dv_at(n, q));
    if (!ok)
        throw InvariantError(
            "inverse Dold-Kan: double normalization does not recover the input");
    return X;
}

// ------------------------------------------------------------ Moore tower

namespace {

// Levelwise intersection of the kernels of dh_lo .. dh_n, with the induced
// internal structure (vertical operators commute with horizontal faces, so
// the subspaces are preserved).
SubSimplicialVS face_kernel(const BisimplicialVS& X, int n, int lo, const std::string& what) {
    int QQ = X.Q();
    int64_t p = X.p;
    SubSimplicialVS S;
    S.incl.resize(QQ + 1);
    S.object.p = p;
    S.object.dims.resize(QQ + 1);
    S.object.face.resize(QQ + 1);
    S.object.degen.resize(QQ + 1);
    for (int q = 0; q <= QQ; ++q) {
        S.incl[q] = n == 0 ? Matrix::identity(X.dim(0, q))
                           : nullspace(stack_faces(X.hface[n][q], X.dim(n, q), lo, n), p);
        S.object.dims[q] = S.incl[q].cols;
    }
    for (int q = 1; q <= QQ; ++q) {
        S.object.face[q].resize(q + 1);
        for (int i = 0; i <= q; ++i)
            S.object.face[q][i] =
                restrict_to(S.incl[q - 1], X.vface[n][q][i], S.incl[q], p, what);
    }
    for (int q = 0; q < QQ; ++q) {
        S.object.degen[q].resize(q + 1);
        for (int i = 0; i <= q; ++i)
            S.object.degen[q][i] =
                restrict_to(S.incl[q + 1], X.vdegen[n][q][i], S.incl[q], p, what);
    }
    return S;
}

}

SubSimplicialVS moore_chains(const BisimplicialVS& X, int n) {
    if (n < 0 || n > X.N()) throw SchemaError("moore chains: level out of range");
    return face_kernel(X, n, 1, "moore chains");
}

SubSimplicialVS moore_cycles(const BisimplicialVS& X, int n) {
    if (n < 0 || n > X.N()) throw SchemaError("moore cycles: level out of range");
    return face_kernel(X, n, 0, "moore cycles");
}

std::vector<Matrix> moore_boundary(const BisimplicialVS& X, int n) {
    if (n < 1 || n > X.N()) throw SchemaError("moore boundary: level must be >= 1");
    int QQ = X.Q();
    int64_t p = X.p;
    SubSimplicialVS C = moore_chains(X, n);
    SubSimplicialVS Z = moore_cycles(X, n - 1);
    SubSimplicialVS Zn = moore_cycles(X, n);
    std::vector<Matrix> bd(QQ + 1);
    for (int q = 0; q <= QQ; ++q) {
        auto c = solve(Z.incl[q], mat_mul(X.hface[n][q][0], C.incl[q], p), p);
        if (!c)
            throw InvariantError("moore boundary: image leaves the cycles at " + at_nq(n, q));
        bd[q] = *c;
        // The strict kernel of dh_0 on the chains is the cycles one level
        // up; both sides are echelon bases, so compare spans.
        Matrix K = mat_mul(C.incl[q], nullspace(bd[q], p), p);
        if (K.cols != Zn.incl[q].cols ||
            rank(hstack(K, Zn.incl[q]), p) != Zn.incl[q].cols)
            throw InvariantError("moore boundary: strict kernel is not the cycles at " +
                                 at_nq(n, q));
    }
    return bd;
}

MooreBicomplex double_normalization(const BisimplicialVS& X) {
    int NN = X.N(), QQ = X.Q();
    int64_t p = X.p;
    MooreBicomplex MB;
    MB.B.p = p;
    MB.B.dims.assign(NN + 1, std::vector<int>(QQ + 1, 0));
    MB.emb.assign(NN + 1, std::vector<Matrix>(QQ + 1));
    std::vector<Normalization> nc(NN + 1);
    std::vector<SubSimplicialVS> C(NN + 1);
    for (int n = 0; n <= NN; ++n) {
        C[n] = moore_chains(X, n);
        nc[n] = normalize(C[n].object);
        for (int q = 0; q <= QQ; ++q) {
            MB.emb[n][q] = mat_mul(C[n].incl[q], nc[n].incl[q], p);
            MB.B.dims[n][q] = nc[n].cx.dims[q];
        }
        for (int q = 1; q <= QQ; ++q)
            if (MB.B.dims[n][q] > 0 && MB.B.dims[n][q - 1] > 0)
                MB.B.dv[{n, q}] = nc[n].cx.d[q];
    }
    for (int n = 1; n <= NN; ++n)
        for (int q = 0; q <= QQ; ++q) {
            if (MB.B.dims[n][q] == 0 || MB.B.dims[n - 1][q] == 0) continue;
            MB.B.dh[{n, q}] = restrict_to(MB.emb[n - 1][q],
                                          X.hface[n][q][0], MB.emb[n][q], p,
                                          "double normalization");
        }
    MB.B.check();
    return MB;
}

// ----------------------------------------------------------- matching maps

namespace {

MatchingData matching_impl(const BisimplicialVS& X, int n, int lo) {
    if (n < 1 || n > X.N()) throw SchemaError("matching: level must be in 1..N");
    int QQ = X.Q();
    int64_t p = X.p;
    int parts = n + 1 - lo;
    MatchingData MD;
    MD.tuple_basis.resize(QQ + 1);
    MD.to_matching.resize(QQ + 1);
    MD.M.p = p;
    MD.M.dims.resize(QQ + 1);
    MD.M.face.resize(QQ + 1);
    MD.M.degen.resize(QQ + 1);
    for (int q = 0; q <= QQ; ++q) {
        int dprev = X.dim(n - 1, q);
        // Compatibility d_i x_j = d_{j-1} x_i for pairs lo <= i < j; at
        // n = 1 the relations would land one level below the window bottom,
        // so the matching space is the full tuple space.
        Matrix R(0, parts * dprev);
        if (n >= 2)
            for (int j = lo + 1; j <= n; ++j)
                for (int i = lo; i < j; ++i) {
                    Matrix row(X.dim(n - 2, q), parts * dprev);
                    put_block(row, 0, (j - lo) * dprev, X.hface[n - 1][q][i]);
                    Matrix neg = mat_scale(X.hface[n - 1][q][j - 1], p - 1, p);
                    for (int r = 0; r < neg.rows; ++r)
                        for (int c = 0; c < neg.cols; ++c)
                            row.at(r, (i - lo) * dprev + c) =
                                fp_add(row.at(r, (i - lo) * dprev + c), neg.at(r, c), p);
                    R = vstack(R, row);
                }
        MD.tuple_basis[q] = nullspace(R, p);
        MD.M.dims[q] = MD.tuple_basis[q].cols;
        Matrix F(0, X.dim(n, q));
        for (int i = lo; i <= n; ++i) F = vstack(F, X.hface[n][q][i]);
        auto c = solve(MD.tuple_basis[q], F, p);
        if (!c)
            throw InvariantError("matching: the face tuple violates the compatibilities at " +
                                 at_nq(n, q));
        MD.to_matching[q] = *c;
    }
    for (int q = 1; q <= QQ; ++q) {
        MD.M.face[q].resize(q + 1);
        for (int i = 0; i <= q; ++i)
            MD.M.face[q][i] = restrict_to(MD.tuple_basis[q - 1],
                                          tuple_op(X.vface[n - 1][q][i], parts),
                                          MD.tuple_basis[q], p, "matching");
    }
    for (int q = 0; q < QQ; ++q) {
        MD.M.degen[q].resize(q + 1);
        for (int i = 0; i <= q; ++i)
            MD.M.degen[q][i] = restrict_to(MD.tuple_basis[q + 1],
                                           tuple_op(X.vdegen[n - 1][q][i], parts),
                                           MD.tuple_basis[q], p, "matching");
    }
    return MD;
}

}

MatchingData matching(const BisimplicialVS& X, int n) { return matching_impl(X, n, 0); }

MatchingData modified_matching(const BisimplicialVS& X, int n) {
    MatchingData MD = matching_impl(X, n, 1);
    SubSimplicialVS C = moore_chains(X, n);
    for (int q = 0; q <= X.Q(); ++q) {
        Matrix K = nullspace(MD.to_matching[q], X.p);
        if (K.cols != C.incl[q].cols ||
            rank(hstack(K, C.incl[q]), X.p) != C.incl[q].cols)
            throw InvariantError("modified matching: kernel is not the Moore chains at " +
                                 at_nq(n, q));
    }
    return MD;
}

// --------------------------------------------------------------- fibrancy

FibrancyReport fibrancy_check(const BisimplicialVS& X) {
    int NN = X.N(), QQ = X.Q();
    int64_t p = X.p;
    FibrancyReport rep;
    auto record = [&](bool& flag, int n, int q) {
        if (rep.ok()) {
            rep.fail_n = n;
            rep.fail_q = q;
        }
        flag = false;
    };
    std::vector<Normalization> ncol(NN + 1);
    for (int n = 0; n <= NN; ++n) ncol[n] = normalize(X.column(n));
    for (int n = 1; n <= NN && rep.matching_fibration; ++n) {
        MatchingData MD = matching(X, n);
        Normalization nm = normalize(MD.M);
        for (int q = 1; q <= QQ; ++q) {
            Matrix nf = restrict_to(nm.incl[q], MD.to_matching[q], ncol[n].incl[q], p,
                                    "fibrancy");
            if (rank(nf, p) != nm.cx.dims[q]) {
                record(rep.matching_fibration, n, q);
                break;
            }
        }
    }
    for (int n = 1; n <= NN && rep.kernel_is_chains; ++n) {
        MatchingData MD = matching_impl(X, n, 1);
        SubSimplicialVS C = moore_chains(X, n);
        for (int q = 0; q <= QQ; ++q) {
            Matrix K = nullspace(MD.to_matching[q], p);
            if (K.cols != C.incl[q].cols ||
                rank(hstack(K, C.incl[q]), p) != C.incl[q].cols) {
                record(rep.kernel_is_chains, n, q);
                break;
            }
        }
    }
    for (int n = 1; n <= NN && rep.dbar_onto; ++n) {
        SubSimplicialVS C = moore_chains(X, n);
        SubSimplicialVS Z = moore_cycles(X, n - 1);
        std::vector<Matrix> bd = moore_boundary(X, n);
        Normalization ncn = normalize(C.object);
        Normalization nz = normalize(Z.object);
        for (int q = 1; q <= QQ; ++q) {
            Matrix nb = restrict_to(nz.incl[q], bd[q], ncn.incl[q], p, "fibrancy");
            if (rank(nb, p) != nz.cx.dims[q]) {
                record(rep.dbar_onto, n, q);
                break;
            }
        }
    }
    return rep;
}

// ------------------------------------------------------- the exact couple

ExactCouple spiral_couple(const BisimplicialVS& X) {
    MooreBicomplex MB = double_normalization(X);
    const Bicomplex& B = MB.B;
    int NN = B.N(), QQ = B.Q();
    int64_t p = B.p;

    // Column n of B is the normalized chains N C_n; the kernel of its dh is
    // N Z_n (the bottom column is all cycles: no horizontal face leaves it).
    std::vector<std::vector<Matrix>> Zb(NN + 1, std::vector<Matrix>(QQ + 1));
    std::vector<ChainComplex> Zcx(NN + 1), Ccx(NN + 1);
    for (int n = 0; n <= NN; ++n) {
        Ccx[n] = column_complex(B, n);
        Zcx[n].ring = p;
        Zcx[n].dims.resize(QQ + 1);
        Zcx[n].d.resize(QQ + 1);
        for (int q = 0; q <= QQ; ++q) {
            Zb[n][q] = n == 0 ? Matrix::identity(B.dim(0, q)) : nullspace(B.dh_at(n, q), p);
            Zcx[n].dims[q] = Zb[n][q].cols;
        }
        Zcx[n].d[0] = Matrix(0, Zcx[n].dims[0]);
        for (int q = 1; q <= QQ; ++q)
            Zcx[n].d[q] =
                restrict_to(Zb[n][q - 1], B.dv_at(n, q), Zb[n][q], p, "spiral couple");
    }

    ExactCouple c;
    c.p = p;
    c.stage = 1;
    std::map<std::pair<int, int>, Subquotient> DH, EH;
    for (int n = 0; n <= NN; ++n)
        for (int q = 0; q <= QQ; ++q) {
            Subquotient d = homology_space(Zcx[n], q);
            if (d.dim() > 0) {
                DH.emplace(std::make_pair(n, q), d);
                c.D[{n, q}] = d.dim();
            }
            Subquotient e = homology_space(Ccx[n], q);
            if (e.dim() > 0) {
                EH.emplace(std::make_pair(n, q), e);
                c.E[{n, q}] = e.dim();
            }
        }

    for (const auto& [key, dsq] : DH) {
        auto [n, q] = key;
        // beta: the cycles include into the chains.
        if (auto e = EH.find(key); e != EH.end()) {
            Matrix amb = mat_mul(Zb[n][q], dsq.basis_lift(), p);
            c.beta[key] = e->second.coords(amb);
        }
        // alpha: lift a cycle class through the boundary one column up and
        // push it down the vertical differential (the connecting map of
        // Z_{n+1} -> C_{n+1} -> Z_n).  Where the target leaves the window
        // the map is recorded as an explicit zero, so exactness there is
        // judged rather than skipped.
        int rows = (q >= 1 && n < NN && DH.count({n + 1, q - 1}))
                       ? DH.at({n + 1, q - 1}).dim()
                       : 0;
        if (rows == 0) {
            c.alpha[key] = Matrix(0, dsq.dim());
            continue;
        }
        Matrix amb = mat_mul(Zb[n][q], dsq.basis_lift(), p);
        auto lift = solve(B.dh_at(n + 1, q), amb, p);
        if (!lift)
            throw InvariantError("spiral couple: connecting lift failed at " + at_nq(n, q) +
                                 "; refusing to cone off the obstruction");
        Matrix w = mat_mul(B.dv_at(n + 1, q), *lift, p);
        auto z = solve(Zb[n + 1][q - 1], w, p);
        if (!z)
            throw InvariantError("spiral couple: connecting value left the cycles at " +
                                 at_nq(n, q));
        c.alpha[key] = DH.at({n + 1, q - 1}).coords(*z);
    }
    for (const auto& [key, esq] : EH) {
        auto [n, q] = key;
        if (n == 0 || !DH.count({n - 1, q})) continue;
        // gamma: push a chain class down the boundary into the cycles below.
        Matrix v = mat_mul(B.dh_at(n, q), esq.basis_lift(), p);
        auto z = solve(Zb[n - 1][q], v, p);
        if (!z)
            throw InvariantError("spiral couple: boundary left the cycles at " + at_nq(n, q));
        c.gamma[key] = DH.at({n - 1, q}).coords(*z);
    }
    c.check_shapes();
    return c;
}

std::vector<Page> spiral_pages(const BisimplicialVS& X, int r_max) {
    if (r_max < 1) throw SchemaError("spiral pages: r_max must be >= 1");
    return pages(spiral_couple(X), r_max);
}

// ---------------------------------------------------- chain-level lifting

LiftResult lifting_differential(const BisimplicialVS& X, int n, int pp, int r,
                                const Matrix& rep) {
    MooreBicomplex MB = double_normalization(X);
    const Bicomplex& B = MB.B;
    int NN = B.N(), QQ = B.Q();
    int64_t p = B.p;
    if (r < 1) throw SchemaError("lifting: page must be >= 1");
    if (n < 0 || n > NN || pp < 0 || pp > QQ)
        throw SchemaError("lifting: node outside the window");
    if (rep.rows != B.dim(n, pp) || rep.cols != 1)
        throw SchemaError("lifting: representative has the wrong shape");
    if (!is_zero(mat_mul(B.dv_at(n, pp), rep, p)))
        throw InvariantError("lifting: representative is not a vertical cycle");

    auto sgn = [&](int m) { return (int64_t)(m % 2 == 0 ? 1 : p - 1); };
    // Zig-zag stage s: find u in B(n, pp+1) and x_j in B(n-j, pp+j) with
    //   dh x_j + (-1)^{n-j-1} dv x_{j+1} = 0   (j = 0 .. s-1),
    // where x_0 = rep + (-1)^n dv u.  Solvable at stage s exactly when the
    // class is still alive on page s+1; the first unsolvable stage names
    // the page on which the class dies.
    Matrix xlast = rep;  // x_{r-1}; stays rep when r == 1
    for (int s = 1; s <= r - 1; ++s) {
        int du = B.dim(n, pp + 1);
        std::vector<int> xoff(s + 1, 0), roff(s, 0);
        int cols = du, rows = 0;
        for (int j = 1; j <= s; ++j) {
            xoff[j] = cols;
            cols += B.dim(n - j, pp + j);
        }
        for (int j = 0; j < s; ++j) {
            roff[j] = rows;
            rows += B.dim(n - j - 1, pp + j);
        }
        Matrix A(rows, cols), rhs(rows, 1);
        put_block(A, roff[0], 0,
                  mat_scale(mat_mul(B.dh_at(n, pp), B.dv_at(n, pp + 1), p), sgn(n), p));
        put_block(rhs, roff[0], 0, mat_scale(mat_mul(B.dh_at(n, pp), rep, p), p - 1, p));
        for (int j = 0; j < s; ++j) {
            if (j >= 1) put_block(A, roff[j], xoff[j], B.dh_at(n - j, pp + j));
            put_block(A, roff[j], xoff[j + 1],
                      mat_scale(B.dv_at(n - j - 1, pp + j + 1), sgn(n - j - 1), p));
        }
        auto sol = solve(A, rhs, p);
        if (!sol)
            throw InvariantError("lifting: the class dies at page " + std::to_string(s));
        if (s == r - 1) {
            xlast = Matrix(B.dim(n - s, pp + s), 1);
            for (int i = 0; i < xlast.rows; ++i) xlast.at(i, 0) = sol->at(xoff[s] + i, 0);
        }
    }

    LiftResult out;
    out.chain = mat_mul(B.dh_at(n - r + 1, pp + r - 1), xlast, p);
    if (n - r < 0 || pp + r - 1 > QQ) {
        out.page_class = Matrix(0, 1);
        return out;
    }
    Subquotient S = staircase_space(B, Filtration::column, r, n - r, pp + r - 1);
    std::vector<TotBlock> lay = total_layout(B, n + pp - 1);
    int tot = 0;
    for (const TotBlock& b : lay) tot = b.offset + B.dim(b.n, b.q);
    Matrix amb(tot, 1);
    for (const TotBlock& b : lay)
        if (b.n == n - r) put_block(amb, b.offset, 0, out.chain);
    out.page_class = S.coords(amb);
    return out;
}

// ------------------------------------------------- diagonal and abutment

SimplicialVS diag(const BisimplicialVS& X) {
    int m = std::min(X.N(), X.Q());
    int64_t p = X.p;
    SimplicialVS D;
    D.p = p;
    D.dims.resize(m + 1);
    D.face.resize(m + 1);
    D.degen.resize(m + 1);
    for (int k = 0; k <= m; ++k) D.dims[k] = X.dim(k, k);
    for (int k = 1; k <= m; ++k) {
        D.face[k].resize(k + 1);
        for (int i = 0; i <= k; ++i)
            D.face[k][i] = mat_mul(X.vface[k - 1][k][i], X.hface[k][k][i], p);
    }
    for (int k = 0; k < m; ++k) {
        D.degen[k].resize(k + 1);
        for (int i = 0; i <= k; ++i)
            D.degen[k][i] = mat_mul(X.hdegen[k][k + 1][i], X.vdegen[k][k][i], p);
    }
    return D;
}

namespace {

// Diagonal of the rebuilt bisimplicial object, continued past the window:
// level k is one copy of B(a, b) per pair of surjections [k] ->> [a],
// [k] ->> [b] inside the window, and the diagonal operators compose the two
// directions' blocks.  One extra level is enough to make the homotopy of
// the diagonal honest up to the window edge.
SimplicialVS diag_extension(const Bicomplex& B, int kmax) {
    int NN = B.N(), QQ = B.Q();
    int64_t p = B.p;
    std::vector<SummandTable> T(kmax + 1);
    for (int k = 0; k <= kmax; ++k) T[k] = summands(k);
    std::vector<std::vector<std::pair<int, int>>> pairs(kmax + 1);
    std::vector<std::vector<int>> off(kmax + 1);
    std::vector<std::map<std::pair<int, int>, int>> idx(kmax + 1);
    SimplicialVS D;
    D.p = p;
    D.dims.resize(kmax + 1);
    D.face.resize(kmax + 1);
    D.degen.resize(kmax + 1);
    for (int k = 0; k <= kmax; ++k) {
        int tot = 0;
        for (int ih = 0; ih < (int)T[k].sets.size(); ++ih) {
            if (k - (int)T[k].sets[ih].size() > NN) continue;
            for (int iv = 0; iv < (int)T[k].sets.size(); ++iv) {
                if (k - (int)T[k].sets[iv].size() > QQ) continue;
                idx[k][{ih, iv}] = (int)pairs[k].size();
                pairs[k].push_back({ih, iv});
                off[k].push_back(tot);
                tot += B.dim(k - (int)T[k].sets[ih].size(), k - (int)T[k].sets[iv].size());
            }
        }
        D.dims[k] = tot;
    }
    for (int k = 1; k <= kmax; ++k) D.face[k].assign(k + 1, Matrix(D.dims[k - 1], D.dims[k]));
    for (int k = 0; k < kmax; ++k) D.degen[k].assign(k + 1, Matrix(D.dims[k + 1], D.dims[k]));
    for (int k = 0; k <= kmax; ++k)
        for (int s = 0; s < (int)pairs[k].size(); ++s) {
            auto [ih, iv] = pairs[k][s];
            int a = k - (int)T[k].sets[ih].size();
            int b = k - (int)T[k].sets[iv].size();
            if (B.dim(a, b) == 0) continue;
            int so = off[k][s];
            for (int i = 0; k >= 1 && i <= k; ++i) {
                FaceFactor fh = face_factor(T[k].sets[ih], k, i);
                FaceFactor fv = face_factor(T[k].sets[iv], k, i);
                if (fh.kind == 2 || fv.kind == 2) continue;
                int tih = T[k - 1].index.at(fh.collapse);
                int tiv = T[k - 1].index.at(fv.collapse);
                auto it = idx[k - 1].find({tih, tiv});
                if (it == idx[k - 1].end()) continue;
                Matrix blk;
                if (fh.kind == 0 && fv.kind == 0) blk = Matrix::identity(B.dim(a, b));
                else if (fh.kind == 0) blk = B.dv_at(a, b);
                else if (fv.kind == 0) blk = B.dh_at(a, b);
                else blk = mat_mul(B.dv_at(a - 1, b), B.dh_at(a, b), p);
                put_block(D.face[k][i], off[k - 1][it->second], so, blk);
            }
            for (int i = 0; k < kmax && i <= k; ++i) {
                int tih = T[k + 1].index.at(degen_collapse(T[k].sets[ih], k, i));
                int tiv = T[k + 1].index.at(degen_collapse(T[k].sets[iv], k, i));
                put_identity(D.degen[k][i], off[k + 1][idx[k + 1].at({tih, tiv})], so,
                             B.dim(a, b));
            }
        }
    return D;
}

}

AbutmentReport abutment_check(const BisimplicialVS& X) {
    MooreBicomplex MB = double_normalization(X);
    const Bicomplex& B = MB.B;
    int NN = B.N(), QQ = B.Q();
    int tmax = NN + QQ;
    AbutmentReport rep;
    // First page with no differential crossing the window: stable from here.
    int rs = std::max(NN + 1, QQ + 2);
    std::vector<Page> pgs = staircase_pages(B, Filtration::column, rs);
    rep.einf.assign(tmax + 1, 0);
    for (const auto& [key, d] : pgs.back().dims) rep.einf[key.first + key.second] += d;
    rep.total_h = homology_dims(total(B));
    rep.diag_top = std::min(NN, QQ);
    std::vector<int> pi = pi_dims(diag_extension(B, rep.diag_top + 1));
    rep.pi_diag.assign(pi.begin(), pi.begin() + rep.diag_top + 1);
    rep.ok = true;
    for (int t = 0; t <= tmax; ++t)
        if (rep.einf[t] != rep.total_h[t]) rep.ok = false;
    for (int t = 0; t <= rep.diag_top; ++t)
        if (rep.einf[t] != rep.pi_diag[t]) rep.ok = false;
    return rep;
}

// ------------------------------------------------------- pi_* commutation

Lemma41Report lemma41_check(const BisimplicialVS& X) {
    int NN = X.N(), QQ = X.Q();
    int64_t p = X.p;
    MooreBicomplex MB = double_normalization(X);
    Lemma41Report rep;
    std::vector<Normalization> ncol(NN + 1);
    std::vector<ChainComplex> colB(NN + 1);
    std::vector<std::vector<int>> lhs(NN + 1);
    for (int n = 0; n <= NN; ++n) {
        ncol[n] = normalize(X.column(n));
        colB[n] = column_complex(MB.B, n);
        lhs[n] = homology_dims(colB[n]);
    }
    // N(dh_i) and the inclusion N(C_n) -> N(X_n), as chain maps.
    auto nface = [&](int n, int i) {
        std::vector<Matrix> f(QQ + 1);
        for (int q = 0; q <= QQ; ++q)
            f[q] = restrict_to(ncol[n - 1].incl[q], X.hface[n][q][i], ncol[n].incl[q], p,
                               "lemma41");
        return f;
    };
    for (int n = 0; n <= NN; ++n) {
        std::vector<std::vector<Matrix>> hf;
        for (int i = 1; i <= n; ++i) hf.push_back(nface(n, i));
        std::vector<Matrix> incl(QQ + 1);
        for (int q = 0; q <= QQ; ++q)
            incl[q] = restrict_to(ncol[n].incl[q], MB.emb[n][q], Matrix::identity(colB[n].dims[q]),
                                  p, "lemma41");
        for (int q = 0; q <= QQ; ++q) {
            int hdim = homology_dims(ncol[n].cx)[q];
            Matrix stack(0, hdim);
            for (int i = 1; i <= n; ++i)
                stack = vstack(stack, induced_map(ncol[n].cx, ncol[n - 1].cx, hf[i - 1], q));
            Matrix K = nullspace(stack, p);
            int rdim = K.cols;
            Matrix iota = induced_map(colB[n], ncol[n].cx, incl, q);
            bool inside = rank(hstack(K, iota), p) == rdim;
            bool good = lhs[n][q] == rdim && rank(iota, p) == lhs[n][q] && inside;
            if (lhs[n][q] > 0 || rdim > 0) rep.dims[{n, q}] = {lhs[n][q], rdim};
            if (!good && rep.ok) {
                rep.ok = false;
                rep.fail_n = n;
                rep.fail_q = q;
            }
        }
    }
    return rep;
}

// ----------------------------------------------------- corpus generation

Bicomplex tower_bicomplex(Rng& rng, int64_t p, int N, int Q, int maxdim, bool acyclic_top) {
    require_prime(p);
    if (N < 1 || Q < 0 || maxdim < 1) throw SchemaError("tower: bad window");
    Bicomplex B;
    B.p = p;
    B.dims.assign(N + 1, std::vector<int>(Q + 1, 0));
    // Column 0 carries the bottom cycles; column n extends the previous
    // cycles by a fresh kernel, and dh projects onto them.  Every dh is then
    // levelwise onto the next kernel-of-dh, which is the strictness the
    // connecting lifts of the couple need, and an acyclic top kernel makes
    // the couple exact at the upper edge of the window too.
    ChainComplex Zprev = random_complex(rng, p, Q, maxdim);
    for (int q = 0; q <= Q; ++q) B.dims[0][q] = Zprev.dim(q);
    for (int q = 1; q <= Q; ++q)
        if (Zprev.dim(q) > 0 && Zprev.dim(q - 1) > 0) B.dv[{0, q}] = Zprev.diff(q);
    Extension prev;
    for (int n = 1; n <= N; ++n) {
        ChainComplex K = (n == N && acyclic_top)
                             ? cone_of_identity(rng, p, Q, std::max(1, maxdim - 1))
                             : random_complex(rng, p, Q, std::max(1, maxdim - 1));
        Extension ext = random_extension(rng, K, Zprev);
        for (int q = 0; q <= Q; ++q) B.dims[n][q] = ext.total.dim(q);
        for (int q = 1; q <= Q; ++q)
            if (ext.total.dim(q) > 0 && ext.total.dim(q - 1) > 0)
                B.dv[{n, q}] = ext.total.diff(q);
        for (int q = 0; q <= Q; ++q) {
            Matrix dh = n == 1 ? ext.proj[q] : mat_mul(prev.incl[q], ext.proj[q], p);
            if (dh.rows > 0 && dh.cols > 0) B.dh[{n, q}] = dh;
        }
        prev = ext;
        Zprev = K;
    }
    B.check();
    return B;
}

}
