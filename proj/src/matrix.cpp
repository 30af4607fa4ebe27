#include "topo/matrix.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "topo/error.hpp"

namespace topo {

Matrix mat_mod(const Matrix& m, int64_t p) {
    Matrix r = m;
    for (auto& v : r.a) v = fp_norm(v, p);
    return r;
}

Matrix mat_mul(const Matrix& x, const Matrix& y, int64_t p) {
    if (x.cols != y.rows) throw InvariantError("mat_mul shape mismatch");
    Matrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            int64_t xv = fp_norm(x.at(i, k), p);
            if (xv == 0) continue;
            for (int j = 0; j < y.cols; ++j)
                r.at(i, j) = (r.at(i, j) + xv * y.at(k, j)) % p;
        }
    return mat_mod(r, p);
}

Matrix mat_mul_int(const Matrix& x, const Matrix& y) {
    if (x.cols != y.rows) throw InvariantError("mat_mul_int shape mismatch");
    Matrix r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            int64_t xv = x.at(i, k);
            if (xv == 0) continue;
            for (int j = 0; j < y.cols; ++j) r.at(i, j) += xv * y.at(k, j);
        }
    return r;
}

Matrix mat_add(const Matrix& x, const Matrix& y, int64_t p) {
    if (x.rows != y.rows || x.cols != y.cols) throw InvariantError("mat_add shape mismatch");
    Matrix r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_norm(r.a[i] + y.a[i], p);
    return r;
}

Matrix mat_sub(const Matrix& x, const Matrix& y, int64_t p) {
    if (x.rows != y.rows || x.cols != y.cols) throw InvariantError("mat_sub shape mismatch");
    Matrix r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = fp_norm(r.a[i] - y.a[i], p);
    return r;
}

Matrix mat_scale(const Matrix& x, int64_t c, int64_t p) {
    Matrix r = x;
    c = fp_norm(c, p);
    for (auto& v : r.a) v = fp_norm(v * c, p);
    return r;
}

Matrix transpose(const Matrix& m) {
    Matrix r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r.at(j, i) = m.at(i, j);
    return r;
}

Matrix hstack(const Matrix& x, const Matrix& y) {
    if (x.rows != y.rows) throw InvariantError("hstack shape mismatch");
    Matrix r(x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
        for (int j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
    }
    return r;
}

Matrix vstack(const Matrix& x, const Matrix& y) {
    if (x.cols != y.cols) throw InvariantError("vstack shape mismatch");
    Matrix r(x.rows + y.rows, x.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
    for (int i = 0; i < y.rows; ++i)
        for (int j = 0; j < y.cols; ++j) r.at(x.rows + i, j) = y.at(i, j);
    return r;
}

Matrix take_cols(const Matrix& m, const std::vector<int>& idx) {
    Matrix r(m.rows, (int)idx.size());
    for (int j = 0; j < (int)idx.size(); ++j)
        for (int i = 0; i < m.rows; ++i) r.at(i, j) = m.at(i, idx[j]);
    return r;
}

Matrix col(const Matrix& m, int j) {
    Matrix r(m.rows, 1);
    for (int i = 0; i < m.rows; ++i) r.at(i, 0) = m.at(i, j);
    return r;
}

bool is_zero(const Matrix& m) {
    for (auto v : m.a)
        if (v != 0) return false;
    return true;
}

Rref rref(const Matrix& m, int64_t p) {
    Rref res;
    res.R = mat_mod(m, p);
    Matrix& R = res.R;
    int row = 0;
    for (int c = 0; c < R.cols && row < R.rows; ++c) {
        int piv = -1;
        for (int i = row; i < R.rows; ++i)
            if (R.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < R.cols; ++j) std::swap(R.at(piv, j), R.at(row, j));
        int64_t inv = fp_inv(R.at(row, c), p);
        for (int j = 0; j < R.cols; ++j) R.at(row, j) = fp_mul(R.at(row, j), inv, p);
        for (int i = 0; i < R.rows; ++i) {
            if (i == row || R.at(i, c) == 0) continue;
            int64_t f = R.at(i, c);
            for (int j = 0; j < R.cols; ++j)
                R.at(i, j) = fp_sub(R.at(i, j), fp_mul(f, R.at(row, j), p), p);
        }
        res.pivots.push_back(c);
        ++row;
    }
    return res;
}

int rank(const Matrix& m, int64_t p) { return (int)rref(m, p).pivots.size(); }

Matrix nullspace(const Matrix& m, int64_t p) {
    Rref rr = rref(m, p);
    std::vector<bool> is_pivot(m.cols, false);
    for (int c : rr.pivots) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Matrix N(m.cols, (int)free_cols.size());
    for (int k = 0; k < (int)free_cols.size(); ++k) {
        int fc = free_cols[k];
        N.at(fc, k) = 1;
        for (int r = 0; r < (int)rr.pivots.size(); ++r)
            N.at(rr.pivots[r], k) = fp_norm(-rr.R.at(r, fc), p);
    }
    return N;
}

std::optional<Matrix> solve(const Matrix& m, const Matrix& b, int64_t p) {
    if (m.rows != b.rows) throw InvariantError("solve shape mismatch");
    Rref rr = rref(hstack(m, b), p);
    // Inconsistent iff some pivot falls in the b-block.
    for (int c : rr.pivots)
        if (c >= m.cols) return std::nullopt;
    Matrix X(m.cols, b.cols);
    for (int r = 0; r < (int)rr.pivots.size(); ++r)
        for (int j = 0; j < b.cols; ++j)
            X.at(rr.pivots[r], j) = rr.R.at(r, m.cols + j);
    return X;
}

Matrix col_basis(const Matrix& m, int64_t p) {
    Rref rr = rref(m, p);
    return take_cols(m, rr.pivots);
}

Matrix inverse(const Matrix& m, int64_t p) {
    if (m.rows != m.cols) throw InvariantError("inverse of non-square matrix");
    auto X = solve(m, Matrix::identity(m.rows), p);
    if (!X || rank(m, p) != m.rows) throw InvariantError("inverse of singular matrix");
    return *X;
}

// --- Smith normal form ---------------------------------------------------

namespace {

void row_swap(Matrix& A, Matrix& U, int i, int j) {
    for (int c = 0; c < A.cols; ++c) std::swap(A.at(i, c), A.at(j, c));
    for (int c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
}
void col_swap(Matrix& A, Matrix& V, int i, int j) {
    for (int r = 0; r < A.rows; ++r) std::swap(A.at(r, i), A.at(r, j));
    for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
}
// row i -= q * row j   (tracked in U)
void row_axpy(Matrix& A, Matrix& U, int i, int j, int64_t q) {
    for (int c = 0; c < A.cols; ++c) A.at(i, c) -= q * A.at(j, c);
    for (int c = 0; c < U.cols; ++c) U.at(i, c) -= q * U.at(j, c);
}
// col i -= q * col j   (tracked in V)
void col_axpy(Matrix& A, Matrix& V, int i, int j, int64_t q) {
    for (int r = 0; r < A.rows; ++r) A.at(r, i) -= q * A.at(r, j);
    for (int r = 0; r < V.rows; ++r) V.at(r, i) -= q * V.at(r, j);
}
void row_negate(Matrix& A, Matrix& U, int i) {
    for (int c = 0; c < A.cols; ++c) A.at(i, c) = -A.at(i, c);
    for (int c = 0; c < U.cols; ++c) U.at(i, c) = -U.at(i, c);
}

}

Snf snf(Matrix A) {
    Snf s;
    s.U = Matrix::identity(A.rows);
    s.V = Matrix::identity(A.cols);
    int t = 0;
    int nmin = std::min(A.rows, A.cols);
    while (t < nmin) {
        // Smallest-magnitude nonzero pivot in the trailing block.
        int pi = -1, pj = -1;
        int64_t best = 0;
        for (int i = t; i < A.rows; ++i)
            for (int j = t; j < A.cols; ++j) {
                int64_t v = std::abs(A.at(i, j));
                if (v != 0 && (pi < 0 || v < best)) { pi = i; pj = j; best = v; }
            }
        if (pi < 0) break; // trailing block is zero
        row_swap(A, s.U, t, pi);
        col_swap(A, s.V, t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int i = t + 1; i < A.rows; ++i) {
                if (A.at(i, t) == 0) continue;
                int64_t q = A.at(i, t) / A.at(t, t);
                row_axpy(A, s.U, i, t, q);
                if (A.at(i, t) != 0) { row_swap(A, s.U, t, i); clean = false; }
            }
            for (int j = t + 1; j < A.cols; ++j) {
                if (A.at(t, j) == 0) continue;
                int64_t q = A.at(t, j) / A.at(t, t);
                col_axpy(A, s.V, j, t, q);
                if (A.at(t, j) != 0) { col_swap(A, s.V, t, j); clean = false; }
            }
        }
        if (A.at(t, t) < 0) row_negate(A, s.U, t);
        ++t;
    }
    // Enforce the divisibility chain d1 | d2 | ...
    for (bool changed = true; changed;) {
        changed = false;
        for (int i = 0; i + 1 < t; ++i) {
            int64_t a = A.at(i, i), b = A.at(i + 1, i + 1);
            if (a != 0 && b % a != 0) {
                // Fold d_{i+1} into row i: the 2x2 block (a 0 / 0 b) becomes
                // (g 0 / 0 lcm) after the standard gcd dance.
                col_axpy(A, s.V, i, i + 1, -1); // col i += col i+1
                // now block is (a 0 / b b); clear by row/col reduction
                bool sub = false;
                while (A.at(i + 1, i) != 0 || A.at(i, i + 1) != 0 || !sub) {
                    sub = true;
                    if (A.at(i + 1, i) != 0) {
                        if (std::abs(A.at(i + 1, i)) < std::abs(A.at(i, i)) || A.at(i, i) == 0)
                            row_swap(A, s.U, i, i + 1);
                        if (A.at(i + 1, i) != 0) {
                            int64_t q = A.at(i + 1, i) / A.at(i, i);
                            row_axpy(A, s.U, i + 1, i, q);
                        }
                    }
                    if (A.at(i, i + 1) != 0) {
                        int64_t q = A.at(i, i + 1) / A.at(i, i);
                        col_axpy(A, s.V, i + 1, i, q);
                    }
                    if (A.at(i + 1, i) == 0 && A.at(i, i + 1) == 0) break;
                }
                if (A.at(i, i) < 0) row_negate(A, s.U, i);
                if (A.at(i + 1, i + 1) < 0) row_negate(A, s.U, i + 1);
                changed = true;
            }
        }
    }
    s.D = A;
    return s;
}

// --- Subquotients ---------------------------------------------------------

Matrix Subquotient::basis_lift() const {
    if (BE.cols == 0) return Matrix(ambient, 0);
    std::vector<int> idx;
    for (int j = imdim; j < BE.cols; ++j) idx.push_back(j);
    return mat_mul(Z, take_cols(BE, idx), p);
}

bool Subquotient::in_subspace(const Matrix& v) const {
    return solve(Z, v, p).has_value();
}

Matrix Subquotient::coords(const Matrix& v) const {
    auto x = solve(Z, v, p);
    if (!x) throw InvariantError("subquotient coords: vector outside the subspace");
    Matrix y = mat_mul(BEinv, *x, p);
    Matrix r(dim(), v.cols);
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < v.cols; ++j) r.at(i, j) = y.at(imdim + i, j);
    return r;
}

Subquotient make_subquotient(const Matrix& cycles, const Matrix& bound, int ambient, int64_t p) {
    Subquotient sq;
    sq.p = p;
    sq.ambient = ambient;
    sq.Z = col_basis(cycles, p);
    int k = sq.Z.cols;
    Matrix C(k, 0);
    if (bound.cols > 0) {
        auto x = solve(sq.Z, mat_mod(bound, p), p);
        if (!x) throw InvariantError("subquotient: image does not lie in the kernel");
        C = *x;
    }
    Matrix B = col_basis(C, p);
    sq.imdim = B.cols;
    // Greedily extend the image basis to a basis of F_p^k by unit vectors.
    Matrix BE = B;
    for (int e = 0; e < k && BE.cols < k; ++e) {
        Matrix cand(k, 1);
        cand.at(e, 0) = 1;
        Matrix trial = hstack(BE, cand);
        if (rank(trial, p) == trial.cols) BE = trial;
    }
    if (BE.cols != k) throw InvariantError("subquotient: basis extension failed");
    sq.BE = BE;
    sq.BEinv = k > 0 ? inverse(BE, p) : Matrix(0, 0);
    return sq;
}

ZDiagonal sparse_z_diagonal(int rows, int cols, std::vector<SparseEntry> entries) {
    std::vector<std::map<int, int64_t>> row(rows);
    std::vector<std::set<int>> col(cols);
    for (const auto& e : entries) {
        if (e.val == 0) continue;
        int64_t v = row[e.row][e.col] + e.val;
        if (v == 0) {
            row[e.row].erase(e.col);
            col[e.col].erase(e.row);
        } else {
            row[e.row][e.col] = v;
            col[e.col].insert(e.row);
        }
    }
    ZDiagonal out;
    std::vector<char> row_dead(rows, 0);
    auto pivot_at = [&](int pi, int pj) {
        int64_t pv = row[pi].at(pj);
        std::vector<int> col_rows(col[pj].begin(), col[pj].end());
        for (int r : col_rows) {
            if (r == pi) continue;
            int64_t factor = row[r].at(pj) * pv;  // pv is +-1 so this divides
            for (const auto& [c, v] : row[pi]) {
                int64_t nv = (row[r].count(c) ? row[r].at(c) : 0) - factor * v;
                if (nv == 0) {
                    row[r].erase(c);
                    col[c].erase(r);
                } else {
                    row[r][c] = nv;
                    col[c].insert(r);
                }
            }
        }
        for (const auto& [c, v] : row[pi]) col[c].erase(pi);
        row[pi].clear();
        row_dead[pi] = 1;
        ++out.rank;
    };
    // unit pivots in passes with an escalating Markowitz-fill threshold, so the
    // cheap eliminations happen first without rescanning the whole matrix per step
    long long threshold = 0;
    while (true) {
        bool pivoted = false, units_left = false;
        for (int i = 0; i < rows; ++i) {
            if (row_dead[i]) continue;
            bool redo = true;
            while (redo && !row_dead[i]) {
                redo = false;
                for (const auto& [j, v] : row[i]) {
                    if (v != 1 && v != -1) continue;
                    units_left = true;
                    long long fill =
                        (long long)(row[i].size() - 1) * (long long)(col[j].size() - 1);
                    if (fill <= threshold) {
                        pivot_at(i, j);
                        pivoted = true;
                        redo = true;
                        break;
                    }
                }
            }
        }
        if (!pivoted) {
            if (!units_left) break;
            threshold = threshold == 0 ? 4 : threshold * 4;
        }
    }
    // survivors without unit entries: dense Smith form on the residue
    std::vector<int> live_rows, live_cols;
    for (int i = 0; i < rows; ++i)
        if (!row_dead[i] && !row[i].empty()) live_rows.push_back(i);
    std::set<int> lc;
    for (int i : live_rows)
        for (const auto& [j, v] : row[i]) lc.insert(j);
    live_cols.assign(lc.begin(), lc.end());
    if (!live_rows.empty()) {
        Matrix res((int)live_rows.size(), (int)live_cols.size());
        std::map<int, int> cidx;
        for (int k = 0; k < (int)live_cols.size(); ++k) cidx[live_cols[k]] = k;
        for (int k = 0; k < (int)live_rows.size(); ++k)
            for (const auto& [j, v] : row[live_rows[k]]) res.at(k, cidx.at(j)) = v;
        Snf s = snf(res);
        for (int i = 0; i < std::min(s.D.rows, s.D.cols); ++i) {
            int64_t d = s.D.at(i, i);
            if (d == 0) continue;
            ++out.rank;
            if (d > 1) out.nonunit_factors.push_back(d);
        }
    }
    std::sort(out.nonunit_factors.begin(), out.nonunit_factors.end());
    return out;
}

}
