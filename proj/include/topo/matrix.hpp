#ifndef TOPO_MATRIX_HPP
#define TOPO_MATRIX_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "topo/fp.hpp"

namespace topo {

// Dense row-major int64 matrix.  Doubles as an F_p matrix (entries kept as
// canonical residues by the mod-p routines) and as a genuine integer matrix
// for Smith normal form.  Everything here is small and exact; no attempt at
// sparse asymptotics.
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<int64_t> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a((size_t)r * c, 0) {}

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    int64_t& at(int i, int j) { return a[(size_t)i * cols + j]; }
    int64_t at(int i, int j) const { return a[(size_t)i * cols + j]; }

    bool operator==(const Matrix&) const = default;
};

Matrix mat_mod(const Matrix& m, int64_t p);
Matrix mat_mul(const Matrix& x, const Matrix& y, int64_t p);
Matrix mat_mul_int(const Matrix& x, const Matrix& y);  // no reduction; integer entries
Matrix mat_add(const Matrix& x, const Matrix& y, int64_t p);
Matrix mat_sub(const Matrix& x, const Matrix& y, int64_t p);
Matrix mat_scale(const Matrix& x, int64_t c, int64_t p);
Matrix transpose(const Matrix& m);
Matrix hstack(const Matrix& x, const Matrix& y);
Matrix vstack(const Matrix& x, const Matrix& y);
Matrix take_cols(const Matrix& m, const std::vector<int>& idx);
Matrix col(const Matrix& m, int j);
bool is_zero(const Matrix& m);

// Reduced row echelon form over F_p with the deterministic pivot rule:
// scan columns left to right, take the topmost nonzero entry at or below the
// current row.  pivots[k] = column of the k-th pivot.
struct Rref {
    Matrix R;
    std::vector<int> pivots;
};
Rref rref(const Matrix& m, int64_t p);

int rank(const Matrix& m, int64_t p);

// Columns form a basis of { x : m x = 0 }.
Matrix nullspace(const Matrix& m, int64_t p);

// Any solution X of m X = b (b may have several columns), or nullopt if
// inconsistent.  Free variables are set to 0, so the result is deterministic.
std::optional<Matrix> solve(const Matrix& m, const Matrix& b, int64_t p);

// The pivot columns of m: a basis of the column space, drawn from m itself.
Matrix col_basis(const Matrix& m, int64_t p);

// Inverse of a square invertible matrix over F_p.
Matrix inverse(const Matrix& m, int64_t p);

// Smith normal form over the integers: U * A * V = D with U, V unimodular
// and D diagonal, d1 | d2 | ... (nonnegative).
// Integer elimination tuned for large sparse boundary matrices: repeatedly
// pivot on +-1 entries (Schur complement stays integral), then hand any
// residue to the dense Smith form.  Returns the rank and the invariant
// factors greater than one.
struct SparseEntry {
    int row, col;
    int64_t val;
};
struct ZDiagonal {
    int rank = 0;
    std::vector<int64_t> nonunit_factors;
};
ZDiagonal sparse_z_diagonal(int rows, int cols, std::vector<SparseEntry> entries);

struct Snf {
    Matrix U, D, V;
};
Snf snf(Matrix A);

// A subquotient V/W of an ambient coordinate space, with a chosen basis:
// V = column span of Z (the "cycles"), W = column span of B inside V.
// Supports lifting basis vectors to the ambient space and expressing ambient
// elements of V in the quotient basis.  This is the workhorse behind every
// homology group and every induced map in the couple machinery.
struct Subquotient {
    int64_t p = 2;
    int ambient = 0;
    Matrix Z;     // ambient x k, basis of V
    Matrix BE;    // k x k invertible: [image basis | chosen complement]
    Matrix BEinv;
    int imdim = 0; // number of leading columns of BE spanning W

    int dim() const { return BE.cols - imdim; }

    // ambient x dim(): lifts of the quotient basis.
    Matrix basis_lift() const;

    // Is the ambient vector (column) inside V?
    bool in_subspace(const Matrix& v) const;

    // Coordinates in the quotient basis of ambient columns that lie in V.
    // Throws InvariantError if some column is not in V.
    Matrix coords(const Matrix& v) const;
};

// Build V/W from spanning matrices: V = span of cycles' columns (ambient x *),
// W = span of bound's columns (must lie inside V).
Subquotient make_subquotient(const Matrix& cycles, const Matrix& bound, int ambient, int64_t p);

}

#endif
