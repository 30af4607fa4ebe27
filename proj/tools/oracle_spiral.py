#!/usr/bin/env python3
"""Prototype oracle for the two homotopy spectral sequences.

Validates, over small prime fields and independently of the C++ library, the
design commitments for the bisimplicial (spiral) and cosimplicial (Tot) sides:

  1. The cycle/chain exact couple built from the horizontal Moore tower
     (D = vertical homology of the cycle subcomplexes, E = vertical homology
     of the chain columns, alpha by lifting through the tower map) is exact at
     every node when the tower map is levelwise onto, and its Massey derived
     pages agree with the column-filtration staircase pages of the total
     complex in dimension and differential rank for every r >= 1.

  2. Without the surjectivity hypothesis the couple genuinely fails exactness
     (single-entry bicomplex: defect at the alpha-source node above the entry),
     which is why the corpus generator emits tower-built instances and the
     fibrancy check gates the couple construction.

  3. The Tot-tower couple of a cochain-of-chain double complex is exact
     unconditionally (the tower projections are levelwise onto by
     construction) and its pages agree with the row staircase.

Also searches small seeds for tower instances with nonzero d2/d3 and prints
one of each as explicit matrices (frozen into the acceptance tests).

Run:  python3 tools/oracle_spiral.py
"""

import random
from itertools import product

# ------------------------------------------------------------ F_p matrices


def mat(rows, cols, entries=None):
    return [[0] * cols for _ in range(rows)] if entries is None else [list(r) for r in entries]


def matmul(A, B, p):
    ra, ca = len(A), len(A[0]) if A else 0
    rb, cb = len(B), len(B[0]) if B else 0
    assert ca == rb, (ra, ca, rb, cb)
    C = [[0] * cb for _ in range(ra)]
    for i in range(ra):
        Ai = A[i]
        for k in range(ca):
            a = Ai[k]
            if a:
                Bk = B[k]
                Ci = C[i]
                for j in range(cb):
                    Ci[j] = (Ci[j] + a * Bk[j]) % p
    return C


def matvec(A, v, p):
    return [sum(A[i][j] * v[j] for j in range(len(v))) % p for i in range(len(A))]


def rref(M, p):
    """Row-reduce a copy of M; returns (R, pivot_cols)."""
    R = [row[:] for row in M]
    rows = len(R)
    cols = len(R[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if R[i][c] % p), None)
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = pow(R[r][c], p - 2, p)
        R[r] = [(x * inv) % p for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c] % p:
                f = R[i][c]
                R[i] = [(R[i][j] - f * R[r][j]) % p for j in range(cols)]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(M, p):
    if not M or not M[0]:
        return 0
    return len(rref(M, p)[1])


def nullspace(M, p, cols=None):
    """Basis (list of column vectors) of ker(M) for M acting on F^cols."""
    if cols is None:
        cols = len(M[0]) if M and M[0] else 0
    if cols == 0:
        return []
    if not M or not M[0]:
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    R, pivots = rref(M, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * cols
        v[f] = 1
        for r_i, c in enumerate(pivots):
            v[c] = (-R[r_i][f]) % p
        basis.append(v)
    return basis


def solve(M, b, p):
    """One solution x of Mx = b, or None."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if rows == 0:
        return [0] * cols  # 0 = b trivially (b empty)
    aug = [M[i][:] + [b[i] % p] for i in range(rows)]
    R, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = [0] * cols
    for r_i, c in enumerate(pivots):
        x[c] = R[r_i][cols]
    return x


def basis_matrix(vecs, dim):
    """Column matrix from a list of vectors (dim x k)."""
    return [[v[i] for v in vecs] for i in range(dim)] if vecs else [[] for _ in range(dim)]


def col_basis(M, p):
    """Independent columns of M as vectors."""
    if not M or not M[0]:
        return []
    _, piv = rref(M, p)
    return [[M[i][c] for i in range(len(M))] for c in piv]


def span_dim(vecs, p):
    if not vecs:
        return 0
    return rank([list(r) for r in zip(*vecs)], p)  # rows = coords


# ------------------------------------------------------------ chain complexes


class Complex:
    """Bounded chain complex over F_p: dims[q], d[q]: C_q -> C_{q-1}."""

    def __init__(self, p, dims, d):
        self.p = p
        self.dims = dims  # list, index 0..Q
        self.d = d  # d[q] matrix dims[q-1] x dims[q], q >= 1
        for q in range(2, len(dims)):
            if dims[q] and dims[q - 2]:
                z = matmul(d[q - 1], d[q], p)
                assert all(all(x % p == 0 for x in row) for row in z), "d^2 != 0"

    def Q(self):
        return len(self.dims) - 1

    def dim(self, q):
        return self.dims[q] if 0 <= q < len(self.dims) else 0

    def diff(self, q):
        """Matrix C_q -> C_{q-1} (zero-shaped if out of range)."""
        if 1 <= q < len(self.dims):
            return self.d[q]
        rows = self.dim(q - 1)
        cols = self.dim(q)
        return [[0] * cols for _ in range(rows)]


class HomologyData:
    def __init__(self, cx):
        self.cx = cx
        p = cx.p
        self.Z = {}
        self.B = {}
        self.reps = {}
        for q in range(cx.Q() + 1):
            dq = cx.diff(q)
            Zq = nullspace(dq, p, cx.dim(q)) if cx.dim(q) else []
            Bcols = col_basis(cx.diff(q + 1), p) if cx.dim(q + 1) else []
            # reps: columns of Z independent modulo B
            reps = []
            cur = [v[:] for v in Bcols]
            base = span_dim(cur, p)
            for v in Zq:
                if span_dim(cur + [v], p) > base:
                    cur.append(v)
                    base += 1
                    reps.append(v)
            self.Z[q] = Zq
            self.B[q] = Bcols
            self.reps[q] = reps

    def hdim(self, q):
        return len(self.reps.get(q, []))

    def class_of(self, v, q):
        """Coordinates of cycle v in the homology basis at degree q."""
        p = self.cx.p
        reps = self.reps[q]
        B = self.B[q]
        k = len(reps)
        cols = reps + B
        if not cols:
            assert all(x % p == 0 for x in v), "nonzero cycle in zero homology"
            return [0] * k
        M = basis_matrix(cols, self.cx.dim(q))
        x = solve(M, v, p)
        assert x is not None, "vector not a cycle mod boundaries"
        return x[:k]


# ---------------------------------------------------------------- bicomplex


class Bicomplex:
    """B[n][q] over F_p with dh: (n,q)->(n-1,q), dv: (n,q)->(n,q-1),
    commuting (dh dv = dv dh), dh^2 = dv^2 = 0."""

    def __init__(self, p, dims, dh, dv):
        self.p = p
        self.dims = dims  # dims[n][q]
        self.dh = dh  # dh[n][q]
        self.dv = dv  # dv[n][q]
        self.N = len(dims) - 1
        self.Q = max(len(col) for col in dims) - 1
        def prod(A, B, rows, mid, cols):
            if rows == 0 or cols == 0 or mid == 0:
                return [[0] * cols for _ in range(rows)]
            return matmul(A, B, p)

        for n in range(self.N + 1):
            for q in range(self.Q + 1):
                if self.dim(n, q) == 0:
                    continue
                if n >= 2 and self.dim(n - 2, q):
                    z = prod(self.Dh(n - 1, q), self.Dh(n, q),
                             self.dim(n - 2, q), self.dim(n - 1, q), self.dim(n, q))
                    assert all(all(x % p == 0 for x in r) for r in z), "dh^2"
                if q >= 2 and self.dim(n, q - 2):
                    z = prod(self.Dv(n, q - 1), self.Dv(n, q),
                             self.dim(n, q - 2), self.dim(n, q - 1), self.dim(n, q))
                    assert all(all(x % p == 0 for x in r) for r in z), "dv^2"
                if n >= 1 and q >= 1 and self.dim(n - 1, q - 1):
                    a = prod(self.Dv(n - 1, q), self.Dh(n, q),
                             self.dim(n - 1, q - 1), self.dim(n - 1, q), self.dim(n, q))
                    b = prod(self.Dh(n, q - 1), self.Dv(n, q),
                             self.dim(n - 1, q - 1), self.dim(n, q - 1), self.dim(n, q))
                    assert a == b, "dh dv != dv dh"

    def dim(self, n, q):
        if 0 <= n < len(self.dims) and 0 <= q < len(self.dims[n]):
            return self.dims[n][q]
        return 0

    def Dh(self, n, q):
        if 1 <= n < len(self.dims) and 0 <= q < len(self.dims[n]) and self.dims[n][q]:
            src = self.dh[n]
            M = src.get(q) if isinstance(src, dict) else None
            if M is not None and M:
                return M
        return [[0] * self.dim(n, q) for _ in range(self.dim(n - 1, q))]

    def Dv(self, n, q):
        if 0 <= n < len(self.dims) and 1 <= q < len(self.dims[n]) and self.dims[n][q]:
            src = self.dv[n]
            M = src.get(q) if isinstance(src, dict) else None
            if M is not None and M:
                return M
        return [[0] * self.dim(n, q) for _ in range(self.dim(n, q - 1))]

    def column(self, n):
        dims = [self.dim(n, q) for q in range(self.Q + 1)]
        d = {q: self.Dv(n, q) for q in range(1, self.Q + 1)}
        return Complex(self.p, dims, d)


# ------------------------------------------------- spiral couple (bicomplex)


class SpiralCouple:
    """D_{n,p} = H_p(Z_n), E_{n,p} = H_p(C_n) for the horizontal Moore tower
    of a bicomplex; alpha by lifting through dh."""

    def __init__(self, bc):
        self.bc = bc
        p = bc.p
        self.p = p
        N, Q = bc.N, bc.Q
        # Z_n subcomplex bases: U[n][q] = basis vectors of ker(dh[n][q])
        self.U = {}
        self.Zcx = {}
        self.ZH = {}
        self.CH = {}
        for n in range(N + 1):
            Ubasis = {}
            for q in range(Q + 1):
                if bc.dim(n, q) == 0:
                    Ubasis[q] = []
                elif n == 0:
                    Ubasis[q] = [[1 if i == j else 0 for i in range(bc.dim(0, q))]
                                 for j in range(bc.dim(0, q))]
                else:
                    Ubasis[q] = nullspace(bc.Dh(n, q), p, bc.dim(n, q))
            # induced differential on Z_n: solve U_{q-1} x = dv U_q
            dims = [len(Ubasis[q]) for q in range(Q + 1)]
            d = {}
            for q in range(1, Q + 1):
                cols = []
                for v in Ubasis[q]:
                    w = matvec(bc.Dv(n, q), v, p)
                    if dims[q - 1]:
                        x = solve(basis_matrix(Ubasis[q - 1], bc.dim(n, q - 1)), w, p)
                        assert x is not None, "dv does not preserve ker dh"
                        cols.append(x)
                    else:
                        assert all(t % p == 0 for t in w)
                        cols.append([])
                d[q] = [[cols[j][i] for j in range(dims[q])] for i in range(dims[q - 1])]
            self.U[n] = Ubasis
            zc = Complex(p, dims, d)
            self.Zcx[n] = zc
            self.ZH[n] = HomologyData(zc)
            self.CH[n] = HomologyData(bc.column(n))

    def ddim(self, n, q):
        if 0 <= n <= self.bc.N and 0 <= q <= self.bc.Q:
            return self.ZH[n].hdim(q)
        return 0

    def edim(self, n, q):
        if 0 <= n <= self.bc.N and 0 <= q <= self.bc.Q:
            return self.CH[n].hdim(q)
        return 0

    def _zvec_to_amb(self, n, q, zv):
        """Z_n coordinate vector -> ambient B_{n,q} vector."""
        amb = [0] * self.bc.dim(n, q)
        for j, v in enumerate(self.U[n][q]):
            if zv[j]:
                for i in range(len(amb)):
                    amb[i] = (amb[i] + zv[j] * v[i]) % self.p
        return amb

    def _amb_to_zvec(self, n, q, amb):
        x = solve(basis_matrix(self.U[n][q], self.bc.dim(n, q)), amb, self.p)
        assert x is not None, "ambient vector not in Z_n"
        return x

    def beta(self, n, q):
        """D_{n,q} -> E_{n,q}, inclusion-induced (matrix)."""
        rows = self.edim(n, q)
        cols = self.ddim(n, q)
        M = [[0] * cols for _ in range(rows)]
        for j in range(cols):
            zrep = self.ZH[n].reps[q][j]
            amb = self._zvec_to_amb(n, q, zrep)
            cl = self.CH[n].class_of(amb, q)
            for i in range(rows):
                M[i][j] = cl[i]
        return M

    def gamma(self, n, q):
        """E_{n,q} -> D_{n-1,q}, induced by dh (lands in Z_{n-1})."""
        rows = self.ddim(n - 1, q)
        cols = self.edim(n, q)
        M = [[0] * cols for _ in range(rows)]
        if n == 0:
            return [[0] * cols for _ in range(0)]
        for j in range(cols):
            crep = self.CH[n].reps[q][j]
            w = matvec(self.bc.Dh(n, q), crep, self.p)
            zv = self._amb_to_zvec(n - 1, q, w)
            cl = self.ZH[n - 1].class_of(zv, q)
            for i in range(rows):
                M[i][j] = cl[i]
        return M

    def alpha(self, n, q):
        """D_{n,q} -> D_{n+1,q-1} by lifting through dh[n+1]; returns
        (matrix, lift_failures)."""
        rows = self.ddim(n + 1, q - 1)
        cols = self.ddim(n, q)
        M = [[0] * cols for _ in range(rows)]
        fails = 0
        if q == 0 or n + 1 > self.bc.N:
            return [[0] * cols for _ in range(rows)], 0
        for j in range(cols):
            zrep = self.ZH[n].reps[q][j]
            amb = self._zvec_to_amb(n, q, zrep)
            c = solve(self.bc.Dh(n + 1, q), amb, self.p)
            if c is None:
                fails += 1
                continue
            w = matvec(self.bc.Dv(n + 1, q), c, self.p)
            zv = self._amb_to_zvec(n + 1, q - 1, w)
            cl = self.ZH[n + 1].class_of(zv, q - 1)
            for i in range(rows):
                M[i][j] = cl[i]
        return M, fails


def couple_exactness_defects(sc, skip_p0_alpha_source=False):
    """Sum of defect dims at the three node families over the window."""
    p = sc.p
    N, Q = sc.bc.N, sc.bc.Q
    defects = []
    for n in range(N + 1):
        for q in range(Q + 1):
            # node E_{n,q}: im beta = ker gamma
            bet = sc.beta(n, q)
            gam = sc.gamma(n, q)
            imb = [ [bet[i][j] for i in range(len(bet))] for j in range(len(bet[0]) if bet else 0) ]
            kerg = nullspace(gam, p, sc.edim(n, q)) if sc.edim(n, q) else []
            dims_match = span_dim(imb, p)
            ker_dim = len(kerg)
            inter = dims_match  # im beta subset ker gamma iff gamma.beta = 0
            gb = matmul(gam, bet, p) if (gam and bet and gam[0] is not None) else []
            ok_subset = all(all(x % p == 0 for x in row) for row in gb) if gb else True
            d1 = (ker_dim - dims_match) if ok_subset else -1
            # node D_{n,q} as beta-source: ker beta = im alpha from D_{n-1,q+1}
            kerb = nullspace(bet, p, sc.ddim(n, q)) if sc.ddim(n, q) else []
            if n >= 1:
                al, _ = sc.alpha(n - 1, q + 1)
                ima = [[al[i][j] for i in range(len(al))] for j in range(len(al[0]) if al else 0)]
            else:
                ima = []
            d2 = len(kerb) - span_dim(ima, p)
            # node D_{n,q} as alpha-source: ker alpha = im gamma from E_{n+1,q}
            al2, f2 = sc.alpha(n, q)
            kera = nullspace(al2, p, sc.ddim(n, q)) if sc.ddim(n, q) else []
            gam2 = sc.gamma(n + 1, q) if n + 1 <= N else []
            img = [[gam2[i][j] for i in range(len(gam2))] for j in range(len(gam2[0]) if gam2 and gam2[0] is not None else 0)] if gam2 else []
            d3 = len(kera) - span_dim(img, p)
            if skip_p0_alpha_source and q == 0:
                d3 = 0
            defects.append(((n, q), d1, d2, d3, f2))
    return defects


# ------------------------------------------------ Massey derived pages


def massey_pages(sc, rmax):
    """Pages E^r_{n,q} dims and d^r ranks from the couple via the r-th
    derived-couple formulas."""
    p = sc.p
    N, Q = sc.bc.N, sc.bc.Q
    # precompute homology-level maps
    beta = {(n, q): sc.beta(n, q) for n in range(N + 1) for q in range(Q + 1)}
    gamma = {(n, q): sc.gamma(n, q) for n in range(N + 1) for q in range(Q + 1)}
    alpha = {}
    for n in range(N + 1):
        for q in range(Q + 1):
            alpha[(n, q)], _ = sc.alpha(n, q)

    def alpha_pow(n, q, k):
        """alpha^k starting at D_{n,q}: D_{n,q} -> D_{n+k,q-k}; identity if
        k = 0; zero matrix of the right shape if any stage is out of range."""
        src = sc.ddim(n, q)
        tn, tq = n + k, q - k
        tgt = sc.ddim(tn, tq)
        M = [[1 if i == j else 0 for j in range(src)] for i in range(src)]
        cn, cq = n, q
        for _ in range(k):
            nxt = sc.ddim(cn + 1, cq - 1)
            if src == 0 or nxt == 0:
                return [[0] * src for _ in range(tgt)]
            A = alpha.get((cn, cq))
            if A is None or not A:
                return [[0] * src for _ in range(tgt)]
            M = matmul(A, M, p)
            cn, cq = cn + 1, cq - 1
        return M

    pages = {}
    for r in range(1, rmax + 1):
        for n in range(N + 1):
            for q in range(Q + 1):
                e = sc.edim(n, q)
                # Z^r = gamma^{-1}(im alpha^{r-1}: D_{n-r,q+r-1} -> D_{n-1,q})
                if n == 0:
                    Zr_basis = [[1 if i == j else 0 for i in range(e)] for j in range(e)]
                else:
                    g = gamma[(n, q)]
                    tgt = sc.ddim(n - 1, q)
                    if n - r >= 0 and q + r - 1 <= Q:
                        A = alpha_pow(n - r, q + r - 1, r - 1)
                        S = [[A[i][j] for i in range(len(A))] for j in range(len(A[0]) if A else 0)]
                    else:
                        S = []
                    # {v : g v in span S}: nullspace of Qc . g, Qc = proj to coker S
                    if tgt == 0:
                        Zr_basis = [[1 if i == j else 0 for i in range(e)] for j in range(e)]
                    else:
                        Smat = basis_matrix(S, tgt) if S else [[] for _ in range(tgt)]
                        stack = [[g[i][j] for j in range(e)] + ([-s for s in Smat[i]] if S else [])
                                 for i in range(tgt)]
                        nv = nullspace(stack, p, e + len(S))
                        Zr_basis = []
                        seen = []
                        for v in nv:
                            w = v[:e]
                            if span_dim(seen + [w], p) > span_dim(seen, p):
                                seen.append(w)
                                Zr_basis.append(w)
                # B^r = beta(ker alpha^{r-1}: D_{n,q} -> D_{n+r-1,q-r+1})
                A2 = alpha_pow(n, q, r - 1)
                kerA = nullspace(A2, p, sc.ddim(n, q)) if sc.ddim(n, q) else []
                b = beta[(n, q)]
                Br_basis = []
                for v in kerA:
                    Br_basis.append(matvec(b, v, p) if b else [0] * e)
                zdim = span_dim(Zr_basis, p)
                bdim = span_dim(Br_basis, p)
                # B^r subset Z^r (exact couple); page dim:
                pages[(r, n, q)] = (zdim - bdim, Zr_basis, Br_basis)
    # d^r ranks
    dranks = {}
    for r in range(1, rmax + 1):
        for n in range(N + 1):
            for q in range(Q + 1):
                dims, Zr, Br = pages[(r, n, q)]
                if dims == 0 or n - r < 0:
                    dranks[(r, n, q)] = 0
                    continue
                tq = q + r - 1
                if tq > Q:
                    dranks[(r, n, q)] = 0
                    continue
                _, Zt, Bt = pages[(r, n - r, tq)]
                imgs = []
                for e_vec in Zr:
                    ge = matvec(gamma[(n, q)], e_vec, p) if gamma[(n, q)] else []
                    # solve alpha^{r-1} x = ge, x in D_{n-r, q+r-1}
                    A = alpha_pow(n - r, tq, r - 1)
                    x = solve(A, ge, p) if sc.ddim(n - 1, q) else [0] * sc.ddim(n - r, tq)
                    if x is None:
                        raise AssertionError("derived-page lift failed (couple not exact?)")
                    bx = matvec(beta[(n - r, tq)], x, p) if beta[(n - r, tq)] else []
                    imgs.append(bx)
                denom = Bt
                base = span_dim(denom, p)
                rk = span_dim(denom + imgs, p) - base
                dranks[(r, n, q)] = rk
    return {k: v[0] for k, v in pages.items()}, dranks


# ------------------------------------------------ column staircase (total)


def total_complex(bc):
    """Column-filtered total complex data: for each t, list of (n,q) blocks
    with n+q = t, and the matrix of d = dh + (-1)^n dv."""
    N, Q = bc.N, bc.Q
    blocks = {}
    for t in range(N + Q + 1):
        blocks[t] = [(n, t - n) for n in range(N + 1) if 0 <= t - n <= Q and bc.dim(n, t - n)]
    return blocks


def staircase_pages(bc, rmax):
    """Column filtration F_s = blocks with n <= s; returns page dims and d^r
    ranks indexed (r, s, q=t-s)."""
    p = bc.p
    N, Q = bc.N, bc.Q
    blocks = total_complex(bc)

    def tdim(t):
        return sum(bc.dim(n, q) for (n, q) in blocks.get(t, []))

    def offset(t, n, q):
        off = 0
        for (bn, bq) in blocks[t]:
            if (bn, bq) == (n, q):
                return off
            off += bc.dim(bn, bq)
        raise KeyError

    def dmat(t):
        """T_t -> T_{t-1}."""
        rows, cols = tdim(t - 1), tdim(t)
        M = [[0] * cols for _ in range(rows)]
        for (n, q) in blocks.get(t, []):
            co = offset(t, n, q)
            if n >= 1 and bc.dim(n - 1, q):
                ro = offset(t - 1, n - 1, q)
                Dh = bc.Dh(n, q)
                for i in range(len(Dh)):
                    for j in range(len(Dh[0])):
                        M[ro + i][co + j] = (M[ro + i][co + j] + Dh[i][j]) % p
            if q >= 1 and bc.dim(n, q - 1):
                ro = offset(t - 1, n, q - 1)
                Dv = bc.Dv(n, q)
                sgn = (-1) ** n
                for i in range(len(Dv)):
                    for j in range(len(Dv[0])):
                        M[ro + i][co + j] = (M[ro + i][co + j] + sgn * Dv[i][j]) % p
        return M

    def filt_proj(t, s):
        """Projection T_t -> (blocks with n > s), to test membership in F_s."""
        rows = []
        off = 0
        for (n, q) in blocks.get(t, []):
            d = bc.dim(n, q)
            if n > s:
                for i in range(d):
                    row = [0] * tdim(t)
                    row[off + i] = 1
                    rows.append(row)
            off += d
        return rows

    def incl_filt(t, s):
        """Basis of F_s T_t as ambient vectors."""
        out = []
        off = 0
        for (n, q) in blocks.get(t, []):
            d = bc.dim(n, q)
            if n <= s:
                for i in range(d):
                    v = [0] * tdim(t)
                    v[off + i] = 1
                    out.append(v)
            off += d
        return out

    D = {t: dmat(t) for t in range(1, N + Q + 1)}

    def Zr(s, t, r):
        """Basis of {x in F_s T_t : dx in F_{s-r}}."""
        amb = tdim(t)
        if amb == 0:
            return []
        Fbasis = incl_filt(t, s)
        if not Fbasis:
            return []
        if t == 0:
            return Fbasis
        proj = filt_proj(t - 1, s - r)
        if not proj:
            return Fbasis
        Dm = D[t]
        Fmat = basis_matrix(Fbasis, amb)
        comp = matmul(proj, matmul(Dm, Fmat, p), p)
        nv = nullspace(comp, p, len(Fbasis))
        out = []
        for v in nv:
            out.append(matvec(Fmat, v, p))
        return out

    pages = {}
    dranks = {}
    store = {}
    for r in range(1, rmax + 1):
        for t in range(N + Q + 1):
            for s in range(N + 1):
                q = t - s
                if q < 0 or q > Q:
                    continue
                Znum = Zr(s, t, r)
                Zden1 = Zr(s - 1, t, r - 1) if s >= 1 else []
                Zd = Zr(s + r - 1, t + 1, r - 1)
                dZ = [matvec(D[t + 1], v, p) for v in Zd] if (t + 1 in D and Zd) else []
                den = Zden1 + dZ
                num = span_dim(Znum, p)
                mix = span_dim(den, p)
                both = span_dim(Znum + den, p)
                # den subset num must hold
                assert both == num, ("staircase denominator escapes numerator", r, s, t)
                pages[(r, s, q)] = num - mix
                store[(r, s, q)] = (Znum, den)
    for r in range(1, rmax + 1):
        for (rr, s, q) in list(store):
            if rr != r:
                continue
            t = s + q
            Znum, den = store[(r, s, q)]
            if s - r < 0 or pages.get((r, s, q), 0) == 0:
                dranks[(r, s, q)] = 0
                continue
            tq = q + r - 1
            if (r, s - r, tq) not in store:
                dranks[(r, s, q)] = 0
                continue
            _, den_t = store[(r, s - r, tq)]
            imgs = [matvec(D[t], v, p) for v in Znum] if t in D else []
            base = span_dim(den_t, p)
            dranks[(r, s, q)] = span_dim(den_t + imgs, p) - base
    return pages, dranks


# ------------------------------------------------------ generators


def rand_matrix(rng, rows, cols, p):
    return [[rng.randrange(p) for _ in range(cols)] for _ in range(rows)]


def random_complex(rng, p, Q, dmax):
    """Random chain complex: dims then differentials with d^2 = 0 by solving."""
    dims = [rng.randrange(dmax + 1) for _ in range(Q + 1)]
    d = {}
    for q in range(1, Q + 1):
        if dims[q] == 0 or dims[q - 1] == 0:
            d[q] = [[0] * dims[q] for _ in range(dims[q - 1])]
            continue
        if q == 1 or dims[q - 2] == 0 or not any(map(any, d[q - 1])):
            d[q] = rand_matrix(rng, dims[q - 1], dims[q], p)
            continue
        # sample from ker of (d_{q-1} o -): columns must lie in ker d_{q-1}
        K = nullspace(d[q - 1], p, dims[q - 1])
        cols = []
        for _ in range(dims[q]):
            v = [0] * dims[q - 1]
            for b in K:
                c = rng.randrange(p)
                v = [(x + c * y) % p for x, y in zip(v, b)]
            cols.append(v)
        d[q] = [[cols[j][i] for j in range(dims[q])] for i in range(dims[q - 1])]
    return Complex(p, dims, d)


def cone_of_identity(rng, p, Q, dmax):
    """Acyclic complex: cone of the identity of a random complex W.
    C_q = W_{q-1} (+) W_q, d(a,b) = (-dW a, dW b + a)."""
    W = random_complex(rng, p, max(0, Q - 1), dmax)
    dims = [(W.dims[q - 1] if 1 <= q <= W.Q() + 1 else 0) + (W.dims[q] if q <= W.Q() else 0)
            for q in range(Q + 1)]
    d = {}
    for q in range(1, Q + 1):
        ra = W.dims[q - 2] if 2 <= q <= W.Q() + 2 and q - 2 <= W.Q() else 0
        rb = W.dims[q - 1] if q - 1 <= W.Q() else 0
        ca = W.dims[q - 1] if q - 1 <= W.Q() else 0
        cb = W.dims[q] if q <= W.Q() else 0
        M = [[0] * (ca + cb) for _ in range(ra + rb)]
        for i in range(ra):  # -dW on the shifted part
            for j in range(ca):
                M[i][j] = (-W.diff(q - 1)[i][j]) % p
        for i in range(rb):
            for j in range(cb):
                M[ra + i][ca + j] = W.diff(q)[i][j]
            if i < ca:
                M[ra + i][i] = (M[ra + i][i] + 1) % p  # identity component
        d[q] = M
    return Complex(p, dims, d)


def tower_bicomplex(rng, p, N, Q, dmax, acyclic_top=True):
    """Fibrant tower: C_n = Z_{n-1} (+) K_n with twisted vertical
    differential, dh = include-then-project (levelwise onto its image
    Z_{n-1}); the top kernel is acyclic so the bounded tower's couple is
    exact at the last column too."""
    Zprev = random_complex(rng, p, Q, dmax)
    cols = []  # list of (dims, dv) per n
    dhs = [None]
    # n = 0: bottom convention: C_0 = Z_0 = first complex
    cols.append(Zprev)
    for n in range(1, N + 1):
        if acyclic_top and n == N:
            K = cone_of_identity(rng, p, Q, max(1, dmax - 1))
        else:
            K = random_complex(rng, p, Q, max(1, dmax - 1))
        T = Zprev
        dims = [T.dims[q] + K.dims[q] for q in range(Q + 1)]
        # psi: T_q -> K_{q-1} with psi dT + dK psi = 0: solve entrywise
        psi = {}
        for q in range(1, Q + 1):
            rows, colsn = K.dims[q - 1], T.dims[q]
            if rows == 0 or colsn == 0:
                psi[q] = [[0] * colsn for _ in range(rows)]
                continue
            # unknown entries X (rows x cols): X dT_{q+1}?? constraint:
            # psi_{q} dT_{q+1} + ... easier: treat psi as collection indexed by q
            psi[q] = None
        # solve all psi_q jointly: variables X_q: T_q -> K_{q-1},
        # constraints for each q >= 2 wait: condition of d^2=0 derived:
        # psi_{q-1} dT_q + dK_{q-1} psi_q = 0 for all q
        # build linear system over all entries
        var_index = {}
        nv = 0
        for q in range(1, Q + 1):
            r, c = K.dims[q - 1], T.dims[q]
            for i in range(r):
                for j in range(c):
                    var_index[(q, i, j)] = nv
                    nv += 1
        rows_sys = []
        for q in range(2, Q + 1):
            # psi_{q-1} dT_q + dK_{q-1} psi_q = 0 : K.dims[q-2] x T.dims[q]
            rr, cc = K.dims[q - 2], T.dims[q]
            for i in range(rr):
                for j in range(cc):
                    row = [0] * nv
                    # (psi_{q-1} dT_q)_{ij} = sum_m psi_{q-1}[i][m] dT_q[m][j]
                    for m in range(T.dims[q - 1]):
                        key = (q - 1, i, m)
                        if key in var_index:
                            row[var_index[key]] = (row[var_index[key]] + T.diff(q)[m][j]) % p
                    # (dK_{q-1} psi_q)_{ij} = sum_m dK_{q-1}[i][m] psi_q[m][j]
                    for m in range(K.dims[q - 1]):
                        key = (q, m, j)
                        if key in var_index:
                            row[var_index[key]] = (row[var_index[key]] + K.diff(q - 1)[i][m]) % p
                    if any(row):
                        rows_sys.append(row)
        if nv:
            sols = nullspace(rows_sys, p, nv) if rows_sys else \
                [[1 if i == j else 0 for i in range(nv)] for j in range(nv)]
            vec = [0] * nv
            for b in sols:
                c = rng.randrange(p)
                vec = [(x + c * y) % p for x, y in zip(vec, b)]
        else:
            vec = []
        psim = {}
        for q in range(1, Q + 1):
            r, c = K.dims[q - 1], T.dims[q]
            M = [[0] * c for _ in range(r)]
            for i in range(r):
                for j in range(c):
                    M[i][j] = vec[var_index[(q, i, j)]] if (q, i, j) in var_index else 0
            psim[q] = M
        # C_n differential: (t,k) -> (dT t, psi t + dK k)
        dv = {}
        for q in range(1, Q + 1):
            rt, ct = T.dims[q - 1], T.dims[q]
            rk, ck = K.dims[q - 1], K.dims[q]
            M = [[0] * (ct + ck) for _ in range(rt + rk)]
            for i in range(rt):
                for j in range(ct):
                    M[i][j] = T.diff(q)[i][j]
            for i in range(rk):
                for j in range(ct):
                    M[rt + i][j] = psim[q][i][j]
                for j in range(ck):
                    M[rt + i][ct + j] = K.diff(q)[i][j]
            dv[q] = M
        Cn = Complex(p, dims, dv)
        cols.append(Cn)
        # dh_n: C_n -> C_{n-1}: project to T = Z_{n-1}, include into C_{n-1}
        prev_dims = cols[n - 1].dims
        dh_n = {}
        for q in range(Q + 1):
            M = [[0] * dims[q] for _ in range(prev_dims[q])]
            # Z_{n-1} sits inside C_{n-1}: for n-1 = 0 it IS C_0; for n-1 >= 1
            # it is the K-part (last K.dims coords)
            if n - 1 == 0:
                zoff = 0
            else:
                zoff = prev_dims[q] - T.dims[q]
            for i in range(T.dims[q]):
                M[zoff + i][i] = 1
            dh_n[q] = M
        dhs.append(dh_n)
        Zprev = K
    dims = [c.dims for c in cols]
    dh = [None] + [{q: dhs[n][q] for q in range(Q + 1)} for n in range(1, N + 1)]
    dv = [{q: cols[n].diff(q) for q in range(1, Q + 1)} for n in range(N + 1)]
    # package into Bicomplex format
    dh_fmt = [None]
    for n in range(1, N + 1):
        dh_fmt.append({q: dh[n][q] for q in range(Q + 1)})
    return Bicomplex(p, dims, [None] + [dh_fmt[n] for n in range(1, N + 1)], dv)


def random_bicomplex(rng, p, N, Q, dmax):
    """Uniform-ish random commuting bicomplex: columns random complexes,
    dh chain maps with dh^2 = 0 solved columnwise."""
    colsx = [random_complex(rng, p, Q, dmax) for _ in range(N + 1)]
    dims = [c.dims for c in colsx]
    dh = [None]
    prev_dh = None
    for n in range(1, N + 1):
        # chain map f: col_n -> col_{n-1} with (prev f' ) f = 0
        A, B = colsx[n], colsx[n - 1]
        nv = 0
        var_index = {}
        for q in range(Q + 1):
            for i in range(B.dims[q]):
                for j in range(A.dims[q]):
                    var_index[(q, i, j)] = nv
                    nv += 1
        rows_sys = []
        # chain-map: dB f_q = f_{q-1} dA  for q >= 1
        for q in range(1, Q + 1):
            for i in range(B.dims[q - 1]):
                for j in range(A.dims[q]):
                    row = [0] * nv
                    for m in range(B.dims[q]):
                        key = (q, m, j)
                        row[var_index[key]] = (row[var_index[key]] + B.diff(q)[i][m]) % p
                    for m in range(A.dims[q - 1]):
                        key = (q - 1, i, m)
                        row[var_index[key]] = (row[var_index[key]] - A.diff(q)[m][j]) % p
                    if any(row):
                        rows_sys.append(row)
        # composition zero: prev_dh . f = 0
        if prev_dh is not None:
            C = colsx[n - 2]
            for q in range(Q + 1):
                for i in range(C.dims[q]):
                    for j in range(A.dims[q]):
                        row = [0] * nv
                        for m in range(B.dims[q]):
                            key = (q, m, j)
                            row[var_index[key]] = (row[var_index[key]] + prev_dh[q][i][m]) % p
                        if any(row):
                            rows_sys.append(row)
        if nv:
            sols = nullspace(rows_sys, p, nv) if rows_sys else \
                [[1 if i == j else 0 for i in range(nv)] for j in range(nv)]
            vec = [0] * nv
            for b in sols:
                c = rng.randrange(p)
                vec = [(x + c * y) % p for x, y in zip(vec, b)]
        else:
            vec = []
        f = {}
        for q in range(Q + 1):
            M = [[0] * A.dims[q] for _ in range(B.dims[q])]
            for i in range(B.dims[q]):
                for j in range(A.dims[q]):
                    M[i][j] = vec[var_index[(q, i, j)]]
            f[q] = M
        dh.append(f)
        prev_dh = f
    dv = [{q: colsx[n].diff(q) for q in range(1, Q + 1)} for n in range(N + 1)]
    return Bicomplex(p, dims, dh, dv)


def single_entry(p, n0, q0, N, Q):
    dims = [[1 if (n == n0 and q == q0) else 0 for q in range(Q + 1)] for n in range(N + 1)]
    dh = [None] + [{} for _ in range(N)]
    dv = [{} for _ in range(N + 1)]
    return Bicomplex(p, dims, dh, dv)


# ------------------------------------------------------- Tot tower (dual)


class TotSide:
    """Cochain-of-chain double complex K^n_m (delta raises n, dv lowers m).
    Tower Tot^s = T / (blocks n > s); couple D^{s,p} = H_p(Tot^s),
    E^{s,p} = H_{p+s}(K^s); row staircase on the decreasing filtration
    G_s = blocks n >= s.  Total degree of block (n,m) is t = m - n."""

    def __init__(self, bc_flipped):
        """Built from a Bicomplex by relabeling: K^n := column (N-n),
        delta^n := dh_{N-n}."""
        self.bc = bc_flipped
        self.p = bc_flipped.p
        self.N = bc_flipped.N
        self.M = bc_flipped.Q

    def kdim(self, n, m):
        return self.bc.dim(self.N - n, m) if 0 <= n <= self.N else 0

    def delta(self, n, m):
        """K^n_m -> K^{n+1}_m."""
        return self.bc.Dh(self.N - n, m)

    def dvm(self, n, m):
        return self.bc.Dv(self.N - n, m)

    def blocks(self, t):
        return [(n, t + n) for n in range(self.N + 1) if 0 <= t + n <= self.M
                and self.kdim(n, t + n)]

    def tot_layout(self, t, smax):
        """Blocks of Tot^{smax} at total degree t, with offsets."""
        out = []
        off = 0
        for (n, m) in self.blocks(t):
            if n <= smax:
                out.append((n, m, off))
                off += self.kdim(n, m)
        return out, off

    def tot_d(self, t, smax):
        """Differential Tot^{smax}_t -> Tot^{smax}_{t-1}."""
        p = self.p
        src, cs = self.tot_layout(t, smax)
        tgt, ct = self.tot_layout(t - 1, smax)
        pos = {(n, m): off for (n, m, off) in tgt}
        Mx = [[0] * cs for _ in range(ct)]
        for (n, m, off) in src:
            dv = self.dvm(n, m)
            if m >= 1 and (n, m - 1) in pos:
                ro = pos[(n, m - 1)]
                sgn = (-1) ** (self.N - n)
                for i in range(len(dv)):
                    for j in range(self.kdim(n, m)):
                        Mx[ro + i][off + j] = (Mx[ro + i][off + j] + sgn * dv[i][j]) % p
            de = self.delta(n, m)
            if n + 1 <= smax and (n + 1, m) in pos:
                ro = pos[(n + 1, m)]
                for i in range(len(de)):
                    for j in range(self.kdim(n, m)):
                        Mx[ro + i][off + j] = (Mx[ro + i][off + j] + de[i][j]) % p
        return Mx

    def tot_homology(self, smax):
        """HomologyData-like dict t -> (reps, class solver) for Tot^{smax}."""
        p = self.p
        data = {}
        for t in range(-self.N - 1, self.M + 2):
            _, dim_t = self.tot_layout(t, smax)
            d_t = self.tot_d(t, smax) if dim_t else []
            _, dim_dn = self.tot_layout(t - 1, smax)
            Zt = nullspace(d_t, p, dim_t) if dim_dn else \
                [[1 if i == j else 0 for i in range(dim_t)] for j in range(dim_t)]
            dup = self.tot_d(t + 1, smax)
            Bt = col_basis(dup, p) if dup and dup[0:] and self.tot_layout(t + 1, smax)[1] else []
            reps = []
            cur = [v[:] for v in Bt]
            base = span_dim(cur, p)
            for v in Zt:
                if span_dim(cur + [v], p) > base:
                    cur.append(v)
                    base += 1
                    reps.append(v)
            data[t] = (reps, Bt, dim_t)
        return data


def tot_couple_and_pages(ts, rmax):
    """Build the Tot couple, check exactness, return page dims + d_r ranks
    keyed (r, s, p) with p the fiber degree (chain degree m = p + s)."""
    p = ts.p
    N, M = ts.N, ts.M
    # homology of each Tot^s
    H = {s: ts.tot_homology(s) for s in range(N + 1)}

    def ddim(s, t):
        if s < 0:
            return 0
        if s > N:
            s = N
        return len(H[s][t][0]) if t in H[s] else 0

    # E^{s,p} = H_{p+s}(K^s column)
    colH = {}
    for s in range(N + 1):
        dims = [ts.kdim(s, m) for m in range(M + 1)]
        d = {m: ts.dvm(s, m) for m in range(1, M + 1)}
        colH[s] = HomologyData(Complex(p, dims, d))

    def edim(s, pp):
        m = pp + s
        return colH[s].hdim(m) if 0 <= s <= N and 0 <= m <= M else 0

    def embed_fiber(s, vec, m):
        """K^s_m vector -> Tot^s total-degree (m-s) ambient vector."""
        t = m - s
        lay, dim_t = ts.tot_layout(t, s)
        out = [0] * dim_t
        for (n, mm, off) in lay:
            if n == s and mm == m:
                for i in range(len(vec)):
                    out[off + i] = vec[i]
        return out

    def proj_tot(s_from, s_to, vec, t):
        """Tot^{s_from}_t -> Tot^{s_to}_t (drop blocks n > s_to)."""
        lay_f, _ = ts.tot_layout(t, s_from)
        lay_t, dim_t = ts.tot_layout(t, s_to)
        pos = {(n, m): off for (n, m, off) in lay_t}
        out = [0] * dim_t
        for (n, m, off) in lay_f:
            if (n, m) in pos:
                for i in range(ts.kdim(n, m)):
                    out[pos[(n, m)] + i] = vec[off + i]
        return out

    def class_in(s, t, vec):
        reps, Bt, dim_t = H[s][t]
        cols = reps + Bt
        if not cols:
            assert all(x % p == 0 for x in vec)
            return [0] * 0
        sol = solve(basis_matrix(cols, dim_t), vec, p)
        assert sol is not None
        return sol[:len(reps)]

    # couple maps as matrices on homology bases
    alpha = {}  # D^{s,t} -> D^{s-1,t}
    gamma = {}  # E^{s,p} -> D^{s, p... t = p} fiber deg p <-> total deg p
    beta = {}   # D^{s-1,t} -> E^{s, ...}: connecting

    for s in range(N + 1):
        for t in range(-N, M + 1):
            # alpha
            rows, cols = ddim(s - 1, t), ddim(s, t)
            A = [[0] * cols for _ in range(rows)]
            for j in range(cols):
                rep = H[s][t][0][j]
                pv = proj_tot(s, s - 1, rep, t) if s >= 1 else []
                if s >= 1 and rows:
                    cl = class_in(s - 1, t, pv)
                    for i in range(rows):
                        A[i][j] = cl[i]
            alpha[(s, t)] = A
            # gamma: E^{s,p} with p = t: embed fiber cycle
            rows_g, cols_g = ddim(s, t), edim(s, t)
            G = [[0] * cols_g for _ in range(rows_g)]
            for j in range(cols_g):
                m = t + s
                rep = colH[s].reps[m][j]
                amb = embed_fiber(s, rep, m)
                cl = class_in(s, t, amb)
                for i in range(rows_g):
                    G[i][j] = cl[i]
            gamma[(s, t)] = G
            # beta: D^{s-1,t} -> E^{s,t-1}: lift x from Tot^{s-1} to Tot^s,
            # apply D, result lies in fiber block (s, .)
            rows_b, cols_b = edim(s, t - 1), ddim(s - 1, t)
            Bm = [[0] * cols_b for _ in range(rows_b)]
            if s >= 1:
                for j in range(cols_b):
                    rep = H[s - 1][t][0][j]
                    # lift: same coords, zero on the new block (n = s)
                    lay_s, dim_s = ts.tot_layout(t, s)
                    lay_p, _ = ts.tot_layout(t, s - 1)
                    lift = [0] * dim_s
                    pos = {(n, m): off for (n, m, off) in lay_s}
                    for (n, m, off) in lay_p:
                        for i in range(ts.kdim(n, m)):
                            lift[pos[(n, m)] + i] = rep[off + i]
                    dv = matvec(ts.tot_d(t, s), lift, p) if ts.tot_layout(t - 1, s)[1] else []
                    # dv lies in fiber block (s, t-1+s): extract and classify
                    m_f = (t - 1) + s
                    lay_d, _ = ts.tot_layout(t - 1, s)
                    fib = [0] * ts.kdim(s, m_f)
                    for (n, m, off) in lay_d:
                        comp = dv[off:off + ts.kdim(n, m)]
                        if n == s:
                            fib = comp
                        else:
                            assert all(x % p == 0 for x in comp), "connecting escapes fiber"
                    if rows_b:
                        cl = colH[s].class_of(fib, m_f)
                        for i in range(rows_b):
                            Bm[i][j] = cl[i]
            beta[(s, t)] = Bm

    # exactness check
    defects = 0
    for s in range(N + 1):
        for t in range(-N, M + 1):
            # at E^{s,t}: im(beta from D^{s-1,t+1}) = ker(gamma)
            bet = beta[(s, t + 1)] if (s, t + 1) in beta else []
            gam = gamma[(s, t)]
            imb = [[bet[i][j] for i in range(len(bet))] for j in range(len(bet[0]) if bet else 0)]
            kerg = nullspace(gam, p, edim(s, t)) if edim(s, t) else []
            gb = matmul(gam, bet, p) if (gam and bet and len(gam) and len(bet) and len(bet[0]) and len(gam[0]) == len(bet)) else []
            ok = all(all(x % p == 0 for x in r) for r in gb) if gb else True
            d1 = len(kerg) - span_dim(imb, p) if ok else -99
            # at D^{s,t} between gamma and alpha: im gamma = ker alpha
            kera = nullspace(alpha[(s, t)], p, ddim(s, t)) if ddim(s, t) else []
            img = [[gamma[(s, t)][i][j] for i in range(len(gamma[(s, t)]))]
                   for j in range(len(gamma[(s, t)][0]) if gamma[(s, t)] else 0)]
            d2 = len(kera) - span_dim(img, p)
            # at D^{s-1,t} between alpha and beta: im alpha = ker beta
            if s >= 1:
                kerb = nullspace(beta[(s, t)], p, ddim(s - 1, t)) if ddim(s - 1, t) else []
                ima = [[alpha[(s, t)][i][j] for i in range(len(alpha[(s, t)]))]
                       for j in range(len(alpha[(s, t)][0]) if alpha[(s, t)] else 0)]
                d3 = len(kerb) - span_dim(ima, p)
            else:
                d3 = 0
            if d1 or d2 or d3:
                defects += 1
    # Massey pages: Z_r = gamma^{-1}(im alpha^{r-1}), B_r = beta(ker alpha^{r-1})
    def alpha_pow(s, t, k):
        """alpha^k : D^{s,t} -> D^{s-k,t}.  The tower is constant above N
        (Tot^s = Tot^N for s >= N), so steps with both ends >= N are
        identities; below 0 everything is zero."""
        src = ddim(s, t)
        cur_rows = src
        cur = [[1 if i == j else 0 for j in range(src)] for i in range(src)]
        cs = s
        for _ in range(k):
            if cs - 1 >= N:
                cs -= 1
                continue
            rows = ddim(cs - 1, t)
            if rows == 0 or cur_rows == 0 or src == 0:
                cur = [[0] * src for _ in range(rows)]
            else:
                cur = matmul(alpha[(cs, t)], cur, p)
            cur_rows = rows
            cs -= 1
        return cur

    pages = {}
    dranks = {}
    store = {}
    for r in range(1, rmax + 1):
        for s in range(N + 1):
            for t in range(-N, M + 1):
                e = edim(s, t)
                g = gamma[(s, t)]
                tgtdim = ddim(s, t)
                # Z_r = gamma^{-1}(im(alpha^{r-1}: D^{s+r-1,t} -> D^{s,t}))
                if tgtdim == 0:
                    Zr = [[1 if i == j else 0 for i in range(e)] for j in range(e)]
                else:
                    A = alpha_pow(s + r - 1, t, r - 1)
                    S = [[A[i][j] for i in range(len(A))] for j in range(len(A[0]) if A and A[0] else 0)]
                    Smat = basis_matrix(S, tgtdim) if S else [[] for _ in range(tgtdim)]
                    stack = [[g[i][j] for j in range(e)] + ([-x for x in Smat[i]] if S else [])
                             for i in range(tgtdim)]
                    nv = nullspace(stack, p, e + len(S))
                    Zr = []
                    seen = []
                    for v in nv:
                        w = v[:e]
                        if span_dim(seen + [w], p) > span_dim(seen, p):
                            seen.append(w)
                            Zr.append(w)
                # B_r = beta(ker(alpha^{r-1}: D^{s-1,t+1} -> D^{s-r,t+1}))
                A2 = alpha_pow(s - 1, t + 1, r - 1) if s >= 1 else []
                kerA = nullspace(A2, p, ddim(s - 1, t + 1)) if ddim(s - 1, t + 1) else []
                bmat = beta[(s, t + 1)] if (s, t + 1) in beta else []
                Br = [matvec(bmat, v, p) if bmat else [0] * e for v in kerA]
                zd, bd = span_dim(Zr, p), span_dim(Br, p)
                pages[(r, s, t)] = zd - bd
                store[(r, s, t)] = (Zr, Br)
    for r in range(1, rmax + 1):
        for s in range(N + 1):
            for t in range(-N, M + 1):
                dims = pages.get((r, s, t), 0)
                if dims == 0 or s + r > N or (r, s + r, t - 1) not in store:
                    dranks[(r, s, t)] = 0
                    continue
                Zr, _ = store[(r, s, t)]
                _, Bt2 = store[(r, s + r, t - 1)]
                imgs = []
                for e_vec in Zr:
                    ge = matvec(gamma[(s, t)], e_vec, p) if gamma[(s, t)] else []
                    A = alpha_pow(s + r - 1, t, r - 1)
                    x = solve(A, ge, p) if ddim(s, t) else [0] * ddim(s + r - 1, t)
                    assert x is not None, "tot couple not exact for d_r"
                    bx = matvec(beta[(s + r, t)], x, p) if beta.get((s + r, t)) else []
                    imgs.append(bx if bx else [0] * edim(s + r, t - 1))
                base = span_dim(Bt2, p)
                dranks[(r, s, t)] = span_dim(Bt2 + imgs, p) - base
    return defects, pages, dranks


def tot_staircase(ts, rmax):
    """Decreasing filtration G_s = blocks n >= s on the full total complex;
    pages keyed (r, s, p=t)."""
    p = ts.p
    N, M = ts.N, ts.M

    def layout(t):
        return ts.tot_layout(t, N)

    D = {}
    for t in range(-N, M + 2):
        D[t] = ts.tot_d(t, N)

    def in_G(t, s):
        """Basis of G_s at total degree t (ambient)."""
        lay, dim_t = layout(t)
        out = []
        for (n, m, off) in lay:
            if n >= s:
                for i in range(ts.kdim(n, m)):
                    v = [0] * dim_t
                    v[off + i] = 1
                    out.append(v)
        return out

    def proj_out(t, s):
        """Rows projecting onto blocks with n < s (to test membership in G_s)."""
        lay, dim_t = layout(t)
        rows = []
        for (n, m, off) in lay:
            if n < s:
                for i in range(ts.kdim(n, m)):
                    row = [0] * dim_t
                    row[off + i] = 1
                    rows.append(row)
        return rows

    def Zr(s, t, r):
        amb = layout(t)[1]
        if amb == 0:
            return []
        F = in_G(t, s)
        if not F:
            return []
        pr = proj_out(t - 1, s + r)
        if not pr:
            return F
        comp = matmul(pr, matmul(D[t], basis_matrix(F, amb), p), p)
        nv = nullspace(comp, p, len(F))
        return [matvec(basis_matrix(F, amb), v, p) for v in nv]

    pages = {}
    store = {}
    dranks = {}
    for r in range(1, rmax + 1):
        for s in range(N + 1):
            for t in range(-N, M + 1):
                Znum = Zr(s, t, r)
                Zden = Zr(s + 1, t, r - 1)
                Zd = Zr(s - r + 1, t + 1, r - 1)
                dZ = [matvec(D[t + 1], v, p) for v in Zd] if Zd else []
                den = Zden + dZ
                num = span_dim(Znum, p)
                mix = span_dim(den, p)
                assert span_dim(Znum + den, p) == num, "tot staircase denominator"
                # page indexed by fiber degree p = t (block (s, t+s))
                pages[(r, s, t)] = num - mix
                store[(r, s, t)] = (Znum, den)
    for r in range(1, rmax + 1):
        for s in range(N + 1):
            for t in range(-N, M + 1):
                if pages.get((r, s, t), 0) == 0 or (r, s + r, t - 1) not in store:
                    dranks[(r, s, t)] = 0
                    continue
                Znum, _ = store[(r, s, t)]
                _, den_t = store[(r, s + r, t - 1)]
                imgs = [matvec(D[t], v, p) for v in Znum]
                base = span_dim(den_t, p)
                dranks[(r, s, t)] = span_dim(den_t + imgs, p) - base
    return pages, dranks


# ------------------------------------------------------------------ reports


def fmt_pages(pages, rmax, N, Q):
    out = []
    for r in range(1, rmax + 1):
        tbl = {}
        for (rr, n, q), d in pages.items():
            if rr == r and d:
                tbl[(n, q)] = d
        out.append(f"  r={r}: " + (str(sorted(tbl.items())) if tbl else "0"))
    return "\n".join(out)


def compare(bc, rmax, label, skip_edge=True, verbose=False):
    sc = SpiralCouple(bc)
    defects = couple_exactness_defects(sc, skip_p0_alpha_source=skip_edge)
    bad = [(node, d1, d2, d3, f) for (node, d1, d2, d3, f) in defects
           if d1 or d2 or d3 or f]
    cp, cdr = massey_pages(sc, rmax)
    sp, sdr = staircase_pages(bc, rmax)
    mism = []
    for r in range(1, rmax + 1):
        for n in range(bc.N + 1):
            for q in range(bc.Q + 1):
                a = cp.get((r, n, q), 0)
                b = sp.get((r, n, q), 0)
                if a != b:
                    mism.append(("dim", r, n, q, a, b))
                ra = cdr.get((r, n, q), 0)
                rb = sdr.get((r, n, q), 0)
                if ra != rb:
                    mism.append(("rank", r, n, q, ra, rb))
    print(f"[{label}] exactness defects: {len(bad)}; page mismatches: {len(mism)}")
    if bad and verbose:
        for b in bad[:8]:
            print("   defect:", b)
    if mism:
        for m in mism[:8]:
            print("   mism:", m)
    return sc, cp, cdr, bad, mism


def main():
    p = 2
    print("== single-entry (2,1), F_2, N=Q=3: expect couple inexact ==")
    bc = single_entry(2, 2, 1, 3, 3)
    sc = SpiralCouple(bc)
    defects = couple_exactness_defects(sc, skip_p0_alpha_source=True)
    bad = [d for d in defects if d[1] or d[2] or d[3] or d[4]]
    print("   defects (node, E, D-beta, D-alpha, liftfails):", bad)
    sp, sdr = staircase_pages(bc, 4)
    nz = {k: v for k, v in sp.items() if v}
    print("   staircase nonzero pages:", sorted(nz.items()))

    print("== fibrant towers, F_2/F_3: expect exact + pages match ==")
    total_bad = 0
    total_mism = 0
    nonzero_d2 = []
    nonzero_d3 = []
    for seed in range(40):
        pr = 2 if seed % 2 == 0 else 3
        rng = random.Random(1000 + seed)
        bc = tower_bicomplex(rng, pr, 3, 3, 3)
        sc, cp, cdr, bad, mism = compare(bc, 4, f"tower seed={seed} p={pr}",
                                         skip_edge=False)
        total_bad += len(bad)
        total_mism += len(mism)
        if any(v for (r, n, q), v in cdr.items() if r == 2):
            nonzero_d2.append(seed)
        if any(v for (r, n, q), v in cdr.items() if r == 3):
            nonzero_d3.append(seed)
    print(f"towers: total defect nodes {total_bad}, total mismatches {total_mism}")
    print("seeds with nonzero d2:", nonzero_d2)
    print("seeds with nonzero d3:", nonzero_d3)

    print("== uniform random bicomplexes: couple may fail; staircase fine ==")
    fail_seeds = 0
    for seed in range(12):
        rng = random.Random(2000 + seed)
        bc = random_bicomplex(rng, 2, 3, 3, 2)
        sc = SpiralCouple(bc)
        defects = couple_exactness_defects(sc, skip_p0_alpha_source=True)
        bad = [d for d in defects if d[1] or d[2] or d[3] or d[4]]
        if bad:
            fail_seeds += 1
    print(f"uniform bicomplexes with couple defects/lift failures: {fail_seeds}/12")

    # print explicit small towers (one nonzero-d2, one nonzero-d3) for freezing
    def dump_tower(seed):
        pr = 2 if seed % 2 == 0 else 3
        rng = random.Random(1000 + seed)
        bc = tower_bicomplex(rng, pr, 3, 3, 3)
        print(f"== frozen tower instance (seed {seed}, p={pr}) ==")
        print("dims:", bc.dims)
        for n in range(1, bc.N + 1):
            print(f"dh[{n}]:", {q: bc.Dh(n, q) for q in range(bc.Q + 1) if bc.dim(n, q) and bc.dim(n - 1, q)})
        for n in range(bc.N + 1):
            print(f"dv[{n}]:", {q: bc.Dv(n, q) for q in range(1, bc.Q + 1) if bc.dim(n, q) and bc.dim(n, q - 1)})
        sc = SpiralCouple(bc)
        cp, cdr = massey_pages(sc, 4)
        print("pages:")
        print(fmt_pages(cp, 4, bc.N, bc.Q))
        print("d2 ranks:", sorted((k, v) for k, v in cdr.items() if k[0] == 2 and v))
        print("d3 ranks:", sorted((k, v) for k, v in cdr.items() if k[0] == 3 and v))

    if nonzero_d2:
        dump_tower(nonzero_d2[0])
    if nonzero_d3:
        dump_tower(nonzero_d3[0])

    print("== Tot side: cochain towers, couple vs row staircase ==")
    tot_bad = 0
    tot_mism = 0
    tot_d2 = []
    frozen_tot = None
    for seed in range(20):
        pr = 2 if seed % 2 == 0 else 3
        rng = random.Random(3000 + seed)
        bc = random_bicomplex(rng, pr, 3, 3, 2)
        ts = TotSide(bc)
        defects, cp, cdr = tot_couple_and_pages(ts, 4)
        sp, sdr = tot_staircase(ts, 4)
        tot_bad += defects
        keys = set(cp) | set(sp)
        mism = [k for k in keys if cp.get(k, 0) != sp.get(k, 0)] + \
               [k for k in keys if cdr.get(k, 0) != sdr.get(k, 0)]
        tot_mism += len(mism)
        if mism:
            print(f"   [tot seed {seed}] MISMATCH at", sorted(mism)[:8])
        if any(v for (r, s, t), v in cdr.items() if r == 2):
            tot_d2.append(seed)
            if frozen_tot is None:
                frozen_tot = (seed, pr, bc, cp, cdr)
    print(f"tot: total exactness defects {tot_bad}, page/rank mismatches {tot_mism}")
    print("tot seeds with nonzero d2:", tot_d2)
    if frozen_tot:
        seed, pr, bc, cp, cdr = frozen_tot
        print(f"== frozen tot instance (seed {seed}, p={pr}) ==")
        ts = TotSide(bc)
        print("K dims [n][m]:", [[ts.kdim(n, m) for m in range(ts.M + 1)]
                                 for n in range(ts.N + 1)])
        for n in range(ts.N):
            print(f"delta[{n}]:", {m: ts.delta(n, m) for m in range(ts.M + 1)
                                   if ts.kdim(n, m) and ts.kdim(n + 1, m)})
        for n in range(ts.N + 1):
            print(f"kdv[{n}]:", {m: ts.dvm(n, m) for m in range(1, ts.M + 1)
                                 if ts.kdim(n, m) and ts.kdim(n, m - 1)})
        nz = sorted((k, v) for k, v in cp.items() if v and k[0] <= 3)
        print("tot pages (r,s,p):", nz)
        print("tot d2 ranks:", sorted((k, v) for k, v in cdr.items() if k[0] == 2 and v))


if __name__ == "__main__":
    main()
