#ifndef TOPO_SPIRAL_HPP
#define TOPO_SPIRAL_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "topo/homalg.hpp"
#include "topo/matrix.hpp"
#include "topo/rng.hpp"

namespace topo {

// ------------------------------------------------------- simplicial spaces

// Finite-type simplicial F_p vector space, truncated at level Q = top().
// face[q][i] is d_i: X_q -> X_{q-1} (0 <= i <= q, q >= 1) and degen[q][i]
// is s_i: X_q -> X_{q+1} (0 <= i <= q, q < top()); degen[top()] must be
// empty, since its target lies outside the window.  check() verifies every
// shape and every simplicial identity whose factors are stored.
struct SimplicialVS {
    int64_t p = 2;
    std::vector<int> dims;
    std::vector<std::vector<Matrix>> face;
    std::vector<std::vector<Matrix>> degen;

    int top() const { return (int)dims.size() - 1; }
    int dim(int q) const { return (q < 0 || q > top()) ? 0 : dims[q]; }

    void check() const;
};

// The Moore normalization N_q = meet of ker d_i over 1 <= i <= q (N_0 is
// everything), with differential d_0.  incl[q] holds the chosen column basis
// of N_q inside X_q, row-echelon and therefore deterministic.  Homotopy is
// homology: pi_q(X) = H_q(N X).
struct Normalization {
    ChainComplex cx;
    std::vector<Matrix> incl;
};
Normalization normalize(const SimplicialVS& X);

// dims of pi_q(X) = H_q of the normalization, q = 0..top.
std::vector<int> pi_dims(const SimplicialVS& X);

// Levelwise sub-simplicial vector space: object carries the induced
// structure maps, incl[q] embeds its level q into the ambient level q.
struct SubSimplicialVS {
    SimplicialVS object;
    std::vector<Matrix> incl;
};

// ----------------------------------------------------- bisimplicial spaces

// Bisimplicial F_p vector space on the window n <= N, q <= Q.  The first
// index is external (horizontal), the second internal (vertical);
// hface[n][q][i]: X(n,q) -> X(n-1,q), hdegen[n][q][i]: X(n,q) -> X(n+1,q),
// and vface/vdegen act on q the same way.  check() runs the simplicial
// identities in both directions plus commutation of every horizontal
// operator with every vertical one.
struct BisimplicialVS {
    int64_t p = 2;
    std::vector<std::vector<int>> dims;  // dims[n][q]
    std::vector<std::vector<std::vector<Matrix>>> hface, hdegen, vface, vdegen;

    int N() const { return (int)dims.size() - 1; }
    int Q() const;
    int dim(int n, int q) const;

    // The internal simplicial vector space at external level n.
    SimplicialVS column(int n) const;
    // The external simplicial vector space at internal level q.
    SimplicialVS row(int q) const;

    void check() const;
};

// Inverse Dold-Kan in both directions: the bisimplicial object whose double
// normalization returns B on the nose.  Level (n,q) is the direct sum of
// one copy of B(a,b) per pair of monotone surjections [n] ->> [a],
// [q] ->> [b]; summands are ordered identity-first, so the normalization
// bases come out as leading coordinate blocks and the round trip is exact
// equality of dims and differentials, not merely an isomorphism.
BisimplicialVS dold_kan_inverse2(const Bicomplex& B);

// Horizontal Moore chains C_n = meet of ker dh_i over 1 <= i <= n and
// cycles Z_n = meet over 0 <= i <= n, as sub-simplicial vector spaces of
// column n with the inherited internal structure.  Conventions at the
// bottom: C_0 = Z_0 = X_0.
SubSimplicialVS moore_chains(const BisimplicialVS& X, int n);
SubSimplicialVS moore_cycles(const BisimplicialVS& X, int n);

// The boundary dh_0 restricted to C_n, landing in Z_{n-1}, as one matrix
// per internal degree in the recorded bases of the two subobjects (n >= 1).
// Verifies that the image lies in Z_{n-1} and that the strict kernel equals
// Z_n levelwise; both are theorems, so a failure is an InvariantError.
std::vector<Matrix> moore_boundary(const BisimplicialVS& X, int n);

// The double normalization: column n of B is the vertical normalization of
// C_n, dh is induced by dh_0.  emb[n][q] embeds B's (n,q) coordinate space
// into the ambient X(n,q); it is the composite of the two kernel bases and
// is what every chain-level lifting routine works through.
struct MooreBicomplex {
    Bicomplex B;
    std::vector<std::vector<Matrix>> emb;
};
MooreBicomplex double_normalization(const BisimplicialVS& X);

// ----------------------------------------------------------- matching maps

// The matching space of external level n >= 1: M_q = compatible tuples
// (x_0..x_n) in X(n-1,q)^{n+1} with d_i x_j = d_{j-1} x_i for i < j (the
// relations are vacuous at n = 1), carrying the componentwise internal
// structure.  tuple_basis[q] is the chosen basis of M_q inside the tuple
// space; to_matching[q] is the matching map X(n,q) -> M_q in that basis.
// modified_matching uses tuple indices 1..n only and verifies that the
// strict kernel of its matching map is C_n levelwise.
struct MatchingData {
    SimplicialVS M;
    std::vector<Matrix> tuple_basis;
    std::vector<Matrix> to_matching;
};
MatchingData matching(const BisimplicialVS& X, int n);
MatchingData modified_matching(const BisimplicialVS& X, int n);

// --------------------------------------------------------------- fibrancy

// The three strictness properties the tower constructions lean on, reported
// honestly rather than assumed:
//  - matching_fibration: N(X_n -> M_n) is onto in internal degrees >= 1 for
//    every n (the map is a fibration of simplicial vector spaces; levelwise
//    surjectivity is genuinely false already for one-column instances, so
//    the fibration form is the one checked);
//  - kernel_is_chains: ker(X_n -> modified matching) = C_n levelwise;
//  - dbar_onto: N(dh_0): N(C_n) -> N(Z_{n-1}) is onto in internal degrees
//    >= 1 for every n >= 1 (the strict-fibration property of the tower;
//    this is what the couple's lifting step consumes).
// fail_n / fail_q name the first violated site of the first failed clause.
struct FibrancyReport {
    bool matching_fibration = true;
    bool kernel_is_chains = true;
    bool dbar_onto = true;
    int fail_n = -1, fail_q = -1;

    bool ok() const { return matching_fibration && kernel_is_chains && dbar_onto; }
};
FibrancyReport fibrancy_check(const BisimplicialVS& X);

// ------------------------------------------------------- the exact couple

// The homotopy exact couple of the horizontal Moore tower:
//   D(n,q) = H_q(N Z_n)   E(n,q) = H_q(N C_n)
//   beta induced by Z_n -> C_n, gamma by dh_0, and alpha by lifting a
//   vertical cycle of N Z_n through dh_0: N C_{n+1} -> N Z_n and pushing it
//   down the vertical differential (the connecting map of the strict fibre
//   sequence Z_{n+1} -> C_{n+1} -> Z_n).
// When dbar_onto holds (fibrancy_check) every connecting lift exists; a
// failed lift aborts with InvariantError rather than silently coning off
// the obstruction.  alpha is stored as an explicit zero wherever its target
// is zero or leaves the window (q = 0 or n = N), so exactness is judged
// there instead of skipped: towers with acyclic top kernel pass at every
// node, while a single mid-window entry builds a couple that couple_check
// reports as inexact.
ExactCouple spiral_couple(const BisimplicialVS& X);

// Pages of the couple through r_max, computed by the derived-couple
// formulas.  Equal to staircase_pages(column) of the double normalization
// in dims and differential ranks on every page (at r = 1 on the nose, from
// r = 2 on it is the content of the tower/filtration comparison).
std::vector<Page> spiral_pages(const BisimplicialVS& X, int r_max);

// ---------------------------------------------------- chain-level lifting

// d^r on a named class, computed by iterated chain-level lifting instead of
// the couple algebra: starting from a vertical cycle rep in B's column n,
// internal degree pp, solve the zig-zag
//   dh c_{j-1} + (-1)^{n-j} dv c_j = 0,  c_0 = rep + dv w,
// one column at a time (each step one joint linear solve, the nullhomotopy
// unknowns w, c_1, ..).  chain is the column-(n-r) component dh c_{r-1}, a
// vertical cycle; page_class is its class in the staircase E^r(n-r,
// pp+r-1), which equals the page differential applied to [rep].  If the
// zig-zag dies early the error reports the page of death ("dies at page
// s"): the class survives to page s but not to page s+1.
struct LiftResult {
    Matrix chain;
    Matrix page_class;
};
LiftResult lifting_differential(const BisimplicialVS& X, int n, int pp, int r,
                                const Matrix& rep);

// ------------------------------------------------- diagonal and abutment

// The diagonal simplicial vector space: level k is X(k,k), faces are the
// commuting composites dh_i dv_i, degeneracies sh_i sv_i; truncated at
// min(N, Q).
SimplicialVS diag(const BisimplicialVS& X);

// Abutment bookkeeping.  einf[t] sums the stable staircase page over
// n + q = t; total_h[t] = dim H_t of the total complex of the double
// normalization (these must agree for every t <= N+Q).  pi_diag[t] is
// pi_t of the diagonal for t <= diag_top = min(N,Q); the diagonal is
// extended one level past the window through the inverse Dold-Kan formula
// on the double normalization, so its top homology is honest.  ok requires
// both comparisons to hold on their windows.
struct AbutmentReport {
    bool ok = true;
    int diag_top = 0;
    std::vector<int> einf;
    std::vector<int> total_h;
    std::vector<int> pi_diag;
};
AbutmentReport abutment_check(const BisimplicialVS& X);

// ------------------------------------------------------- pi_* commutation

// For every external level n and internal degree q: dim H_q(N C_n(X))
// equals dim C_n of the external simplicial object [m] |-> H_q(N X_m)
// (faces induced by dh_i on vertical homology), and the natural comparison
// map between them is bijective.  dims records (lhs, rhs) per (n,q);
// rank of the comparison map equals both when ok.
struct Lemma41Report {
    bool ok = true;
    std::map<std::pair<int, int>, std::pair<int, int>> dims;
    int fail_n = -1, fail_q = -1;
};
Lemma41Report lemma41_check(const BisimplicialVS& X);

// ----------------------------------------------------- corpus generation

// Fibrant tower bicomplex: column 0 is a random complex, column n is an
// extension of Z_{n-1} by a fresh kernel complex with a jointly sampled
// twist, and dh_n is the levelwise projection onto Z_{n-1} followed by its
// inclusion.  dh is then levelwise onto the next cycles, so the double
// normalization of the associated bisimplicial object passes
// fibrancy_check.  With acyclic_top the last kernel is a cone, which makes
// the truncated tower's couple exact at the top edge as well.
Bicomplex tower_bicomplex(Rng& rng, int64_t p, int N, int Q, int maxdim,
                          bool acyclic_top = true);

}

#endif
