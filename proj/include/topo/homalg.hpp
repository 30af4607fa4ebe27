#ifndef TOPO_HOMALG_HPP
#define TOPO_HOMALG_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "topo/matrix.hpp"
#include "topo/rng.hpp"

namespace topo {

// ---------------------------------------------------------------- complexes

// Bounded nonnegatively graded chain complex.  ring == 0 means integer
// coefficients; otherwise ring is a prime p and every matrix is taken mod p.
// d[n] is the differential leaving degree n (shape dims[n-1] x dims[n]);
// d[0] has zero rows.  check() verifies shapes and dd = 0.
struct ChainComplex {
    int64_t ring = 2;
    std::vector<int> dims;
    std::vector<Matrix> d;

    int top() const { return (int)dims.size() - 1; }
    int dim(int n) const { return (n < 0 || n > top()) ? 0 : dims[n]; }

    // The differential leaving degree n, zero-shaped outside the support.
    Matrix diff(int n) const;

    void check() const;
};

// Homology dimensions over F_p, degrees 0..top.
std::vector<int> homology_dims(const ChainComplex& C);

// Integer homology of a complex with ring == 0: rank plus the invariant
// factors greater than one, via Smith normal form of the two differentials.
struct IntHomology {
    int betti = 0;
    std::vector<int64_t> torsion;
    bool operator==(const IntHomology&) const = default;
};
std::vector<IntHomology> homology_int(const ChainComplex& C);

// H_n(C) as a subquotient of the degree-n coordinate space (F_p only):
// cycles = ker d[n], boundaries = im d[n+1].  The recorded basis is the
// deterministic row-echelon choice, so induced maps computed against it are
// reproducible.
Subquotient homology_space(const ChainComplex& C, int n);

// Matrix of H_n(f): H_n(A) -> H_n(B) for a chain map f (f[n]: A_n -> B_n),
// in the homology_space bases.  Throws InvariantError if f is not a chain
// map or fails to carry cycles to cycles.
Matrix induced_map(const ChainComplex& A, const ChainComplex& B,
                   const std::vector<Matrix>& f, int n);

// Connecting map H_p(C) -> H_{p-1}(A) of a degreewise short exact sequence
// 0 -> A -> B -> C -> 0 (incl[n]: A_n -> B_n, proj[n]: B_n -> C_n).
// Exactness and the chain-map squares are checked.  The zig-zag lifts each
// homology basis vector of C through proj, pushes it down B's differential
// and pulls back through incl; the answer is independent of the lift, and
// lift_seed != 0 reruns the two solves with a shuffled pivot order so tests
// can confirm that independence on the nose.
Matrix connecting_map(const ChainComplex& A, const ChainComplex& B,
                      const ChainComplex& C, const std::vector<Matrix>& incl,
                      const std::vector<Matrix>& proj, int p_deg,
                      uint64_t lift_seed = 0);

// ---------------------------------------------------------------- bicomplex

// First-quadrant bicomplex of F_p spaces.  dh lowers the first index
// (columns), dv lowers the second (rows); the two COMMUTE, and the sign
// lives in the totalization: total differential dh + (-1)^n dv on the block
// in column n.  Maps are keyed by source bidegree; entries absent from the
// maps (or outside the dims grid) are zero.
struct Bicomplex {
    int64_t p = 2;
    std::vector<std::vector<int>> dims;          // dims[n][q]
    std::map<std::pair<int, int>, Matrix> dh;    // (n,q): X(n,q) -> X(n-1,q)
    std::map<std::pair<int, int>, Matrix> dv;    // (n,q): X(n,q) -> X(n,q-1)

    int N() const { return (int)dims.size() - 1; }
    int Q() const;
    int dim(int n, int q) const;
    Matrix dh_at(int n, int q) const;  // zero-shaped when absent
    Matrix dv_at(int n, int q) const;

    void check() const;  // shapes, dh dh = 0, dv dv = 0, dh dv = dv dh
};

// Transpose: swap the two directions.  Commutation is preserved, and the
// total complexes of B and flip(B) are isomorphic (rescale the (n,q) block
// by (-1)^{nq}), so all homology and page dimensions agree.
Bicomplex flip(const Bicomplex& B);

// Total complex, degree t = sum over n of X(n, t-n), blocks in ascending
// column order, differential dh + (-1)^n dv.
ChainComplex total(const Bicomplex& B);

// ------------------------------------------------------------ exact couples

// Bigraded exact couple over F_p:
//
//   alpha: D(n,k) -> D(n+1,k-1)     beta: D(n,k) -> E(n,k)
//   gamma: E(n,k) -> D(n-1,k)
//
// Dimensions and maps are sparse; a bidegree missing from D/E has dimension
// zero and a map entry missing from alpha/beta/gamma is the zero map of the
// implied shape.  One exception matters for exactness reports: an alpha
// entry STORED as an explicit zero matrix is asserted to be zero and is
// checked, while an absent alpha at the boundary of the materialized window
// merely ends the data, and exactness-at-its-source is not judged there.
// Builders that truncate an infinite couple (every tower does) must
// materialize enough stable columns for the pages they intend to request.
//
// stage records how many times the couple has been derived: beta of the
// s-th couple lands in E(n-(s-1), k+s-1), so its composite with gamma is
// the s-th differential.  pages() accepts only stage 1.
struct ExactCouple {
    int64_t p = 2;
    int stage = 1;
    std::map<std::pair<int, int>, int> D, E;
    std::map<std::pair<int, int>, Matrix> alpha, beta, gamma;

    int ddim(int n, int k) const;
    int edim(int n, int k) const;
    Matrix alpha_at(int n, int k) const;
    Matrix beta_at(int n, int k) const;
    Matrix gamma_at(int n, int k) const;

    void check_shapes() const;
};

// One exactness defect: `where` is 1 (ker beta vs im alpha), 2 (ker gamma
// vs im beta) or 3 (ker alpha vs im gamma), located at the node carrying
// the kernel.  defect = dim ker - dim im; contained reports im <= ker.
struct CoupleDefect {
    int where = 0;
    int n = 0, k = 0;
    int defect = 0;
    bool contained = true;
};
struct CoupleReport {
    bool ok = true;
    std::vector<CoupleDefect> defects;
};

// Exactness at every node of the couple's support.  skip_base_alpha drops
// condition 3 at k == 0, where tower couples define alpha to be zero and
// genuinely fail exactness at the bottom edge.
CoupleReport couple_check(const ExactCouple& c, bool skip_base_alpha = false);

// The derived couple: D' = im alpha, E' = homology of beta.gamma, with the
// induced maps.  Exactness of the input is assumed where the constructions
// need it (gamma of a d-cycle lies in im alpha); violations surface as
// InvariantError from the coordinate solves.  stage goes up by one.
ExactCouple derived_couple(const ExactCouple& c);

// One page of a spectral sequence: dims of the surviving subquotients and
// the differentials d^r: E(n,k) -> E(n-r,k+r-1) in the recorded bases
// (row-echelon representatives; matrices stored when source and target are
// both nonzero).
struct Page {
    int64_t p = 2;
    int r = 1;
    std::map<std::pair<int, int>, int> dims;
    std::map<std::pair<int, int>, Matrix> d;

    int dim(int n, int k) const;
    int rank_out(int n, int k) const;
};

// Pages r = 1..r_max from a stage-1 couple: E^r = Z^r/B^r with
// Z^r = gamma^{-1}(im alpha^{r-1}) and B^r = beta(ker alpha^{r-1}), and d^r
// computed by solving alpha^{r-1} x = gamma e.  d^r d^r = 0 is asserted on
// every emitted page.
std::vector<Page> pages(const ExactCouple& c, int r_max);

// dim E^{r+1}(n,k) == dim ker d^r(n,k) - rank of d^r entering (n,k), for
// every consecutive pair of pages.  Meaningful for exact couples and for
// staircase pages; throws InvariantError with the offending node otherwise.
void check_page_bookkeeping(const std::vector<Page>& pgs);

// Dims and differential ranks agree at every node of every page (the
// basis-independent comparison used across construction methods).
bool pages_match(const std::vector<Page>& a, const std::vector<Page>& b);

// -------------------------------------------- filtration spectral sequences

enum class Filtration { column, row };

// Pages of the filtered total complex by direct staircase: representatives
// of E^r(s,k) are chains in columns <= s whose boundary drops r columns,
// modulo chains from columns < s and boundaries from r-1 columns up.  Keys
// are (s, k) with k = total degree - s, so d^r has the couple shape
// (s,k) -> (s-r, k+r-1).  Filtration::row runs the same staircase on
// flip(B).
std::vector<Page> staircase_pages(const Bicomplex& B, Filtration f, int r_max);

// Ordered block layout of the degree-t total space: the blocks (n, q) with
// n + q = t and X(n,q) != 0 in ascending column order, each with its
// coordinate offset.  These are the ambient coordinates of total() and of
// staircase_space.
struct TotBlock {
    int n = 0, q = 0, offset = 0;
};
std::vector<TotBlock> total_layout(const Bicomplex& B, int t);

// A single staircase entry E^r(s,k) as a subquotient of the degree-(s+k)
// total space, so chain-level representatives can be classified against the
// page (Filtration::row classifies inside flip(B)'s total space).  Entries
// that staircase_pages omits come back as zero-dimensional subquotients.
Subquotient staircase_space(const Bicomplex& B, Filtration f, int r, int s, int k);

// The same spectral sequence as an exact couple: D(s,k) = H_{s+k}(F_s),
// E(s,k) = H_{s+k}(F_s/F_{s-1}), alpha induced by inclusion, beta by
// projection, gamma the connecting map of 0 -> F_{s-1} -> F_s -> F_s/F_{s-1}
// -> 0.  The filtration is constant above column N, and r_pad extra stable
// columns are materialized so that pages(couple, r) is valid for r <= r_pad.
ExactCouple filtration_couple(const Bicomplex& B, Filtration f, int r_pad);

// ------------------------------------------------------------- generators

// Random chain complex over F_p: degreewise dimensions uniform in
// 0..maxdim, each differential sampled uniformly from the chain-complex
// condition (columns drawn from ker of the previous differential).
ChainComplex random_complex(Rng& rng, int64_t p, int top, int maxdim);

// Acyclic complex: the cone of the identity of a random complex W,
// C_q = W_{q-1} + W_q with d(a,b) = (-da, db + a).
ChainComplex cone_of_identity(Rng& rng, int64_t p, int top, int maxdim);

// Extension 0 -> A -> B -> C -> 0 with B_q = A_q + C_q and differential
// [[dA, psi],[0, dC]], psi sampled uniformly from the solutions of
// dA psi + psi dC = 0.  Generically non-split, so connecting maps are
// exercised for real.
struct Extension {
    ChainComplex total;
    std::vector<Matrix> incl, proj;
};
Extension random_extension(Rng& rng, const ChainComplex& A, const ChainComplex& C);

// Random commuting bicomplex: columns are random complexes, each dh is a
// chain map sampled uniformly from the solutions of the chain-map and
// dh dh = 0 conditions against the column differentials.
Bicomplex random_bicomplex(Rng& rng, int64_t p, int N, int Q, int maxdim);

}

#endif
