#ifndef TOPO_PERM_HPP
#define TOPO_PERM_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "topo/sset.hpp"

namespace topo {

// A face of the abstract n-permutahedron: an ordered partition of {0..n} into
// nonempty blocks, each block stored ascending.  A face with b blocks has
// dimension n + 1 - b; the vertices are the (n+1)! all-singleton partitions
// and the unique maximum is the one-block partition.
using OrderedPartition = std::vector<std::vector<int>>;

// every ordered partition of {0..n}, first block enumerated by size then
// lexicographically, then recursively on the remainder (deterministic order)
std::vector<OrderedPartition> ordered_partitions_of(int n);

// blocks joined by ',', digits within a block ascending: "01,2"
std::string partition_name(const OrderedPartition& p);

// whether `fine` refines `coarse`: walking fine's blocks left to right must
// tile each coarse block in order by disjoint unions (true when equal)
bool partition_refines(const OrderedPartition& fine, const OrderedPartition& coarse);

struct FaceLattice {
    int n = 0;
    // faces[d] = dimension-d faces, i.e. ordered partitions into n+1-d blocks
    std::vector<std::vector<OrderedPartition>> faces;
    // covering[d] = pairs (i, j) with faces[d+1][i] covering faces[d][j],
    // i.e. faces[d][j] splits exactly one block of faces[d+1][i] in two
    std::vector<std::vector<std::pair<int, int>>> covering;
};

// the graded face poset of P^n; checks the grading, the unique maximum and
// the (n+1)! atoms before returning
FaceLattice face_lattice(int n);

// nerve of the face poset under refinement, maximum included: k-cells are
// strict chains of k+1 faces listed coarsest first, d_i deletes entry i.
// This is a cone with apex the one-block face, so its reduced homology
// vanishes.
SSet order_complex(int n);

// the subcomplex of chains avoiding the one-block maximum: a triangulated
// boundary sphere of dimension n-1
SSet order_complex_boundary(int n);

// Assembles the boundary sphere from one product piece per facet: the facet
// of ordered 2-partition (S1, S2) contributes order_complex(|S1|-1) x
// order_complex(|S2|-1), glued by matching cells that name the same global
// chain of partitions.  The report records whether the induced face maps are
// consistent, whether the glued complex is isomorphic to
// order_complex_boundary(n) (cell-for-cell under chain names, re-confirmed
// by the name-blind search for n <= 3), and whether its homology is that of
// S^{n-1}.
struct CoeqReport {
    int n = 0;
    std::size_t piece_count = 0;     // 2^{n+1} - 2 facet products
    std::size_t cells_disjoint = 0;  // cells before gluing
    std::size_t cells_glued = 0;     // cells after gluing
    std::vector<std::size_t> f_vector;
    bool faces_consistent = false;
    bool iso_ok = false;
    bool sphere_ok = false;
    bool pass() const { return faces_consistent && iso_ok && sphere_ok; }
};
CoeqReport boundary_coequalizer_check(int n);

// One facet of the obstruction boundary sphere for theta = d_0 d_1 ... d_r,
// pointing [n+1] -> [n-r]: the ordered 2-partition (s1, s2) of the letter
// subscripts {0..r}, where s2 is the first-applied factor.  The label is
//   "zero"       when 0 is not in s2 (the first factor lacks d_0),
//   "coherence"  when s2 == {0} (only the second factor varies),
//   "choice(stage s)" otherwise, with s = |s2| - 1 the stage whose fill-in
//                the facet restricts to.
// `render` is the two-factor name "(d..)(d..f)" with letters reindexed past
// the other block and d_0 of the first factor absorbed into f; `gname` gives
// the stage-1 shorthand (H..f for coherence, d..G_j for a {0,j} choice block,
// "0" for zero facets).  `is_new` marks the fill-ins first chosen on page r:
// stage r-1 blocks containing both 0 and 1.
struct LabeledFacet {
    std::vector<int> s1, s2;
    std::string label;
    std::string render;
    std::string gname;
    bool is_new = false;
};

struct ObstructionLabels {
    int n = 0, r = 0;
    std::string theta;      // "d0d1...dr"
    std::string basepoint;  // all-singleton ascending vertex of the boundary
    std::vector<LabeledFacet> facets;
};

// labels every facet of the boundary of P^r exactly once; requires r >= 2
// and n >= r
ObstructionLabels label_obstruction_boundary(int n, int r);

// The witness complex dual to P^r: one (r+1)-simplex per length-(r+1) face
// word [i_0..i_r] with i_t <= t (a vertex of P^r), two simplices glued along
// a shared facet whenever their words differ by one adjacent rewrite (an
// edge of P^r).  Isomorphic to the (r+1)-cube (Delta^1)^{r+1}; 1 <= r <= 3.
SSet dual_witness_complex(int r);

}

#endif
