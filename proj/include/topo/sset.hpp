#ifndef TOPO_SSET_HPP
#define TOPO_SSET_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace topo {

// A simplex expressed over the nondegenerate skeleton: a monotone surjection
// (stored as its collapse set, ascending) applied to a named nondegenerate
// cell.  deg = {j} means levels j and j+1 of the domain map to the same
// vertex.  An empty collapse set is the cell itself.
struct FormalSimplex {
    std::vector<int> deg;
    std::string cell;

    bool operator==(const FormalSimplex&) const = default;
    bool operator<(const FormalSimplex& o) const {
        if (cell != o.cell) return cell < o.cell;
        return deg < o.deg;
    }
};

// values eta_S(0..m) of the monotone surjection [m] -> [m - |S|] that
// collapses the positions in S
std::vector<int> surjection_values(const std::vector<int>& S, int m);
// inverse direction: the collapse set of a monotone surjective value table
std::vector<int> collapse_set_of(const std::vector<int>& values);

// Finite simplicial set, nondegenerate cells only.  Face maps land in formal
// simplices; degeneracies are implicit.  All constructors in this header
// re-check the simplicial identities before returning.
struct SSet {
    std::vector<std::vector<std::string>> cells;            // names, per dimension
    std::map<std::string, int> dim_of;
    std::map<std::string, std::vector<FormalSimplex>> faces;  // dim >= 1 cells only
    std::string basepoint;                                    // empty = unpointed

    int dim() const { return (int)cells.size() - 1; }
    int n_cells(int d) const {
        return (d < 0 || d >= (int)cells.size()) ? 0 : (int)cells[d].size();
    }
    long long total_cells() const;
    bool has_cell(const std::string& name) const { return dim_of.count(name) != 0; }

    void add_cell(const std::string& name, int d, std::vector<FormalSimplex> fs = {});

    int formal_dim(const FormalSimplex& x) const;
    // d_i and s_j acting on formal simplices
    FormalSimplex face(const FormalSimplex& x, int i) const;
    FormalSimplex degenerate(const FormalSimplex& x, int j) const;

    // throws InvariantError naming the first offending cell
    void check_identities() const;
};

SSet standard_simplex(int n);
SSet boundary(int n);
SSet horn(int n, int k);
SSet point();

// closure of the given nondegenerate cells under faces, as a sub-simplicial set
SSet subcomplex(const SSet& X, const std::vector<std::string>& generators);
bool is_subcomplex(const SSet& X, const std::vector<std::string>& names);

// collapse a subcomplex to a fresh basepoint vertex "*"
SSet quotient(const SSet& X, const std::vector<std::string>& subcomplex_cells);

// cone with the apex added as the LAST vertex of every joined simplex
SSet cone(const SSet& X);
// cone(boundary(n)): the n-simplex subdivided through an interior vertex
SSet tr_simplex(int n);

SSet product(const SSet& X, const SSet& Y);

// the n-simplex with a collar on its boundary:
// Delta^n x {0}  union_{boundary x {0}}  boundary(n) x Delta^1
SSet fattened_simplex(int n);

// boundary matrix of the normalized chain complex, d-cells -> (d-1)-cells
struct ZHomology {
    int betti = 0;
    std::vector<int64_t> torsion;  // invariant factors > 1
    bool operator==(const ZHomology&) const = default;
};
std::vector<ZHomology> homology_z(const SSet& X);
std::vector<int> homology_fp(const SSet& X, int64_t p);
long long euler_characteristic(const SSet& X);

// path components as lists of nondegenerate cell names (deterministic order)
std::vector<std::vector<std::string>> components(const SSet& X);

// isomorphism of simplicial sets (dimension- and face-preserving bijection on
// nondegenerate cells).  Signature refinement plus backtracking; throws on
// complexes past the size cap.
bool iso_check(const SSet& X, const SSet& Y, long long max_cells = 10000);

}

#endif
