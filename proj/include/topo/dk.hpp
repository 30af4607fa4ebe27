#ifndef TOPO_DK_HPP
#define TOPO_DK_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "topo/simplex_cat.hpp"
#include "topo/sset.hpp"

namespace topo {

// A finite category with an explicit composition table.  Arrows carry
// globally unique names; identities are listed among the arrows.
struct FinCat {
    std::vector<std::string> objects;
    struct Arrow {
        std::string name, src, tgt;
    };
    std::vector<Arrow> arrows;
    std::map<std::string, int> arrow_index;
    std::map<std::string, int> identity_of;            // object -> arrow index
    std::map<std::pair<int, int>, int> comp;           // (g, f) -> "g then f"

    int add_object(const std::string& name);
    int add_arrow(const std::string& name, const std::string& src, const std::string& tgt);
    void set_identity(const std::string& obj, const std::string& arrow);
    void set_composite(const std::string& g, const std::string& f, const std::string& gf);

    bool is_identity_arrow(int a) const;
    int compose2(int g, int f) const;                  // throws on non-composable
    // unit laws, associativity, totality of the table
    void check() const;
    // no directed cycle through non-identity arrows (else free words are unbounded)
    bool nonidentity_acyclic() const;
};

// the opposite of the restricted augmented simplex category, cut to the
// ordinals [lo..hi]; arrows [a] -> [b] (a >= b) are the injections [b] -> [a],
// named by face word plus source ordinal, e.g. "d0d2@4"
FinCat delta_op_interval(int lo, int hi);
std::string delta_op_arrow_name(const Injection& theta);

// A bracketed word in the comonad resolution: composable non-identity leaf
// arrows plus one interval partition per bracket level, each refining the
// one above it (level 0 is the coarsest).  Partitions are stored as block
// sizes, left to right.
struct NestedWord {
    std::vector<int> leaves;                  // arrow indices, diagrammatic order
    std::vector<std::vector<int>> levels;     // block sizes, coarse to fine
};
void validate_nested(const FinCat& C, const NestedWord& w);
// degenerate = some level repeats the next, or the finest level is all
// singleton blocks (the word is an image of a comultiplication insert)
bool is_degenerate(const FinCat& C, const NestedWord& w);

// The simplicial mapping space of the comonad resolution between two objects.
// n-cells are strict refinement chains of factorizations of length n+1;
// every face of a nondegenerate cell is nondegenerate, so face words are
// trivial throughout.  Vertex names are leaf words "f|g|h"; higher cells
// join their chain with '<'.
SSet dk_mapping_space(const FinCat& C, const std::string& a, const std::string& b,
                      int max_dim);

// composite arrow name of a vertex (a '|'-joined leaf word) of the space
std::string leaf_composite(const FinCat& C, const std::string& vertex);

// the connected component carrying total composite theta
SSet component_of(const FinCat& C, const SSet& space, const std::string& theta_name);
// that component minus the open star of its coarsest vertex: all chains that
// avoid the one-letter factorization.  For interval categories this is the
// boundary sphere of the permutahedral cell.
SSet component_boundary(const FinCat& C, const SSet& space, const std::string& theta_name);

}

#endif
