#ifndef TOPO_ERROR_HPP
#define TOPO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace topo {

// Malformed input (bad JSON shape, non-prime p, inconsistent dims, ...).
// The CLI maps this to exit code 2.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

// A mathematical invariant failed (identities, exactness, postconditions).
// The CLI maps this to exit code 1 and serializes the first witness.
struct InvariantError : std::runtime_error {
    explicit InvariantError(const std::string& msg) : std::runtime_error(msg) {}
};

}

#endif
