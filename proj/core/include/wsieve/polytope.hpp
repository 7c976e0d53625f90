#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace wsieve {

inline constexpr int kMaxDim = 6;
using Vec = std::array<double, kMaxDim>;

struct Halfspace {
    Vec a{};
    double b = 0.0;  // a . x <= b
};

struct PolytopeVertices {
    std::vector<Vec> pts;
    std::vector<uint64_t> active;  // bitmask over halfspace indices (< 64)
};

// All vertices of {x : a.x <= b for each halfspace}; empty if the region is
// empty or not full-dimensional enough to have d+1 of them.
PolytopeVertices polytope_vertices(int d, const std::vector<Halfspace>& hs);

struct Simplex {
    std::array<Vec, kMaxDim + 1> verts{};
    double absdet = 0.0;  // |det [v1-v0, ..., vd-v0]|
};

// Exact simplicial decomposition of the (convex) polytope via a pulling
// triangulation over the vertex/facet lattice. Degenerate polytopes yield an
// empty list.
std::vector<Simplex> triangulate_polytope(int d, const std::vector<Halfspace>& hs);

}  // namespace wsieve
