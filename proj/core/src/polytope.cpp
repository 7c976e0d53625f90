#include "wsieve/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wsieve/errors.hpp"

namespace wsieve {
namespace {

constexpr double kFeasTol = 1e-9;
constexpr double kActiveTol = 1e-8;
constexpr double kRankTol = 1e-10;

double dot(const Vec& a, const Vec& b, int d) {
    double s = 0;
    for (int i = 0; i < d; ++i) s += a[i] * b[i];
    return s;
}

// Solve the d x d system rows[idx] . x = rhs[idx]; false if near-singular.
bool solve_square(const std::vector<Halfspace>& hs, const int* idx, int d, Vec& x) {
    double m[kMaxDim][kMaxDim + 1];
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) m[r][c] = hs[idx[r]].a[c];
        m[r][d] = hs[idx[r]].b;
    }
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        if (std::abs(m[piv][col]) < 1e-12) return false;
        if (piv != col) std::swap(m[piv], m[col]);
        for (int r = col + 1; r < d; ++r) {
            double f = m[r][col] / m[col][col];
            for (int c = col; c <= d; ++c) m[r][c] -= f * m[col][c];
        }
    }
    for (int r = d - 1; r >= 0; --r) {
        double s = m[r][d];
        for (int c = r + 1; c < d; ++c) s -= m[r][c] * x[c];
        x[r] = s / m[r][r];
    }
    return true;
}

// Affine rank of a vertex subset (dimension of its affine hull).
int affine_dim(const std::vector<Vec>& pts, const std::vector<int>& ids, int d) {
    if (ids.empty()) return -1;
    double rows[kMaxDim + 1][kMaxDim];
    int nrows = 0;
    const Vec& v0 = pts[ids[0]];
    int rank = 0;
    for (std::size_t k = 1; k < ids.size() && rank < d; ++k) {
        double r[kMaxDim];
        for (int c = 0; c < d; ++c) r[c] = pts[ids[k]][c] - v0[c];
        // eliminate against existing rows
        for (int i = 0; i < nrows; ++i) {
            int lead = -1;
            for (int c = 0; c < d; ++c) {
                if (std::abs(rows[i][c]) > kRankTol) { lead = c; break; }
            }
            if (lead < 0) continue;
            double f = r[lead] / rows[i][lead];
            for (int c = 0; c < d; ++c) r[c] -= f * rows[i][c];
        }
        double norm = 0;
        for (int c = 0; c < d; ++c) norm = std::max(norm, std::abs(r[c]));
        if (norm > kRankTol) {
            for (int c = 0; c < d; ++c) rows[nrows][c] = r[c];
            ++nrows;
            ++rank;
        }
    }
    return rank;
}

double abs_det(const std::array<Vec, kMaxDim + 1>& verts, int d) {
    double m[kMaxDim][kMaxDim];
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d; ++c) m[r][c] = verts[r + 1][c] - verts[0][c];
    }
    double det = 1.0;
    for (int col = 0; col < d; ++col) {
        int piv = col;
        for (int r = col + 1; r < d; ++r) {
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        }
        if (std::abs(m[piv][col]) < 1e-300) return 0.0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (int r = col + 1; r < d; ++r) {
            double f = m[r][col] / m[col][col];
            for (int c = col; c < d; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return std::abs(det);
}

struct Triangulator {
    const std::vector<Vec>& pts;
    const std::vector<uint64_t>& active;
    int d;
    int m;  // number of halfspaces
    std::vector<std::vector<int>> out;

    // Pulling triangulation: cone the first vertex over every facet that does
    // not contain it, recursing on facets.
    void run(std::vector<int> ids, int r, std::vector<int>& cone) {
        if (static_cast<int>(ids.size()) == r + 1) {
            std::vector<int> simplex = cone;
            simplex.insert(simplex.end(), ids.begin(), ids.end());
            out.push_back(std::move(simplex));
            return;
        }
        uint64_t common = ~0ULL;
        for (int id : ids) common &= active[id];
        const int v0 = ids[0];
        std::set<std::vector<int>> seen;
        for (int c = 0; c < m; ++c) {
            if (common & (1ULL << c)) continue;
            if (active[v0] & (1ULL << c)) continue;  // facet would contain the apex
            std::vector<int> face;
            for (int id : ids) {
                if (active[id] & (1ULL << c)) face.push_back(id);
            }
            if (static_cast<int>(face.size()) < r) continue;
            if (affine_dim(pts, face, d) != r - 1) continue;
            if (!seen.insert(face).second) continue;
            cone.push_back(v0);
            run(std::move(face), r - 1, cone);
            cone.pop_back();
        }
    }
};

}  // namespace

PolytopeVertices polytope_vertices(int d, const std::vector<Halfspace>& hs) {
    if (d < 1 || d > kMaxDim) throw CapacityError("polytope dimension must be in [1, 6]");
    const int m = static_cast<int>(hs.size());
    if (m > 63) throw CapacityError("too many halfspaces");
    PolytopeVertices pv;
    int idx[kMaxDim];
    for (int i = 0; i < d; ++i) idx[i] = i;
    if (m < d) return pv;
    while (true) {
        Vec x{};
        if (solve_square(hs, idx, d, x)) {
            bool feasible = true;
            for (int c = 0; c < m && feasible; ++c) {
                if (dot(hs[c].a, x, d) > hs[c].b + kFeasTol) feasible = false;
            }
            if (feasible) {
                bool dup = false;
                for (const Vec& p : pv.pts) {
                    double dist = 0;
                    for (int c = 0; c < d; ++c) dist = std::max(dist, std::abs(p[c] - x[c]));
                    if (dist < 1e-9) { dup = true; break; }
                }
                if (!dup) pv.pts.push_back(x);
            }
        }
        // next combination
        int i = d - 1;
        while (i >= 0 && idx[i] == m - d + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int k = i + 1; k < d; ++k) idx[k] = idx[k - 1] + 1;
    }
    pv.active.resize(pv.pts.size(), 0);
    for (std::size_t vtx = 0; vtx < pv.pts.size(); ++vtx) {
        for (int c = 0; c < m; ++c) {
            if (std::abs(dot(hs[c].a, pv.pts[vtx], d) - hs[c].b) <= kActiveTol) {
                pv.active[vtx] |= 1ULL << c;
            }
        }
    }
    return pv;
}

std::vector<Simplex> triangulate_polytope(int d, const std::vector<Halfspace>& hs) {
    PolytopeVertices pv = polytope_vertices(d, hs);
    std::vector<Simplex> result;
    if (static_cast<int>(pv.pts.size()) < d + 1) return result;

    std::vector<int> all(pv.pts.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    // canonical vertex order: lexicographic by coordinates
    std::sort(all.begin(), all.end(), [&](int a, int b) {
        for (int c = 0; c < d; ++c) {
            if (pv.pts[a][c] != pv.pts[b][c]) return pv.pts[a][c] < pv.pts[b][c];
        }
        return a < b;
    });
    if (affine_dim(pv.pts, all, d) < d) return result;  // zero volume

    Triangulator tri{pv.pts, pv.active, d, static_cast<int>(hs.size()), {}};
    std::vector<int> cone;
    tri.run(all, d, cone);

    result.reserve(tri.out.size());
    for (const auto& ids : tri.out) {
        Simplex s;
        for (int k = 0; k <= d; ++k) s.verts[k] = pv.pts[ids[k]];
        s.absdet = abs_det(s.verts, d);
        if (s.absdet > 1e-14) result.push_back(s);
    }
    return result;
}

}  // namespace wsieve
