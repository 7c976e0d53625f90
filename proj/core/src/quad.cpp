#include "wsieve/quad.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>

#include "wsieve/errors.hpp"
#include "wsieve/parallel.hpp"
#include "wsieve/rng.hpp"
#include "wsieve/stable_sum.hpp"

namespace wsieve {
namespace {

// Gauss-Legendre nodes/weights on [0,1]
constexpr double kG5X[5] = {0.046910077030668004, 0.23076534494715845, 0.5,
                            0.76923465505284155, 0.9530899229693320};
constexpr double kG5W[5] = {0.11846344252809455, 0.23931433524968324, 0.28444444444444444,
                            0.23931433524968324, 0.11846344252809455};
constexpr double kG3X[3] = {0.11270166537925831, 0.5, 0.88729833462074169};
constexpr double kG3W[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

struct TensorRule {
    std::vector<Vec> pts;
    std::vector<double> w;
};

TensorRule make_tensor(int d, const double* x, const double* wt, int n) {
    TensorRule r;
    long total = 1;
    for (int i = 0; i < d; ++i) total *= n;
    r.pts.resize(total);
    r.w.resize(total);
    for (long k = 0; k < total; ++k) {
        long rem = k;
        double weight = 1.0;
        Vec p{};
        for (int i = d - 1; i >= 0; --i) {
            int digit = static_cast<int>(rem % n);
            rem /= n;
            p[i] = x[digit];
            weight *= wt[digit];
        }
        r.pts[k] = p;
        r.w[k] = weight;
    }
    return r;
}

const TensorRule& rule5(int d) {
    static std::mutex mu;
    static std::map<int, TensorRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, make_tensor(d, kG5X, kG5W, 5)).first;
    return it->second;
}

const TensorRule& rule3(int d) {
    static std::mutex mu;
    static std::map<int, TensorRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, make_tensor(d, kG3X, kG3W, 3)).first;
    return it->second;
}

const TensorRule& corners_rule(int d) {
    static std::mutex mu;
    static std::map<int, TensorRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(d);
    if (it == cache.end()) {
        double x[2] = {0.0, 1.0};
        double w[2] = {0.5, 0.5};
        it = cache.emplace(d, make_tensor(d, x, w, 2)).first;
    }
    return it->second;
}

// One polytope piece with a smooth (or clamped-affine) integrand.
struct Region {
    std::vector<Halfspace> hs;
    int d = 1;
    bool affine_numer = false;
    AffineForm numer;
    double const_numer = 1.0;
    enum class CArg { none, u_one_minus_sum, ratio } carg = CArg::none;
    int c_index = 0;
    bool f_factor = false;
    enum class Denom { one, x0, theta2_prod } denom = Denom::one;
    double u = 0, v = 0, theta1 = 0, th2c0 = 0, th2c1 = 0;
    std::shared_ptr<const SieveTables> tables;
    std::function<double(const double*)> direct;  // generic path
    std::function<double(const double*)> kink;    // corner-sign split trigger
};

double region_eval(const Region& r, const double* x) {
    if (r.direct) return r.direct(x);
    double num;
    if (r.affine_numer) {
        num = r.numer.c0;
        for (int i = 0; i < r.d; ++i) num += r.numer.c[i] * x[i];
        if (num <= 0.0) return 0.0;
    } else {
        num = r.const_numer;
    }
    if (r.carg != Region::CArg::none) {
        double sum = 0;
        for (int i = 0; i < r.d; ++i) sum += x[i];
        double t = r.carg == Region::CArg::u_one_minus_sum ? r.u * (1.0 - sum)
                                                           : (1.0 - x[0]) / x[0];
        if (t <= static_cast<double>(r.c_index)) return 0.0;
        num *= r.tables->big_C(r.c_index, t);
    }
    if (r.f_factor) {
        double arg = r.v * (r.theta1 - x[0]);
        if (arg <= 1e-14) return 0.0;
        num *= r.tables->linear_sieve_F(arg);
    }
    switch (r.denom) {
        case Region::Denom::one:
            return num;
        case Region::Denom::x0:
            return num / x[0];
        case Region::Denom::theta2_prod: {
            double sum = 0, prod = 1;
            for (int i = 0; i < r.d; ++i) {
                sum += x[i];
                prod *= x[i];
            }
            return num / ((r.th2c0 + r.th2c1 * x[0]) * prod * (1.0 - sum));
        }
    }
    return 0.0;
}

std::vector<Halfspace> base_halfspaces(const IntegralTask& task) {
    const int d = task.dimension;
    std::vector<Halfspace> hs;
    for (int j = 0; j < d; ++j) {
        Halfspace lo{}, hi{};
        lo.a[j] = -1.0;
        lo.b = -task.lower[j];
        hi.a[j] = 1.0;
        hi.b = task.upper[j];
        hs.push_back(lo);
        hs.push_back(hi);
    }
    if (task.ordered) {
        for (int j = 0; j + 1 < d; ++j) {
            Halfspace o{};
            o.a[j] = 1.0;
            o.a[j + 1] = -1.0;
            o.b = 0.0;
            hs.push_back(o);
        }
    }
    for (const auto& c : task.constraints) {
        if (static_cast<int>(c.coeffs.size()) != d) {
            throw ConfigError("constraint coefficient count does not match dimension");
        }
        Halfspace h{};
        for (int j = 0; j < d; ++j) h.a[j] = c.coeffs[j];
        h.b = c.bound;
        hs.push_back(h);
    }
    return hs;
}

Region make_base_region(const IntegralTask& task) {
    Region r;
    r.hs = base_halfspaces(task);
    r.d = task.dimension;
    r.u = task.params.weight ? task.params.weight->u : 0.0;
    r.v = task.params.weight ? task.params.weight->v : 0.0;
    r.theta1 = task.params.theta1;
    r.th2c0 = task.params.theta2_c0;
    r.th2c1 = task.params.theta2_c1;
    r.tables = task.params.tables;
    return r;
}

bool needs_weight(IntegrandId id) {
    return id == IntegrandId::sigma1_weight || id == IntegrandId::u2_small_r_term ||
           id == IntegrandId::m1_term || id == IntegrandId::m2_term;
}

// Analytic membership expansion: choose one affine weight segment per ordered
// variable (nondecreasing) and, when the integrand involves w(1 - sum), one
// segment for that last argument; emit the positivity cut of the resulting
// affine numerator as one more halfspace, so each region is smooth.
void expand_weighted(const IntegralTask& task, const Region& base, bool with_last_arg,
                     bool with_c_factor, std::vector<Region>& out) {
    const int d = task.dimension;
    const WeightSpec& w = *task.params.weight;
    const WeightSegments segs = weight_segments(w);
    const int nseg = static_cast<int>(segs.affine.size());

    std::vector<int> last_opts;
    if (with_last_arg) {
        for (int s = 0; s < nseg; ++s) last_opts.push_back(s);
    } else {
        last_opts.push_back(-1);
    }

    std::vector<int> choice(d);
    std::function<void(int, int)> rec = [&](int var, int min_seg) {
        if (var == d) {
            for (int ls : last_opts) {
                Region r = base;
                AffineForm numer;
                numer.c0 = 1.0;
                for (int j = 0; j < d; ++j) {
                    const auto& [bc0, bc1] = segs.affine[choice[j]];
                    numer.c0 -= bc0;
                    numer.c[j] -= bc1;
                    Halfspace lo{}, hi{};
                    lo.a[j] = -1.0;
                    lo.b = -segs.pts[choice[j]];
                    hi.a[j] = 1.0;
                    hi.b = segs.pts[choice[j] + 1];
                    r.hs.push_back(lo);
                    r.hs.push_back(hi);
                }
                if (ls >= 0) {
                    const auto& [lc0, lc1] = segs.affine[ls];
                    numer.c0 -= lc0 + lc1;
                    for (int j = 0; j < d; ++j) numer.c[j] += lc1;
                    // 1 - sum in [pts[ls], pts[ls+1]]
                    Halfspace sl{}, sh{};
                    for (int j = 0; j < d; ++j) {
                        sl.a[j] = -1.0;
                        sh.a[j] = 1.0;
                    }
                    sl.b = -(1.0 - segs.pts[ls + 1]);
                    sh.b = 1.0 - segs.pts[ls];
                    r.hs.push_back(sl);
                    r.hs.push_back(sh);
                }
                bool constant = true;
                for (int j = 0; j < d; ++j) constant = constant && numer.c[j] == 0.0;
                if (constant) {
                    if (numer.c0 <= 1e-15) continue;  // weight kills this piece
                    r.affine_numer = false;
                    r.const_numer = numer.c0;
                } else {
                    r.affine_numer = true;
                    r.numer = numer;
                    Halfspace pos{};
                    for (int j = 0; j < d; ++j) pos.a[j] = -numer.c[j];
                    pos.b = numer.c0;
                    r.hs.push_back(pos);
                }
                if (with_c_factor) {
                    r.carg = Region::CArg::u_one_minus_sum;
                    r.c_index = std::max(task.params.S + 1 - task.params.J, 1);
                }
                r.denom = Region::Denom::theta2_prod;
                out.push_back(std::move(r));
            }
            return;
        }
        for (int s = min_seg; s < nseg; ++s) {
            if (segs.pts[s + 1] <= task.lower[var] + 1e-15) continue;
            if (segs.pts[s] >= task.upper[var] - 1e-15) continue;
            choice[var] = s;
            rec(var + 1, task.ordered ? s : 0);
        }
    };
    rec(0, 0);
}

// Generic (unsplit) evaluator for an integrand id: used when analytic splits
// are disabled and by mc_integrate.
Region make_generic_region(const IntegralTask& task) {
    Region r = make_base_region(task);
    const int d = task.dimension;
    const IntegrandParams& p = task.params;
    auto clamp01 = [](double a) { return std::clamp(a, 0.0, 1.0); };
    switch (task.integrand) {
        case IntegrandId::unit:
            r.direct = [](const double*) { return 1.0; };
            break;
        case IntegrandId::coordinate:
            r.direct = [](const double* x) { return x[0]; };
            break;
        case IntegrandId::affine_positive_part: {
            AffineForm a = p.affine;
            r.direct = [a, d](const double* x) {
                double g = a.c0;
                for (int i = 0; i < d; ++i) g += a.c[i] * x[i];
                return std::max(g, 0.0);
            };
            r.kink = [a, d](const double* x) {
                double g = a.c0;
                for (int i = 0; i < d; ++i) g += a.c[i] * x[i];
                return g;
            };
            break;
        }
        case IntegrandId::sigma1_weight: {
            WeightSpec w = *p.weight;
            auto tables = p.tables;
            double theta1 = p.theta1, v = w.v;
            r.direct = [w, tables, theta1, v, clamp01](const double* x) {
                double wa = weight_value(w, clamp01(x[0]));
                if (wa == 0.0) return 0.0;
                double arg = v * (theta1 - x[0]);
                if (arg <= 1e-14) return 0.0;
                return wa / x[0] * tables->linear_sieve_F(arg);
            };
            break;
        }
        case IntegrandId::u2_small_r_term:
        case IntegrandId::m1_term: {
            WeightSpec w = *p.weight;
            auto tables = p.tables;
            double c0 = p.theta2_c0, c1 = p.theta2_c1;
            auto numer = [w, d, clamp01](const double* x) {
                double sum = 0;
                double g = 1.0;
                for (int i = 0; i < d; ++i) {
                    sum += x[i];
                    g -= weight_value(w, clamp01(x[i]));
                }
                g -= weight_value(w, clamp01(1.0 - sum));
                return g;
            };
            r.direct = [numer, d, c0, c1](const double* x) {
                double g = numer(x);
                if (g <= 0) return 0.0;
                double sum = 0, prod = 1;
                for (int i = 0; i < d; ++i) {
                    sum += x[i];
                    prod *= x[i];
                }
                return g / ((c0 + c1 * x[0]) * prod * (1.0 - sum));
            };
            r.kink = numer;
            break;
        }
        case IntegrandId::m2_term: {
            WeightSpec w = *p.weight;
            auto tables = p.tables;
            double c0 = p.theta2_c0, c1 = p.theta2_c1;
            int cidx = std::max(p.S + 1 - p.J, 1);
            double u = w.u;
            auto numer = [w, d, clamp01](const double* x) {
                double g = 1.0;
                for (int i = 0; i < d; ++i) g -= weight_value(w, clamp01(x[i]));
                return g;
            };
            r.direct = [numer, tables, cidx, u, d, c0, c1](const double* x) {
                double g = numer(x);
                if (g <= 0) return 0.0;
                double sum = 0, prod = 1;
                for (int i = 0; i < d; ++i) {
                    sum += x[i];
                    prod *= x[i];
                }
                double t = u * (1.0 - sum);
                if (t <= cidx) return 0.0;
                return g * tables->big_C(cidx, t) /
                       ((c0 + c1 * x[0]) * prod * (1.0 - sum));
            };
            r.kink = numer;
            break;
        }
        case IntegrandId::m2_tail: {
            auto tables = p.tables;
            double c0 = p.theta2_c0, c1 = p.theta2_c1;
            int S = p.S;
            r.direct = [tables, S, c0, c1](const double* x) {
                double t = (1.0 - x[0]) / x[0];
                if (t <= S) return 0.0;
                return tables->big_C(S, t) / ((c0 + c1 * x[0]) * x[0] * (1.0 - x[0]));
            };
            break;
        }
        case IntegrandId::harman_pointwise: {
            double lam = p.constant, c0 = p.theta2_c0, c1 = p.theta2_c1;
            r.direct = [lam, d, c0, c1](const double* x) {
                double sum = 0, prod = 1;
                for (int i = 0; i < d; ++i) {
                    sum += x[i];
                    prod *= x[i];
                }
                return lam / ((c0 + c1 * x[0]) * prod * (1.0 - sum));
            };
            break;
        }
    }
    return r;
}

std::vector<Region> expand(const IntegralTask& task, bool analytic) {
    std::vector<Region> out;
    if (needs_weight(task.integrand) && !task.params.weight) {
        throw ConfigError("integrand requires a weight spec");
    }
    if (!analytic) {
        out.push_back(make_generic_region(task));
    } else {
        Region base = make_base_region(task);
        switch (task.integrand) {
            case IntegrandId::unit:
                out.push_back(base);
                break;
            case IntegrandId::coordinate: {
                base.affine_numer = true;
                base.numer.c[0] = 1.0;
                out.push_back(base);
                break;
            }
            case IntegrandId::affine_positive_part: {
                base.affine_numer = true;
                base.numer = task.params.affine;
                Halfspace pos{};
                for (int j = 0; j < task.dimension; ++j) pos.a[j] = -task.params.affine.c[j];
                pos.b = task.params.affine.c0;
                base.hs.push_back(pos);
                out.push_back(base);
                break;
            }
            case IntegrandId::sigma1_weight: {
                const WeightSegments segs = weight_segments(*task.params.weight);
                for (std::size_t s = 0; s < segs.affine.size(); ++s) {
                    auto [c0, c1] = segs.affine[s];
                    if (c0 == 0.0 && c1 == 0.0) continue;
                    Region r = base;
                    Halfspace lo{}, hi{};
                    lo.a[0] = -1.0;
                    lo.b = -segs.pts[s];
                    hi.a[0] = 1.0;
                    hi.b = segs.pts[s + 1];
                    r.hs.push_back(lo);
                    r.hs.push_back(hi);
                    r.affine_numer = true;
                    r.numer.c0 = c0;
                    r.numer.c[0] = c1;
                    r.f_factor = true;
                    r.denom = Region::Denom::x0;
                    out.push_back(std::move(r));
                }
                break;
            }
            case IntegrandId::u2_small_r_term:
            case IntegrandId::m1_term:
                expand_weighted(task, base, /*with_last_arg=*/true, /*with_c_factor=*/false, out);
                break;
            case IntegrandId::m2_term:
                expand_weighted(task, base, /*with_last_arg=*/false, /*with_c_factor=*/true, out);
                break;
            case IntegrandId::m2_tail: {
                base.const_numer = 1.0;
                base.carg = Region::CArg::ratio;
                base.c_index = task.params.S;
                base.denom = Region::Denom::theta2_prod;
                out.push_back(base);
                break;
            }
            case IntegrandId::harman_pointwise: {
                base.const_numer = task.params.constant;
                base.denom = Region::Denom::theta2_prod;
                out.push_back(base);
                break;
            }
        }
    }
    // 1-d pre-splits at known kink abscissae
    if (task.dimension == 1 && !task.split_points.empty()) {
        std::vector<Region> split;
        for (const Region& r : out) {
            std::vector<double> pts = task.split_points;
            std::sort(pts.begin(), pts.end());
            double lo = task.lower[0];
            for (double p : pts) {
                if (p <= lo + 1e-14 || p >= task.upper[0] - 1e-14) continue;
                Region piece = r;
                Halfspace hi{};
                hi.a[0] = 1.0;
                hi.b = p;
                piece.hs.push_back(hi);
                Halfspace lob{};
                lob.a[0] = -1.0;
                lob.b = -lo;
                piece.hs.push_back(lob);
                split.push_back(std::move(piece));
                lo = p;
            }
            Region last = r;
            Halfspace lob{};
            lob.a[0] = -1.0;
            lob.b = -lo;
            last.hs.push_back(lob);
            split.push_back(std::move(last));
        }
        out = std::move(split);
    }
    return out;
}

struct Cell {
    int32_t piece = 0;  // index into the simplex list
    Vec lo{}, hi{};
    double val = 0.0, err = 0.0;
};

struct Piece {
    const Region* region;
    Simplex simplex;
};

// Maps box point t -> simplex point x with the stick-breaking jacobian.
double map_point(const Piece& pc, int d, const double* t, double* x) {
    double sigma[kMaxDim];
    double rem = 1.0, jac = 1.0;
    for (int j = 0; j < d; ++j) {
        sigma[j] = t[j] * rem;
        jac *= rem;
        rem *= (1.0 - t[j]);
    }
    const Vec& v0 = pc.simplex.verts[0];
    for (int c = 0; c < d; ++c) {
        double xc = v0[c];
        for (int j = 0; j < d; ++j) xc += sigma[j] * (pc.simplex.verts[j + 1][c] - v0[c]);
        x[c] = xc;
    }
    return jac;
}

void eval_cell(const Piece& pc, int d, Cell& cell) {
    const TensorRule& r5 = rule5(d);
    const TensorRule& r3 = rule3(d);
    double width[kMaxDim];
    double vol_t = 1.0;
    for (int j = 0; j < d; ++j) {
        width[j] = cell.hi[j] - cell.lo[j];
        vol_t *= width[j];
    }
    double fmax = 0.0;
    auto apply = [&](const TensorRule& rule) {
        double acc = 0.0;
        double t[kMaxDim], x[kMaxDim];
        for (std::size_t k = 0; k < rule.pts.size(); ++k) {
            for (int j = 0; j < d; ++j) t[j] = cell.lo[j] + rule.pts[k][j] * width[j];
            double jac = map_point(pc, d, t, x);
            double fv = region_eval(*pc.region, x) * jac;
            fmax = std::max(fmax, std::abs(fv));
            acc += rule.w[k] * fv;
        }
        return acc * vol_t * pc.simplex.absdet;
    };
    double v5 = apply(r5);
    double v3 = apply(r3);
    cell.val = v5;
    cell.err = std::abs(v5 - v3);
    if (pc.region->kink) {
        // The t-box corners collapse onto simplex vertices under the
        // stick-breaking map, so probe the interior rule nodes as well.
        double t[kMaxDim], x[kMaxDim];
        bool pos = false, neg = false;
        auto probe = [&](const TensorRule& rule) {
            for (std::size_t k = 0; k < rule.pts.size() && !(pos && neg); ++k) {
                for (int j = 0; j < d; ++j) t[j] = cell.lo[j] + rule.pts[k][j] * width[j];
                map_point(pc, d, t, x);
                double g = pc.region->kink(x);
                pos = pos || g > 1e-14;
                neg = neg || g < -1e-14;
            }
        };
        probe(corners_rule(d));
        probe(rule3(d));
        if (pos && neg) {
            cell.err = std::max(cell.err, 0.5 * (std::abs(v5) + vol_t * pc.simplex.absdet * fmax));
        }
    }
}

}  // namespace

double default_tolerance(int dimension) { return dimension <= 2 ? 1e-6 : 1e-4; }

IntegrateResult integrate(const IntegralTask& task, const QuadOptions& options) {
    const int d = task.dimension;
    if (d < 1 || d > kMaxDim) throw CapacityError("dimension must be in [1, 6]");
    if (static_cast<int>(task.lower.size()) != d || static_cast<int>(task.upper.size()) != d) {
        throw ConfigError("bounds do not match dimension");
    }
    if (task.tolerance <= 0) throw ConfigError("tolerance must be positive");
    const bool uses_tables = task.integrand == IntegrandId::sigma1_weight ||
                             task.integrand == IntegrandId::m2_term ||
                             task.integrand == IntegrandId::m2_tail;
    if (uses_tables && !task.params.tables) {
        throw ConfigError("integrand requires sieve tables");
    }

    std::vector<Region> regions = expand(task, options.analytic_kink_splits);
    std::vector<Piece> pieces;
    for (const Region& r : regions) {
        for (Simplex& s : triangulate_polytope(d, r.hs)) {
            pieces.push_back(Piece{&r, s});
        }
    }
    if (pieces.empty()) return {0.0, 0.0, 0};

    const int threads = options.threads > 0 ? options.threads : default_threads();
    std::vector<Cell> cells(pieces.size());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        cells[i].piece = static_cast<int32_t>(i);
        for (int j = 0; j < d; ++j) {
            cells[i].lo[j] = 0.0;
            cells[i].hi[j] = 1.0;
        }
    }
    parallel_for(cells.size(), threads,
                 [&](std::size_t i) { eval_cell(pieces[cells[i].piece], d, cells[i]); });
    long evaluated = static_cast<long>(cells.size());

    auto total_error = [&] {
        StableSum s;
        for (const Cell& c : cells) s.add(c.err);
        return s.get();
    };

    double toterr = total_error();
    while (toterr > task.tolerance) {
        if (evaluated > options.cell_budget) {
            StableSum vs;
            for (const Cell& c : cells) vs.add(c.val);
            throw BudgetExceededError("integrate: cell budget exceeded", vs.get(), toterr);
        }
        const std::size_t L = cells.size();
        const double thr = std::max(0.25 * toterr / static_cast<double>(L),
                                    task.tolerance / (2.0 * static_cast<double>(L)));
        std::vector<Cell> keep;
        std::vector<Cell> children;
        keep.reserve(L);
        for (const Cell& c : cells) {
            if (c.err > thr) {
                int axis = 0;
                double wmax = c.hi[0] - c.lo[0];
                for (int j = 1; j < d; ++j) {
                    double wj = c.hi[j] - c.lo[j];
                    if (wj > wmax) {
                        wmax = wj;
                        axis = j;
                    }
                }
                double mid = 0.5 * (c.lo[axis] + c.hi[axis]);
                Cell a = c, b = c;
                a.hi[axis] = mid;
                b.lo[axis] = mid;
                children.push_back(a);
                children.push_back(b);
            } else {
                keep.push_back(c);
            }
        }
        if (children.empty()) break;
        parallel_for(children.size(), threads, [&](std::size_t i) {
            eval_cell(pieces[children[i].piece], d, children[i]);
        });
        evaluated += static_cast<long>(children.size());
        keep.insert(keep.end(), children.begin(), children.end());
        cells = std::move(keep);
        toterr = total_error();
    }

    StableSum vs, es;
    for (const Cell& c : cells) {
        vs.add(c.val);
        es.add(c.err);
    }
    return {vs.get(), es.get(), evaluated};
}

McResult mc_integrate(const IntegralTask& task, long samples, uint64_t seed) {
    const int d = task.dimension;
    if (d < 1 || d > kMaxDim) throw CapacityError("dimension must be in [1, 6]");
    if (samples < 10'000) throw DomainError("mc_integrate requires >= 1e4 samples");
    Region generic = make_generic_region(task);
    const std::vector<Halfspace>& hs = generic.hs;

    double boxvol = 1.0;
    for (int j = 0; j < d; ++j) boxvol *= std::max(task.upper[j] - task.lower[j], 0.0);
    if (boxvol <= 0.0) return {0.0, 0.0, 0.0, true};

    Rng rng(seed);
    StableSum acc, acc2;
    long accepted = 0;
    double x[kMaxDim];
    for (long i = 0; i < samples; ++i) {
        for (int j = 0; j < d; ++j) {
            x[j] = task.lower[j] + rng.next_double() * (task.upper[j] - task.lower[j]);
        }
        bool ok = true;
        for (const Halfspace& h : hs) {
            double s = 0;
            for (int j = 0; j < d; ++j) s += h.a[j] * x[j];
            if (s > h.b) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        ++accepted;
        double fv = region_eval(generic, x);
        acc.add(fv);
        acc2.add(fv * fv);
    }
    const double n = static_cast<double>(samples);
    double mean = acc.get() / n;
    double var = std::max(acc2.get() / n - mean * mean, 0.0);
    McResult res;
    res.value = boxvol * mean;
    res.std_error = boxvol * std::sqrt(var / n);
    res.acceptance_rate = static_cast<double>(accepted) / n;
    res.degenerate_region = res.acceptance_rate < 1e-6;
    return res;
}

}  // namespace wsieve
