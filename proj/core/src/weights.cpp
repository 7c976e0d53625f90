#include "wsieve/weights.hpp"

#include <algorithm>
#include <cmath>

#include "wsieve/errors.hpp"

namespace wsieve {

namespace {
// ceil(x) that treats values within 1e-9 of an integer as that integer
int ceil_tol(double x) {
    double fl = std::floor(x + 1e-9);
    if (std::abs(x - fl) < 1e-9) return static_cast<int>(fl);
    return static_cast<int>(std::ceil(x));
}
}  // namespace

const char* weight_family_name(WeightFamily f) {
    switch (f) {
        case WeightFamily::trivial: return "trivial";
        case WeightFamily::kuhn: return "kuhn";
        case WeightFamily::richert: return "richert";
        case WeightFamily::piecewise_linear: return "piecewise_linear";
    }
    return "?";
}

WeightFamily weight_family_from_name(const std::string& name) {
    if (name == "trivial") return WeightFamily::trivial;
    if (name == "kuhn") return WeightFamily::kuhn;
    if (name == "richert") return WeightFamily::richert;
    if (name == "piecewise_linear") return WeightFamily::piecewise_linear;
    throw ConfigError("unknown weight family '" + name + "'");
}

WeightSpec WeightSpec::trivial(double v, int S) {
    WeightSpec w;
    w.family = WeightFamily::trivial;
    w.u = w.v = v;
    w.S = S;
    w.lipschitz_bound = 0.0;
    w.validate();
    return w;
}

WeightSpec WeightSpec::kuhn(double u, double v, int S) {
    WeightSpec w;
    w.family = WeightFamily::kuhn;
    w.u = u;
    w.v = v;
    w.S = S;
    // the indicator jump has no finite Lipschitz constant; 0 is the bookkeeping
    // value since C_w only enters error terms absent from the main terms
    w.lipschitz_bound = 0.0;
    w.validate();
    return w;
}

WeightSpec WeightSpec::richert(double u, double v, double lambda, int S) {
    WeightSpec w;
    w.family = WeightFamily::richert;
    w.u = u;
    w.v = v;
    w.lambda = lambda;
    w.S = S;
    w.lipschitz_bound = lambda * u;
    w.validate();
    return w;
}

WeightSpec WeightSpec::piecewise_linear(double u, double v,
                                        std::vector<std::pair<double, double>> pts, int S) {
    WeightSpec w;
    w.family = WeightFamily::piecewise_linear;
    w.u = u;
    w.v = v;
    w.breakpoints = std::move(pts);
    w.S = S;
    double lip = 0.0;
    for (std::size_t i = 0; i + 1 < w.breakpoints.size(); ++i) {
        double da = w.breakpoints[i + 1].first - w.breakpoints[i].first;
        double dw = w.breakpoints[i + 1].second - w.breakpoints[i].second;
        if (da > 0) lip = std::max(lip, std::abs(dw / da));
    }
    w.lipschitz_bound = lip;
    w.validate();
    return w;
}

void WeightSpec::validate() const {
    if (!(u > 2.0)) throw ConfigError("weight: require u > 2");
    if (!(v >= u)) throw ConfigError("weight: require v >= u");
    if (S < 1) throw ConfigError("weight: S must be a positive integer");
    if (!(v >= S + 1)) throw ConfigError("weight: require v >= S + 1");
    switch (family) {
        case WeightFamily::trivial:
            if (v != u) throw ConfigError("trivial weights use u = v");
            break;
        case WeightFamily::kuhn:
            if (!(v > u)) throw ConfigError("kuhn weights require v > u");
            break;
        case WeightFamily::richert:
            if (!(lambda > 0)) throw ConfigError("richert weights require lambda > 0");
            if (lambda * (1.0 - u / v) > 1.0 + 1e-12) {
                throw ConfigError("richert weights exceed 1 at the window bottom");
            }
            break;
        case WeightFamily::piecewise_linear: {
            if (breakpoints.size() < 2) throw ConfigError("piecewise weights need >= 2 breakpoints");
            if (std::abs(breakpoints.front().first - 1.0 / v) > 1e-12 ||
                std::abs(breakpoints.back().first - 1.0 / u) > 1e-12) {
                throw ConfigError("piecewise breakpoints must span [1/v, 1/u]");
            }
            if (breakpoints.front().second != 0.0 || breakpoints.back().second != 0.0) {
                throw ConfigError("piecewise weights must vanish at 1/v and 1/u");
            }
            for (std::size_t i = 0; i < breakpoints.size(); ++i) {
                if (breakpoints[i].second < 0.0 || breakpoints[i].second > 1.0) {
                    throw ConfigError("piecewise weight values must lie in [0,1]");
                }
                if (i > 0 && breakpoints[i].first <= breakpoints[i - 1].first) {
                    throw ConfigError("piecewise breakpoints must be strictly increasing");
                }
            }
            break;
        }
    }
}

double weight_value(const WeightSpec& spec, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw DomainError("weight_value: alpha must be in [0,1]");
    const double lo = 1.0 / spec.v;
    const double hi = 1.0 / spec.u;
    if (alpha < lo || alpha >= hi) return 0.0;  // window is half-open at 1/u
    switch (spec.family) {
        case WeightFamily::trivial: return 0.0;
        case WeightFamily::kuhn: return 0.5;
        case WeightFamily::richert: return spec.lambda * (1.0 - spec.u * alpha);
        case WeightFamily::piecewise_linear: {
            const auto& bp = spec.breakpoints;
            auto it = std::upper_bound(bp.begin(), bp.end(), alpha,
                                       [](double a, const auto& p) { return a < p.first; });
            if (it == bp.begin() || it == bp.end()) return 0.0;
            auto [a1, w1] = *(it - 1);
            auto [a2, w2] = *it;
            return w1 + (w2 - w1) * (alpha - a1) / (a2 - a1);
        }
    }
    return 0.0;
}

int capital_R(const WeightSpec& spec) {
    switch (spec.family) {
        case WeightFamily::trivial: return ceil_tol(spec.v - 1.0);
        case WeightFamily::kuhn: return ceil_tol(spec.u * (1.0 - 1.0 / spec.v));
        case WeightFamily::richert: return ceil_tol(1.0 / spec.lambda + spec.u - 1.0);
        case WeightFamily::piecewise_linear: return ceil_tol(spec.v - 1.0);
    }
    return ceil_tol(spec.v - 1.0);
}

std::optional<int> r_zero(const WeightSpec& spec) {
    if (spec.window_empty()) return 0;
    double inf_w;
    switch (spec.family) {
        case WeightFamily::trivial: return 0;
        case WeightFamily::kuhn: inf_w = 0.5; break;
        case WeightFamily::richert: return std::nullopt;  // w -> 0 at 1/u
        case WeightFamily::piecewise_linear: {
            // w vanishes at the window edges by construction
            return std::nullopt;
        }
    }
    if (inf_w <= 0.0) return std::nullopt;
    // smallest R0 with (R0+1) * inf_w >= 1
    int r0 = ceil_tol(1.0 / inf_w - 1.0);
    return std::max(r0, 0);
}

bool k1_route_valid(const WeightSpec& spec) {
    auto r0 = r_zero(spec);
    return r0.has_value() && *r0 <= 1;
}

int WeightSegments::segment_of(double alpha) const {
    auto it = std::upper_bound(pts.begin(), pts.end(), alpha);
    int idx = static_cast<int>(it - pts.begin()) - 1;
    return std::clamp(idx, 0, static_cast<int>(affine.size()) - 1);
}

WeightSegments weight_segments(const WeightSpec& spec) {
    WeightSegments seg;
    const double lo = 1.0 / spec.v;
    const double hi = 1.0 / spec.u;
    seg.pts.push_back(0.0);
    if (spec.window_empty()) {
        seg.pts.push_back(1.0);
        seg.affine.push_back({0.0, 0.0});
        return seg;
    }
    seg.pts.push_back(lo);
    seg.affine.push_back({0.0, 0.0});
    switch (spec.family) {
        case WeightFamily::trivial:
            break;
        case WeightFamily::kuhn:
            seg.pts.push_back(hi);
            seg.affine.push_back({0.5, 0.0});
            break;
        case WeightFamily::richert:
            seg.pts.push_back(hi);
            seg.affine.push_back({spec.lambda, -spec.lambda * spec.u});
            break;
        case WeightFamily::piecewise_linear:
            for (std::size_t i = 0; i + 1 < spec.breakpoints.size(); ++i) {
                auto [a1, w1] = spec.breakpoints[i];
                auto [a2, w2] = spec.breakpoints[i + 1];
                double slope = (w2 - w1) / (a2 - a1);
                seg.pts.push_back(a2);
                seg.affine.push_back({w1 - slope * a1, slope});
            }
            break;
    }
    seg.pts.push_back(1.0);
    seg.affine.push_back({0.0, 0.0});
    return seg;
}

}  // namespace wsieve
