#include "wsieve/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "wsieve/constants.hpp"
#include "wsieve/errors.hpp"

namespace wsieve {
namespace {

// 3-point Gauss-Legendre on [0,1]
constexpr double kG3X[3] = {0.11270166537925831148, 0.5, 0.88729833462074168852};
constexpr double kG3W[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

// Raw marched arrays in index coordinates: node i holds the function at
// s = i / per_unit. Stored as the s-weighted forms u*omega_B, s*f, s*F.
struct RawBundle {
    int per_unit = 0;
    std::vector<double> omega;
    std::vector<double> lil;
    std::vector<double> big;
    std::vector<std::vector<double>> cj;  // index 0 -> c_2
};

// 4-point Lagrange at index coordinate x, stencil confined to one unit block.
double interp_idx(const std::vector<double>& v, int per_unit, double x) {
    const int n = static_cast<int>(v.size()) - 1;
    int j = static_cast<int>(x);
    if (j >= n) j = n - 1;
    const int block = j / per_unit;
    int local = j - block * per_unit - 1;
    const int block_len = std::min(per_unit, n - block * per_unit);
    local = std::clamp(local, 0, block_len - 3);
    const int i0 = block * per_unit + local;
    const double t = x - i0;
    const double* p = v.data() + i0;
    const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    const double l1 = t * (t - 2) * (t - 3) / 2.0;
    const double l2 = -t * (t - 1) * (t - 3) / 2.0;
    const double l3 = t * (t - 1) * (t - 2) / 6.0;
    return l0 * p[0] + l1 * p[1] + l2 * p[2] + l3 * p[3];
}

// Marches vals over index blocks [from_block, to_block): each panel adds
// int src(t-1)/(t-1) dt with t-1 expressed in index units (the grid step
// cancels against the panel width).
template <typename Src>
void march_block(std::vector<double>& vals, int per_unit, int block, Src&& src) {
    const int i0 = block * per_unit;
    const int i1 = i0 + per_unit;
    for (int i = i0; i < i1; ++i) {
        double panel = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double tm1 = static_cast<double>(i) + kG3X[k] - per_unit;
            panel += kG3W[k] * src(tm1) / tm1;
        }
        vals[i + 1] = vals[i] + panel;
    }
}

RawBundle build_raw(int per_unit, int s_ff, int s_om, int j_max) {
    RawBundle rb;
    rb.per_unit = per_unit;
    const int N = per_unit;

    // u * omega_B
    rb.omega.assign(static_cast<std::size_t>(s_om) * N + 1, 0.0);
    for (int i = N; i <= 2 * N; ++i) rb.omega[i] = 1.0;
    for (int m = 2; m < s_om; ++m) {
        march_block(rb.omega, N, m, [&](double tm1) {
            if (tm1 <= 2.0 * N) return tm1 >= N ? 1.0 : 0.0;
            return interp_idx(rb.omega, N, tm1);
        });
    }

    // s*f and s*F, interleaved (each feeds the other one unit behind)
    rb.lil.assign(static_cast<std::size_t>(s_ff) * N + 1, 0.0);
    rb.big.assign(static_cast<std::size_t>(s_ff) * N + 1, kTwoExpGamma);
    auto big_src = [&](double tm1) {
        return tm1 <= 3.0 * N ? kTwoExpGamma : interp_idx(rb.big, N, tm1);
    };
    auto lil_src = [&](double tm1) {
        return tm1 <= 2.0 * N ? 0.0 : interp_idx(rb.lil, N, tm1);
    };
    for (int m = 2; m < s_ff; ++m) {
        march_block(rb.lil, N, m, big_src);
        if (m + 1 >= 3 && m + 1 < s_ff) march_block(rb.big, N, m + 1, lil_src);
    }

    // c_j chain
    rb.cj.resize(std::max(0, j_max - 1));
    for (int j = 2; j <= j_max; ++j) {
        auto& tab = rb.cj[j - 2];
        tab.assign(static_cast<std::size_t>(s_om) * N + 1, 0.0);
        for (int m = j; m < s_om; ++m) {
            if (j == 2) {
                march_block(tab, N, m, [&](double tm1) { return tm1 >= N ? 1.0 : 0.0; });
            } else {
                const auto& prev = rb.cj[j - 3];
                const double lim = static_cast<double>(j - 1) * N;
                march_block(tab, N, m, [&](double tm1) {
                    return tm1 <= lim ? 0.0 : interp_idx(prev, N, tm1);
                });
            }
        }
    }
    return rb;
}

// sup |coarse - fine| over the coarse nodes of one array
double sup_delta(const std::vector<double>& coarse, const std::vector<double>& fine) {
    double d = 0.0;
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        d = std::max(d, std::abs(coarse[i] - fine[2 * i]));
    }
    return d;
}

double sup_delta_all(const RawBundle& a, const RawBundle& b) {
    double d = sup_delta(a.omega, b.omega);
    d = std::max(d, sup_delta(a.lil, b.lil));
    d = std::max(d, sup_delta(a.big, b.big));
    for (std::size_t j = 0; j < a.cj.size(); ++j) d = std::max(d, sup_delta(a.cj[j], b.cj[j]));
    return d;
}

FunctionTable from_values(FnKind kind, int index_j, double grid_start, int per_unit,
                          double s_max, int level, std::vector<double> values) {
    FunctionTable t;
    t.kind = kind;
    t.index_j = index_j;
    t.grid_start = grid_start;
    t.grid_step = 1.0 / per_unit;
    t.s_max = s_max;
    t.refinement_level = level;
    t.values = std::move(values);
    t.defining_checksum = table_checksum(kind, index_j, t.grid_step, s_max);
    t.validate();
    return t;
}

}  // namespace

SieveTables::SieveTables(TableSettings settings) : settings_(settings) {
    if (settings_.grid_step < 1e-5 || settings_.grid_step > 1e-2) {
        throw ConfigError("grid_step must lie in [1e-5, 1e-2]");
    }
    if (settings_.j_max < 1 || settings_.j_max > 16) {
        throw ConfigError("j_max out of range");
    }
    const int s_ff = static_cast<int>(std::ceil(settings_.s_max_ff - 1e-12));
    const int s_om = static_cast<int>(std::ceil(settings_.s_max_omega - 1e-12));
    if (s_ff < 4 || s_om < 4) throw ConfigError("s_max too small");
    settings_.s_max_ff = s_ff;
    settings_.s_max_omega = s_om;

    int per_unit = static_cast<int>(std::llround(1.0 / settings_.grid_step));
    if (per_unit < 1 || std::abs(per_unit * settings_.grid_step - 1.0) > 1e-9) {
        throw ConfigError("grid_step must divide 1 exactly");
    }

    RawBundle prev = build_raw(per_unit, s_ff, s_om, settings_.j_max);
    double delta = 0.0;
    int level = 0;
    for (; level < settings_.max_refinements; ++level) {
        RawBundle fine = build_raw(per_unit * 2, s_ff, s_om, settings_.j_max);
        delta = sup_delta_all(prev, fine);
        prev = std::move(fine);
        per_unit *= 2;
        if (delta <= settings_.refine_sup_tol) break;
    }
    if (delta > settings_.refine_sup_tol) {
        throw ConvergenceError("table refinement did not stabilize", delta);
    }
    refinement_level_ = level + 1;

    omega_ = from_values(FnKind::omega_b, 0, 0.0, prev.per_unit, s_om, refinement_level_,
                         std::move(prev.omega));
    lil_ = from_values(FnKind::little_f, 0, 0.0, prev.per_unit, s_ff, refinement_level_,
                       std::move(prev.lil));
    big_ = from_values(FnKind::big_f, 0, 0.0, prev.per_unit, s_ff, refinement_level_,
                       std::move(prev.big));
    cj_.clear();
    for (int j = 2; j <= settings_.j_max; ++j) {
        cj_.push_back(from_values(FnKind::c_j, j, 0.0, prev.per_unit, s_om,
                                  refinement_level_, std::move(prev.cj[j - 2])));
    }
}

double SieveTables::s_max(FnKind kind) const {
    return (kind == FnKind::little_f || kind == FnKind::big_f) ? settings_.s_max_ff
                                                               : settings_.s_max_omega;
}

double SieveTables::buchstab(double u) const {
    if (u < 0) throw DomainError("buchstab: u must be >= 0");
    if (u > settings_.s_max_omega + 1e-12) {
        std::ostringstream msg;
        msg << "buchstab: u = " << u << " above tabulated limit s_max = "
            << settings_.s_max_omega;
        throw OutOfRangeError(msg.str());
    }
    if (u < 1.0) return 0.0;
    if (u <= 2.0) return 1.0 / u;
    return omega_.interpolate(std::min(u, settings_.s_max_omega)) / u;
}

double SieveTables::little_c(int j, double t) const {
    if (j < 1) throw DomainError("little_c: j must be positive");
    if (j > settings_.j_max) {
        throw CapacityError("little_c: j = " + std::to_string(j) + " exceeds j_max = " +
                            std::to_string(settings_.j_max));
    }
    if (t < 0) throw DomainError("little_c: t must be >= 0");
    if (t > settings_.s_max_omega + 1e-12) {
        std::ostringstream msg;
        msg << "little_c: t = " << t << " above tabulated limit s_max = "
            << settings_.s_max_omega;
        throw OutOfRangeError(msg.str());
    }
    if (j == 1) return t >= 1.0 ? 1.0 : 0.0;
    if (t <= static_cast<double>(j)) return 0.0;
    return cj_[j - 2].interpolate(std::min(t, settings_.s_max_omega));
}

double SieveTables::big_C_raw(int J, double t) const {
    double total = t <= 2.0 ? 1.0 : omega_.interpolate(std::min(t, settings_.s_max_omega));
    for (int j = 1; j < J; ++j) total -= little_c(j, t);
    return total;
}

double SieveTables::big_C(int J, double t) const {
    if (J < 1) throw DomainError("big_C: J must be positive");
    if (J > settings_.j_max) {
        throw CapacityError("big_C: J = " + std::to_string(J) + " exceeds j_max = " +
                            std::to_string(settings_.j_max));
    }
    if (t < 1.0 - 1e-12) throw DomainError("big_C: t must be >= 1");
    if (t > settings_.s_max_omega + 1e-12) {
        std::ostringstream msg;
        msg << "big_C: t = " << t << " above tabulated limit s_max = " << settings_.s_max_omega;
        throw OutOfRangeError(msg.str());
    }
    if (t <= static_cast<double>(J)) return 0.0;
    double raw = big_C_raw(J, t);
    if (raw < -1e-6) {
        std::ostringstream msg;
        msg << "big_C: tables disagree, C_" << J << "(" << t << ") = " << raw;
        throw InternalInconsistencyError(msg.str());
    }
    return std::max(raw, 0.0);
}

double SieveTables::linear_sieve_f(double s) const {
    if (s <= 0) throw DomainError("linear_sieve_f: s must be positive");
    if (s > settings_.s_max_ff + 1e-12) {
        std::ostringstream msg;
        msg << "linear_sieve_f: s = " << s << " above tabulated limit s_max = "
            << settings_.s_max_ff;
        throw OutOfRangeError(msg.str());
    }
    if (s <= 2.0) return 0.0;
    return lil_.interpolate(std::min(s, settings_.s_max_ff)) / s;
}

double SieveTables::linear_sieve_F(double s) const {
    if (s <= 0) throw DomainError("linear_sieve_F: s must be positive");
    if (s > settings_.s_max_ff + 1e-12) {
        std::ostringstream msg;
        msg << "linear_sieve_F: s = " << s << " above tabulated limit s_max = "
            << settings_.s_max_ff;
        throw OutOfRangeError(msg.str());
    }
    if (s <= 3.0) return kTwoExpGamma / s;
    return big_.interpolate(std::min(s, settings_.s_max_ff)) / s;
}

FunctionTable SieveTables::make_table(FnKind kind, int index_j) const {
    const int per_unit = omega_.nodes_per_unit();
    const double h = 1.0 / per_unit;
    auto sample = [&](double start, double stop, auto&& fn) {
        auto n = static_cast<std::size_t>(std::llround((stop - start) / h));
        std::vector<double> vals(n + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            vals[i] = fn(start + static_cast<double>(i) * h);
        }
        return vals;
    };
    switch (kind) {
        case FnKind::omega_b:
            return from_values(kind, 0, 0.0, per_unit, settings_.s_max_omega,
                               refinement_level_,
                               sample(0.0, settings_.s_max_omega,
                                      [&](double u) { return buchstab(u); }));
        case FnKind::little_f:
            return from_values(kind, 0, 0.0, per_unit, settings_.s_max_ff, refinement_level_,
                               sample(0.0, settings_.s_max_ff, [&](double s) {
                                   return s <= 0 ? 0.0 : linear_sieve_f(s);
                               }));
        case FnKind::big_f:
            return from_values(kind, 0, 1.0, per_unit, settings_.s_max_ff, refinement_level_,
                               sample(1.0, settings_.s_max_ff,
                                      [&](double s) { return linear_sieve_F(s); }));
        case FnKind::c_j:
            return from_values(kind, index_j, 0.0, per_unit, settings_.s_max_omega,
                               refinement_level_,
                               sample(0.0, settings_.s_max_omega,
                                      [&](double t) { return little_c(index_j, t); }));
        case FnKind::big_c_j:
            return from_values(kind, index_j, 1.0, per_unit, settings_.s_max_omega,
                               refinement_level_,
                               sample(1.0, settings_.s_max_omega,
                                      [&](double t) { return big_C(index_j, t); }));
    }
    throw ConfigError("unknown table kind");
}

FunctionTable tabulate(FnKind kind, int index_j, double s_max, double grid_step) {
    TableSettings s;
    s.grid_step = grid_step;
    if (kind == FnKind::little_f || kind == FnKind::big_f) {
        s.s_max_ff = std::max(4.0, s_max);
    } else {
        s.s_max_omega = std::max(4.0, s_max);
        if ((kind == FnKind::c_j || kind == FnKind::big_c_j) && index_j > s.j_max) {
            throw CapacityError("tabulate: index j exceeds j_max");
        }
    }
    SieveTables tables(s);
    return tables.make_table(kind, index_j);
}

std::shared_ptr<const SieveTables> shared_tables(const TableSettings& settings) {
    static std::mutex mu;
    static std::map<std::tuple<double, double, double, int>,
                    std::shared_ptr<const SieveTables>>
        cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(settings.grid_step, settings.s_max_ff, settings.s_max_omega,
                               settings.j_max);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto tables = std::make_shared<const SieveTables>(settings);
    cache.emplace(key, tables);
    return tables;
}

}  // namespace wsieve
