#include "wsieve/function_table.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wsieve/constants.hpp"
#include "wsieve/errors.hpp"

namespace wsieve {

const char* fn_kind_name(FnKind kind) {
    switch (kind) {
        case FnKind::omega_b: return "omega";
        case FnKind::little_f: return "f";
        case FnKind::big_f: return "F";
        case FnKind::c_j: return "c";
        case FnKind::big_c_j: return "C";
    }
    return "?";
}

FnKind fn_kind_from_name(const std::string& name) {
    if (name == "omega") return FnKind::omega_b;
    if (name == "f") return FnKind::little_f;
    if (name == "F") return FnKind::big_f;
    if (name == "c") return FnKind::c_j;
    if (name == "C") return FnKind::big_c_j;
    throw ConfigError("unknown function kind '" + name + "' (want f|F|omega|c|C)");
}

int FunctionTable::nodes_per_unit() const {
    int n = static_cast<int>(std::llround(1.0 / grid_step));
    if (n < 1 || std::abs(n * grid_step - 1.0) > 1e-9) {
        throw ConfigError("grid_step must divide 1 exactly");
    }
    return n;
}

void FunctionTable::validate() const {
    if (grid_step <= 0) throw ConfigError("grid_step must be positive");
    auto n = static_cast<std::size_t>(
        std::floor((s_max - grid_start) / grid_step + 1e-9));
    if (values.size() != n + 1) {
        throw InternalInconsistencyError("table length does not match grid extent");
    }
}

double FunctionTable::interpolate(double s) const {
    const int per_unit = nodes_per_unit();
    const double x = (s - grid_start) / grid_step;  // index coordinate
    const int n = static_cast<int>(values.size()) - 1;
    int j = static_cast<int>(std::floor(x));
    if (j >= n) j = n - 1;
    if (j < 0) j = 0;
    // stencil of 4 nodes inside the unit block containing j
    const int block = j / per_unit;
    int local = j - block * per_unit - 1;
    const int block_len = std::min(per_unit, n - block * per_unit);
    if (local < 0) local = 0;
    if (local > block_len - 3) local = block_len - 3;
    const int i0 = block * per_unit + local;
    const double t = x - i0;
    const double* v = values.data() + i0;
    const double l0 = -(t - 1) * (t - 2) * (t - 3) / 6.0;
    const double l1 = t * (t - 2) * (t - 3) / 2.0;
    const double l2 = -t * (t - 1) * (t - 3) / 2.0;
    const double l3 = t * (t - 1) * (t - 2) / 6.0;
    return l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3];
}

uint64_t table_checksum(FnKind kind, int index_j, double grid_step, double s_max) {
    // FNV-1a over the defining constants
    uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 0x100000001b3ULL;
        }
    };
    double gamma = kEulerGamma;
    uint8_t k = static_cast<uint8_t>(kind);
    mix(&k, 1);
    mix(&index_j, sizeof index_j);
    mix(&grid_step, sizeof grid_step);
    mix(&s_max, sizeof s_max);
    mix(&gamma, sizeof gamma);
    return h;
}

namespace {
constexpr char kMagic[4] = {'W', 'S', 'F', 'T'};
constexpr uint8_t kVersion = 1;

template <typename T>
void put(std::ostream& out, const T& x) {
    out.write(reinterpret_cast<const char*>(&x), sizeof x);
}

template <typename T>
T get(std::istream& in) {
    T x{};
    in.read(reinterpret_cast<char*>(&x), sizeof x);
    if (!in) throw ConfigError("truncated table cache file");
    return x;
}
}  // namespace

void write_table_cache(const FunctionTable& t, std::ostream& out) {
    out.write(kMagic, 4);
    put(out, kVersion);
    put(out, static_cast<uint8_t>(t.kind));
    put(out, static_cast<int32_t>(t.index_j));
    put(out, t.grid_start);
    put(out, t.grid_step);
    put(out, t.s_max);
    put(out, static_cast<int32_t>(t.refinement_level));
    put(out, t.defining_checksum);
    put(out, static_cast<uint64_t>(t.values.size()));
    out.write(reinterpret_cast<const char*>(t.values.data()),
              static_cast<std::streamsize>(t.values.size() * sizeof(double)));
}

FunctionTable read_table_cache(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw ConfigError("not a table cache file (bad magic)");
    }
    auto version = get<uint8_t>(in);
    if (version != kVersion) {
        throw ConfigError("unsupported table cache version " + std::to_string(version));
    }
    FunctionTable t;
    t.kind = static_cast<FnKind>(get<uint8_t>(in));
    t.index_j = get<int32_t>(in);
    t.grid_start = get<double>(in);
    t.grid_step = get<double>(in);
    t.s_max = get<double>(in);
    t.refinement_level = get<int32_t>(in);
    t.defining_checksum = get<uint64_t>(in);
    auto count = get<uint64_t>(in);
    if (count > (1ULL << 32)) throw ConfigError("table cache length implausible");
    t.values.resize(count);
    in.read(reinterpret_cast<char*>(t.values.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw ConfigError("truncated table cache file");
    t.validate();
    return t;
}

void write_table_cache_file(const FunctionTable& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open cache file for writing: " + path);
    write_table_cache(t, out);
}

FunctionTable read_table_cache_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open cache file: " + path);
    return read_table_cache(in);
}

void write_table_csv(const FunctionTable& t, std::ostream& out) {
    out << "s,value\n";
    char buf[64];
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        double s = t.grid_start + static_cast<double>(i) * t.grid_step;
        std::snprintf(buf, sizeof buf, "%.12g,%.17g\n", s, t.values[i]);
        out << buf;
    }
}

std::string table_cache_filename(const FunctionTable& t) {
    std::ostringstream name;
    name << fn_kind_name(t.kind);
    if (t.kind == FnKind::c_j || t.kind == FnKind::big_c_j) name << t.index_j;
    name << "_smax" << t.s_max << "_step" << t.grid_step << ".wsft";
    return name.str();
}

}  // namespace wsieve
