#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wsieve {

enum class FnKind : uint8_t { omega_b = 0, little_f = 1, big_f = 2, c_j = 3, big_c_j = 4 };

const char* fn_kind_name(FnKind kind);
FnKind fn_kind_from_name(const std::string& name);

// One special function sampled on a uniform grid. grid_step divides 1 exactly
// (nodes_per_unit * grid_step == 1), so every integer in range is a node and
// interpolation stencils can stay inside one unit interval, where the
// functions are smooth.
struct FunctionTable {
    FnKind kind = FnKind::omega_b;
    int index_j = 0;  // only for c_j / big_c_j
    double grid_start = 0.0;
    double grid_step = 0.0;
    std::vector<double> values;
    double s_max = 0.0;
    int refinement_level = 0;
    uint64_t defining_checksum = 0;

    int nodes_per_unit() const;
    // 4-point Lagrange interpolation, stencil confined to the unit interval
    // containing s. Caller guarantees grid_start <= s <= s_max.
    double interpolate(double s) const;
    void validate() const;  // length/step invariants
};

uint64_t table_checksum(FnKind kind, int index_j, double grid_step, double s_max);

// Binary cache format: magic "WSFT", version byte, header fields, raw values.
void write_table_cache(const FunctionTable& t, std::ostream& out);
FunctionTable read_table_cache(std::istream& in);
void write_table_cache_file(const FunctionTable& t, const std::string& path);
FunctionTable read_table_cache_file(const std::string& path);

// CSV export, columns "s,value".
void write_table_csv(const FunctionTable& t, std::ostream& out);

std::string table_cache_filename(const FunctionTable& t);

}  // namespace wsieve
