#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wsieve/constants.hpp"
#include "wsieve/errors.hpp"
#include "wsieve/special_functions.hpp"

using namespace wsieve;

namespace {
const SieveTables& tables() {
    static SieveTables t;
    return t;
}
}  // namespace

TEST_CASE("linear sieve f matches its closed form on [2,4]") {
    const auto& t = tables();
    for (int i = 0; i < 200; ++i) {
        double s = 2.0 + (4.0 - 2.0) * i / 199.0;
        double expect = s <= 2.0 ? 0.0 : kTwoExpGamma / s * std::log(s - 1.0);
        CHECK(std::abs(t.linear_sieve_f(s) - expect) <= 1e-6);
    }
    CHECK(t.linear_sieve_f(2.0) == 0.0);
    CHECK(t.linear_sieve_f(3.0) == doctest::Approx(0.823030216601993).epsilon(1e-9));
}

TEST_CASE("linear sieve F equals 2e^gamma/s up to 3 and continues smoothly") {
    const auto& t = tables();
    for (int i = 1; i <= 300; ++i) {
        double s = 3.0 * i / 300.0;
        CHECK(std::abs(t.linear_sieve_F(s) - kTwoExpGamma / s) <= 1e-10);
    }
    CHECK(t.linear_sieve_F(2.0) == doctest::Approx(kExpGamma).epsilon(1e-12));
    // one-panel continuation past s = 3, frozen from independent quadrature
    CHECK(t.linear_sieve_F(4.0) == doctest::Approx(1.02164155254007382).epsilon(1e-7));
}

TEST_CASE("f/F ordering and monotonicity") {
    const auto& t = tables();
    double prev_f = -1.0, prev_F = 1e9;
    for (double s = 1.0; s <= 12.0; s += 0.003) {
        double f = s <= 2.0 ? 0.0 : t.linear_sieve_f(s);
        double F = t.linear_sieve_F(s);
        CHECK(f < F);
        CHECK(f >= prev_f - 1e-12);
        CHECK(F <= prev_F + 1e-12);
        CHECK(f >= 0.0);
        CHECK(f < 1.0);
        CHECK(F >= 1.0 - 1e-12);
        prev_f = f;
        prev_F = F;
    }
}

TEST_CASE("buchstab values and limit") {
    const auto& t = tables();
    CHECK(t.buchstab(0.5) == 0.0);
    CHECK(t.buchstab(1.5) == doctest::Approx(1.0 / 1.5).epsilon(1e-14));
    CHECK(std::abs(t.buchstab(10.0) - kExpMinusGamma) <= 1e-6);
    for (double u = 1.0; u <= 30.0; u += 0.013) {
        double w = t.buchstab(u);
        CHECK(w >= 0.5 - 1e-9);
        CHECK(w <= 1.0 + 1e-12);
    }
}

TEST_CASE("delay-equation residuals by central differences") {
    const auto& t = tables();
    const double h = 1e-3;
    for (double s = 3.05; s <= 10.0; s += 0.137) {
        double dF = ((s + h) * t.linear_sieve_F(s + h) - (s - h) * t.linear_sieve_F(s - h)) /
                    (2 * h);
        CHECK(std::abs(dF - t.linear_sieve_f(s - 1)) <= 1e-4);
        double df = ((s + h) * t.linear_sieve_f(s + h) - (s - h) * t.linear_sieve_f(s - h)) /
                    (2 * h);
        CHECK(std::abs(df - t.linear_sieve_F(s - 1)) <= 1e-4);
        double dw = ((s + h) * t.buchstab(s + h) - (s - h) * t.buchstab(s - h)) / (2 * h);
        CHECK(std::abs(dw - t.buchstab(s - 1)) <= 1e-4);
    }
}

TEST_CASE("little_c base cases and the log closed form") {
    const auto& t = tables();
    CHECK(t.little_c(1, 0.9) == 0.0);
    CHECK(t.little_c(1, 2.0) == 1.0);
    CHECK(t.little_c(2, 3.0) == doctest::Approx(std::log(2.0)).epsilon(1e-7));
    for (double tt = 2.0; tt <= 30.0; tt += 0.0917) {
        CHECK(std::abs(t.little_c(2, tt) - std::log(tt - 1.0)) <= 1e-6);
    }
}

TEST_CASE("big_C identities") {
    const auto& t = tables();
    CHECK(t.big_C(1, 1.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(t.big_C(3, 3.0) == 0.0);
    // frozen from the exact one-panel integral of the recursion
    CHECK(t.big_C(3, 4.0) == doctest::Approx(0.147220676959241).epsilon(1e-6));
    for (int J = 1; J <= 8; ++J) {
        for (double tt = 1.0; tt <= J; tt += 0.037) {
            CHECK(std::abs(t.big_C(J, tt)) <= 1e-9);
        }
    }
    for (int J = 1; J <= 7; ++J) {
        for (double tt = 1.0; tt <= 30.0; tt += 0.1003) {
            CHECK(t.big_C(J + 1, tt) <= t.big_C(J, tt) + 1e-10);
            CHECK(t.big_C(J, tt) >= 0.0);
        }
    }
}

TEST_CASE("range and capacity errors name their limits") {
    const auto& t = tables();
    CHECK_THROWS_AS(t.buchstab(30.5), OutOfRangeError);
    try {
        t.buchstab(30.5);
    } catch (const OutOfRangeError& ex) {
        CHECK(std::string(ex.what()).find("30") != std::string::npos);
    }
    CHECK_THROWS_AS(t.little_c(9, 5.0), CapacityError);
    CHECK_THROWS_AS(t.big_C(9, 5.0), CapacityError);
    CHECK_THROWS_AS(t.linear_sieve_f(12.5), OutOfRangeError);
    CHECK_THROWS_AS(t.linear_sieve_F(-1.0), DomainError);
    CHECK_THROWS_AS(t.big_C(3, 0.5), DomainError);
}

TEST_CASE("tabulate produces well-formed tables") {
    FunctionTable F = tabulate(FnKind::big_f, 0, 12.0, 1e-3);
    F.validate();
    CHECK(F.refinement_level >= 1);
    // F(2) sits exactly at a grid node
    int per_unit = F.nodes_per_unit();
    std::size_t node2 = static_cast<std::size_t>(std::llround((2.0 - F.grid_start) / F.grid_step));
    CHECK(node2 % per_unit == 0);
    CHECK(F.values[node2] == doctest::Approx(kExpGamma).epsilon(1e-12));

    FunctionTable om = tabulate(FnKind::omega_b, 0, 30.0, 1e-3);
    std::size_t n = om.values.size();
    for (std::size_t i = n - 1000; i < n; ++i) {
        CHECK(std::abs(om.values[i] - kExpMinusGamma) <= 1e-6);
    }

    FunctionTable C2 = tabulate(FnKind::big_c_j, 2, 10.0, 1e-3);
    for (std::size_t i = 0; i < C2.values.size(); ++i) {
        double tt = C2.grid_start + i * C2.grid_step;
        if (tt <= 2.0) CHECK(C2.values[i] == 0.0);
    }

    CHECK_THROWS_AS(tabulate(FnKind::big_f, 0, 12.0, 0.5), ConfigError);
    CHECK_THROWS_AS(tabulate(FnKind::big_f, 0, 12.0, 1e-6), ConfigError);
}

TEST_CASE("coarse grids refine further") {
    TableSettings s;
    s.grid_step = 1e-2;
    SieveTables coarse(s);
    CHECK(coarse.refinement_level() >= 1);
    CHECK(std::abs(coarse.linear_sieve_f(3.0) - 0.823030216601993) <= 1e-7);
}

TEST_CASE("table cache round-trips bitwise") {
    FunctionTable t = tables().make_table(FnKind::c_j, 3);
    std::stringstream buf;
    write_table_cache(t, buf);
    FunctionTable back = read_table_cache(buf);
    CHECK(back.kind == t.kind);
    CHECK(back.index_j == t.index_j);
    CHECK(back.values.size() == t.values.size());
    CHECK(back.defining_checksum == t.defining_checksum);
    bool identical = true;
    for (std::size_t i = 0; i < t.values.size(); ++i) {
        identical = identical && back.values[i] == t.values[i];
    }
    CHECK(identical);

    // version byte guards evolution
    std::string raw = buf.str();
    raw[4] = 99;
    std::stringstream bad(raw);
    CHECK_THROWS_AS(read_table_cache(bad), ConfigError);
}

TEST_CASE("csv export") {
    FunctionTable t = tabulate(FnKind::little_f, 0, 4.0, 1e-2);
    std::stringstream out;
    write_table_csv(t, out);
    std::string line;
    std::getline(out, line);
    CHECK(line == "s,value");
    std::size_t rows = 0;
    while (std::getline(out, line)) ++rows;
    CHECK(rows == t.values.size());
}
