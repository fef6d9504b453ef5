#include <doctest.h>

#include <algorithm>

#include "instances.hpp"
#include "qism/bethe.hpp"
#include "qism/errors.hpp"
#include "qism/partition_function.hpp"
#include "qism/scalar_product.hpp"

using namespace qism;

using oracle::felderhof_instance;
using oracle::lines;
using oracle::xxz_instance;

TEST_CASE("n = 0 reduces to the partition function") {
    oracle::Rng rng(163);
    for (const bool xxz : {true, false}) {
        for (int m = 1; m <= 4; ++m) {
            const int big_n = std::min(2, m);
            const auto inst = xxz ? xxz_instance(0, big_n, m, rng) : felderhof_instance(0, big_n, m, rng);
            const DwpfInstance lattice{inst.model, inst.v_lines, {inst.w_lines.begin(), inst.w_lines.begin() + big_n}};
            Complex expected = z_operator(lattice);
            for (int i = 0; i < big_n; ++i)
                for (int j = big_n; j < m; ++j) {
                    const auto& v = inst.v_lines[i];
                    const auto& w = inst.w_lines[j];
                    expected *= oracle::sh(v.rapidity - w.rapidity + (xxz ? Complex{} : v.field - w.field));
                }
            CHECK(oracle::rel(sp_oracle(inst), expected) < 1e-10);
            CHECK(oracle::rel(sn_closed_form(inst), expected) < 1e-9);
        }
    }
}

TEST_CASE("f and g functions") {
    oracle::Rng rng(167);
    const Complex g = rng.complex();
    const std::vector<ModelLine> one{{rng.complex()}};
    const Complex w = rng.complex();
    CHECK(oracle::rel(f_func(0, w, one, g), oracle::sh(g) / oracle::sh(one[0].rapidity - w)) < 1e-14);

    const auto inst = xxz_instance(0, 2, 4, rng);
    for (int i = 0; i < 2; ++i)
        for (const auto& wj : inst.w_lines) {
            Complex factor = 1.0;
            for (const auto& wk : inst.w_lines) factor *= oracle::sh(wj.rapidity - wk.rapidity + inst.model.gamma);
            CHECK(oracle::rel(g_func(i, wj.rapidity, inst.v_lines, inst.w_lines, inst.model.gamma),
                              factor * f_func(i, wj.rapidity, inst.v_lines, inst.model.gamma)) < 1e-10);
        }
    // The pole at u = v_i is removable on Bethe roots.
    const Complex vi = inst.v_lines[0].rapidity;
    const double eps = 1e-6;
    const Complex left = g_func(0, vi - eps, inst.v_lines, inst.w_lines, inst.model.gamma);
    const Complex right = g_func(0, vi + eps, inst.v_lines, inst.w_lines, inst.model.gamma);
    CHECK(std::abs(left - right) < 1e-4 * std::max(1.0, std::abs(left)));
    CHECK_THROWS_AS(g_func(0, vi, inst.v_lines, inst.w_lines, inst.model.gamma), PoleHit);
    CHECK_THROWS_AS(f_func(0, vi, inst.v_lines, inst.model.gamma), PoleHit);
}

TEST_CASE("closed forms match the operator route") {
    oracle::Rng rng(173);
    for (int big_n = 1; big_n <= 2; ++big_n)
        for (int m = big_n; m <= 5; ++m)
            for (int n = 0; n <= big_n; ++n)
                for (int trial = 0; trial < 3; ++trial) {
                    INFO("n=", n, " N=", big_n, " M=", m);
                    const auto xxz = xxz_instance(n, big_n, m, rng);
                    CHECK(oracle::rel(sn_determinant(xxz), sp_oracle(xxz)) < 1e-8);
                    if (n == big_n) CHECK(oracle::rel(slavnov_determinant(xxz), sn_determinant(xxz)) < 1e-12);
                    const auto ff = felderhof_instance(n, big_n, m, rng);
                    CHECK(oracle::rel(felderhof_sn(ff), sp_oracle(ff)) < 1e-8);
                }
}

TEST_CASE("condition checks") {
    oracle::Rng rng(179);
    for (const bool xxz : {true, false}) {
        for (int n = 1; n <= 2; ++n) {
            const auto inst = xxz ? xxz_instance(n, 2, 3, rng) : felderhof_instance(n, 2, 3, rng);
            for (const ScalarProductRoute& route : {ScalarProductRoute(sn_closed_form), ScalarProductRoute(sp_oracle)}) {
                ScalarConditionOptions options;
                options.route = route;
                const auto report = sn_conditions_check(inst, options);
                for (const auto& c : report.conditions) {
                    INFO((xxz ? "xxz " : "felderhof "), "n=", n, " ", c.name, " residual ", c.residual);
                    CHECK(c.pass);
                }
            }
            ScalarConditionOptions wrong;
            wrong.recursion_scale = 1.05;
            for (const auto& c : sn_conditions_check(inst, wrong).conditions) CHECK(c.pass == (c.name != "recursion"));
        }
    }
}

TEST_CASE("symmetry is claimed only for the trailing quantum lines") {
    oracle::Rng rng(181);
    auto inst = xxz_instance(1, 2, 3, rng);
    // Leading columns are w_1 (N - n = 1), so the claim covers w_2, w_3.
    const Complex base = sp_oracle(inst);
    std::swap(inst.w_lines[1], inst.w_lines[2]);
    CHECK(oracle::rel(sp_oracle(inst), base) < 1e-10);
}

TEST_CASE("C operators commute for XXZ and exchange with a factor for Felderhof") {
    oracle::Rng rng(191);
    auto xxz = xxz_instance(2, 2, 4, rng);
    const Complex base = sp_oracle(xxz);
    std::swap(xxz.u_lines[0], xxz.u_lines[1]);
    CHECK(oracle::rel(sp_oracle(xxz), base) < 1e-10);

    auto ff = felderhof_instance(2, 2, 4, rng);
    const Complex before = sp_oracle(ff);
    const auto& a = ff.u_lines[0];
    const auto& b = ff.u_lines[1];
    const Complex ratio = oracle::sh(a.rapidity - b.rapidity + a.field + b.field) /
                          oracle::sh(b.rapidity - a.rapidity + a.field + b.field);
    std::swap(ff.u_lines[0], ff.u_lines[1]);
    CHECK(oracle::rel(sp_oracle(ff), ratio * before) < 1e-10);
    CHECK(oracle::rel(felderhof_sn(ff), sp_oracle(ff)) < 1e-8);
}

TEST_CASE("felderhof full scalar product vanishes at the complementary roots") {
    oracle::Rng rng(193);
    for (int m = 2; m <= 5; ++m) {
        const int big_n = std::min(2, m - 1);
        auto inst = felderhof_instance(big_n, big_n, m, rng);
        const double generic = std::abs(felderhof_sn(inst));
        const auto roots = felderhof_bethe_roots(inst.w_lines, big_n);
        int complementary = 0;
        for (const auto& x : roots) {
            bool used = false;
            for (const auto& v : inst.v_lines) used = used || std::abs(std::sinh(x - v.rapidity - v.field)) < 1e-8;
            if (used) continue;
            ++complementary;
            auto at = inst;
            at.u_lines[big_n - 1].rapidity = x - at.u_lines[big_n - 1].field;
            CHECK(std::abs(felderhof_sn(at)) < 1e-8 * std::max(1.0, generic));
            CHECK(std::abs(sp_oracle(at)) < 1e-8 * std::max(1.0, generic));
        }
        CHECK(complementary == m - big_n);
    }
}

TEST_CASE("off-shell parameters break the closed forms") {
    oracle::Rng rng(197);
    int detected = 0;
    for (int trial = 0; trial < 10; ++trial) {
        auto inst = xxz_instance(2, 2, 4, rng);
        for (auto& v : inst.v_lines) v.rapidity += rng.complex(0.3);
        if (oracle::rel(slavnov_determinant(inst), sp_oracle(inst)) > 1e-3) ++detected;
    }
    CHECK(detected >= 9);
}

TEST_CASE("instance validation") {
    ScalarProductInstance inst{Model::xxz(0.3), {{0.1}, {0.2}}, {{0.3}}, {{0.4}, {0.5}}};
    CHECK_THROWS_AS(sp_oracle(inst), SizeMismatch);
    inst.u_lines.pop_back();
    inst.u_lines[0] = inst.v_lines[0];
    CHECK_THROWS_AS(sn_determinant(inst), DegenerateNodes);
}
