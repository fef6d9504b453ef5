#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "qism/errors.hpp"
#include "qism/partition_function.hpp"

using namespace qism;

namespace {

DwpfInstance random_instance(const Model& model, int n, oracle::Rng& rng) {
    DwpfInstance inst{model, {}, {}};
    const bool fields = model.is_felderhof();
    for (int k = 0; k < n; ++k) inst.v_lines.push_back({rng.complex(), fields ? rng.complex() : Complex{}});
    for (int k = 0; k < n; ++k) inst.w_lines.push_back({rng.complex(), fields ? rng.complex() : Complex{}});
    return inst;
}

// Izergin determinant in its original form with the double-pole matrix entries.
Complex izergin_with_poles(const DwpfInstance& inst) {
    const int n = inst.size();
    const Complex g = inst.model.gamma;
    Complex numerator = 1.0, denominator = 1.0;
    std::vector<std::vector<Complex>> m(n, std::vector<Complex>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Complex d = inst.v_lines[i].rapidity - inst.w_lines[j].rapidity;
            numerator *= oracle::sh(d + g) * oracle::sh(d);
            m[i][j] = oracle::sh(g) / (oracle::sh(d + g) * oracle::sh(d));
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            denominator *= oracle::sh(inst.v_lines[i].rapidity - inst.v_lines[j].rapidity) *
                           oracle::sh(inst.w_lines[j].rapidity - inst.w_lines[i].rapidity);
    return numerator / denominator * oracle::cofactor_det(m);
}

}  // namespace

TEST_CASE("base case values") {
    oracle::Rng rng(71);
    const Model xxz = Model::xxz(0.7);
    auto inst = random_instance(xxz, 1, rng);
    CHECK(std::abs(z_enumerate(inst) - std::sinh(Complex(0.7))) < 1e-15);
    CHECK(std::abs(z_operator(inst) - std::sinh(Complex(0.7))) < 1e-15);
    CHECK(std::abs(z_izergin(inst) - std::sinh(Complex(0.7))) < 1e-15);

    auto f = random_instance(Model::felderhof(), 1, rng);
    const Complex expected = std::sqrt(std::sinh(2.0 * f.v_lines[0].field)) * std::sqrt(std::sinh(2.0 * f.w_lines[0].field));
    CHECK(oracle::rel(z_enumerate(f), expected) < 1e-14);
    CHECK(oracle::rel(z_operator(f), expected) < 1e-14);
    CHECK(oracle::rel(z_factorized(f), expected) < 1e-14);
}

TEST_CASE("pruned and exhaustive enumeration agree") {
    oracle::Rng rng(73);
    for (const Model& model : {Model::xxz(rng.complex()), Model::felderhof()}) {
        for (int n = 1; n <= 3; ++n) {
            const auto inst = random_instance(model, n, rng);
            CHECK(oracle::rel(z_enumerate_exhaustive(inst), z_enumerate_pruned(inst)) < 1e-12);
        }
    }
}

TEST_CASE("izergin matches the original pole form") {
    oracle::Rng rng(79);
    for (int n = 1; n <= 4; ++n) {
        const auto inst = random_instance(Model::xxz(rng.complex()), n, rng);
        CHECK(oracle::rel(z_izergin(inst), izergin_with_poles(inst)) < 1e-10);
    }
}

TEST_CASE("three routes agree") {
    oracle::Rng rng(83);
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto xxz = random_instance(Model::xxz(rng.complex()), n, rng);
            const Complex e = z_enumerate(xxz), o = z_operator(xxz), c = z_izergin(xxz);
            CHECK(oracle::rel(e, o) < 1e-10);
            CHECK(oracle::rel(e, c) < 1e-10);
            const auto ff = random_instance(Model::felderhof(), n, rng);
            const Complex fe = z_enumerate(ff), fo = z_operator(ff), fc = z_factorized(ff);
            CHECK(oracle::rel(fe, fo) < 1e-10);
            CHECK(oracle::rel(fe, fc) < 1e-10);
        }
    }
    const auto five = random_instance(Model::felderhof(), 5, rng);
    CHECK(oracle::rel(z_enumerate(five), z_factorized(five)) < 1e-10);
    CHECK_THROWS_AS(z_enumerate(random_instance(Model::xxz(0.3), 6, rng)), SizeLimit);
}

TEST_CASE("xxz partition function is symmetric in both line sets") {
    oracle::Rng rng(89);
    auto inst = random_instance(Model::xxz(rng.complex()), 4, rng);
    const Complex base = z_operator(inst);
    std::reverse(inst.v_lines.begin(), inst.v_lines.end());
    CHECK(oracle::rel(z_operator(inst), base) < 1e-10);
    std::rotate(inst.w_lines.begin(), inst.w_lines.begin() + 1, inst.w_lines.end());
    CHECK(oracle::rel(z_operator(inst), base) < 1e-10);
}

TEST_CASE("xxz recursion") {
    oracle::Rng rng(97);
    auto inst = random_instance(Model::xxz(rng.complex()), 3, rng);
    const Complex g = inst.model.gamma;
    const Complex wn = inst.w_lines[2].rapidity;
    inst.v_lines[2].rapidity = wn - g;
    Complex expected = oracle::sh(g) * z_izergin(inst.leading(2));
    for (int i = 0; i < 2; ++i)
        expected *= oracle::sh(inst.v_lines[i].rapidity - wn) * oracle::sh(wn - inst.w_lines[i].rapidity - g);
    CHECK(oracle::rel(z_izergin(inst), expected) < 1e-10);
}

TEST_CASE("felderhof zeros") {
    oracle::Rng rng(101);
    auto inst = random_instance(Model::felderhof(), 3, rng);
    const double generic = std::abs(z_operator(inst));
    for (int j = 0; j < 2; ++j) {
        inst.v_lines[2].rapidity = inst.v_lines[j].rapidity + inst.v_lines[j].field + inst.v_lines[2].field;
        CHECK(std::abs(z_factorized(inst)) < 1e-10 * generic);
        CHECK(std::abs(z_operator(inst)) < 1e-10 * generic);
    }
}

TEST_CASE("degenerate nodes") {
    oracle::Rng rng(103);
    auto inst = random_instance(Model::xxz(0.4), 3, rng);
    inst.v_lines[1] = inst.v_lines[0];
    CHECK_THROWS_AS(z_izergin(inst), DegenerateNodes);
}

TEST_CASE("korepin conditions") {
    oracle::Rng rng(107);
    for (const Model& model : {Model::xxz(rng.complex()), Model::felderhof()}) {
        for (int n = 2; n <= 4; ++n) {
            const auto inst = random_instance(model, n, rng);
            for (const DwpfRoute& route : {DwpfRoute(z_closed_form), DwpfRoute(z_operator)}) {
                KorepinOptions options;
                options.route = route;
                const auto report = korepin_conditions_check(inst, options);
                CHECK(report.conditions.size() == 4);
                for (const auto& c : report.conditions) {
                    INFO(to_string(model.kind), " N=", n, " ", c.name, " residual ", c.residual);
                    CHECK(c.pass);
                }
            }
        }
    }
}

TEST_CASE("korepin check detects a wrong recursion prefactor") {
    oracle::Rng rng(109);
    for (const Model& model : {Model::xxz(rng.complex()), Model::felderhof()}) {
        const auto inst = random_instance(model, 3, rng);
        KorepinOptions options;
        options.recursion_scale = 1.05;
        const auto report = korepin_conditions_check(inst, options);
        for (const auto& c : report.conditions) CHECK(c.pass == (c.name != "recursion"));
    }
}
