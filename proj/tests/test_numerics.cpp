#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qism/errors.hpp"
#include "qism/numerics.hpp"

using namespace qism;

TEST_CASE("bracket basic values") {
    CHECK(std::abs(bracket(0.0)) == 0.0);
    CHECK(std::abs(bracket(std::log(2.0)) - 0.75) < 1e-15);
    CHECK(std::abs(bracket(Complex(0, kPi / 2)) - kI) < 1e-15);
}

TEST_CASE("bracket is antiperiodic under i pi") {
    oracle::Rng rng(11);
    for (int k = 0; k < 200; ++k) {
        const Complex u = rng.complex(2.0);
        CHECK(std::abs(bracket(u + Complex(0, kPi)) + bracket(u)) < 1e-13);
        CHECK(std::abs(bracket(u) - std::sinh(u)) < 1e-13);
    }
}

TEST_CASE("principal square root") {
    CHECK(std::abs(sqrt_principal(4.0) - 2.0) < 1e-15);
    CHECK(std::abs(sqrt_principal(-1.0) - kI) < 1e-15);
    CHECK(std::abs(sqrt_principal(Complex(-1.0, -0.0)) - kI) < 1e-15);
    CHECK(std::abs(sqrt_principal(kI) - Complex(1, 1) / std::sqrt(2.0)) < 1e-15);
    oracle::Rng rng(3);
    for (int k = 0; k < 1000; ++k) {
        const Complex z = rng.complex(10.0);
        const Complex s = sqrt_principal(z);
        CHECK(oracle::rel(s * s, z) < 1e-14);
        CHECK(s.real() >= 0.0);
    }
}

TEST_CASE("determinant") {
    CHECK(std::abs(determinant(ComplexMatrix::identity(3)) - 1.0) < 1e-15);
    ComplexMatrix swap(2, 2);
    swap(0, 1) = 1.0;
    swap(1, 0) = 1.0;
    CHECK(std::abs(determinant(swap) + 1.0) < 1e-15);
    CHECK(std::abs(determinant(ComplexMatrix{}) - 1.0) < 1e-15);

    oracle::Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix m(5, 5);
        std::vector<std::vector<Complex>> rows(5, std::vector<Complex>(5));
        for (int r = 0; r < 5; ++r)
            for (int c = 0; c < 5; ++c) m(r, c) = rows[r][c] = rng.complex();
        CHECK(oracle::rel(determinant(m), oracle::cofactor_det(rows)) < 1e-12);
    }
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix a(6, 6), b(6, 6);
        for (auto& z : a.data()) z = rng.complex();
        for (auto& z : b.data()) z = rng.complex();
        CHECK(oracle::rel(determinant(a * b), determinant(a) * determinant(b)) < 1e-10);
    }
}

TEST_CASE("singular determinant is zero") {
    ComplexMatrix m(3, 3);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = Complex(r + 1) * Complex(c + 1);
    CHECK(std::abs(determinant(m)) < 1e-12);
}

TEST_CASE("lu solve") {
    oracle::Rng rng(9);
    ComplexMatrix a(4, 4);
    for (auto& z : a.data()) z = rng.complex();
    const std::vector<Complex> x = rng.complexes(4);
    const auto b = a.apply(x);
    const auto y = LuDecomposition(a).solve(b);
    for (int k = 0; k < 4; ++k) CHECK(std::abs(x[k] - y[k]) < 1e-12);
}

namespace {

bool same_root_set(std::vector<Complex> a, std::vector<Complex> b, double tol) {
    if (a.size() != b.size()) return false;
    for (const auto& x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](Complex p, Complex q) { return std::abs(p - x) < std::abs(q - x); });
        if (it == b.end() || std::abs(*it - x) > tol) return false;
        b.erase(it);
    }
    return true;
}

}  // namespace

TEST_CASE("poly_roots") {
    CHECK(same_root_set(poly_roots({{-1.0, 0.0, 1.0}}), {1.0, -1.0}, 1e-12));
    const Complex c(0.3, -0.7);
    CHECK(same_root_set(poly_roots({{-c, 1.0}}), {c}, 1e-14));
    const std::vector<Complex> roots = {2.0, Complex(0, 3), -1.0};
    const auto p = PolynomialCoeffs::from_roots(roots);
    CHECK(same_root_set(poly_roots(p), roots, 1e-10));
    CHECK_THROWS_AS(poly_roots({{1.0}}), InvalidArgument);
}

TEST_CASE("poly_roots sum equals coefficient ratio") {
    oracle::Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int degree = 1 + trial % 10;
        PolynomialCoeffs p{rng.complexes(degree + 1)};
        const auto roots = poly_roots(p);
        Complex sum{};
        for (const auto& r : roots) sum += r;
        const Complex expected = -p.coeffs[degree - 1] / p.coeffs[degree];
        CHECK(std::abs(sum - expected) <= 1e-8 * std::max(1.0, std::abs(expected)));
    }
}

TEST_CASE("trig_poly_degree") {
    const Complex w1(0.2, 0.1), w2(-0.4, 0.3);
    auto two = [&](Complex v) { return std::sinh(v - w1) * std::sinh(v - w2); };
    CHECK(trig_poly_degree(two, 2).pass);
    auto cube = [](Complex v) { return std::pow(std::sinh(v), 3); };
    const auto fit = trig_poly_degree(cube, 2);
    CHECK_FALSE(fit.pass);
    CHECK(fit.max_residual > 1e-3);
    // Wrong parity: a degree-1 function is not in the even lattice of degree 2.
    CHECK_FALSE(trig_poly_degree([](Complex v) { return std::sinh(v); }, 2).pass);
    CHECK(trig_poly_degree([](Complex v) { return std::cosh(v); }, 1).pass);
}
