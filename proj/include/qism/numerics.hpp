#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace qism {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

/// Mixed absolute/relative comparison: |x - y| <= abs_tol + rel_tol * max(|x|, |y|).
struct Tolerance {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;

    bool close(Complex x, Complex y) const;
    bool close(double x, double y) const;

    static Tolerance standard() { return {1e-9, 1e-9}; }
    static Tolerance identity() { return {1e-12, 1e-12}; }
};

/// [u] = sinh(u), assembled from real exponentials and trigonometric parts.
Complex bracket(Complex u);

/// Principal square root: Re >= 0, and Im >= 0 whenever Re == 0.
Complex sqrt_principal(Complex z);

/// |a - b| / max(|a|, |b|), with 0 when both vanish.
double relative_gap(Complex a, Complex b);

bool all_finite(std::span<const Complex> values);

// ---------------------------------------------------------------------------
// Dense complex matrices
// ---------------------------------------------------------------------------

/// Row-major dense complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill = {});

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Complex operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Complex> data() { return data_; }
    std::span<const Complex> data() const { return data_; }

    ComplexMatrix transpose() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    std::vector<Complex> apply(std::span<const Complex> x) const;

    /// Largest entry modulus.
    double max_abs() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// LU factorization with partial pivoting, P A = L U.
class LuDecomposition {
public:
    explicit LuDecomposition(ComplexMatrix a);

    Complex determinant() const;
    bool singular() const { return singular_; }
    /// Smallest |U_kk| relative to the largest entry of A.
    double min_relative_pivot() const { return min_relative_pivot_; }

    std::vector<Complex> solve(std::span<const Complex> b) const;
    ComplexMatrix solve(const ComplexMatrix& b) const;

private:
    ComplexMatrix lu_;
    std::vector<std::size_t> perm_;
    int sign_ = 1;
    bool singular_ = false;
    double min_relative_pivot_ = 0.0;
};

/// Determinant of a square matrix via LU with partial pivoting.
Complex determinant(const ComplexMatrix& m);

/// 1-norm condition number estimate computed from an explicit inverse.
double condition_number_1(const ComplexMatrix& m);

// ---------------------------------------------------------------------------
// Polynomials
// ---------------------------------------------------------------------------

/// Coefficients in increasing degree order.
struct PolynomialCoeffs {
    std::vector<Complex> coeffs;

    /// Drops leading coefficients that are exactly zero.
    PolynomialCoeffs trimmed() const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    Complex operator()(Complex t) const;
    Complex derivative(Complex t) const;
    /// sum |c_k| |t|^k, the natural scale for the evaluation error at t.
    double magnitude_scale(Complex t) const;

    /// prod_k (t - roots_k) times lead.
    static PolynomialCoeffs from_roots(std::span<const Complex> roots, Complex lead = 1.0);
};

PolynomialCoeffs operator*(const PolynomialCoeffs& a, const PolynomialCoeffs& b);
PolynomialCoeffs operator+(const PolynomialCoeffs& a, const PolynomialCoeffs& b);
PolynomialCoeffs operator*(Complex s, const PolynomialCoeffs& a);

struct RootOptions {
    int max_iterations = 1000;
    double abs_tol = 1e-12;
};

/// All complex roots with multiplicity (Aberth-Ehrlich simultaneous iteration).
/// Throws NonConvergence when the iteration fails to settle.
std::vector<Complex> poly_roots(const PolynomialCoeffs& p, const RootOptions& options = {});

// ---------------------------------------------------------------------------
// Trigonometric polynomial degree test
// ---------------------------------------------------------------------------

struct TrigPolyFit {
    bool pass = false;
    double max_residual = 0.0;  // relative to the largest sampled |e^{dv} f(v)|
    double condition = 0.0;
};

struct TrigPolyOptions {
    Tolerance tol = Tolerance::standard();
    /// Samples lie on Re v = center_re, spread over one period in Im v.
    double center_re = 0.1;
    double phase = 0.173;
};

/// Tests whether f lies in span{ e^{k v} : k = -d, -d+2, ..., d }.
///
/// With t = e^{2v}, membership is equivalent to e^{d v} f(v) being a polynomial of
/// degree <= d in t. The polynomial is interpolated on d+1 nodes and checked on
/// three extra points. Throws IllConditionedSamples if the interpolation matrix
/// condition estimate exceeds 1e12.
TrigPolyFit trig_poly_degree(const std::function<Complex(Complex)>& f, int d,
                             const TrigPolyOptions& options = {});

}  // namespace qism
