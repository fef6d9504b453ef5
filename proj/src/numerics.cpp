#include "qism/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <numeric>

#include "qism/errors.hpp"

namespace qism {

bool Tolerance::close(Complex x, Complex y) const {
    return std::abs(x - y) <= abs_tol + rel_tol * std::max(std::abs(x), std::abs(y));
}

bool Tolerance::close(double x, double y) const {
    return std::abs(x - y) <= abs_tol + rel_tol * std::max(std::abs(x), std::abs(y));
}

Complex bracket(Complex u) {
    const double x = u.real();
    const double y = u.imag();
    const double ex = std::exp(x);
    const double emx = 1.0 / ex;
    const double sh = std::abs(x) < 1e-5 ? std::sinh(x) : 0.5 * (ex - emx);
    const double ch = 0.5 * (ex + emx);
    return {sh * std::cos(y), ch * std::sin(y)};
}

Complex sqrt_principal(Complex z) {
    const double x = z.real();
    const double y = z.imag();
    if (x == 0.0 && y == 0.0) return {0.0, 0.0};
    const double r = std::hypot(x, y);
    if (x >= 0.0) {
        const double s = std::sqrt(0.5 * (r + x));
        return {s, y / (2.0 * s)};
    }
    const double t = std::sqrt(0.5 * (r - x));
    // y == -0.0 lies on the cut; the principal value takes +i.
    const double im = y < 0.0 ? -t : t;
    return {std::abs(y) / (2.0 * t), im};
}

double relative_gap(Complex a, Complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

bool all_finite(std::span<const Complex> values) {
    return std::all_of(values.begin(), values.end(), [](Complex z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

// ---------------------------------------------------------------------------

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, Complex fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (other.rows_ != rows_ || other.cols_ != cols_) throw SizeMismatch("matrix addition");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (other.rows_ != rows_ || other.cols_ != cols_) throw SizeMismatch("matrix subtraction");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw SizeMismatch("matrix product");
    ComplexMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

std::vector<Complex> ComplexMatrix::apply(std::span<const Complex> x) const {
    if (x.size() != cols_) throw SizeMismatch("matrix-vector product");
    std::vector<Complex> y(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Complex acc{};
        for (std::size_t c = 0; c < cols_; ++c) acc += (*this)(r, c) * x[c];
        y[r] = acc;
    }
    return y;
}

double ComplexMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& z : data_) m = std::max(m, std::abs(z));
    return m;
}

// ---------------------------------------------------------------------------

LuDecomposition::LuDecomposition(ComplexMatrix a) : lu_(std::move(a)) {
    if (!lu_.square()) throw SizeMismatch("LU of non-square matrix");
    const std::size_t n = lu_.rows();
    perm_.resize(n);
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double scale = lu_.max_abs();
    min_relative_pivot_ = n == 0 ? 1.0 : std::numeric_limits<double>::infinity();

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(lu_(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::abs(lu_(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(piv, j));
            std::swap(perm_[k], perm_[piv]);
            sign_ = -sign_;
        }
        min_relative_pivot_ = std::min(min_relative_pivot_, scale > 0.0 ? best / scale : 0.0);
        if (best == 0.0) {
            singular_ = true;
            continue;
        }
        const Complex inv = 1.0 / lu_(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex factor = lu_(i, k) * inv;
            lu_(i, k) = factor;
            if (factor == Complex{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= factor * lu_(k, j);
        }
    }
}

Complex LuDecomposition::determinant() const {
    if (singular_) return 0.0;
    Complex det = static_cast<double>(sign_);
    for (std::size_t k = 0; k < lu_.rows(); ++k) det *= lu_(k, k);
    return det;
}

std::vector<Complex> LuDecomposition::solve(std::span<const Complex> b) const {
    const std::size_t n = lu_.rows();
    if (b.size() != n) throw SizeMismatch("LU solve");
    if (singular_) throw InvalidArgument("LU solve with singular matrix");
    std::vector<Complex> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

ComplexMatrix LuDecomposition::solve(const ComplexMatrix& b) const {
    if (b.rows() != lu_.rows()) throw SizeMismatch("LU solve");
    ComplexMatrix x(b.rows(), b.cols());
    std::vector<Complex> col(b.rows());
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t r = 0; r < b.rows(); ++r) col[r] = b(r, c);
        const auto sol = solve(col);
        for (std::size_t r = 0; r < b.rows(); ++r) x(r, c) = sol[r];
    }
    return x;
}

Complex determinant(const ComplexMatrix& m) {
    if (!m.square()) throw SizeMismatch("determinant of non-square matrix");
    if (m.rows() == 0) return 1.0;
    return LuDecomposition(m).determinant();
}

namespace {

double norm_1(const ComplexMatrix& m) {
    double best = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < m.rows(); ++r) s += std::abs(m(r, c));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

double condition_number_1(const ComplexMatrix& m) {
    LuDecomposition lu(m);
    if (lu.singular()) return std::numeric_limits<double>::infinity();
    const auto inv = lu.solve(ComplexMatrix::identity(m.rows()));
    return norm_1(m) * norm_1(inv);
}

// ---------------------------------------------------------------------------

PolynomialCoeffs PolynomialCoeffs::trimmed() const {
    PolynomialCoeffs p = *this;
    while (p.coeffs.size() > 1 && p.coeffs.back() == Complex{}) p.coeffs.pop_back();
    return p;
}

Complex PolynomialCoeffs::operator()(Complex t) const {
    Complex acc{};
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

Complex PolynomialCoeffs::derivative(Complex t) const {
    Complex acc{};
    for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * coeffs[k];
    return acc;
}

double PolynomialCoeffs::magnitude_scale(Complex t) const {
    const double r = std::abs(t);
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * r + std::abs(*it);
    return acc;
}

PolynomialCoeffs PolynomialCoeffs::from_roots(std::span<const Complex> roots, Complex lead) {
    PolynomialCoeffs p{{lead}};
    for (const auto& root : roots) p = p * PolynomialCoeffs{{-root, 1.0}};
    return p;
}

PolynomialCoeffs operator*(const PolynomialCoeffs& a, const PolynomialCoeffs& b) {
    if (a.coeffs.empty() || b.coeffs.empty()) return {};
    PolynomialCoeffs c{std::vector<Complex>(a.coeffs.size() + b.coeffs.size() - 1)};
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) c.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
    return c;
}

PolynomialCoeffs operator+(const PolynomialCoeffs& a, const PolynomialCoeffs& b) {
    PolynomialCoeffs c{std::vector<Complex>(std::max(a.coeffs.size(), b.coeffs.size()))};
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) c.coeffs[i] += a.coeffs[i];
    for (std::size_t i = 0; i < b.coeffs.size(); ++i) c.coeffs[i] += b.coeffs[i];
    return c;
}

PolynomialCoeffs operator*(Complex s, const PolynomialCoeffs& a) {
    PolynomialCoeffs c = a;
    for (auto& z : c.coeffs) z *= s;
    return c;
}

std::vector<Complex> poly_roots(const PolynomialCoeffs& input, const RootOptions& options) {
    const PolynomialCoeffs p = input.trimmed();
    const int d = p.degree();
    if (d < 1) throw InvalidArgument("poly_roots needs degree >= 1");
    if (!all_finite(p.coeffs)) throw InvalidArgument("poly_roots: non-finite coefficient");

    // Normalize to a monic polynomial; roots are unchanged.
    PolynomialCoeffs monic = (1.0 / p.coeffs.back()) * p;
    if (d == 1) return {-monic.coeffs[0]};

    // Initial radius: geometric mean of root moduli, |c0|^(1/d) for monic p.
    double radius = std::pow(std::abs(monic.coeffs[0]), 1.0 / d);
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        radius = 0.0;
        for (int k = 0; k < d; ++k) radius = std::max(radius, std::abs(monic.coeffs[k]));
        radius = radius > 0.0 ? 1.0 + radius : 1.0;
    }
    const Complex centroid = -monic.coeffs[d - 1] / static_cast<double>(d);

    std::vector<Complex> z(d);
    for (int k = 0; k < d; ++k) {
        const double angle = 2.0 * kPi * k / d + 0.4;
        z[k] = centroid + radius * Complex{std::cos(angle), std::sin(angle)};
    }

    std::vector<bool> done(d, false);
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        bool all_done = true;
        for (int k = 0; k < d; ++k) {
            if (done[k]) continue;
            const Complex value = monic(z[k]);
            const double scale = monic.magnitude_scale(z[k]);
            if (std::abs(value) <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
                done[k] = true;
                continue;
            }
            all_done = false;
            const Complex ratio = value / monic.derivative(z[k]);
            Complex repulsion{};
            for (int j = 0; j < d; ++j)
                if (j != k) repulsion += 1.0 / (z[k] - z[j]);
            const Complex step = ratio / (1.0 - ratio * repulsion);
            z[k] -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z[k]))) done[k] = true;
        }
        if (all_done) break;
    }

    for (int k = 0; k < d; ++k) {
        const double residual = std::abs(monic(z[k]));
        const double scale = std::max(1.0, monic.magnitude_scale(z[k]));
        if (!std::isfinite(residual) || residual > options.abs_tol * scale)
            throw NonConvergence("Aberth iteration did not converge (residual " +
                                 std::to_string(residual / scale) + ")");
    }
    return z;
}

// ---------------------------------------------------------------------------

TrigPolyFit trig_poly_degree(const std::function<Complex(Complex)>& f, int d,
                             const TrigPolyOptions& options) {
    if (d < 0) throw InvalidArgument("trig_poly_degree: negative degree");
    const std::size_t n = static_cast<std::size_t>(d) + 1;

    // Nodes at (d+1)-th roots of unity in t = e^{2v}, rotated by `phase`.
    auto node = [&](double frac) {
        return Complex{options.center_re, kPi * frac + options.phase};
    };
    auto lifted = [&](Complex v) { return std::exp(static_cast<double>(d) * v) * f(v); };

    std::vector<Complex> vs(n), ts(n), rhs(n);
    ComplexMatrix vandermonde(n, n);
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        vs[k] = node(static_cast<double>(k) / static_cast<double>(n));
        ts[k] = std::exp(2.0 * vs[k]);
        rhs[k] = lifted(vs[k]);
        scale = std::max(scale, std::abs(rhs[k]));
        Complex power = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            vandermonde(k, j) = power;
            power *= ts[k];
        }
    }

    TrigPolyFit fit;
    fit.condition = condition_number_1(vandermonde);
    if (!(fit.condition <= 1e12)) throw IllConditionedSamples("condition estimate " + std::to_string(fit.condition));

    const PolynomialCoeffs poly{LuDecomposition(vandermonde).solve(rhs)};

    // Extra points sit between the interpolation nodes.
    const double extras[3] = {0.5 / static_cast<double>(n), 0.37, 0.81};
    double worst = 0.0;
    for (double frac : extras) {
        const Complex v = node(frac) + Complex{0.05 * frac, 0.0};
        const Complex sample = lifted(v);
        scale = std::max(scale, std::abs(sample));
        worst = std::max(worst, std::abs(sample - poly(std::exp(2.0 * v))));
    }
    if (scale == 0.0) {
        fit.max_residual = 0.0;
        fit.pass = true;
        return fit;
    }
    fit.max_residual = worst / scale;
    fit.pass = worst <= options.tol.abs_tol + options.tol.rel_tol * scale;
    return fit;
}

}  // namespace qism
