#include "qism/vertex_weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qism/errors.hpp"

namespace qism {

std::string_view to_string(ModelKind kind) {
    return kind == ModelKind::xxz ? "xxz" : "felderhof";
}

ModelKind parse_model_kind(std::string_view text) {
    if (text == "xxz") return ModelKind::xxz;
    if (text == "felderhof") return ModelKind::felderhof;
    throw InvalidArgument("unknown model '" + std::string(text) + "'");
}

Complex Model::anisotropy() const { return std::cosh(gamma); }

ComplexMatrix RMatrix::dense() const {
    ComplexMatrix out(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) out(r, c) = m[r][c];
    return out;
}

WeightSet xxz_weights(Complex u, Complex w, Complex gamma) {
    const Complex a = bracket(u - w + gamma);
    const Complex b = bracket(u - w);
    const Complex c = bracket(gamma);
    return {a, a, b, b, c, c};
}

WeightSet felderhof_weights(const ModelLine& row, const ModelLine& col) {
    const Complex d = row.rapidity - col.rapidity;
    const Complex p = row.field;
    const Complex q = col.field;
    const Complex c = sqrt_principal(bracket(2.0 * p)) * sqrt_principal(bracket(2.0 * q));
    return {bracket(d + p + q), bracket(-d + p + q), bracket(d + (q - p)), bracket(d - (q - p)), c, c};
}

WeightSet weights(const Model& model, const ModelLine& row, const ModelLine& col) {
    if (model.is_xxz()) return xxz_weights(row.rapidity, col.rapidity, model.gamma);
    return felderhof_weights(row, col);
}

RMatrix r_matrix(const Model& model, const ModelLine& a, const ModelLine& b) {
    const WeightSet ws = weights(model, a, b);
    RMatrix r;
    r(0, 0) = ws.a_plus;
    r(1, 1) = ws.b_plus;
    r(1, 2) = ws.c_plus;
    r(2, 1) = ws.c_minus;
    r(2, 2) = ws.b_minus;
    r(3, 3) = ws.a_minus;
    return r;
}

namespace {

// Embeds a two-site operator acting on tensor factors (i, j) of three qubits
// into an 8x8 matrix; factor 0 is the most significant bit.
ComplexMatrix embed3(const RMatrix& r, int i, int j) {
    ComplexMatrix out(8, 8);
    auto bit = [](int index, int factor) { return (index >> (2 - factor)) & 1; };
    const int k = 3 - i - j;
    for (int row = 0; row < 8; ++row) {
        for (int col = 0; col < 8; ++col) {
            if (bit(row, k) != bit(col, k)) continue;
            const int rr = 2 * bit(row, i) + bit(row, j);
            const int cc = 2 * bit(col, i) + bit(col, j);
            out(row, col) = r(rr, cc);
        }
    }
    return out;
}

}  // namespace

double ybe_residual_of(const RMatrix& r12, const RMatrix& r13, const RMatrix& r23) {
    const auto m12 = embed3(r12, 0, 1);
    const auto m13 = embed3(r13, 0, 2);
    const auto m23 = embed3(r23, 1, 2);
    return (m12 * m13 * m23 - m23 * m13 * m12).max_abs();
}

double ybe_residual(const Model& model, const ModelLine& u, const ModelLine& v, const ModelLine& w) {
    return ybe_residual_of(r_matrix(model, u, v), r_matrix(model, u, w), r_matrix(model, v, w));
}

double crossing_residual_with_shift(Complex u, Complex v, Complex gamma, Complex shift) {
    const Model model = Model::xxz(gamma);
    // R_ba(v, u+shift) written in the (a, b) ordering: swap the two tensor factors.
    const RMatrix rba = r_matrix(model, {v, {}}, {u + shift, {}});
    // rba is indexed (b, a); reorder to (a, b): index 2*a + b <- 2*b + a.
    auto swap_index = [](int idx) { return ((idx & 1) << 1) | (idx >> 1); };
    Complex in_ab[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) in_ab[r][c] = rba(swap_index(r), swap_index(c));

    // Partial transpose on b (the low bit).
    Complex tb[4][4];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const int r2 = (r & 2) | (c & 1);
            const int c2 = (c & 2) | (r & 1);
            tb[r][c] = in_ab[r2][c2];
        }

    // sigma^y on b: [[0, -i], [i, 0]].
    const Complex sy[2][2] = {{0.0, -kI}, {kI, 0.0}};
    const RMatrix rab = r_matrix(model, {u, {}}, {v, {}});
    double worst = 0.0;
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) {
            Complex acc{};
            const int ra = r >> 1, rb = r & 1, ca = c >> 1, cb = c & 1;
            for (int k1 = 0; k1 < 2; ++k1)
                for (int k2 = 0; k2 < 2; ++k2) acc += sy[rb][k1] * tb[2 * ra + k1][2 * ca + k2] * sy[k2][cb];
            worst = std::max(worst, std::abs(rab(r, c) + acc));
        }
    }
    return worst;
}

double crossing_residual(Complex u, Complex v, Complex gamma) {
    return crossing_residual_with_shift(u, v, gamma, gamma);
}

}  // namespace qism
