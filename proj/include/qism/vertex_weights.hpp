#pragma once

#include <string_view>

#include "qism/numerics.hpp"

namespace qism {

enum class ModelKind { xxz, felderhof };

std::string_view to_string(ModelKind kind);
/// Parses "xxz" or "felderhof"; throws InvalidArgument otherwise.
ModelKind parse_model_kind(std::string_view text);

/// Model tag plus the global data it needs. Delta = cosh(gamma) is derived, never stored.
struct Model {
    ModelKind kind = ModelKind::xxz;
    Complex gamma{};  // crossing parameter; XXZ only

    static Model xxz(Complex gamma) { return {ModelKind::xxz, gamma}; }
    static Model felderhof() { return {ModelKind::felderhof, {}}; }

    bool is_xxz() const { return kind == ModelKind::xxz; }
    bool is_felderhof() const { return kind == ModelKind::felderhof; }
    Complex anisotropy() const;
};

/// A lattice line: rapidity plus external field (the field is ignored by XXZ).
struct ModelLine {
    Complex rapidity{};
    Complex field{};
};

/// The six vertex weights for one line crossing.
struct WeightSet {
    Complex a_plus, a_minus, b_plus, b_minus, c_plus, c_minus;
};

/// 4x4 matrix on V_a (x) V_b, basis index 2*a + b with up = 0.
struct RMatrix {
    Complex m[4][4]{};

    Complex operator()(int row, int col) const { return m[row][col]; }
    Complex& operator()(int row, int col) { return m[row][col]; }
    ComplexMatrix dense() const;
};

WeightSet xxz_weights(Complex u, Complex w, Complex gamma);
WeightSet felderhof_weights(const ModelLine& row, const ModelLine& col);
WeightSet weights(const Model& model, const ModelLine& row, const ModelLine& col);

/// R_{ab}: diagonal (a+, b+, b-, a-), middle block [[b+, c+], [c-, b-]].
RMatrix r_matrix(const Model& model, const ModelLine& a, const ModelLine& b);

/// Max-norm of R12 R13 R23 - R23 R13 R12 as an 8x8 matrix.
double ybe_residual(const Model& model, const ModelLine& u, const ModelLine& v, const ModelLine& w);

/// Same as ybe_residual but for an arbitrary R-matrix builder; used to show the
/// residual detects a corrupted weight.
double ybe_residual_of(const RMatrix& r12, const RMatrix& r13, const RMatrix& r23);

/// Max-norm of R_ab(u,v) + sigma^y_b R_ba(v, u + shift)^{t_b} sigma^y_b.
/// The crossing identity holds with shift = gamma.
double crossing_residual(Complex u, Complex v, Complex gamma);
double crossing_residual_with_shift(Complex u, Complex v, Complex gamma, Complex shift);

}  // namespace qism
