#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qism/numerics.hpp"
#include "qism/vertex_weights.hpp"

namespace qism {

/// N x N lattice with domain wall boundaries: rows carry the v-lines (top to
/// bottom), columns the w-lines (left to right).
struct DwpfInstance {
    Model model;
    std::vector<ModelLine> v_lines;
    std::vector<ModelLine> w_lines;

    int size() const { return static_cast<int>(v_lines.size()); }
    /// The instance restricted to the first k rows and columns.
    DwpfInstance leading(int k) const;
};

/// Sum over all ice-rule configurations of the lattice. N <= 5.
Complex z_enumerate(const DwpfInstance& inst);
/// Exhaustive sum over every internal edge assignment, no pruning. N <= 3.
Complex z_enumerate_exhaustive(const DwpfInstance& inst);
/// Row-by-row walk that only extends ice-rule-consistent partial rows. N <= 5.
Complex z_enumerate_pruned(const DwpfInstance& inst);

/// <down_N| B(v_N) ... B(v_1) |up_N>: the row-1 operator acts first. N <= 12.
Complex z_operator(const DwpfInstance& inst);

/// Determinant formula for the XXZ model, pole-free numerator form.
/// Throws DegenerateNodes if two v's or two w's are closer than 1e-8.
Complex z_izergin(const DwpfInstance& inst);

/// Product formula for the Felderhof model.
Complex z_factorized(const DwpfInstance& inst);

/// z_izergin or z_factorized according to the model.
Complex z_closed_form(const DwpfInstance& inst);

struct ConditionResult {
    std::string name;
    double residual = 0.0;
    bool pass = false;
};

struct ConditionReport {
    std::vector<ConditionResult> conditions;
    bool all_pass() const;
};

using DwpfRoute = std::function<Complex(const DwpfInstance&)>;

struct KorepinOptions {
    Tolerance tol{1e-10, 1e-10};
    DwpfRoute route = z_closed_form;
    /// Multiplies the expected recursion prefactor; anything but 1 must fail.
    Complex recursion_scale = 1.0;
};

/// Checks the four conditions that fix Z_N uniquely, for N in 2..4.
/// XXZ: symmetry in w, degree N-1 in v_N, recursion at v_N = w_N - g, Z_1 = [g].
/// Felderhof: degree N-1 in v_N, zeros at v_N = v_j + q_j + q_N, recursion at
/// v_N = w_N + q_N + r_N, Z_1 = [2q_1]^{1/2} [2r_1]^{1/2}.
ConditionReport korepin_conditions_check(const DwpfInstance& inst, const KorepinOptions& options = {});

}  // namespace qism
