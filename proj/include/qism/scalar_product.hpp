#pragma once

#include <functional>
#include <span>
#include <vector>

#include "qism/numerics.hpp"
#include "qism/partition_function.hpp"
#include "qism/vertex_weights.hpp"

namespace qism {

/// Arguments of S_n: n free C-lines {u,p}, N Bethe lines {v,q}, M quantum lines {w,r}.
struct ScalarProductInstance {
    Model model;
    std::vector<ModelLine> u_lines;
    std::vector<ModelLine> v_lines;
    std::vector<ModelLine> w_lines;

    int n() const { return static_cast<int>(u_lines.size()); }
    int big_n() const { return static_cast<int>(v_lines.size()); }
    int m() const { return static_cast<int>(w_lines.size()); }
    /// N - n: the number of leading quantum lines that stay down in the bra.
    int remaining() const { return big_n() - n(); }

    /// Same instance with only the first k u-lines.
    ScalarProductInstance truncated(int k) const;
    /// Throws SizeMismatch unless 0 <= n <= N <= M.
    void validate() const;
};

/// <bra| C...C B...B |up_M> by direct operator application. M <= 12.
/// The bra has its first N - n spins down. XXZ applies C(u_n) and B(v_N)
/// first; Felderhof applies B(v_1), ..., B(v_N) and then C(u_1), ..., C(u_n).
Complex sp_oracle(const ScalarProductInstance& inst);

/// [g] / [v_i - w] prod_{k != i} [v_k - w + g]  (i is 0-based). Throws PoleHit near w = v_i.
Complex f_func(int i, Complex w, std::span<const ModelLine> v_lines, Complex gamma);

/// [g] / [v_i - u] (prod_{k != i} [v_k - u + g] prod_k [u - w_k + g]
///                 - prod_{k != i} [v_k - u - g] prod_k [u - w_k]).
/// Throws PoleHit within 1e-8 of u = v_i.
Complex g_func(int i, Complex u, std::span<const ModelLine> v_lines, std::span<const ModelLine> w_lines,
               Complex gamma);

/// XXZ determinant formula for S_n; the matrix has the f columns at w_1..w_{N-n}
/// followed by g columns at u_n, ..., u_1.
Complex sn_determinant(const ScalarProductInstance& inst);

/// XXZ determinant formula for S_N in Slavnov's form. Requires n = N.
Complex slavnov_determinant(const ScalarProductInstance& inst);

/// Felderhof product formula for S_n.
Complex felderhof_sn(const ScalarProductInstance& inst);

/// sn_determinant or felderhof_sn according to the model.
Complex sn_closed_form(const ScalarProductInstance& inst);

using ScalarProductRoute = std::function<Complex(const ScalarProductInstance&)>;

struct ScalarConditionOptions {
    Tolerance tol{1e-9, 1e-9};
    ScalarProductRoute route = sn_closed_form;
    Complex recursion_scale = 1.0;
};

/// The four conditions fixing S_n for n >= 1: symmetry in the last M - (N - n)
/// quantum lines, degree M - 1 in u_n plus the zeros, the recursion to S_{n-1},
/// and the relation between S_0 and Z_N.
ConditionReport sn_conditions_check(const ScalarProductInstance& inst, const ScalarConditionOptions& options = {});

}  // namespace qism
