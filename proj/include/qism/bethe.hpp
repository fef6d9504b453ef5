#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qism/numerics.hpp"
#include "qism/spin_chain.hpp"
#include "qism/vertex_weights.hpp"

namespace qism {

/// A verified solution of the Bethe equations. XXZ stores the rapidities v_i,
/// Felderhof the combinations x_i = v_i + q_i.
struct BetheRootSet {
    Model model;
    std::vector<Complex> roots;
    double residual = 0.0;
};

/// Representative of z modulo i*pi with imaginary part in (-pi/2, pi/2].
Complex canonical_root(Complex z);

/// max_i |P_i - Q_i| / max(|P_i|, |Q_i|) with
/// P_i = prod_j [v_i - w_j + g] prod_{k != i} [v_i - v_k - g],
/// Q_i = prod_j [v_i - w_j]     prod_{k != i} [v_i - v_k + g].
/// Throws PoleHit when v_i = w_j or v_i = v_k +- g (mod i*pi).
double xxz_bethe_residual(std::span<const Complex> v, std::span<const Complex> w, Complex gamma);

enum class SolveRoute { automatic, newton, polynomial };

struct XxzSolveOptions {
    int starts = 200;
    std::uint64_t seed = 1;
    int threads = 1;
    /// automatic uses the polynomial for N = 1 and Newton otherwise.
    SolveRoute route = SolveRoute::automatic;
    double accept = 1e-10;
    /// Drop solutions whose Bethe vector vanishes (norm below 1e-8 relative to
    /// the product of the single-magnon norms).
    bool require_nonvanishing = true;
};

/// Distinct root sets of the XXZ Bethe equations for N roots, sorted
/// canonically. Sets that pass the equations but annihilate the reference
/// state are discarded unless `require_nonvanishing` is off. The result does not depend on the thread count.
/// Throws NoSolutionFound when no start converges.
std::vector<BetheRootSet> xxz_solve(int n, std::span<const Complex> w, Complex gamma,
                                    const XxzSolveOptions& options = {});

/// |(-)^N prod_k [x - w_k + r_k] + prod_k [x - w_k - r_k]|.
double felderhof_bethe_defect(Complex x, std::span<const ModelLine> w_lines, int n);

/// All M roots x (mod i*pi) of the Felderhof Bethe equation for N roots,
/// polished and verified to defect 1e-10. Sorted canonically.
std::vector<Complex> felderhof_bethe_roots(std::span<const ModelLine> w_lines, int n);

struct EigenvectorCheck {
    double residual = 0.0;
    Complex tau{};
};

/// B(v_1) ... B(v_N) |up_M>.
StateVector bethe_vector(std::span<const ModelLine> v_lines, const MonodromySpec& spec);
/// <up_M| C(v_N) ... C(v_1) as a row vector.
StateVector dual_bethe_vector(std::span<const ModelLine> v_lines, const MonodromySpec& spec);

/// ||t(u) Psi - tau Psi|| / ||t(u) Psi|| with tau the Rayleigh quotient.
/// Throws ZeroVector if Psi vanishes.
EigenvectorCheck eigenvector_check(std::span<const ModelLine> v_lines, const MonodromySpec& spec,
                                   const ModelLine& probe);
/// The same test for the dual vector under right action.
EigenvectorCheck dual_eigenvector_check(std::span<const ModelLine> v_lines, const MonodromySpec& spec,
                                        const ModelLine& probe);

/// Parallelism residual ||y - tau x|| / ||y|| with tau = <x, y> / <x, x>.
EigenvectorCheck parallelism(const StateVector& x, const StateVector& y);

}  // namespace qism
