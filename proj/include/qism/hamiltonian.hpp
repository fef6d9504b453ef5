#pragma once

#include "qism/numerics.hpp"
#include "qism/spin_chain.hpp"
#include "qism/vertex_weights.hpp"

namespace qism {

/// Dense Hamiltonian on M sites in the spin_chain basis.
struct HamiltonianMatrix {
    int sites = 0;
    ComplexMatrix entries;

    StateVector apply(const StateVector& s) const;
};

/// 1/2 sum_m (sx sx + sy sy + Delta (sz sz + 1)) on a periodic chain, Delta = cosh(gamma). M >= 2.
HamiltonianMatrix xxz_hamiltonian(int m, Complex gamma);

/// 1/2 sum_m (sx sx + sy sy + 2h sz) on a periodic chain, h = cosh(2p). M >= 2.
HamiltonianMatrix felderhof_hamiltonian(int m, Complex p);

/// The explicit Hamiltonian for `kind`; `param` is gamma (XXZ) or p (Felderhof).
HamiltonianMatrix model_hamiltonian(ModelKind kind, int m, Complex param);

/// Homogeneous chain whose transfer matrix generates the Hamiltonian, with the
/// expansion point u0 and the prefactor of the log-derivative.
struct HomogeneousPoint {
    MonodromySpec spec;
    ModelLine aux;  // auxiliary line at u0
    Complex scale;
};

/// XXZ: w_j = gamma/2, u0 = gamma/2, scale [gamma].
/// Felderhof: w_j = 0, r_j = p, u0 = 0 with field p, scale [2p].
HomogeneousPoint homogeneous_point(ModelKind kind, int m, Complex param);

/// scale * t(u0)^{-1} (t(u0 + h) - t(u0 - h)) / (2h) with dense transfer
/// matrices and an LU solve. Throws SingularTransfer when t(u0) is numerically
/// singular; shifting u0 slightly is the usual remedy. 2 <= M <= 6.
ComplexMatrix transfer_log_derivative(ModelKind kind, int m, Complex param, double fd_step);

/// Max-norm of transfer_log_derivative minus the explicit Hamiltonian.
double trace_identity_residual(ModelKind kind, int m, Complex param, double fd_step);

/// Max-norm of [t(u), t(v)] relative to max(|t(u) t(v)|).
double transfer_commutator_residual(const ModelLine& u, const ModelLine& v, const MonodromySpec& spec);

/// Max-norm of H - H^dagger.
double hermiticity_residual(const ComplexMatrix& h);

/// Max-norm of [H, sum_m sz_m].
double total_sz_commutator(const HamiltonianMatrix& h);

}  // namespace qism
