#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "qism/numerics.hpp"
#include "qism/vertex_weights.hpp"

namespace qism {

/// Dense vector in (C^2)^{(x) M}. Site 1 is the most significant bit of the
/// basis index; a 0 bit is spin up, a 1 bit is spin down.
class StateVector {
public:
    StateVector() = default;
    explicit StateVector(int sites);
    StateVector(int sites, std::vector<Complex> amps);

    int sites() const { return sites_; }
    std::size_t dimension() const { return amps_.size(); }

    Complex operator[](std::size_t index) const { return amps_[index]; }
    Complex& operator[](std::size_t index) { return amps_[index]; }
    std::span<const Complex> amps() const { return amps_; }

    /// Bit position of a 1-based site inside the basis index.
    std::size_t site_mask(int site) const { return std::size_t{1} << (sites_ - site); }

    double norm() const;

    StateVector& operator+=(const StateVector& other);
    StateVector& operator-=(const StateVector& other);
    StateVector& operator*=(Complex s);
    friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
    friend StateVector operator-(StateVector a, const StateVector& b) { return a -= b; }
    friend StateVector operator*(Complex s, StateVector a) { return a *= s; }

private:
    int sites_ = 0;
    std::vector<Complex> amps_;
};

/// sum_k a_k b_k: pairs a dual vector with a ket without conjugation.
Complex contract(const StateVector& bra, const StateVector& ket);
/// sum_k conj(a_k) b_k.
Complex inner(const StateVector& a, const StateVector& b);

enum class ReferenceKind { up_all, down_all, up_prefix, down_prefix };

/// |up_M>, |down_M>, and the prefix states whose first `prefix` spins are up
/// (resp. down) with the rest flipped. Throws BadPrefix if prefix > sites.
StateVector reference_state(ReferenceKind kind, int sites, int prefix = 0);

enum class PauliKind { plus, minus, x, y, z };

/// Local Pauli action on the 1-based `site`.
StateVector apply_sigma(const StateVector& s, int site, PauliKind kind);

enum class OperatorLabel { A, B, C, D };

/// Quantum-space data of a monodromy matrix: model plus one line per site.
struct MonodromySpec {
    Model model;
    std::vector<ModelLine> quantum_lines;

    int sites() const { return static_cast<int>(quantum_lines.size()); }
};

/// <aux_out| R_{a1} ... R_{aM} |aux_in> applied to `s`, matrix-free.
/// (aux_in, aux_out) is (up, up) for A, (down, up) for B, (up, down) for C and
/// (down, down) for D. Cost O(M 2^M).
StateVector apply_monodromy_entry(OperatorLabel label, const ModelLine& aux, const MonodromySpec& spec,
                                  const StateVector& s);

/// Right action of the same operator on a dual vector: returns the row vector bra * X.
StateVector apply_monodromy_entry_dual(OperatorLabel label, const ModelLine& aux, const MonodromySpec& spec,
                                       const StateVector& bra);

/// t(u) = A(u) + D(u) applied to `s`.
StateVector apply_transfer(const ModelLine& aux, const MonodromySpec& spec, const StateVector& s);
StateVector apply_transfer_dual(const ModelLine& aux, const MonodromySpec& spec, const StateVector& bra);

/// Dense 2^M x 2^M matrix of one monodromy entry (column k = action on basis vector k).
ComplexMatrix dense_monodromy_entry(OperatorLabel label, const ModelLine& aux, const MonodromySpec& spec);
ComplexMatrix dense_transfer(const ModelLine& aux, const MonodromySpec& spec);

enum class CommutationRelation {
    BB,            // B(u)B(v) = B(v)B(u)
    AB,            // [u-v+g] B(u)A(v) = [g] B(v)A(u) + [u-v] A(v)B(u)
    DB,            // [g] B(u)D(v) + [u-v] D(u)B(v) = [u-v+g] B(v)D(u)
    CC,            // C(u)C(v) = C(v)C(u)
    CA,            // [g] A(u)C(v) + [u-v] C(u)A(v) = [u-v+g] A(v)C(u)
    CD,            // [u-v+g] D(u)C(v) = [g] D(v)C(u) + [u-v] C(v)D(u)
    DD,            // D(u)D(v) = D(v)D(u)
    felderhof_BB,  // [u-v+p+q] B(u,p)B(v,q) = [v-u+p+q] B(v,q)B(u,p)
    felderhof_CC,  // [v-u+p+q] C(u,p)C(v,q) = [u-v+p+q] C(v,q)C(u,p)
};

std::string_view to_string(CommutationRelation relation);
std::span<const CommutationRelation> xxz_relations();
std::span<const CommutationRelation> felderhof_relations();

/// ||(LHS - RHS) probe|| divided by the largest norm among the individual terms.
/// The XXZ relations read the crossing parameter from `spec.model`; pass
/// `gamma_override` to evaluate the scalar coefficients at a different gamma.
double commutation_residual(CommutationRelation relation, const ModelLine& u, const ModelLine& v,
                            const MonodromySpec& spec, const StateVector& probe);
double commutation_residual(CommutationRelation relation, const ModelLine& u, const ModelLine& v,
                            const MonodromySpec& spec, const StateVector& probe, Complex gamma_override);

/// Max-norm of T({u}_L,{w}_M) - (-1)^{LM} Tbar_1(w_1,{u+g}_L) ... Tbar_M(w_M,{u+g}_L),
/// both sides contracted densely on L + M <= 8 qubits. Throws SizeLimit beyond that.
double rotation_identity_residual(std::span<const Complex> u, std::span<const Complex> w, Complex gamma);

}  // namespace qism
