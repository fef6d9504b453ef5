#include "qism/spin_chain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qism/errors.hpp"

namespace qism {

StateVector::StateVector(int sites) : sites_(sites) {
    if (sites < 0 || sites > 30) throw SizeLimit("state vector with " + std::to_string(sites) + " sites");
    amps_.assign(std::size_t{1} << sites, Complex{});
}

StateVector::StateVector(int sites, std::vector<Complex> amps) : sites_(sites), amps_(std::move(amps)) {
    if (sites < 0 || sites > 30 || amps_.size() != (std::size_t{1} << sites))
        throw SizeMismatch("amplitude count does not match 2^sites");
}

double StateVector::norm() const {
    double acc = 0.0;
    for (const auto& z : amps_) acc += std::norm(z);
    return std::sqrt(acc);
}

StateVector& StateVector::operator+=(const StateVector& other) {
    if (other.sites_ != sites_) throw SizeMismatch("state addition");
    for (std::size_t k = 0; k < amps_.size(); ++k) amps_[k] += other.amps_[k];
    return *this;
}

StateVector& StateVector::operator-=(const StateVector& other) {
    if (other.sites_ != sites_) throw SizeMismatch("state subtraction");
    for (std::size_t k = 0; k < amps_.size(); ++k) amps_[k] -= other.amps_[k];
    return *this;
}

StateVector& StateVector::operator*=(Complex s) {
    for (auto& z : amps_) z *= s;
    return *this;
}

Complex contract(const StateVector& bra, const StateVector& ket) {
    if (bra.sites() != ket.sites()) throw SizeMismatch("contract");
    Complex acc{};
    for (std::size_t k = 0; k < ket.dimension(); ++k) acc += bra[k] * ket[k];
    return acc;
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.sites() != b.sites()) throw SizeMismatch("inner");
    Complex acc{};
    for (std::size_t k = 0; k < a.dimension(); ++k) acc += std::conj(a[k]) * b[k];
    return acc;
}

StateVector reference_state(ReferenceKind kind, int sites, int prefix) {
    if (sites < 0) throw InvalidArgument("negative site count");
    if (prefix < 0 || prefix > sites) throw BadPrefix("prefix " + std::to_string(prefix) + " exceeds " + std::to_string(sites) + " sites");
    StateVector s(sites);
    const std::size_t all = s.dimension() - 1;
    // Bits for sites 1..prefix (the most significant ones).
    const std::size_t head = prefix == 0 ? 0 : (all ^ ((std::size_t{1} << (sites - prefix)) - 1));
    std::size_t index = 0;
    switch (kind) {
        case ReferenceKind::up_all: index = 0; break;
        case ReferenceKind::down_all: index = all; break;
        case ReferenceKind::down_prefix: index = head; break;
        case ReferenceKind::up_prefix: index = all ^ head; break;
    }
    s[index] = 1.0;
    return s;
}

StateVector apply_sigma(const StateVector& s, int site, PauliKind kind) {
    if (site < 1 || site > s.sites()) throw InvalidArgument("site " + std::to_string(site) + " out of range");
    StateVector out(s.sites());
    const std::size_t mask = s.site_mask(site);
    for (std::size_t k = 0; k < s.dimension(); ++k) {
        const Complex amp = s[k];
        if (amp == Complex{}) continue;
        const bool down = (k & mask) != 0;
        switch (kind) {
            case PauliKind::plus:
                if (down) out[k ^ mask] += amp;
                break;
            case PauliKind::minus:
                if (!down) out[k ^ mask] += amp;
                break;
            case PauliKind::x: out[k ^ mask] += amp; break;
            case PauliKind::y: out[k ^ mask] += (down ? -kI : kI) * amp; break;
            case PauliKind::z: out[k] += down ? -amp : amp; break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matrix-free monodromy entries

namespace {

struct AuxPair {
    int in;
    int out;
};

AuxPair aux_indices(OperatorLabel label) {
    switch (label) {
        case OperatorLabel::A: return {0, 0};
        case OperatorLabel::B: return {1, 0};
        case OperatorLabel::C: return {0, 1};
        case OperatorLabel::D: return {1, 1};
    }
    return {0, 0};
}

void check_sites(const MonodromySpec& spec, const StateVector& s) {
    if (spec.sites() < 1) throw InvalidArgument("monodromy needs at least one site");
    if (s.sites() != spec.sites())
        throw SizeMismatch("state has " + std::to_string(s.sites()) + " sites, monodromy has " +
                           std::to_string(spec.sites()));
}

// Applies the local R-matrix (or its transpose) between the auxiliary line and
// `site`. `work[aux]` holds the quantum-space vector for each auxiliary value.
void sweep_site(const RMatrix& r, bool transposed, std::size_t mask, std::array<std::vector<Complex>, 2>& work) {
    const std::size_t dim = work[0].size();
    std::array<std::vector<Complex>, 2> next{std::vector<Complex>(dim), std::vector<Complex>(dim)};
    for (std::size_t k = 0; k < dim; ++k) {
        if (k & mask) continue;  // handle each (up, down) pair once
        const std::size_t idx[2] = {k, k | mask};
        Complex in[4];
        for (int a = 0; a < 2; ++a)
            for (int q = 0; q < 2; ++q) in[2 * a + q] = work[a][idx[q]];
        for (int row = 0; row < 4; ++row) {
            Complex acc{};
            for (int col = 0; col < 4; ++col) {
                const Complex coeff = transposed ? r(col, row) : r(row, col);
                if (coeff != Complex{}) acc += coeff * in[col];
            }
            next[row >> 1][idx[row & 1]] = acc;
        }
    }
    work = std::move(next);
}

}  // namespace

StateVector apply_monodromy_entry(OperatorLabel label, const ModelLine& aux, const MonodromySpec& spec,
                                  const StateVector& s) {
    check_sites(spec, s);
    const AuxPair pair = aux_indices(label);
    const std::size_t dim = s.dimension();
    std::array<std::vector<Complex>, 2> work{std::vector<Complex>(dim), std::vector<Complex>(dim)};
    work[pair.in].assign(s.amps().begin(), s.amps().end());
    // T = R_{a1} ... R_{aM}: on a ket the site-M factor acts first.
    for (int site = spec.sites(); site >= 1; --site) {
        const RMatrix r = r_matrix(spec.model, aux, spec.quantum_lines[site - 1]);
        sweep_site(r, false, s.site_mask(site), work);
    }
    return StateVector(s.sites(), std::move(work[pair.out]));
}

StateVector apply_monodromy_entry_dual(OperatorLabel label, const ModelLine& aux, const MonodromySpec& spec,
                                       const StateVector& bra) {
    check_sites(spec, bra);
    const AuxPair pair = aux_indices(label);
    const std::size_t dim = bra.dimension();
    std::array<std::vector<Complex>, 2> work{std::vector<Complex>(dim), std::vector<Complex>(dim)};
    work[pair.out].assign(bra.amps().begin(), bra.amps().end());
    // bra * T = (T^t bra^t)^t with T^t = R_{aM}^t ... R_{a1}^t: site 1 acts first.
    for (int site = 1; site <= spec.sites(); ++site) {
        const RMatrix r = r_matrix(spec.model, aux, spec.quantum_lines[site - 1]);
        sweep_site(r, true, bra.site_mask(site), work);
    }
    return StateVector(bra.sites(), std::move(work[pair.in]));
}

StateVector apply_transfer(const ModelLine& aux, const MonodromySpec& spec, const StateVector& s) {
    return apply_monodromy_entry(OperatorLabel::A, aux, spec, s) + apply_monodromy_entry(OperatorLabel::D, aux, spec, s);
}

StateVector apply_transfer_dual(const ModelLine& aux, const MonodromySpec& spec, const StateVector& bra) {
    return apply_monodromy_entry_dual(OperatorLabel::A, aux, spec, bra) +
           apply_monodromy_entry_dual(OperatorLabel::D, aux, spec, bra);
}

ComplexMatrix dense_monodromy_entry(OperatorLabel label, const ModelLine& aux, const MonodromySpec& spec) {
    const int m = spec.sites();
    if (m > 12) throw SizeLimit("dense monodromy entry beyond 12 sites");
    const std::size_t dim = std::size_t{1} << m;
    ComplexMatrix out(dim, dim);
    for (std::size_t c = 0; c < dim; ++c) {
        StateVector basis(m);
        basis[c] = 1.0;
        const StateVector col = apply_monodromy_entry(label, aux, spec, basis);
        for (std::size_t r = 0; r < dim; ++r) out(r, c) = col[r];
    }
    return out;
}

ComplexMatrix dense_transfer(const ModelLine& aux, const MonodromySpec& spec) {
    return dense_monodromy_entry(OperatorLabel::A, aux, spec) + dense_monodromy_entry(OperatorLabel::D, aux, spec);
}

// ---------------------------------------------------------------------------
// Commutation relations

std::string_view to_string(CommutationRelation relation) {
    switch (relation) {
        case CommutationRelation::BB: return "BB";
        case CommutationRelation::AB: return "AB";
        case CommutationRelation::DB: return "DB";
        case CommutationRelation::CC: return "CC";
        case CommutationRelation::CA: return "CA";
        case CommutationRelation::CD: return "CD";
        case CommutationRelation::DD: return "DD";
        case CommutationRelation::felderhof_BB: return "felderhof_BB";
        case CommutationRelation::felderhof_CC: return "felderhof_CC";
    }
    return "?";
}

std::span<const CommutationRelation> xxz_relations() {
    static constexpr CommutationRelation all[] = {
        CommutationRelation::BB, CommutationRelation::AB, CommutationRelation::DB, CommutationRelation::CC,
        CommutationRelation::CA, CommutationRelation::CD, CommutationRelation::DD};
    return all;
}

std::span<const CommutationRelation> felderhof_relations() {
    static constexpr CommutationRelation all[] = {CommutationRelation::felderhof_BB,
                                                  CommutationRelation::felderhof_CC};
    return all;
}

namespace {

struct Term {
    Complex coeff;
    OperatorLabel left;
    const ModelLine* left_line;
    OperatorLabel right;
    const ModelLine* right_line;
};

double residual_of_terms(std::span<const Term> terms, const MonodromySpec& spec, const StateVector& probe) {
    StateVector total(probe.sites());
    double scale = 0.0;
    for (const auto& t : terms) {
        const StateVector inner_state = apply_monodromy_entry(t.right, *t.right_line, spec, probe);
        StateVector piece = apply_monodromy_entry(t.left, *t.left_line, spec, inner_state);
        piece *= t.coeff;
        scale = std::max(scale, piece.norm());
        total += piece;
    }
    return scale == 0.0 ? 0.0 : total.norm() / scale;
}

}  // namespace

double commutation_residual(CommutationRelation relation, const ModelLine& u, const ModelLine& v,
                            const MonodromySpec& spec, const StateVector& probe) {
    return commutation_residual(relation, u, v, spec, probe, spec.model.gamma);
}

double commutation_residual(CommutationRelation relation, const ModelLine& u, const ModelLine& v,
                            const MonodromySpec& spec, const StateVector& probe, Complex g) {
    check_sites(spec, probe);
    using L = OperatorLabel;
    const bool felderhof_relation =
        relation == CommutationRelation::felderhof_BB || relation == CommutationRelation::felderhof_CC;
    if (felderhof_relation != spec.model.is_felderhof())
        throw InvalidArgument("relation " + std::string(to_string(relation)) + " does not belong to model " +
                              std::string(to_string(spec.model.kind)));

    const Complex d = u.rapidity - v.rapidity;
    const Complex fields = u.field + v.field;
    std::vector<Term> terms;
    switch (relation) {
        case CommutationRelation::BB:
            terms = {{1.0, L::B, &u, L::B, &v}, {-1.0, L::B, &v, L::B, &u}};
            break;
        case CommutationRelation::AB:
            terms = {{bracket(d + g), L::B, &u, L::A, &v},
                     {-bracket(g), L::B, &v, L::A, &u},
                     {-bracket(d), L::A, &v, L::B, &u}};
            break;
        case CommutationRelation::DB:
            terms = {{bracket(g), L::B, &u, L::D, &v},
                     {bracket(d), L::D, &u, L::B, &v},
                     {-bracket(d + g), L::B, &v, L::D, &u}};
            break;
        case CommutationRelation::CC:
            terms = {{1.0, L::C, &u, L::C, &v}, {-1.0, L::C, &v, L::C, &u}};
            break;
        case CommutationRelation::CA:
            terms = {{bracket(g), L::A, &u, L::C, &v},
                     {bracket(d), L::C, &u, L::A, &v},
                     {-bracket(d + g), L::A, &v, L::C, &u}};
            break;
        case CommutationRelation::CD:
            terms = {{bracket(d + g), L::D, &u, L::C, &v},
                     {-bracket(g), L::D, &v, L::C, &u},
                     {-bracket(d), L::C, &v, L::D, &u}};
            break;
        case CommutationRelation::DD:
            terms = {{1.0, L::D, &u, L::D, &v}, {-1.0, L::D, &v, L::D, &u}};
            break;
        case CommutationRelation::felderhof_BB:
            terms = {{bracket(d + fields), L::B, &u, L::B, &v}, {-bracket(-d + fields), L::B, &v, L::B, &u}};
            break;
        case CommutationRelation::felderhof_CC:
            terms = {{bracket(-d + fields), L::C, &u, L::C, &v}, {-bracket(d + fields), L::C, &v, L::C, &u}};
            break;
    }
    return residual_of_terms(terms, spec, probe);
}

// ---------------------------------------------------------------------------
// Rotation identity on a dense auxiliary (x) quantum space

namespace {

// Dense operators on `qubits` factors; factor 0 is the most significant bit.
struct DenseSpace {
    int qubits;
    std::size_t dim() const { return std::size_t{1} << qubits; }
    std::size_t mask(int factor) const { return std::size_t{1} << (qubits - 1 - factor); }
};

// X <- R_{f1 f2} X where R's first tensor factor is f1.
void left_multiply(const DenseSpace& space, const RMatrix& r, int f1, int f2, ComplexMatrix& x) {
    const std::size_t m1 = space.mask(f1), m2 = space.mask(f2);
    const std::size_t dim = space.dim();
    ComplexMatrix out(dim, dim);
    for (std::size_t row = 0; row < dim; ++row) {
        const int a = (row & m1) ? 1 : 0;
        const int b = (row & m2) ? 1 : 0;
        const std::size_t base = row & ~(m1 | m2);
        for (int k = 0; k < 4; ++k) {
            const Complex coeff = r(2 * a + b, k);
            if (coeff == Complex{}) continue;
            const std::size_t src = base | ((k & 2) ? m1 : 0) | ((k & 1) ? m2 : 0);
            for (std::size_t c = 0; c < dim; ++c) out(row, c) += coeff * x(src, c);
        }
    }
    x = std::move(out);
}

ComplexMatrix partial_transpose(const DenseSpace& space, const ComplexMatrix& x, int factor) {
    const std::size_t m = space.mask(factor);
    const std::size_t dim = space.dim();
    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            const std::size_t r2 = (r & ~m) | (c & m);
            const std::size_t c2 = (c & ~m) | (r & m);
            out(r, c) = x(r2, c2);
        }
    return out;
}

// sigma^y_f X sigma^y_f.
ComplexMatrix conjugate_sigma_y(const DenseSpace& space, const ComplexMatrix& x, int factor) {
    const std::size_t m = space.mask(factor);
    const std::size_t dim = space.dim();
    // sigma^y |0> = i|1>, sigma^y |1> = -i|0>; as a matrix (sy)_{r, r^m} = (r bit set ? i : -i).
    auto entry = [&](std::size_t r) { return (r & m) ? kI : -kI; };
    ComplexMatrix out(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) out(r, c) = entry(r) * x(r ^ m, c ^ m) * entry(c ^ m);
    return out;
}

}  // namespace

double rotation_identity_residual(std::span<const Complex> u, std::span<const Complex> w, Complex gamma) {
    const int l = static_cast<int>(u.size());
    const int m = static_cast<int>(w.size());
    if (l + m > 8) throw SizeLimit("rotation identity needs L + M <= 8");
    if (l == 0 || m == 0) return 0.0;
    const Model model = Model::xxz(gamma);
    const DenseSpace space{l + m};
    auto aux = [&](int i) { return i; };        // a_1..a_L -> factors 0..L-1
    auto site = [&](int j) { return l + j; };   // V_1..V_M -> factors L..L+M-1

    // LHS = T_{a_L}(u_L) ... T_{a_1}(u_1), each T_{a} = R_{a1} ... R_{aM}.
    // Build by left-multiplying factors from the rightmost one.
    ComplexMatrix lhs = ComplexMatrix::identity(space.dim());
    for (int i = 0; i < l; ++i) {
        for (int j = m - 1; j >= 0; --j) {
            left_multiply(space, r_matrix(model, {u[i], {}}, {w[j], {}}), aux(i), site(j), lhs);
        }
    }

    // RHS = (-1)^{LM} X_1 ... X_M, X_j = sigma^y_j T_j(w_j, {u+g})^{t_j} sigma^y_j,
    // T_j = R_{j a_1}(w_j, u_1+g) ... R_{j a_L}(w_j, u_L+g).
    ComplexMatrix rhs = ComplexMatrix::identity(space.dim());
    for (int j = m - 1; j >= 0; --j) {
        ComplexMatrix tj = ComplexMatrix::identity(space.dim());
        for (int i = l - 1; i >= 0; --i)
            left_multiply(space, r_matrix(model, {w[j], {}}, {u[i] + gamma, {}}), site(j), aux(i), tj);
        const ComplexMatrix xj = conjugate_sigma_y(space, partial_transpose(space, tj, site(j)), site(j));
        rhs = xj * rhs;
    }
    if ((l * m) % 2 == 1) rhs *= -1.0;
    return (lhs - rhs).max_abs();
}

}  // namespace qism
