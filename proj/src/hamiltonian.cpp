#include "qism/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

#include "qism/errors.hpp"

namespace qism {

namespace {

void require_sites(int m, int lo, int hi) {
    if (m < lo || m > hi)
        throw SizeLimit("chain length " + std::to_string(m) + " outside [" + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
}

int spin_sign(std::size_t index, std::size_t mask) { return (index & mask) ? -1 : 1; }

// Hopping part sum_m (sx sx + sy sy) plus a diagonal supplied per basis index.
template <class Diagonal>
HamiltonianMatrix build(int m, Diagonal diagonal) {
    const std::size_t dim = std::size_t{1} << m;
    HamiltonianMatrix h{m, ComplexMatrix(dim, dim)};
    for (std::size_t k = 0; k < dim; ++k) {
        h.entries(k, k) += diagonal(k);
        for (int site = 1; site <= m; ++site) {
            const std::size_t a = std::size_t{1} << (m - site);
            const std::size_t b = std::size_t{1} << (m - (site % m + 1));
            // sx sx + sy sy = 2 (s+ s- + s- s+) exchanges antiparallel neighbours.
            if (((k & a) != 0) != ((k & b) != 0)) h.entries(k ^ a ^ b, k) += 1.0;
        }
    }
    return h;
}

}  // namespace

StateVector HamiltonianMatrix::apply(const StateVector& s) const {
    if (s.sites() != sites) throw SizeMismatch("state and Hamiltonian have different lengths");
    return StateVector(sites, entries.apply(s.amps()));
}

HamiltonianMatrix xxz_hamiltonian(int m, Complex gamma) {
    require_sites(m, 2, 14);
    const Complex delta = std::cosh(gamma);
    return build(m, [&](std::size_t k) {
        Complex sum = 0.0;
        for (int site = 1; site <= m; ++site) {
            const std::size_t a = std::size_t{1} << (m - site);
            const std::size_t b = std::size_t{1} << (m - (site % m + 1));
            sum += 0.5 * delta * double(spin_sign(k, a) * spin_sign(k, b) + 1);
        }
        return sum;
    });
}

HamiltonianMatrix felderhof_hamiltonian(int m, Complex p) {
    require_sites(m, 2, 14);
    const Complex h = std::cosh(2.0 * p);
    return build(m, [&](std::size_t k) {
        Complex sum = 0.0;
        for (int site = 1; site <= m; ++site) sum += h * double(spin_sign(k, std::size_t{1} << (m - site)));
        return sum;
    });
}

HamiltonianMatrix model_hamiltonian(ModelKind kind, int m, Complex param) {
    return kind == ModelKind::xxz ? xxz_hamiltonian(m, param) : felderhof_hamiltonian(m, param);
}

HomogeneousPoint homogeneous_point(ModelKind kind, int m, Complex param) {
    if (kind == ModelKind::xxz) {
        const Complex half = param / 2.0;
        return {{Model::xxz(param), std::vector<ModelLine>(m, ModelLine{half, {}})}, {half, {}}, bracket(param)};
    }
    return {{Model::felderhof(), std::vector<ModelLine>(m, ModelLine{0.0, param})},
            {0.0, param},
            bracket(2.0 * param)};
}

ComplexMatrix transfer_log_derivative(ModelKind kind, int m, Complex param, double fd_step) {
    require_sites(m, 2, 6);
    if (!(fd_step > 0.0)) throw InvalidArgument("finite-difference step must be positive");
    const auto point = homogeneous_point(kind, m, param);
    const LuDecomposition lu(dense_transfer(point.aux, point.spec));
    if (lu.singular() || lu.min_relative_pivot() < 1e-12)
        throw SingularTransfer("transfer matrix is singular at the expansion point; shift u0 slightly");
    ModelLine plus = point.aux, minus = point.aux;
    plus.rapidity += fd_step;
    minus.rapidity -= fd_step;
    ComplexMatrix diff = dense_transfer(plus, point.spec) - dense_transfer(minus, point.spec);
    diff *= point.scale / (2.0 * fd_step);
    return lu.solve(diff);
}

double trace_identity_residual(ModelKind kind, int m, Complex param, double fd_step) {
    return (transfer_log_derivative(kind, m, param, fd_step) - model_hamiltonian(kind, m, param).entries).max_abs();
}

double transfer_commutator_residual(const ModelLine& u, const ModelLine& v, const MonodromySpec& spec) {
    require_sites(spec.sites(), 1, 6);
    const auto tu = dense_transfer(u, spec);
    const auto tv = dense_transfer(v, spec);
    const auto uv = tu * tv;
    const double scale = std::max(uv.max_abs(), 1e-300);
    return (uv - tv * tu).max_abs() / scale;
}

double hermiticity_residual(const ComplexMatrix& h) {
    double worst = 0.0;
    for (std::size_t r = 0; r < h.rows(); ++r)
        for (std::size_t c = 0; c < h.cols(); ++c) worst = std::max(worst, std::abs(h(r, c) - std::conj(h(c, r))));
    return worst;
}

double total_sz_commutator(const HamiltonianMatrix& h) {
    const std::size_t dim = h.entries.rows();
    double worst = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            int sz = 0;
            for (int site = 1; site <= h.sites; ++site) {
                const std::size_t mask = std::size_t{1} << (h.sites - site);
                sz += spin_sign(c, mask) - spin_sign(r, mask);
            }
            worst = std::max(worst, std::abs(h.entries(r, c)) * std::abs(sz));
        }
    return worst;
}

}  // namespace qism
