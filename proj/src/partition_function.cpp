#include "qism/partition_function.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>

#include "qism/errors.hpp"
#include "qism/spin_chain.hpp"

namespace qism {

DwpfInstance DwpfInstance::leading(int k) const {
    return {model, {v_lines.begin(), v_lines.begin() + k}, {w_lines.begin(), w_lines.begin() + k}};
}

namespace {

void check_square(const DwpfInstance& inst) {
    if (inst.size() < 1) throw InvalidArgument("partition function needs N >= 1");
    if (inst.w_lines.size() != inst.v_lines.size())
        throw SizeMismatch("DWPF needs as many w-lines as v-lines");
}

// weights[i][j] is the R-matrix of row line i crossing column line j. Its row
// index is 2*left + bottom and its column index 2*right + top.
std::vector<std::vector<RMatrix>> vertex_table(const DwpfInstance& inst) {
    const int n = inst.size();
    std::vector<std::vector<RMatrix>> table(n, std::vector<RMatrix>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) table[i][j] = r_matrix(inst.model, inst.v_lines[i], inst.w_lines[j]);
    return table;
}

struct LatticeWalk {
    int n;
    const std::vector<std::vector<RMatrix>>& table;
    std::vector<int> top;  // vertical edge entering the current row, per column

    Complex visit(int i, int j, int left) {
        if (i == n) return 1.0;
        Complex total{};
        const int t = top[j];
        for (int b = 0; b < 2; ++b) {
            const int r = left + b - t;
            if (r < 0 || r > 1) continue;
            if (j == n - 1 && r != 1) continue;
            if (i == n - 1 && b != 1) continue;
            const Complex weight = table[i][j](2 * left + b, 2 * r + t);
            if (weight == Complex{}) continue;
            top[j] = b;
            const Complex rest = (j == n - 1) ? visit(i + 1, 0, 0) : visit(i, j + 1, r);
            top[j] = t;
            total += weight * rest;
        }
        return total;
    }
};

double min_gap(const std::vector<ModelLine>& lines) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j)
            gap = std::min(gap, std::abs(lines[i].rapidity - lines[j].rapidity));
    return gap;
}

}  // namespace

Complex z_enumerate(const DwpfInstance& inst) {
    check_square(inst);
    const int n = inst.size();
    if (n > 5) throw SizeLimit("lattice enumeration supports N <= 5");
    return n <= 3 ? z_enumerate_exhaustive(inst) : z_enumerate_pruned(inst);
}

Complex z_enumerate_pruned(const DwpfInstance& inst) {
    check_square(inst);
    const int n = inst.size();
    if (n > 5) throw SizeLimit("lattice enumeration supports N <= 5");
    const auto table = vertex_table(inst);
    LatticeWalk walk{n, table, std::vector<int>(n, 0)};
    return walk.visit(0, 0, 0);
}

Complex z_enumerate_exhaustive(const DwpfInstance& inst) {
    check_square(inst);
    const int n = inst.size();
    if (n > 3) throw SizeLimit("exhaustive enumeration supports N <= 3");
    const auto table = vertex_table(inst);
    const int internal = n * (n - 1);
    // horizontal[i][k]: edge left of column k in row i (k = 0 and k = n are boundary).
    // vertical[k][j]: edge above row k in column j (k = 0 and k = n are boundary).
    std::vector<std::vector<int>> horizontal(n, std::vector<int>(n + 1)), vertical(n + 1, std::vector<int>(n));
    for (int i = 0; i < n; ++i) {
        horizontal[i][0] = 0;
        horizontal[i][n] = 1;
    }
    for (int j = 0; j < n; ++j) {
        vertical[0][j] = 0;
        vertical[n][j] = 1;
    }
    Complex total{};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (2 * internal)); ++mask) {
        int bit = 0;
        for (int i = 0; i < n; ++i)
            for (int k = 1; k < n; ++k) horizontal[i][k] = (mask >> bit++) & 1;
        for (int k = 1; k < n; ++k)
            for (int j = 0; j < n; ++j) vertical[k][j] = (mask >> bit++) & 1;
        Complex weight = 1.0;
        for (int i = 0; i < n && weight != Complex{}; ++i) {
            for (int j = 0; j < n; ++j) {
                const int l = horizontal[i][j], r = horizontal[i][j + 1];
                const int t = vertical[i][j], b = vertical[i + 1][j];
                if (l + b != r + t) {
                    weight = 0.0;
                    break;
                }
                weight *= table[i][j](2 * l + b, 2 * r + t);
            }
        }
        total += weight;
    }
    return total;
}

Complex z_operator(const DwpfInstance& inst) {
    check_square(inst);
    const int n = inst.size();
    if (n > 12) throw SizeLimit("operator route supports N <= 12");
    const MonodromySpec spec{inst.model, inst.w_lines};
    StateVector state = reference_state(ReferenceKind::up_all, n);
    for (int i = 0; i < n; ++i) state = apply_monodromy_entry(OperatorLabel::B, inst.v_lines[i], spec, state);
    return state[state.dimension() - 1];
}

Complex z_izergin(const DwpfInstance& inst) {
    check_square(inst);
    if (!inst.model.is_xxz()) throw InvalidArgument("determinant formula applies to the XXZ model");
    if (min_gap(inst.v_lines) < 1e-8 || min_gap(inst.w_lines) < 1e-8)
        throw DegenerateNodes("coincident rapidities in the determinant formula");
    const int n = inst.size();
    const Complex g = inst.model.gamma;
    auto v = [&](int i) { return inst.v_lines[i].rapidity; };
    auto w = [&](int j) { return inst.w_lines[j].rapidity; };
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Complex entry = bracket(g);
            for (int k = 0; k < n; ++k)
                if (k != i) entry *= bracket(v(k) - w(j) + g) * bracket(v(k) - w(j));
            m(i, j) = entry;
        }
    Complex denominator = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) denominator *= bracket(v(i) - v(j)) * bracket(w(j) - w(i));
    return determinant(m) / denominator;
}

Complex z_factorized(const DwpfInstance& inst) {
    check_square(inst);
    if (!inst.model.is_felderhof()) throw InvalidArgument("product formula applies to the Felderhof model");
    const int n = inst.size();
    const auto& v = inst.v_lines;
    const auto& w = inst.w_lines;
    Complex z = 1.0;
    for (int j = 0; j < n; ++j)
        z *= sqrt_principal(bracket(2.0 * v[j].field)) * sqrt_principal(bracket(2.0 * w[j].field));
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
            z *= bracket(v[j].rapidity - v[k].rapidity + v[j].field + v[k].field) *
                 bracket(w[k].rapidity - w[j].rapidity + w[j].field + w[k].field);
    return z;
}

Complex z_closed_form(const DwpfInstance& inst) {
    return inst.model.is_xxz() ? z_izergin(inst) : z_factorized(inst);
}

bool ConditionReport::all_pass() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

ConditionReport korepin_conditions_check(const DwpfInstance& inst, const KorepinOptions& options) {
    check_square(inst);
    const int n = inst.size();
    if (n < 2 || n > 4) throw SizeLimit("condition check supports 2 <= N <= 4");
    const auto& route = options.route;
    const auto& tol = options.tol;
    const auto& v = inst.v_lines;
    const auto& w = inst.w_lines;
    ConditionReport report;

    auto with_last_row = [&](Complex rapidity) {
        DwpfInstance moved = inst;
        moved.v_lines[n - 1].rapidity = rapidity;
        return moved;
    };
    auto compare = [&](const std::string& name, Complex lhs, Complex rhs) {
        report.conditions.push_back({name, relative_gap(lhs, rhs), tol.close(lhs, rhs)});
    };

    if (inst.model.is_xxz()) {
        const Complex base = route(inst);
        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        double worst = 0.0;
        bool pass = true;
        while (std::next_permutation(order.begin(), order.end())) {
            DwpfInstance permuted = inst;
            for (int j = 0; j < n; ++j) permuted.w_lines[j] = w[order[j]];
            const Complex value = route(permuted);
            worst = std::max(worst, relative_gap(base, value));
            pass = pass && tol.close(base, value);
        }
        report.conditions.push_back({"symmetry", worst, pass});
    }

    TrigPolyOptions fit_options;
    fit_options.tol = tol;
    const auto fit = trig_poly_degree([&](Complex x) { return route(with_last_row(x)); }, n - 1, fit_options);
    report.conditions.push_back({"degree", fit.max_residual, fit.pass});

    if (inst.model.is_xxz()) {
        const Complex g = inst.model.gamma;
        const Complex wn = w[n - 1].rapidity;
        Complex prefactor = bracket(g);
        for (int i = 0; i < n - 1; ++i)
            prefactor *= bracket(v[i].rapidity - wn) * bracket(wn - w[i].rapidity - g);
        compare("recursion", route(with_last_row(wn - g)),
                options.recursion_scale * prefactor * route(inst.leading(n - 1)));
        compare("base_case", route(inst.leading(1)), bracket(g));
    } else {
        const Complex qn = v[n - 1].field, rn = w[n - 1].field, wn = w[n - 1].rapidity;
        const double scale = std::abs(route(inst));
        double worst = 0.0;
        for (int j = 0; j < n - 1; ++j) {
            const Complex at_zero = route(with_last_row(v[j].rapidity + v[j].field + qn));
            worst = std::max(worst, scale == 0.0 ? std::abs(at_zero) : std::abs(at_zero) / scale);
        }
        report.conditions.push_back({"zeros", worst, worst <= tol.abs_tol});

        Complex prefactor = sqrt_principal(bracket(2.0 * qn)) * sqrt_principal(bracket(2.0 * rn));
        for (int j = 0; j < n - 1; ++j)
            prefactor *= bracket(wn - w[j].rapidity + w[j].field + rn) * bracket(v[j].rapidity - wn + v[j].field - rn);
        compare("recursion", route(with_last_row(wn + qn + rn)),
                options.recursion_scale * prefactor * route(inst.leading(n - 1)));
        compare("base_case", route(inst.leading(1)),
                sqrt_principal(bracket(2.0 * v[0].field)) * sqrt_principal(bracket(2.0 * w[0].field)));
    }
    return report;
}

}  // namespace qism
