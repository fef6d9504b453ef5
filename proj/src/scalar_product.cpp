#include "qism/scalar_product.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "qism/errors.hpp"
#include "qism/spin_chain.hpp"

namespace qism {

ScalarProductInstance ScalarProductInstance::truncated(int k) const {
    return {model, {u_lines.begin(), u_lines.begin() + k}, v_lines, w_lines};
}

void ScalarProductInstance::validate() const {
    if (big_n() < 1) throw SizeMismatch("scalar product needs N >= 1");
    if (n() > big_n() || big_n() > m())
        throw SizeMismatch("scalar product needs 0 <= n <= N <= M, got n=" + std::to_string(n()) +
                           " N=" + std::to_string(big_n()) + " M=" + std::to_string(m()));
}

namespace {

constexpr double kNodeGap = 1e-8;

bool close_mod_pi(Complex a, Complex b) { return std::abs(bracket(a - b)) < kNodeGap; }

void require_distinct(std::span<const ModelLine> lines, const char* what) {
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j)
            if (close_mod_pi(lines[i].rapidity, lines[j].rapidity))
                throw DegenerateNodes(std::string("coincident ") + what + " rapidities");
}

Complex sqrt_bracket2(Complex field) { return sqrt_principal(bracket(2.0 * field)); }

}  // namespace

Complex sp_oracle(const ScalarProductInstance& inst) {
    inst.validate();
    const int m = inst.m();
    if (m > 12) throw SizeLimit("operator route supports M <= 12");
    const MonodromySpec spec{inst.model, inst.w_lines};
    StateVector state = reference_state(ReferenceKind::up_all, m);
    const bool xxz = inst.model.is_xxz();
    const int big_n = inst.big_n(), n = inst.n();
    for (int k = 0; k < big_n; ++k) {
        const auto& line = inst.v_lines[xxz ? big_n - 1 - k : k];
        state = apply_monodromy_entry(OperatorLabel::B, line, spec, state);
    }
    for (int k = 0; k < n; ++k) {
        const auto& line = inst.u_lines[xxz ? n - 1 - k : k];
        state = apply_monodromy_entry(OperatorLabel::C, line, spec, state);
    }
    return contract(reference_state(ReferenceKind::down_prefix, m, inst.remaining()), state);
}

Complex f_func(int i, Complex w, std::span<const ModelLine> v_lines, Complex gamma) {
    const Complex vi = v_lines[i].rapidity;
    if (close_mod_pi(vi, w)) throw PoleHit("f evaluated at its pole w = v_i");
    Complex acc = bracket(gamma) / bracket(vi - w);
    for (std::size_t k = 0; k < v_lines.size(); ++k)
        if (static_cast<int>(k) != i) acc *= bracket(v_lines[k].rapidity - w + gamma);
    return acc;
}

Complex g_func(int i, Complex u, std::span<const ModelLine> v_lines, std::span<const ModelLine> w_lines,
               Complex gamma) {
    const Complex vi = v_lines[i].rapidity;
    if (close_mod_pi(vi, u)) throw PoleHit("g evaluated within 1e-8 of its removable pole u = v_i");
    Complex plus = 1.0, minus = 1.0;
    for (std::size_t k = 0; k < v_lines.size(); ++k) {
        if (static_cast<int>(k) == i) continue;
        plus *= bracket(v_lines[k].rapidity - u + gamma);
        minus *= bracket(v_lines[k].rapidity - u - gamma);
    }
    for (const auto& line : w_lines) {
        plus *= bracket(u - line.rapidity + gamma);
        minus *= bracket(u - line.rapidity);
    }
    return bracket(gamma) / bracket(vi - u) * (plus - minus);
}

Complex sn_determinant(const ScalarProductInstance& inst) {
    inst.validate();
    if (!inst.model.is_xxz()) throw InvalidArgument("determinant formula applies to the XXZ model");
    const int n = inst.n(), big_n = inst.big_n(), m = inst.m(), rest = inst.remaining();
    const Complex g = inst.model.gamma;
    const auto& u = inst.u_lines;
    const auto& v = inst.v_lines;
    const auto& w = inst.w_lines;
    require_distinct(u, "u");
    require_distinct(v, "v");
    require_distinct(std::span(w).first(rest), "w");
    for (const auto& ui : u) {
        for (const auto& vj : v)
            if (close_mod_pi(ui.rapidity, vj.rapidity)) throw DegenerateNodes("u coincides with a Bethe root");
        for (int j = 0; j < rest; ++j)
            if (close_mod_pi(ui.rapidity, w[j].rapidity)) throw DegenerateNodes("u coincides with a leading w");
    }
    for (const auto& vi : v)
        for (int j = 0; j < rest; ++j)
            if (close_mod_pi(vi.rapidity, w[j].rapidity)) throw DegenerateNodes("v coincides with a leading w");

    ComplexMatrix mat(big_n, big_n);
    for (int i = 0; i < big_n; ++i) {
        for (int j = 0; j < rest; ++j) mat(i, j) = f_func(i, w[j].rapidity, v, g);
        for (int c = 0; c < n; ++c) mat(i, rest + c) = g_func(i, u[n - 1 - c].rapidity, v, w, g);
    }
    Complex numerator = determinant(mat);
    for (int i = 0; i < big_n; ++i)
        for (int j = 0; j < m; ++j) numerator *= bracket(v[i].rapidity - w[j].rapidity);
    Complex denominator = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < rest; ++j) denominator *= bracket(u[i].rapidity - w[j].rapidity);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) denominator *= bracket(u[i].rapidity - u[j].rapidity);
    for (int i = 0; i < big_n; ++i)
        for (int j = i + 1; j < big_n; ++j) denominator *= bracket(v[i].rapidity - v[j].rapidity);
    for (int i = 0; i < rest; ++i)
        for (int j = i + 1; j < rest; ++j) denominator *= bracket(w[j].rapidity - w[i].rapidity);
    return numerator / denominator;
}

Complex slavnov_determinant(const ScalarProductInstance& inst) {
    inst.validate();
    if (!inst.model.is_xxz()) throw InvalidArgument("Slavnov formula applies to the XXZ model");
    if (inst.n() != inst.big_n()) throw InvalidArgument("Slavnov formula needs n = N");
    const int big_n = inst.big_n();
    const Complex g = inst.model.gamma;
    const auto& u = inst.u_lines;
    const auto& v = inst.v_lines;
    const auto& w = inst.w_lines;
    require_distinct(u, "u");
    require_distinct(v, "v");
    for (const auto& ui : u)
        for (const auto& vj : v)
            if (close_mod_pi(ui.rapidity, vj.rapidity)) throw DegenerateNodes("u coincides with a Bethe root");

    ComplexMatrix mat(big_n, big_n);
    for (int i = 0; i < big_n; ++i) {
        Complex w_plain = 1.0, w_shifted = 1.0;
        for (const auto& line : w) {
            w_plain *= bracket(u[i].rapidity - line.rapidity);
            w_shifted *= bracket(u[i].rapidity - line.rapidity + g);
        }
        for (int j = 0; j < big_n; ++j) {
            Complex minus = w_plain, plus = w_shifted;
            for (int k = 0; k < big_n; ++k) {
                if (k == j) continue;
                minus *= bracket(v[k].rapidity - u[i].rapidity - g);
                plus *= bracket(v[k].rapidity - u[i].rapidity + g);
            }
            mat(i, j) = (minus - plus) / bracket(u[i].rapidity - v[j].rapidity);
        }
    }
    Complex prefactor = std::pow(bracket(g), big_n);
    for (const auto& vi : v)
        for (const auto& wj : w) prefactor *= bracket(vi.rapidity - wj.rapidity);
    for (int i = 0; i < big_n; ++i)
        for (int j = i + 1; j < big_n; ++j)
            prefactor /= bracket(u[j].rapidity - u[i].rapidity) * bracket(v[i].rapidity - v[j].rapidity);
    return prefactor * determinant(mat);
}

Complex felderhof_sn(const ScalarProductInstance& inst) {
    inst.validate();
    if (!inst.model.is_felderhof()) throw InvalidArgument("product formula applies to the Felderhof model");
    const int n = inst.n(), big_n = inst.big_n(), m = inst.m(), rest = inst.remaining();
    const auto& u = inst.u_lines;
    const auto& v = inst.v_lines;
    const auto& w = inst.w_lines;
    for (const auto& ui : u)
        for (const auto& vk : v)
            if (close_mod_pi(ui.rapidity + ui.field, vk.rapidity + vk.field))
                throw DegenerateNodes("u + p coincides with a Bethe root v + q");

    Complex s = 1.0;
    for (int j = 0; j < n; ++j) s *= sqrt_bracket2(u[j].field);
    for (int j = 0; j < big_n; ++j) s *= sqrt_bracket2(v[j].field);
    for (int j = 0; j < rest; ++j) s *= sqrt_bracket2(w[j].field);

    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) s *= bracket(u[k].rapidity - u[j].rapidity + u[j].field + u[k].field);
    for (int j = 0; j < big_n; ++j)
        for (int k = j + 1; k < big_n; ++k) s *= bracket(v[j].rapidity - v[k].rapidity + v[j].field + v[k].field);
    for (int j = 0; j < rest; ++j)
        for (int k = j + 1; k < rest; ++k) s *= bracket(w[k].rapidity - w[j].rapidity + w[j].field + w[k].field);

    for (int j = 0; j < n; ++j)
        for (int k = 0; k < rest; ++k) s *= bracket(w[k].rapidity - u[j].rapidity + u[j].field + w[k].field);
    for (int j = 0; j < big_n; ++j)
        for (int k = rest; k < m; ++k) s *= bracket(v[j].rapidity - w[k].rapidity + v[j].field - w[k].field);

    const double sign = (big_n % 2 == 0) ? 1.0 : -1.0;
    for (int j = 0; j < n; ++j) {
        const Complex x = u[j].rapidity + u[j].field;
        for (int k = 0; k < big_n; ++k) s /= bracket(x - v[k].rapidity - v[k].field);
        Complex minus = 1.0, plus = 1.0;
        for (int k = 0; k < m; ++k) {
            minus *= bracket(x - w[k].rapidity + w[k].field);
            plus *= bracket(x - w[k].rapidity - w[k].field);
        }
        s *= sign * minus + plus;
    }
    return s;
}

Complex sn_closed_form(const ScalarProductInstance& inst) {
    return inst.model.is_xxz() ? sn_determinant(inst) : felderhof_sn(inst);
}

ConditionReport sn_conditions_check(const ScalarProductInstance& inst, const ScalarConditionOptions& options) {
    inst.validate();
    const int n = inst.n(), big_n = inst.big_n(), m = inst.m(), rest = inst.remaining();
    if (n < 1) throw InvalidArgument("condition check needs n >= 1");
    if (m > 6) throw SizeLimit("condition check supports M <= 6");
    const auto& route = options.route;
    const auto& tol = options.tol;
    const auto& v = inst.v_lines;
    const auto& w = inst.w_lines;
    const bool xxz = inst.model.is_xxz();
    ConditionReport report;

    auto with_last_u = [&](Complex rapidity) {
        ScalarProductInstance moved = inst;
        moved.u_lines[n - 1].rapidity = rapidity;
        return moved;
    };
    auto compare = [&](const std::string& name, Complex lhs, Complex rhs) {
        report.conditions.push_back({name, relative_gap(lhs, rhs), tol.close(lhs, rhs)});
    };

    // 1. Symmetry in the trailing quantum lines (fields travel with their rapidities).
    {
        const Complex base = route(inst);
        std::vector<int> order(m - rest);
        std::iota(order.begin(), order.end(), rest);
        double worst = 0.0;
        bool pass = true;
        while (std::next_permutation(order.begin(), order.end())) {
            ScalarProductInstance permuted = inst;
            for (std::size_t k = 0; k < order.size(); ++k) permuted.w_lines[rest + k] = w[order[k]];
            const Complex value = route(permuted);
            worst = std::max(worst, relative_gap(base, value));
            pass = pass && tol.close(base, value);
        }
        report.conditions.push_back({"symmetry", worst, pass});
    }

    // 2. Degree M - 1 in u_n, and the zeros.
    TrigPolyOptions fit_options;
    fit_options.tol = tol;
    const auto fit = trig_poly_degree([&](Complex x) { return route(with_last_u(x)); }, m - 1, fit_options);
    report.conditions.push_back({"degree", fit.max_residual, fit.pass});

    const Complex pn = inst.u_lines[n - 1].field;
    {
        const double scale = std::abs(route(inst));
        double worst = 0.0;
        for (int j = 0; j < rest; ++j) {
            const Complex at = xxz ? w[j].rapidity - inst.model.gamma : pn + w[j].rapidity + w[j].field;
            const double value = std::abs(route(with_last_u(at)));
            worst = std::max(worst, scale == 0.0 ? value : value / scale);
        }
        report.conditions.push_back({"zeros", worst, worst <= tol.abs_tol});
    }

    // 3. Recursion to S_{n-1}.
    const ModelLine& next = w[rest];
    Complex prefactor = 1.0;
    Complex at;
    if (xxz) {
        at = next.rapidity;
        for (int i = 0; i < m; ++i) prefactor *= bracket(next.rapidity - w[i].rapidity + inst.model.gamma);
    } else {
        at = next.rapidity + next.field - pn;
        prefactor = sqrt_bracket2(pn) * sqrt_bracket2(next.field);
        for (int j = 0; j < rest; ++j)
            prefactor *= bracket(w[j].rapidity - next.rapidity + w[j].field - next.field + 2.0 * pn);
        for (int j = rest + 1; j < m; ++j)
            prefactor *= bracket(next.rapidity - w[j].rapidity + w[j].field + next.field);
    }
    compare("recursion", route(with_last_u(at)), options.recursion_scale * prefactor * route(inst.truncated(n - 1)));

    // 4. S_0 against the partition function on the leading N columns.
    const DwpfInstance lattice{inst.model, v, {w.begin(), w.begin() + big_n}};
    Complex s0 = z_closed_form(lattice);
    for (int i = 0; i < big_n; ++i)
        for (int j = big_n; j < m; ++j)
            s0 *= xxz ? bracket(v[i].rapidity - w[j].rapidity)
                      : bracket(v[i].rapidity - w[j].rapidity + v[i].field - w[j].field);
    compare("base_case", route(inst.truncated(0)), s0);
    return report;
}

}  // namespace qism
