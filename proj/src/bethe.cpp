#include "qism/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <thread>

#include "qism/errors.hpp"

namespace qism {

Complex canonical_root(Complex z) {
    double im = std::remainder(z.imag(), kPi);  // in [-pi/2, pi/2]
    if (im <= -kPi / 2) im += kPi;
    return {z.real(), im};
}

namespace {

constexpr double kPoleGuard = 1e-10;

double periodic_distance(Complex a, Complex b) {
    const Complex d = canonical_root(a - b);
    return std::min({std::abs(d), std::abs(d - Complex(0, kPi)), std::abs(d + Complex(0, kPi))});
}

bool canonical_less(Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

// Sorting with exact comparisons is unstable under roundoff; round first so
// equal roots from different starts order identically.
Complex rounded(Complex z) {
    auto r = [](double x) { return std::round(x * 1e8) / 1e8; };
    return {r(z.real()), r(z.imag())};
}

void sort_roots(std::vector<Complex>& roots) {
    std::sort(roots.begin(), roots.end(),
              [](Complex a, Complex b) { return canonical_less(rounded(a), rounded(b)); });
}

double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    std::vector<int> order(b.size());
    std::iota(order.begin(), order.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, periodic_distance(a[i], b[order[i]]));
        best = std::min(best, worst);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

struct BetheSystem {
    std::span<const Complex> w;
    Complex g;

    void evaluate(const std::vector<Complex>& v, std::vector<Complex>& f, std::vector<double>& scale,
                  ComplexMatrix* jacobian) const {
        const std::size_t n = v.size();
        f.assign(n, 0.0);
        scale.assign(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            // Factor arguments; owner[l] is the index k of v_k appearing with a minus sign (or n).
            std::vector<Complex> pa, qa;
            std::vector<std::size_t> pk, qk;
            for (const auto& wj : w) {
                pa.push_back(v[i] - wj + g);
                pk.push_back(n);
                qa.push_back(v[i] - wj);
                qk.push_back(n);
            }
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i) continue;
                pa.push_back(v[i] - v[k] - g);
                pk.push_back(k);
                qa.push_back(v[i] - v[k] + g);
                qk.push_back(k);
            }
            auto product = [](const std::vector<Complex>& args) {
                Complex acc = 1.0;
                for (const auto& a : args) acc *= bracket(a);
                return acc;
            };
            const Complex p = product(pa), q = product(qa);
            f[i] = p - q;
            scale[i] = std::max(std::abs(p), std::abs(q));
            if (!jacobian) continue;
            // d/dv of a product of brackets: sum over factors with sinh -> cosh.
            auto accumulate = [&](const std::vector<Complex>& args, const std::vector<std::size_t>& owner,
                                  double sign) {
                for (std::size_t l = 0; l < args.size(); ++l) {
                    Complex term = std::cosh(args[l]);
                    for (std::size_t m = 0; m < args.size(); ++m)
                        if (m != l) term *= bracket(args[m]);
                    (*jacobian)(i, i) += sign * term;
                    if (owner[l] < n) (*jacobian)(i, owner[l]) -= sign * term;
                }
            };
            accumulate(pa, pk, 1.0);
            accumulate(qa, qk, -1.0);
        }
    }

    double residual_norm(const std::vector<Complex>& v) const {
        std::vector<Complex> f;
        std::vector<double> scale;
        evaluate(v, f, scale, nullptr);
        double acc = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (scale[i] == 0.0 || !std::isfinite(scale[i])) return std::numeric_limits<double>::infinity();
            acc = std::max(acc, std::abs(f[i]) / scale[i]);
        }
        return acc;
    }
};

bool pole_hit(std::span<const Complex> v, std::span<const Complex> w, Complex g) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (const auto& wj : w)
            if (std::abs(bracket(v[i] - wj)) < kPoleGuard) return true;
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (k == i) continue;
            if (std::abs(bracket(v[i] - v[k] - g)) < kPoleGuard || std::abs(bracket(v[i] - v[k] + g)) < kPoleGuard)
                return true;
        }
    }
    return false;
}

bool has_coincident_roots(const std::vector<Complex>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t k = i + 1; k < v.size(); ++k)
            if (periodic_distance(v[i], v[k]) < 1e-6) return true;
    return false;
}

std::optional<std::vector<Complex>> newton_from(const BetheSystem& system, std::vector<Complex> v, double accept) {
    const std::size_t n = v.size();
    double residual = system.residual_norm(v);
    for (int iteration = 0; iteration < 100 && std::isfinite(residual); ++iteration) {
        if (residual < 1e-12) break;
        std::vector<Complex> f;
        std::vector<double> scale;
        ComplexMatrix jac(n, n);
        system.evaluate(v, f, scale, &jac);
        // Row scaling keeps the linear solve well balanced.
        for (std::size_t i = 0; i < n; ++i) {
            const double s = scale[i] > 0 ? 1.0 / scale[i] : 1.0;
            f[i] *= -s;
            for (std::size_t k = 0; k < n; ++k) jac(i, k) *= s;
        }
        LuDecomposition lu(jac);
        if (lu.singular()) return std::nullopt;
        const auto step = lu.solve(f);
        double step_size = 0.0;
        for (const auto& s : step) step_size = std::max(step_size, std::abs(s));
        if (!std::isfinite(step_size)) return std::nullopt;

        double factor = 1.0;
        bool improved = false;
        std::vector<Complex> trial(n);
        for (int halving = 0; halving <= 30; ++halving) {
            for (std::size_t i = 0; i < n; ++i) trial[i] = v[i] + factor * step[i];
            const double r = system.residual_norm(trial);
            if (r < residual) {
                v = trial;
                residual = r;
                improved = true;
                break;
            }
            factor *= 0.5;
        }
        if (!improved || factor * step_size < 1e-14) break;
    }
    if (!(residual < accept)) return std::nullopt;
    for (auto& z : v) z = canonical_root(z);
    if (pole_hit(v, system.w, system.g) || has_coincident_roots(v)) return std::nullopt;
    return v;
}

std::vector<Complex> random_start(std::size_t n, std::span<const Complex> w, std::uint64_t seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    std::mt19937_64 engine(seq);
    double lo = -1.0, hi = 1.0;
    for (const auto& wj : w) {
        lo = std::min(lo, wj.real() - 1.0);
        hi = std::max(hi, wj.real() + 1.0);
    }
    std::uniform_real_distribution<double> re(lo, hi), im(-kPi / 2, kPi / 2);
    std::vector<Complex> v(n);
    for (auto& z : v) z = {re(engine), im(engine)};
    return v;
}

std::vector<Complex> polynomial_roots_single(std::span<const Complex> w, Complex g) {
    // sinh(v - a) = e^{-v-a} (t - e^{2a}) / 2 with t = e^{2v}; the common factor
    // e^{-Mv} 2^{-M} drops out of  prod [v - w + g] - prod [v - w] = 0.
    std::vector<Complex> shifted, plain;
    Complex sum_shifted{}, sum_plain{};
    for (const auto& wj : w) {
        shifted.push_back(std::exp(2.0 * (wj - g)));
        plain.push_back(std::exp(2.0 * wj));
        sum_shifted += wj - g;
        sum_plain += wj;
    }
    const auto p = std::exp(-sum_shifted) * PolynomialCoeffs::from_roots(shifted) +
                   (-std::exp(-sum_plain)) * PolynomialCoeffs::from_roots(plain);
    std::vector<Complex> out;
    for (const auto& t : poly_roots(p.trimmed())) {
        if (std::abs(t) == 0.0) continue;
        out.push_back(canonical_root(0.5 * std::log(t)));
    }
    return out;
}

bool bethe_vector_vanishes(const std::vector<Complex>& roots, std::span<const Complex> w, Complex g) {
    MonodromySpec spec{Model::xxz(g), {}};
    for (const auto& wj : w) spec.quantum_lines.push_back({wj, {}});
    std::vector<ModelLine> lines;
    double single = 1.0;
    const auto up = reference_state(ReferenceKind::up_all, spec.sites());
    for (const auto& v : roots) {
        lines.push_back({v, {}});
        single *= apply_monodromy_entry(OperatorLabel::B, lines.back(), spec, up).norm();
    }
    return !(bethe_vector(lines, spec).norm() > 1e-8 * single);
}

void merge(std::vector<BetheRootSet>& sets, BetheRootSet candidate) {
    for (const auto& s : sets)
        if (set_distance(s.roots, candidate.roots) < 1e-6) return;
    sets.push_back(std::move(candidate));
}

void sort_sets(std::vector<BetheRootSet>& sets) {
    std::sort(sets.begin(), sets.end(), [](const BetheRootSet& a, const BetheRootSet& b) {
        return std::lexicographical_compare(a.roots.begin(), a.roots.end(), b.roots.begin(), b.roots.end(),
                                            [](Complex x, Complex y) { return canonical_less(rounded(x), rounded(y)); });
    });
}

}  // namespace

double xxz_bethe_residual(std::span<const Complex> v, std::span<const Complex> w, Complex gamma) {
    if (pole_hit(v, w, gamma)) throw PoleHit("Bethe equations evaluated at a pole");
    const BetheSystem system{w, gamma};
    return system.residual_norm({v.begin(), v.end()});
}

std::vector<BetheRootSet> xxz_solve(int n, std::span<const Complex> w, Complex gamma, const XxzSolveOptions& options) {
    const int m = static_cast<int>(w.size());
    if (n < 1 || n > 3 || n > m || m > 8) throw SizeLimit("XXZ solver supports 1 <= N <= 3, N <= M <= 8");
    const Model model = Model::xxz(gamma);
    std::vector<BetheRootSet> sets;

    const bool polynomial =
        options.route == SolveRoute::polynomial || (options.route == SolveRoute::automatic && n == 1);
    if (polynomial) {
        if (n != 1) throw InvalidArgument("the polynomial route needs N = 1");
        for (const auto& root : polynomial_roots_single(w, gamma)) {
            const std::vector<Complex> v{root};
            if (pole_hit(v, w, gamma)) continue;
            const double residual = xxz_bethe_residual(v, w, gamma);
            if (residual < options.accept) merge(sets, {model, v, residual});
        }
    } else {
        const BetheSystem system{w, gamma};
        std::vector<std::optional<std::vector<Complex>>> found(options.starts);
        auto run = [&](int begin, int end) {
            for (int k = begin; k < end; ++k)
                found[k] = newton_from(system, random_start(n, w, options.seed, k), options.accept);
        };
        const int threads = std::clamp(options.threads, 1, std::max(1, options.starts));
        if (threads == 1) {
            run(0, options.starts);
        } else {
            std::vector<std::thread> pool;
            const int chunk = (options.starts + threads - 1) / threads;
            for (int t = 0; t < threads; ++t) {
                const int begin = t * chunk, end = std::min(options.starts, begin + chunk);
                if (begin < end) pool.emplace_back(run, begin, end);
            }
            for (auto& th : pool) th.join();
        }
        for (auto& v : found) {
            if (!v) continue;
            sort_roots(*v);
            merge(sets, {model, *v, system.residual_norm(*v)});
        }
    }
    if (options.require_nonvanishing)
        std::erase_if(sets, [&](const BetheRootSet& s) { return bethe_vector_vanishes(s.roots, w, gamma); });
    if (sets.empty()) throw NoSolutionFound("no start converged for N = " + std::to_string(n));
    for (auto& s : sets) sort_roots(s.roots);
    sort_sets(sets);
    return sets;
}

namespace {

Complex felderhof_defect_value(Complex x, std::span<const ModelLine> w_lines, int n, Complex* derivative) {
    Complex minus = 1.0, plus = 1.0, d_minus = 0.0, d_plus = 0.0;
    for (const auto& line : w_lines) {
        const Complex a = x - line.rapidity + line.field, b = x - line.rapidity - line.field;
        d_minus = d_minus * bracket(a) + minus * std::cosh(a);
        d_plus = d_plus * bracket(b) + plus * std::cosh(b);
        minus *= bracket(a);
        plus *= bracket(b);
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    if (derivative) *derivative = sign * d_minus + d_plus;
    return sign * minus + plus;
}

}  // namespace

double felderhof_bethe_defect(Complex x, std::span<const ModelLine> w_lines, int n) {
    return std::abs(felderhof_defect_value(x, w_lines, n, nullptr));
}

std::vector<Complex> felderhof_bethe_roots(std::span<const ModelLine> w_lines, int n) {
    if (w_lines.empty()) throw InvalidArgument("Felderhof Bethe equation needs M >= 1");
    std::vector<Complex> minus_roots, plus_roots;
    Complex minus_sum{}, plus_sum{};
    for (const auto& line : w_lines) {
        minus_roots.push_back(std::exp(2.0 * (line.rapidity - line.field)));
        plus_roots.push_back(std::exp(2.0 * (line.rapidity + line.field)));
        minus_sum += line.rapidity - line.field;
        plus_sum += line.rapidity + line.field;
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const auto p = (sign * std::exp(-minus_sum)) * PolynomialCoeffs::from_roots(minus_roots) +
                   std::exp(-plus_sum) * PolynomialCoeffs::from_roots(plus_roots);
    std::vector<Complex> out;
    for (const auto& t : poly_roots(p.trimmed())) {
        Complex x = 0.5 * std::log(t);
        for (int k = 0; k < 20; ++k) {
            Complex d;
            const Complex value = felderhof_defect_value(x, w_lines, n, &d);
            if (std::abs(value) < 1e-15 || std::abs(d) == 0.0) break;
            const Complex step = value / d;
            x -= step;
            if (std::abs(step) < 1e-15) break;
        }
        x = canonical_root(x);
        const double defect = felderhof_bethe_defect(x, w_lines, n);
        if (!(defect < 1e-10))
            throw NonConvergence("Felderhof Bethe root with defect " + std::to_string(defect));
        out.push_back(x);
    }
    sort_roots(out);
    return out;
}

StateVector bethe_vector(std::span<const ModelLine> v_lines, const MonodromySpec& spec) {
    StateVector state = reference_state(ReferenceKind::up_all, spec.sites());
    for (auto it = v_lines.rbegin(); it != v_lines.rend(); ++it)
        state = apply_monodromy_entry(OperatorLabel::B, *it, spec, state);
    return state;
}

StateVector dual_bethe_vector(std::span<const ModelLine> v_lines, const MonodromySpec& spec) {
    StateVector state = reference_state(ReferenceKind::up_all, spec.sites());
    for (auto it = v_lines.rbegin(); it != v_lines.rend(); ++it)
        state = apply_monodromy_entry_dual(OperatorLabel::C, *it, spec, state);
    return state;
}

EigenvectorCheck parallelism(const StateVector& x, const StateVector& y) {
    const double xx = x.norm();
    if (xx < 1e-12) throw ZeroVector("Bethe vector vanishes");
    const Complex tau = inner(x, y) / (xx * xx);
    const double yy = y.norm();
    const double residual = yy == 0.0 ? 0.0 : (y - tau * x).norm() / yy;
    return {residual, tau};
}

EigenvectorCheck eigenvector_check(std::span<const ModelLine> v_lines, const MonodromySpec& spec,
                                   const ModelLine& probe) {
    const auto psi = bethe_vector(v_lines, spec);
    if (psi.norm() < 1e-12) throw ZeroVector("Bethe vector vanishes");
    return parallelism(psi, apply_transfer(probe, spec, psi));
}

EigenvectorCheck dual_eigenvector_check(std::span<const ModelLine> v_lines, const MonodromySpec& spec,
                                        const ModelLine& probe) {
    const auto psi = dual_bethe_vector(v_lines, spec);
    if (psi.norm() < 1e-12) throw ZeroVector("dual Bethe vector vanishes");
    return parallelism(psi, apply_transfer_dual(probe, spec, psi));
}

}  // namespace qism
