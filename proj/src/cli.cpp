#include "qism/cli.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <thread>

#include <CLI11.hpp>

#include "qism/bethe.hpp"
#include "qism/errors.hpp"
#include "qism/hamiltonian.hpp"
#include "qism/partition_function.hpp"
#include "qism/scalar_product.hpp"
#include "qism/spin_chain.hpp"

namespace qism {

namespace {

// Independent stream per (seed, suite, model, trial).
class Draw {
public:
    Draw(std::uint64_t seed, int stream, int index) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index)};
        engine_.seed(seq);
    }

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    Complex complex(double scale = 1.0) { return {real(-scale, scale), real(-scale, scale)}; }
    Complex gamma() { return {real(0.2, 1.0), real(-0.5, 0.5)}; }
    Complex field() { return {real(0.2, 0.8), real(-0.3, 0.3)}; }
    std::uint64_t bits() { return engine_(); }

    std::vector<Complex> complexes(int n) {
        std::vector<Complex> out(n);
        for (auto& z : out) z = complex();
        return out;
    }
    std::vector<ModelLine> lines(ModelKind kind, int n) {
        std::vector<ModelLine> out(n);
        for (auto& line : out) {
            line.rapidity = complex();
            if (kind == ModelKind::felderhof) line.field = field();
        }
        return out;
    }
    StateVector state(int sites) {
        StateVector s(sites);
        for (std::size_t k = 0; k < s.dimension(); ++k) s[k] = complex();
        return s;
    }

private:
    std::mt19937_64 engine_;
};

int stream(int suite, ModelKind kind) { return 16 * suite + static_cast<int>(kind); }

std::string label(ModelKind kind) { return std::string(to_string(kind)); }

std::string trial_name(const std::string& base, int k) { return base + "#" + std::to_string(k); }

template <class Fn>
std::vector<CheckResult> run_trials(int count, int threads, const std::string& base, Fn fn) {
    std::vector<std::vector<CheckResult>> slots(count);
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int k; (k = next++) < count;) {
            try {
                slots[k] = fn(k);
            } catch (const std::exception& e) {
                slots[k] = {failed_check(trial_name(base, k), e.what())};
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::min(threads, count); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::vector<CheckResult> out;
    for (auto& slot : slots)
        for (auto& c : slot) out.push_back(std::move(c));
    return out;
}

void append(std::vector<CheckResult>& to, std::vector<CheckResult> from) {
    for (auto& c : from) to.push_back(std::move(c));
}

struct Context {
    const RunOptions& o;

    std::vector<ModelKind> models() const {
        if (o.model) return {*o.model};
        return {ModelKind::xxz, ModelKind::felderhof};
    }
    double tol(double fallback) const { return o.tol.value_or(fallback); }
    int trials(int fallback) const { return o.trials.value_or(fallback); }
    int threads() const { return std::max(1, o.threads); }
};

void require(bool ok, const std::string& message) {
    if (!ok) throw UsageError(message);
}

std::vector<ModelLine> to_lines(const std::vector<Complex>& rapidities, const std::vector<Complex>& fields) {
    std::vector<ModelLine> out;
    for (std::size_t k = 0; k < rapidities.size(); ++k) out.push_back({rapidities[k], fields.empty() ? 0.0 : fields[k]});
    return out;
}

std::vector<Complex> rapidities_of(const std::vector<ModelLine>& lines) {
    std::vector<Complex> out;
    for (const auto& l : lines) out.push_back(l.rapidity);
    return out;
}

std::vector<Complex> fields_of(const std::vector<ModelLine>& lines) {
    std::vector<Complex> out;
    for (const auto& l : lines) out.push_back(l.field);
    return out;
}

// Picks a random XXZ instance whose v-lines solve the Bethe equations.
ScalarProductInstance random_xxz_instance(int n, int big_n, int m, Draw& d) {
    for (int attempt = 0; attempt < 50; ++attempt) {
        const auto w = d.complexes(m);
        const Complex g = d.gamma();
        XxzSolveOptions options;
        options.seed = d.bits();
        std::vector<BetheRootSet> sets;
        try {
            sets = xxz_solve(big_n, w, g, options);
        } catch (const NoSolutionFound&) {
            continue;
        }
        const auto& chosen = sets[d.bits() % sets.size()];
        return {Model::xxz(g), to_lines(d.complexes(n), {}), to_lines(chosen.roots, {}), to_lines(w, {})};
    }
    throw NoSolutionFound("no Bethe root set with a non-vanishing Bethe vector in 50 draws");
}

ScalarProductInstance random_felderhof_instance(int n, int big_n, int m, Draw& d) {
    ScalarProductInstance inst{Model::felderhof(), {}, {}, d.lines(ModelKind::felderhof, m)};
    auto roots = felderhof_bethe_roots(inst.w_lines, big_n);
    std::shuffle(roots.begin(), roots.end(), std::mt19937_64(d.bits()));
    for (int k = 0; k < big_n; ++k) {
        const Complex q = d.field();
        inst.v_lines.push_back({roots[k] - q, q});
    }
    inst.u_lines = d.lines(ModelKind::felderhof, n);
    return inst;
}

ScalarProductInstance random_instance(ModelKind kind, int n, int big_n, int m, Draw& d) {
    return kind == ModelKind::xxz ? random_xxz_instance(n, big_n, m, d) : random_felderhof_instance(n, big_n, m, d);
}

// ---------------------------------------------------------------------------
// verify suites
// ---------------------------------------------------------------------------

std::vector<CheckResult> suite_ybe(const Context& c) {
    std::vector<CheckResult> out;
    for (const auto kind : c.models()) {
        const std::string base = "ybe/" + label(kind);
        append(out, run_trials(c.trials(100), c.threads(), base, [&](int k) {
            Draw d(c.o.seed, stream(1, kind), k);
            const Model model = kind == ModelKind::xxz ? Model::xxz(d.gamma()) : Model::felderhof();
            const auto lines = d.lines(kind, 3);
            return std::vector{make_check(trial_name(base, k), {},
                                          ybe_residual(model, lines[0], lines[1], lines[2]), c.tol(1e-12))};
        }));
    }
    return out;
}

std::vector<CheckResult> suite_crossing(const Context& c) {
    std::vector<CheckResult> out;
    append(out, run_trials(c.trials(100), c.threads(), "crossing/xxz", [&](int k) {
        Draw d(c.o.seed, stream(2, ModelKind::xxz), k);
        const Complex g = d.gamma(), u = d.complex(), v = d.complex();
        std::vector<CheckResult> checks{
            make_check(trial_name("crossing/xxz", k), {}, crossing_residual(u, v, g), c.tol(1e-12))};
        for (int l = 1; l <= 2; ++l)
            for (int m = 1; m <= 2; ++m) {
                const std::string name = "rotation/xxz/L=" + std::to_string(l) + ",M=" + std::to_string(m);
                checks.push_back(make_check(trial_name(name, k), {},
                                            rotation_identity_residual(d.complexes(l), d.complexes(m), g),
                                            c.tol(1e-12)));
            }
        return checks;
    }));
    return out;
}

std::vector<CheckResult> suite_commutation(const Context& c) {
    const int max_sites = c.o.m.value_or(4);
    require(max_sites >= 1 && max_sites <= 8, "commutation supports 1 <= M <= 8");
    std::vector<CheckResult> out;
    for (const auto kind : c.models()) {
        const std::string base = "commutation/" + label(kind);
        append(out, run_trials(c.trials(20), c.threads(), base, [&](int k) {
            Draw d(c.o.seed, stream(3, kind), k);
            const int sites = 1 + k % max_sites;
            const Model model = kind == ModelKind::xxz ? Model::xxz(d.gamma()) : Model::felderhof();
            const MonodromySpec spec{model, d.lines(kind, sites)};
            const auto aux = d.lines(kind, 2);
            const auto probe = d.state(sites);
            const auto relations = kind == ModelKind::xxz ? xxz_relations() : felderhof_relations();
            std::vector<CheckResult> checks;
            for (const auto rel : relations)
                checks.push_back(make_check(trial_name(base + "/" + std::string(to_string(rel)), k), {},
                                            commutation_residual(rel, aux[0], aux[1], spec, probe), c.tol(1e-10)));
            return checks;
        }));
    }
    return out;
}

std::vector<int> dwpf_sizes(const Context& c) {
    if (!c.o.big_n) return {1, 2, 3};
    require(*c.o.big_n >= 1 && *c.o.big_n <= 5, "dwpf supports 1 <= N <= 5");
    return {*c.o.big_n};
}

std::vector<CheckResult> suite_dwpf(const Context& c) {
    std::vector<CheckResult> out;
    for (const auto kind : c.models()) {
        for (const int n : dwpf_sizes(c)) {
            const std::string base = "dwpf/" + label(kind) + "/N=" + std::to_string(n);
            append(out, run_trials(c.trials(5), c.threads(), base, [&](int k) {
                Draw d(c.o.seed, stream(4, kind), 8 * k + n);
                const Model model = kind == ModelKind::xxz ? Model::xxz(d.gamma()) : Model::felderhof();
                const DwpfInstance inst{model, d.lines(kind, n), d.lines(kind, n)};
                const Complex e = z_enumerate(inst), op = z_operator(inst), cf = z_closed_form(inst);
                return std::vector{
                    make_check(trial_name(base + "/enumerate-operator", k), {e, op}, relative_gap(e, op), c.tol(1e-10)),
                    make_check(trial_name(base + "/operator-closed", k), {op, cf}, relative_gap(op, cf), c.tol(1e-10))};
            }));
            if (n < 2 || n > 4) continue;
            Draw d(c.o.seed, stream(5, kind), n);
            const Model model = kind == ModelKind::xxz ? Model::xxz(d.gamma()) : Model::felderhof();
            const DwpfInstance inst{model, d.lines(kind, n), d.lines(kind, n)};
            KorepinOptions options;
            options.tol = {c.tol(1e-10), c.tol(1e-10)};
            const std::string cond_base = "korepin/" + label(kind) + "/N=" + std::to_string(n) + "/";
            try {
                for (const auto& cond : korepin_conditions_check(inst, options).conditions)
                    out.push_back(make_check(cond_base + cond.name, {}, cond.residual, c.tol(1e-10)));
            } catch (const Error& e) {
                out.push_back(failed_check(cond_base + "conditions", e.what()));
            }
        }
    }
    return out;
}

std::vector<CheckResult> suite_scalar(const Context& c) {
    std::vector<int> sizes{1, 2};
    if (c.o.big_n) {
        require(*c.o.big_n >= 1 && *c.o.big_n <= 3, "scalar supports 1 <= N <= 3");
        sizes = {*c.o.big_n};
    }
    if (c.o.m) require(*c.o.m >= 1 && *c.o.m <= 8, "scalar supports M <= 8");
    std::vector<CheckResult> out;
    for (const auto kind : c.models()) {
        for (const int big_n : sizes) {
            const int m_lo = c.o.m ? *c.o.m : big_n;
            const int m_hi = c.o.m ? *c.o.m : std::max(big_n, 4);
            require(m_lo >= big_n, "scalar needs N <= M");
            for (int m = m_lo; m <= m_hi; ++m)
                for (int n = 0; n <= big_n; ++n) {
                    const std::string base = "scalar/" + label(kind) + "/N=" + std::to_string(big_n) +
                                             "/M=" + std::to_string(m) + "/n=" + std::to_string(n);
                    append(out, run_trials(c.trials(2), c.threads(), base, [&](int k) {
                        Draw d(c.o.seed, stream(6, kind), 4096 * k + 256 * big_n + 16 * m + n);
                        const auto inst = random_instance(kind, n, big_n, m, d);
                        const Complex closed = sn_closed_form(inst), direct = sp_oracle(inst);
                        std::vector<CheckResult> checks{make_check(trial_name(base + "/closed-oracle", k),
                                                                   {closed, direct}, relative_gap(closed, direct),
                                                                   c.tol(1e-8))};
                        if (kind == ModelKind::xxz && n == big_n) {
                            const Complex slavnov = slavnov_determinant(inst);
                            checks.push_back(make_check(trial_name(base + "/slavnov-determinant", k),
                                                        {slavnov, closed}, relative_gap(slavnov, closed),
                                                        c.tol(1e-12)));
                        }
                        return checks;
                    }));
                }
            const int m = std::max(big_n + 1, c.o.m.value_or(0));
            if (m > 6) continue;
            for (int n = 1; n <= big_n; ++n) {
                const std::string cond_base = "scalar-conditions/" + label(kind) + "/N=" + std::to_string(big_n) +
                                              "/M=" + std::to_string(m) + "/n=" + std::to_string(n) + "/";
                try {
                    Draw d(c.o.seed, stream(7, kind), 16 * big_n + n);
                    const auto inst = random_instance(kind, n, big_n, m, d);
                    ScalarConditionOptions options;
                    options.tol = {c.tol(1e-9), c.tol(1e-9)};
                    for (const auto& cond : sn_conditions_check(inst, options).conditions)
                        out.push_back(make_check(cond_base + cond.name, {}, cond.residual, c.tol(1e-9)));
                } catch (const Error& e) {
                    out.push_back(failed_check(cond_base + "conditions", e.what()));
                }
            }
        }
    }
    return out;
}

std::vector<CheckResult> suite_hamiltonian(const Context& c) {
    int m_lo = 2, m_hi = 5;
    if (c.o.m) {
        require(*c.o.m >= 2 && *c.o.m <= 6, "hamiltonian supports 2 <= M <= 6");
        m_lo = m_hi = *c.o.m;
    }
    std::vector<CheckResult> out;
    for (const auto kind : c.models()) {
        for (int m = m_lo; m <= m_hi; ++m) {
            const std::string base = "hamiltonian/" + label(kind) + "/M=" + std::to_string(m);
            append(out, run_trials(c.trials(1), c.threads(), base, [&](int k) {
                Draw d(c.o.seed, stream(8, kind), 16 * k + m);
                const Complex param = kind == ModelKind::xxz ? d.gamma() : d.field();
                const double fine = trace_identity_residual(kind, m, param, 1e-5);
                const double coarse_a = trace_identity_residual(kind, m, param, 2e-2);
                const double coarse_b = trace_identity_residual(kind, m, param, 1e-2);
                const double order = std::log2(coarse_a / coarse_b);
                const auto point = homogeneous_point(kind, m, param);
                const auto aux = d.lines(kind, 2);
                ModelLine u = aux[0], v = aux[1];
                if (kind == ModelKind::felderhof) u.field = v.field = param;
                return std::vector{
                    make_check(trial_name(base + "/trace-identity", k), {param}, fine, c.tol(1e-6)),
                    make_check(trial_name(base + "/difference-order", k), {order}, std::abs(order - 2.0), c.tol(0.1)),
                    make_check(trial_name(base + "/commuting-transfer", k), {},
                               transfer_commutator_residual(u, v, point.spec), c.tol(1e-10))};
            }));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// eval and bethe
// ---------------------------------------------------------------------------

struct Resolver {
    const RunOptions& o;
    Draw draw;
    std::vector<std::pair<std::string, std::string>> resolved;

    ModelKind kind() const { return o.model.value_or(ModelKind::xxz); }

    Model model() {
        if (kind() == ModelKind::felderhof) return Model::felderhof();
        const Complex g = o.gamma ? *o.gamma : draw.gamma();
        resolved.emplace_back("resolved.gamma", format_complex(g));
        return Model::xxz(g);
    }

    // Lines from an explicit list or `count` random ones; fields only for Felderhof.
    std::vector<ModelLine> lines(const std::string& name, const std::optional<std::vector<Complex>>& values,
                                 const std::string& field_name, const std::optional<std::vector<Complex>>& fields,
                                 int count) {
        std::vector<Complex> rap = values ? *values : draw.complexes(count);
        std::vector<Complex> fld;
        if (kind() == ModelKind::felderhof) {
            if (fields) {
                require(fields->size() == rap.size(), "--" + field_name + " must have as many entries as --" + name);
                fld = *fields;
            } else {
                for (std::size_t k = 0; k < rap.size(); ++k) fld.push_back(draw.field());
            }
        }
        auto out = to_lines(rap, fld);
        record(name, field_name, out);
        return out;
    }

    void record(const std::string& name, const std::string& field_name, const std::vector<ModelLine>& lines) {
        resolved.emplace_back("resolved." + name, format_complex_list(rapidities_of(lines)));
        if (kind() == ModelKind::felderhof)
            resolved.emplace_back("resolved." + field_name, format_complex_list(fields_of(lines)));
    }
};

int list_size(const std::optional<std::vector<Complex>>& list, const std::optional<int>& flag, int fallback,
              const std::string& name) {
    if (list) {
        if (flag) require(static_cast<int>(list->size()) == *flag, "--" + name + " length disagrees with its size flag");
        return static_cast<int>(list->size());
    }
    return flag.value_or(fallback);
}

void pairwise(std::vector<CheckResult>& out, const std::string& prefix,
              const std::vector<std::pair<std::string, Complex>>& routes, double tol) {
    for (std::size_t a = 0; a < routes.size(); ++a)
        for (std::size_t b = a + 1; b < routes.size(); ++b)
            out.push_back(make_check(prefix + routes[a].first + "-" + routes[b].first,
                                     {routes[a].second, routes[b].second},
                                     relative_gap(routes[a].second, routes[b].second), tol));
}

std::vector<ModelLine> solved_v_lines(Resolver& res, const Model& model, const std::vector<ModelLine>& w_lines,
                                      int big_n) {
    std::vector<ModelLine> v;
    if (model.is_xxz()) {
        XxzSolveOptions options;
        options.seed = res.o.seed;
        options.threads = std::max(1, res.o.threads);
        const auto sets = xxz_solve(big_n, rapidities_of(w_lines), model.gamma, options);
        v = to_lines(sets.front().roots, {});
    } else {
        const auto roots = felderhof_bethe_roots(w_lines, big_n);
        if (res.o.q) require(static_cast<int>(res.o.q->size()) == big_n, "--q must have N entries");
        for (int k = 0; k < big_n; ++k) {
            const Complex q = res.o.q ? (*res.o.q)[k] : res.draw.field();
            v.push_back({roots[k] - q, q});
        }
    }
    res.record("v", "q", v);
    return v;
}

RunReport eval_z(Resolver& res, const Context& c) {
    const int n = list_size(c.o.v, c.o.big_n, 2, "v");
    require(n >= 1 && n <= 12, "eval z supports 1 <= N <= 12");
    const Model model = res.model();
    const auto v = res.lines("v", c.o.v, "q", c.o.q, n);
    const auto w = res.lines("w", c.o.w, "r", c.o.r, n);
    require(w.size() == v.size(), "--v and --w must have the same length");
    const DwpfInstance inst{model, v, w};
    std::vector<std::pair<std::string, Complex>> routes;
    if (n <= 5) routes.emplace_back("enumerate", z_enumerate(inst));
    routes.emplace_back("operator", z_operator(inst));
    routes.emplace_back(model.is_xxz() ? "determinant" : "factorized", z_closed_form(inst));
    RunReport report;
    for (const auto& [name, value] : routes) report.results.push_back(make_value("z/" + name, {value}));
    pairwise(report.results, "z/", routes, c.tol(1e-10));
    return report;
}

RunReport eval_scalar(Resolver& res, const Context& c, bool slavnov) {
    const Model model = res.model();
    require(!slavnov || model.is_xxz(), "slavnov is defined for the xxz model only");
    const int big_n = list_size(c.o.v, c.o.big_n, 2, "v");
    const int m = list_size(c.o.w, c.o.m, big_n + 1, "w");
    const int n = slavnov ? big_n : list_size(c.o.u, c.o.n, 1, "u");
    require(0 <= n && n <= big_n && big_n <= m && m <= 12, "scalar products need 0 <= n <= N <= M <= 12");
    if (slavnov && c.o.u) require(static_cast<int>(c.o.u->size()) == big_n, "slavnov needs N entries in --u");
    require(c.o.v || c.o.solve_bethe, "give Bethe rapidities with --v or pass --solve-bethe");

    ScalarProductInstance inst{model, {}, {}, res.lines("w", c.o.w, "r", c.o.r, m)};
    inst.v_lines = c.o.v ? res.lines("v", c.o.v, "q", c.o.q, big_n) : solved_v_lines(res, model, inst.w_lines, big_n);
    inst.u_lines = res.lines("u", c.o.u, "p", c.o.p, n);

    RunReport report;
    std::vector<std::pair<std::string, Complex>> routes;
    if (slavnov) {
        routes = {{"slavnov", slavnov_determinant(inst)}, {"determinant", sn_determinant(inst)},
                  {"oracle", sp_oracle(inst)}};
        for (const auto& [name, value] : routes) report.results.push_back(make_value("slavnov/" + name, {value}));
        report.results.push_back(make_check("slavnov/slavnov-determinant", {routes[0].second, routes[1].second},
                                            relative_gap(routes[0].second, routes[1].second), c.tol(1e-12)));
        report.results.push_back(make_check("slavnov/slavnov-oracle", {routes[0].second, routes[2].second},
                                            relative_gap(routes[0].second, routes[2].second), c.tol(1e-9)));
        report.results.push_back(make_check("slavnov/determinant-oracle", {routes[1].second, routes[2].second},
                                            relative_gap(routes[1].second, routes[2].second), c.tol(1e-9)));
    } else {
        routes = {{model.is_xxz() ? "determinant" : "factorized", sn_closed_form(inst)}, {"oracle", sp_oracle(inst)}};
        for (const auto& [name, value] : routes) report.results.push_back(make_value("sn/" + name, {value}));
        pairwise(report.results, "sn/", routes, c.tol(1e-8));
    }
    return report;
}

}  // namespace

RunReport cmd_verify(std::string_view suite, const RunOptions& options) {
    const Context c{options};
    require(!options.trials || *options.trials >= 1, "--trials must be positive");
    const bool all = suite == "all";
    RunReport report;
    report.command = "verify " + std::string(suite);
    report.seed = options.seed;
    if (all || suite == "ybe") append(report.results, suite_ybe(c));
    if (all || suite == "crossing") {
        if (!options.model || *options.model == ModelKind::xxz)
            append(report.results, suite_crossing(c));
        else
            require(all, "crossing and rotation identities are defined for the xxz model only");
    }
    if (all || suite == "commutation") append(report.results, suite_commutation(c));
    if (all || suite == "dwpf") append(report.results, suite_dwpf(c));
    if (all || suite == "scalar") append(report.results, suite_scalar(c));
    if (all || suite == "hamiltonian") append(report.results, suite_hamiltonian(c));
    bool known = false;
    for (const auto s : kVerifySuites) known = known || s == suite;
    require(known, "unknown suite '" + std::string(suite) + "'");
    return report;
}

RunReport cmd_eval(std::string_view object, const RunOptions& options) {
    const Context c{options};
    Resolver res{options, Draw(options.seed, 100, 0), {}};
    RunReport report;
    if (object == "z")
        report = eval_z(res, c);
    else if (object == "sn" || object == "slavnov")
        report = eval_scalar(res, c, object == "slavnov");
    else
        throw UsageError("unknown object '" + std::string(object) + "'");
    report.command = "eval " + std::string(object);
    report.seed = options.seed;
    report.params = res.resolved;
    return report;
}

RunReport cmd_bethe(const RunOptions& options) {
    const Context c{options};
    Resolver res{options, Draw(options.seed, 101, 0), {}};
    const Model model = res.model();
    const int big_n = options.big_n.value_or(1);
    const int m = list_size(options.w, options.m, 2, "w");
    RunReport report;
    report.command = "bethe";
    report.seed = options.seed;
    const auto w_lines = res.lines("w", options.w, "r", options.r, m);

    auto probes = [&](const std::vector<ModelLine>& v, const std::string& prefix) {
        const MonodromySpec spec{model, w_lines};
        for (int k = 0; k < 2; ++k) {
            ModelLine u{res.draw.complex(), model.is_felderhof() ? res.draw.field() : Complex{}};
            const auto check = eigenvector_check(v, spec, u);
            report.results.push_back(make_check(prefix + "/eigenvector-" + std::to_string(k), {check.tau},
                                                check.residual, c.tol(1e-7)));
        }
    };

    if (model.is_xxz()) {
        require(big_n >= 1 && big_n <= 3 && big_n <= m && m <= 8, "xxz bethe supports 1 <= N <= 3, N <= M <= 8");
        XxzSolveOptions solve;
        solve.seed = options.seed;
        solve.threads = std::max(1, options.threads);
        const auto sets = xxz_solve(big_n, rapidities_of(w_lines), model.gamma, solve);
        for (std::size_t k = 0; k < sets.size(); ++k) {
            const std::string name = "bethe/xxz/set-" + std::to_string(k);
            report.results.push_back(make_check(name, sets[k].roots, sets[k].residual, c.tol(1e-10)));
            if (options.check_eigenvector) probes(to_lines(sets[k].roots, {}), name);
        }
    } else {
        require(big_n >= 1 && big_n <= m && m <= 12, "felderhof bethe supports 1 <= N <= M <= 12");
        const auto roots = felderhof_bethe_roots(w_lines, big_n);
        for (std::size_t k = 0; k < roots.size(); ++k)
            report.results.push_back(make_check("bethe/felderhof/root-" + std::to_string(k), {roots[k]},
                                                felderhof_bethe_defect(roots[k], w_lines, big_n), c.tol(1e-10)));
        if (options.check_eigenvector) {
            std::vector<ModelLine> v;
            for (int k = 0; k < big_n; ++k) {
                const Complex q = res.draw.field();
                v.push_back({roots[k] - q, q});
            }
            probes(v, "bethe/felderhof/roots-0.." + std::to_string(big_n - 1));
        }
    }
    report.params = res.resolved;
    return report;
}

void print_summary(const RunReport& report, std::ostream& out) {
    struct Group {
        int count = 0, failed = 0;
        double worst = 0.0;
        const CheckResult* single = nullptr;
    };
    std::vector<std::string> order;
    std::map<std::string, Group> groups;
    for (const auto& r : report.results) {
        const std::string key = r.name.substr(0, r.name.find('#'));
        auto [it, fresh] = groups.try_emplace(key);
        if (fresh) order.push_back(key);
        auto& g = it->second;
        g.single = g.count == 0 ? &r : nullptr;
        ++g.count;
        if (!r.pass) ++g.failed;
        g.worst = std::isnan(r.residual) ? r.residual : std::max(g.worst, r.residual);
    }
    char line[256];
    out << report.command << "  (seed " << report.seed << ")\n";
    for (const auto& key : order) {
        const auto& g = groups[key];
        if (g.single && g.single->tolerance == 0.0 && g.single->pass)
            std::snprintf(line, sizeof line, "  %-52s  value", key.c_str());
        else
            std::snprintf(line, sizeof line, "  %-52s %5d  max residual %9.2e  %s", key.c_str(), g.count, g.worst,
                          g.failed ? "FAIL" : "ok");
        out << line;
        if (g.single && !g.single->values.empty()) out << "  [" << format_complex_list(g.single->values) << "]";
        out << '\n';
        for (const auto& r : report.results)
            if (!r.note.empty() && r.name.substr(0, r.name.find('#')) == key) out << "    " << r.name << ": " << r.note << '\n';
    }
    int failed = 0;
    for (const auto& r : report.results) failed += r.pass ? 0 : 1;
    out << (failed ? "FAIL" : "PASS") << ": " << report.results.size() - failed << " of " << report.results.size()
        << " checks passed\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks for the XXZ and trigonometric Felderhof vertex models"};
    app.require_subcommand(1);

    struct Raw {
        std::string suite, object, model, gamma, v, q, w, r, u, p, json;
        int big_n = 0, m = 0, n = 0, trials = 0, threads = 1;
        std::uint64_t seed = 1;
        double tol = 0.0;
        bool solve_bethe = false, check_eigenvector = false, no_timing = false;
    } raw;

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", raw.suite, "ybe, crossing, commutation, dwpf, scalar, hamiltonian or all")
        ->required()
        ->check(CLI::IsMember({"ybe", "crossing", "commutation", "dwpf", "scalar", "hamiltonian", "all"}));
    auto* eval = app.add_subcommand("eval", "evaluate z, sn or slavnov by every route");
    eval->add_option("object", raw.object, "z, sn or slavnov")->required()->check(CLI::IsMember({"z", "sn", "slavnov"}));
    auto* bethe = app.add_subcommand("bethe", "solve the Bethe equations");

    std::map<CLI::App*, std::vector<std::pair<std::string, CLI::Option*>>> flags;
    for (auto* sub : {verify, eval, bethe}) {
        auto& f = flags[sub];
        f.emplace_back("model", sub->add_option("--model", raw.model, "xxz or felderhof")
                                    ->check(CLI::IsMember({"xxz", "felderhof"})));
        f.emplace_back("N", sub->add_option("-N", raw.big_n, "number of Bethe (row) lines"));
        f.emplace_back("M", sub->add_option("-M", raw.m, "number of sites"));
        f.emplace_back("n", sub->add_option("-n", raw.n, "number of free C lines"));
        f.emplace_back("gamma", sub->add_option("--gamma", raw.gamma, "crossing parameter"));
        for (auto [name, target] : {std::pair{"v", &raw.v}, {"q", &raw.q}, {"w", &raw.w}, {"r", &raw.r},
                                    {"u", &raw.u}, {"p", &raw.p}})
            f.emplace_back(name, sub->add_option(std::string("--") + name, *target, "comma-separated complex list"));
        f.emplace_back("trials", sub->add_option("--trials", raw.trials, "random instances per check"));
        f.emplace_back("seed", sub->add_option("--seed", raw.seed, "random seed"));
        f.emplace_back("tol", sub->add_option("--tol", raw.tol, "tolerance for every check"));
        f.emplace_back("solve-bethe", sub->add_flag("--solve-bethe", raw.solve_bethe, "solve for the Bethe lines"));
        f.emplace_back("check-eigenvector",
                       sub->add_flag("--check-eigenvector", raw.check_eigenvector, "test transfer eigenvectors"));
        sub->add_option("--json", raw.json, "write the report to this path");
        sub->add_option("--threads", raw.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--no-timing", raw.no_timing, "report elapsed_ms as 0");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    CLI::App* active = verify->parsed() ? verify : eval->parsed() ? eval : bethe;
    RunOptions options;
    try {
        auto given = [&](const char* name) {
            for (const auto& [key, opt] : flags[active])
                if (key == name) return opt->count() > 0;
            return false;
        };
        auto list = [&](const char* name, const std::string& text) -> std::optional<std::vector<Complex>> {
            if (!given(name)) return std::nullopt;
            return parse_complex_list(text);
        };
        if (given("model")) options.model = parse_model_kind(raw.model);
        if (given("N")) options.big_n = raw.big_n;
        if (given("M")) options.m = raw.m;
        if (given("n")) options.n = raw.n;
        if (given("gamma")) options.gamma = parse_complex(raw.gamma);
        options.v = list("v", raw.v);
        options.q = list("q", raw.q);
        options.w = list("w", raw.w);
        options.r = list("r", raw.r);
        options.u = list("u", raw.u);
        options.p = list("p", raw.p);
        if (given("trials")) options.trials = raw.trials;
        if (given("tol")) options.tol = raw.tol;
        options.seed = raw.seed;
        options.solve_bethe = raw.solve_bethe;
        options.check_eigenvector = raw.check_eigenvector;
        options.threads = raw.threads;
        for (const auto& [key, opt] : flags[active])
            if (opt->count() > 0) options.echo.emplace_back(key, CLI::detail::join(opt->results(), ","));
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }

    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    try {
        if (active == verify)
            report = cmd_verify(raw.suite, options);
        else if (active == eval)
            report = cmd_eval(raw.object, options);
        else
            report = cmd_bethe(options);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        report.command = active == verify ? "verify " + raw.suite : active == eval ? "eval " + raw.object : "bethe";
        report.seed = options.seed;
        report.results.push_back(failed_check("error", e.what()));
        err << "error: " << e.what() << '\n';
    }
    auto params = options.echo;
    for (auto& kv : report.params) params.push_back(std::move(kv));
    report.params = std::move(params);
    if (!raw.no_timing)
        report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                                .count();

    print_summary(report, out);
    if (!raw.json.empty()) {
        std::ofstream file(raw.json, std::ios::binary);
        file << report.to_json();
        if (!file) {
            err << "error: cannot write " << raw.json << '\n';
            return 1;
        }
    }
    return report.all_pass() ? 0 : 1;
}

}  // namespace qism
