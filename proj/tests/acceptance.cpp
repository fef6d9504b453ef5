// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "instances.hpp"
#include "qism/bethe.hpp"
#include "qism/cli.hpp"
#include "qism/errors.hpp"
#include "qism/hamiltonian.hpp"
#include "qism/partition_function.hpp"
#include "qism/scalar_product.hpp"
#include "qism/spin_chain.hpp"
#include "qism/vertex_weights.hpp"

using namespace qism;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Worst {
    double value = 0.0;
    void operator()(double x) { value = std::isnan(x) ? x : std::max(value, x); }
};

std::string fmt(const char* format, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof buffer, format, args...);
    return buffer;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ModelLine felderhof_line(oracle::Rng& rng) { return {rng.complex(), rng.complex()}; }

Outcome yang_baxter() {
    oracle::Rng rng(1001);
    const auto start = std::chrono::steady_clock::now();
    Worst worst;
    for (int k = 0; k < 100; ++k) {
        worst(ybe_residual(Model::xxz(rng.complex()), {rng.complex()}, {rng.complex()}, {rng.complex()}));
        worst(ybe_residual(Model::felderhof(), felderhof_line(rng), felderhof_line(rng), felderhof_line(rng)));
    }
    const double elapsed = seconds_since(start);
    return {worst.value < 1e-12 && elapsed < 1.0,
            fmt("100 instances per model, max residual %.2e, %.3f s", worst.value, elapsed)};
}

Outcome crossing() {
    oracle::Rng rng(1002);
    Worst worst;
    for (int k = 0; k < 100; ++k) worst(crossing_residual(rng.complex(), rng.complex(), rng.complex()));
    return {worst.value < 1e-12, fmt("100 instances, max residual %.2e", worst.value)};
}

Outcome rotation() {
    oracle::Rng rng(1003);
    Worst worst;
    for (int l = 1; l <= 2; ++l)
        for (int m = 1; m <= 2; ++m)
            for (int k = 0; k < 5; ++k) worst(rotation_identity_residual(rng.complexes(l), rng.complexes(m), rng.complex()));
    return {worst.value < 1e-12, fmt("(L, M) in {1,2}^2, 5 instances each, max residual %.2e", worst.value)};
}

Outcome commutation() {
    oracle::Rng rng(1004);
    Worst worst;
    int count = 0;
    for (int m = 1; m <= 5; ++m)
        for (int k = 0; k < 4; ++k) {
            const MonodromySpec xxz{Model::xxz(rng.complex()), oracle::lines(rng.complexes(m))};
            for (const auto rel : xxz_relations()) {
                worst(commutation_residual(rel, {rng.complex()}, {rng.complex()}, xxz, oracle::random_state(m, rng)));
                ++count;
            }
            MonodromySpec ff{Model::felderhof(), {}};
            for (int j = 0; j < m; ++j) ff.quantum_lines.push_back(felderhof_line(rng));
            for (const auto rel : felderhof_relations()) {
                worst(commutation_residual(rel, felderhof_line(rng), felderhof_line(rng), ff,
                                           oracle::random_state(m, rng)));
                ++count;
            }
        }
    return {worst.value < 1e-10, fmt("%d relation probes, M <= 5, max residual %.2e", count, worst.value)};
}

Outcome dwpf_routes() {
    oracle::Rng rng(1005);
    const auto start = std::chrono::steady_clock::now();
    Worst worst;
    for (int n = 1; n <= 4; ++n)
        for (int k = 0; k < 20; ++k) {
            DwpfInstance xxz{Model::xxz(rng.complex()), oracle::lines(rng.complexes(n)), oracle::lines(rng.complexes(n))};
            DwpfInstance ff{Model::felderhof(), {}, {}};
            for (int j = 0; j < n; ++j) {
                ff.v_lines.push_back(felderhof_line(rng));
                ff.w_lines.push_back(felderhof_line(rng));
            }
            for (const auto& inst : {xxz, ff}) {
                const Complex e = z_enumerate(inst), op = z_operator(inst), cf = z_closed_form(inst);
                worst(relative_gap(e, op));
                worst(relative_gap(op, cf));
                worst(relative_gap(e, cf));
            }
        }
    const double elapsed = seconds_since(start);
    return {worst.value < 1e-10 && elapsed < 30.0,
            fmt("N = 1..4, 20 instances per model, max relative gap %.2e, %.2f s", worst.value, elapsed)};
}

Outcome korepin() {
    oracle::Rng rng(1006);
    bool pass = true;
    Worst worst;
    int conditions = 0;
    for (int k = 0; k < 3; ++k) {
        DwpfInstance xxz{Model::xxz(rng.complex()), oracle::lines(rng.complexes(3)), oracle::lines(rng.complexes(3))};
        DwpfInstance ff{Model::felderhof(), {}, {}};
        for (int j = 0; j < 3; ++j) {
            ff.v_lines.push_back(felderhof_line(rng));
            ff.w_lines.push_back(felderhof_line(rng));
        }
        for (const auto& inst : {xxz, ff})
            for (const auto& c : korepin_conditions_check(inst).conditions) {
                pass = pass && c.pass && c.residual <= 1e-10;
                worst(c.residual);
                ++conditions;
            }
    }
    return {pass, fmt("N = 3, both models, %d condition checks, max residual %.2e", conditions, worst.value)};
}

Outcome bethe_solving() {
    oracle::Rng rng(1007);
    bool pass = true;
    Worst defect, residual, parallel;
    for (int m = 1; m <= 6; ++m) {
        std::vector<ModelLine> w;
        for (int k = 0; k < m; ++k) w.push_back(felderhof_line(rng));
        for (int n = 1; n <= m; ++n) {
            const auto roots = felderhof_bethe_roots(w, n);
            pass = pass && static_cast<int>(roots.size()) == m;
            for (std::size_t i = 0; i < roots.size(); ++i) {
                defect(felderhof_bethe_defect(roots[i], w, n));
                for (std::size_t j = 0; j < i; ++j) {
                    const Complex d = canonical_root(roots[i] - roots[j]);
                    pass = pass && std::min(std::abs(d), std::abs(d - Complex(0, kPi))) > 1e-8;
                }
            }
        }
    }
    pass = pass && defect.value < 1e-10;

    double poly_gap = 0.0;
    for (int m = 1; m <= 5; ++m) {
        const auto w = rng.complexes(m);
        const Complex g = rng.complex();
        XxzSolveOptions poly, newton;
        poly.route = SolveRoute::polynomial;
        newton.route = SolveRoute::newton;
        const auto a = xxz_solve(1, w, g, poly);
        const auto b = xxz_solve(1, w, g, newton);
        pass = pass && a.size() == b.size() && static_cast<int>(a.size()) == m;
        for (const auto& s : a) {
            double best = 1e9;
            for (const auto& t : b) {
                const Complex d = canonical_root(s.roots[0] - t.roots[0]);
                best = std::min({best, std::abs(d), std::abs(d - Complex(0, kPi))});
            }
            poly_gap = std::max(poly_gap, best);
        }
    }
    pass = pass && poly_gap < 1e-8;

    int sets = 0;
    for (int m = 2; m <= 5; ++m)
        for (int k = 0; k < 2; ++k) {
            const auto w = rng.complexes(m);
            const Complex g = rng.complex();
            std::vector<BetheRootSet> found;
            try {
                found = xxz_solve(2, w, g);
            } catch (const NoSolutionFound&) {
                continue;
            }
            const MonodromySpec spec{Model::xxz(g), oracle::lines(w)};
            for (const auto& s : found) {
                ++sets;
                residual(xxz_bethe_residual(s.roots, w, g));
                for (int probe = 0; probe < 2; ++probe)
                    parallel(eigenvector_check(oracle::lines(s.roots), spec, {rng.complex()}).residual);
            }
        }
    pass = pass && sets > 0 && residual.value < 1e-10 && parallel.value < 1e-7;
    return {pass, fmt("felderhof max defect %.2e; xxz N=1 route gap %.2e; %d N=2 sets, residual %.2e, "
                      "parallelism %.2e",
                      defect.value, poly_gap, sets, residual.value, parallel.value)};
}

Outcome scalar_xxz() {
    oracle::Rng rng(1008);
    Worst oracle_gap, slavnov_gap;
    int instances = 0;
    for (int big_n = 1; big_n <= 2; ++big_n)
        for (int m = big_n; m <= 5; ++m)
            for (int n = 0; n <= big_n; ++n)
                for (int k = 0; k < 10; ++k) {
                    const auto inst = oracle::xxz_instance(n, big_n, m, rng);
                    const Complex closed = sn_determinant(inst);
                    oracle_gap(relative_gap(closed, sp_oracle(inst)));
                    if (n == big_n) slavnov_gap(relative_gap(slavnov_determinant(inst), closed));
                    ++instances;
                }
    bool conditions = true;
    for (int big_n = 1; big_n <= 2; ++big_n)
        for (int n = 1; n <= big_n; ++n)
            conditions = conditions && sn_conditions_check(oracle::xxz_instance(n, big_n, big_n + 1, rng)).all_pass();
    return {oracle_gap.value < 1e-8 && slavnov_gap.value < 1e-12 && conditions,
            fmt("%d instances, determinant vs oracle %.2e, slavnov vs determinant %.2e, conditions %s", instances,
                oracle_gap.value, slavnov_gap.value, conditions ? "pass" : "fail")};
}

Outcome scalar_felderhof() {
    oracle::Rng rng(1009);
    Worst oracle_gap, zeros;
    int instances = 0;
    for (int big_n = 1; big_n <= 2; ++big_n)
        for (int m = big_n; m <= 5; ++m)
            for (int n = 0; n <= big_n; ++n)
                for (int k = 0; k < 10; ++k) {
                    const auto inst = oracle::felderhof_instance(n, big_n, m, rng);
                    oracle_gap(relative_gap(felderhof_sn(inst), sp_oracle(inst)));
                    ++instances;
                }
    bool conditions = true;
    for (int big_n = 1; big_n <= 2; ++big_n)
        for (int n = 1; n <= big_n; ++n)
            conditions = conditions &&
                         sn_conditions_check(oracle::felderhof_instance(n, big_n, big_n + 1, rng)).all_pass();
    bool counts = true;
    for (int m = 2; m <= 5; ++m)
        for (int big_n = 1; big_n < m && big_n <= 2; ++big_n) {
            const auto inst = oracle::felderhof_instance(big_n, big_n, m, rng);
            const double scale = std::max(1.0, std::abs(felderhof_sn(inst)));
            int complementary = 0;
            for (const auto& x : felderhof_bethe_roots(inst.w_lines, big_n)) {
                bool used = false;
                for (const auto& v : inst.v_lines) used = used || std::abs(std::sinh(x - v.rapidity - v.field)) < 1e-8;
                if (used) continue;
                ++complementary;
                auto at = inst;
                at.u_lines.back().rapidity = x - at.u_lines.back().field;
                zeros(std::abs(felderhof_sn(at)) / scale);
                zeros(std::abs(sp_oracle(at)) / scale);
            }
            counts = counts && complementary == m - big_n;
        }
    return {oracle_gap.value < 1e-8 && conditions && counts && zeros.value < 1e-8,
            fmt("%d instances, product vs oracle %.2e, conditions %s, complementary zeros %.2e", instances,
                oracle_gap.value, conditions ? "pass" : "fail", zeros.value)};
}

Outcome off_shell() {
    oracle::Rng rng(1010);
    int detected = 0;
    double smallest = 1e300;
    for (int k = 0; k < 10; ++k) {
        auto inst = oracle::xxz_instance(2, 2, 4, rng);
        for (auto& v : inst.v_lines) v.rapidity += rng.complex(0.3);
        const double gap = relative_gap(slavnov_determinant(inst), sp_oracle(inst));
        smallest = std::min(smallest, gap);
        if (gap > 1e-3) ++detected;
    }
    return {detected >= 9, fmt("%d of 10 perturbed instances detected, smallest gap %.2e", detected, smallest)};
}

Outcome hamiltonian() {
    Worst residual;
    double order_lo = 1e9, order_hi = 0.0;
    for (const auto kind : {ModelKind::xxz, ModelKind::felderhof}) {
        const Complex param = kind == ModelKind::xxz ? Complex(0.6) : Complex(0.4);
        for (int m = 2; m <= 5; ++m) {
            residual(trace_identity_residual(kind, m, param, 1e-5));
            const double order =
                std::log2(trace_identity_residual(kind, m, param, 2e-2) / trace_identity_residual(kind, m, param, 1e-2));
            order_lo = std::min(order_lo, order);
            order_hi = std::max(order_hi, order);
        }
    }
    return {residual.value < 1e-6 && order_lo > 1.9 && order_hi < 2.1,
            fmt("M = 2..5, both models, max residual %.2e at step 1e-5, observed order %.3f..%.3f", residual.value,
                order_lo, order_hi)};
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path();
    std::string reports[3];
    int codes[3];
    const char* threads[3] = {"1", "1", "4"};
    for (int k = 0; k < 3; ++k) {
        const auto path = (dir / ("qism_acceptance_" + std::to_string(k) + ".json")).string();
        const char* argv[] = {"qism", "verify", "all", "--seed", "1", "--no-timing", "--threads", threads[k], "--json",
                              path.c_str()};
        std::ostringstream out, err;
        codes[k] = run_cli(10, argv, out, err);
        reports[k] = read_file(path);
        std::filesystem::remove(path);
    }
    const bool same = !reports[0].empty() && reports[0] == reports[1] && reports[0] == reports[2];
    return {same && codes[0] == 0 && codes[1] == 0 && codes[2] == 0,
            fmt("verify all --seed 1: two runs and a 4-thread run %s (%zu bytes, exit %d)",
                same ? "byte-identical" : "differ", reports[0].size(), codes[0])};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"yang-baxter", yang_baxter},
        {"crossing symmetry", crossing},
        {"rotation identity", rotation},
        {"commutation relations", commutation},
        {"partition function routes", dwpf_routes},
        {"partition function conditions", korepin},
        {"bethe solving", bethe_solving},
        {"xxz scalar products", scalar_xxz},
        {"felderhof scalar products", scalar_felderhof},
        {"off-shell detector", off_shell},
        {"hamiltonian recovery", hamiltonian},
        {"determinism", determinism},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, check] : criteria) {
        ++index;
        Outcome outcome;
        try {
            outcome = check();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failed += outcome.pass ? 0 : 1;
        std::printf("%s %2d %-32s %s\n", outcome.pass ? "PASS" : "FAIL", index, name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of 12 criteria passed\n", 12 - failed);
    return failed == 0 ? 0 : 1;
}
