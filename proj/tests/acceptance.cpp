// Acceptance suite: one experiment per criterion, one pass/fail line each.
// Heavier Monte Carlo settings than the unit tests; expect minutes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "isde/analysis.hpp"
#include "isde/brownian.hpp"
#include "isde/config.hpp"
#include "isde/errors.hpp"
#include "isde/experiment.hpp"
#include "isde/rng.hpp"

using namespace isde;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    int id;
    std::string title;
    bool pass;
    std::string detail;
};

std::vector<Verdict> verdicts;

void record(int id, const std::string& title, bool pass, const std::string& detail) {
    verdicts.push_back({id, title, pass, detail});
    std::cerr << (pass ? "[pass] " : "[FAIL] ") << "criterion " << id << " done: " << detail
              << "\n";
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

double uniform01(NormalStream& rng) {
    return 0.5 * std::erfc(-rng.next() / std::sqrt(2.0));
}

std::string format(const char* fmt, ...) {
    char buffer[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buffer, sizeof(buffer), fmt, args);
    va_end(args);
    return buffer;
}

// ---- criteria 1 and 2: step residuals and solver equivalence ----

void run_step_criteria() {
    const auto start = std::chrono::steady_clock::now();
    const long trials = 100'000;
    NormalStream rng(2025, 0);

    double max_closed_residual = 0.0;
    double max_root_residual = 0.0;
    double max_disagreement = 0.0;
    for (long trial = 0; trial < trials; ++trial) {
        CirParams p;
        p.a = std::exp(1.5 * (2.0 * uniform01(rng) - 1.0));
        p.sigma = std::sqrt(2.0 * p.a) * (0.1 + 0.9 * uniform01(rng)); // sigma^2 <= 2a
        p.k = 4.0 * uniform01(rng) - 2.0;
        p.x0 = 1.0;
        const ProcessSpec spec = cir_spec(p);

        double dt = 1e-3 + 0.4 * uniform01(rng);
        if (spec.kappa > 0.0)
            dt = std::min(dt, 0.45 / spec.kappa);
        const double y_prev = std::exp(1.5 * (2.0 * uniform01(rng) - 1.0));
        const double dW = rng.next() * std::sqrt(dt);

        const double closed = cir_step_closed_form({y_prev, dt, dW}, p);
        const double rooted = implicit_step_rootfind({y_prev, dt, dW}, spec, 1e-12);

        const double closed_residual =
            std::abs(closed - y_prev - spec.drift(closed) * dt - spec.noise * dW) /
            (1.0 + std::abs(closed));
        const double root_residual =
            std::abs(rooted - y_prev - spec.drift(rooted) * dt - spec.noise * dW) /
            (1.0 + std::abs(rooted));
        max_closed_residual = std::max(max_closed_residual, closed_residual);
        max_root_residual = std::max(max_root_residual, root_residual);
        max_disagreement = std::max(max_disagreement, std::abs(closed - rooted));
    }
    const double elapsed = seconds_since(start);

    record(1, "implicit residuals on 1e5 random CIR steps",
           max_closed_residual <= 1e-12 && max_root_residual <= 1e-12 && elapsed < 5.0,
           format("max closed residual %.2e, max root-find residual %.2e (both vs 1e-12), %.2f s "
                  "(limit 5 s)",
                  max_closed_residual, max_root_residual, elapsed));
    record(2, "closed-form vs root-find agreement on the same inputs",
           max_disagreement <= 1e-9,
           format("max |difference| %.2e (limit 1e-9)", max_disagreement));
}

// ---- criteria 3, 6, 9: order-1 CIR regime, positivity, determinism ----

ExperimentConfig order1_config(const fs::path& out_dir, int workers) {
    ExperimentConfig config;
    config.family = ProcessFamily::Cir;
    config.cir = {1.0, 1.0, 0.5, 1.0};
    config.horizon = 1.0;
    config.ladder = {8, 16, 32, 64, 128, 256};
    config.ref_multiplier = 128; // n_ref = 2^15
    config.paths = 10'000;
    config.p = 1.0;
    config.seed = 42;
    config.tol = 1e-12;
    config.out_dir = out_dir.string();
    config.workers = workers;
    return config;
}

struct RegimeResult {
    OrderFit fit;
    ErrorTable table;
};

RegimeResult run_order1_and_determinism(const fs::path& root) {
    auto start = std::chrono::steady_clock::now();
    const ExperimentConfig one_worker = order1_config(root / "cir-order1-w1", 1);
    const ExperimentArtifacts first = run_experiment(one_worker, std::cerr);
    const double elapsed_one = seconds_since(start);

    start = std::chrono::steady_clock::now();
    const ExperimentConfig eight_workers = order1_config(root / "cir-order1-w8", 8);
    const ExperimentArtifacts second = run_experiment(eight_workers, std::cerr);
    const double elapsed_eight = seconds_since(start);

    const OrderFit fit = second.fit;
    record(3, "CIR order-1 regime (a=1, k=1, sigma=0.5, p=1)",
           fit.slope >= 0.85 && fit.slope <= 1.15 && fit.residual_rms < 0.1,
           format("fitted slope %.4f (band [0.85, 1.15]), residual rms %.4f (limit 0.1), "
                  "%.0f s + %.0f s",
                  fit.slope, fit.residual_rms, elapsed_one, elapsed_eight));

    const std::string csv_one = slurp(first.errors_csv);
    const std::string csv_eight = slurp(second.errors_csv);
    record(9, "determinism: 1 worker vs 8 workers byte-identical errors.csv",
           !csv_one.empty() && csv_one == csv_eight,
           format("%zu bytes each, %s", csv_one.size(),
                  csv_one == csv_eight ? "identical" : "DIFFERENT"));

    return {fit, second.table};
}

ErrorTable run_degraded_order(double order1_slope) {
    const auto start = std::chrono::steady_clock::now();
    StudyConfig study;
    study.spec = cir_spec({1.0, 1.0, 1.3, 1.0}); // sigma^2 = 1.69 in (a, 2a)
    study.horizon = 1.0;
    study.n_ref = 1 << 15;
    study.ladder = {8, 16, 32, 64, 128, 256};
    study.paths = 10'000;
    study.p = 1.0;
    study.seed = 42;
    study.solver = StepSolver::ClosedForm;

    const ErrorTable table = error_table(study);
    const OrderFit fit = fit_order(table);
    record(4, "CIR degraded-order regime (sigma^2 in (a, 2a))",
           fit.slope >= 0.4 && fit.slope <= 0.95 && order1_slope - fit.slope >= 0.1,
           format("fitted slope %.4f (band [0.4, 0.95]), order-1 slope %.4f - this >= 0.1, %.0f s",
                  fit.slope, order1_slope, seconds_since(start)));
    return table;
}

ErrorTable run_cev_order1() {
    const auto start = std::chrono::steady_clock::now();
    StudyConfig study;
    study.spec = cev_spec({1.0, 1.0, 0.3, 0.75, 1.0});
    study.horizon = 1.0;
    study.n_ref = 1 << 15;
    study.ladder = {8, 16, 32, 64, 128, 256};
    study.paths = 2'500;
    study.p = 2.0;
    study.seed = 42;
    study.solver = StepSolver::RootFind;

    const ErrorTable table = error_table(study);
    const OrderFit fit = fit_order(table);
    record(5, "CEV order-1 regime (alpha=3/4, p=2)",
           fit.slope >= 0.85 && fit.slope <= 1.15,
           format("fitted slope %.4f (band [0.85, 1.15]), %.0f s", fit.slope,
                  seconds_since(start)));
    return table;
}

void check_positivity(const ErrorTable& cir_order1, const ErrorTable& cir_degraded,
                      const ErrorTable& cev) {
    const double min_x = std::min({cir_order1.min_x, cir_degraded.min_x, cev.min_x});
    const double min_y = std::min({cir_order1.min_y, cir_degraded.min_y, cev.min_y});
    record(6, "positivity across all CIR/CEV experiments", min_x > 0.0 && min_y > 0.0,
           format("min state %.3e, min transformed state %.3e (both must be > 0)", min_x, min_y));
}

// ---- criterion 7: scaling invariance of the rescaled construction ----

void run_scaling_invariance() {
    const auto start = std::chrono::steady_clock::now();
    const ProcessSpec base = constant_diffusion_spec(2.0, 1.0, 1.0); // sigma0=2, b(x) = -x
    const TimeGrid grid(1.0, 64);
    double sup = 0.0;
    for (long i = 0; i < 100; ++i) {
        NormalStream stream(7, static_cast<std::uint64_t>(i));
        const IncrementArray inc = generate_increments(grid, stream);
        const SchemePath reference = simulate_path(base, inc, 1, StepSolver::RootFind, 1e-12);
        for (double g : {0.5, 3.0}) {
            const ProcessSpec scaled = scale_transform(base, g);
            const SchemePath path = simulate_path(scaled, inc, 1, StepSolver::RootFind, 1e-12);
            for (std::size_t j = 0; j < path.x.size(); ++j)
                sup = std::max(sup, std::abs(path.x[j] - reference.x[j]));
        }
    }
    record(7, "scaling invariance of the transformed scheme (gamma 0.5 and 3)", sup <= 1e-8,
           format("sup-norm mismatch %.2e over 100 paths at n=64 (limit 1e-8), %.1f s", sup,
                  seconds_since(start)));
}

// ---- criterion 8: explicit vs implicit on a linear drift ----

void run_linear_sanity() {
    const auto start = std::chrono::steady_clock::now();
    StudyConfig study;
    study.spec = constant_diffusion_spec(2.0, 1.0, 1.0); // f(y) = -y
    study.horizon = 1.0;
    study.n_ref = 1 << 13;
    study.ladder = {8, 16, 32, 64, 128, 256};
    study.paths = 2'000;
    study.p = 2.0;
    study.seed = 42;
    study.solver = StepSolver::ClosedForm;

    const OrderFit implicit_fit = fit_order(error_table(study));
    study.coarse_scheme = CoarseScheme::EulerMaruyama;
    const OrderFit explicit_fit = fit_order(error_table(study));

    const bool pass = implicit_fit.slope >= 0.85 && implicit_fit.slope <= 1.15 &&
                      explicit_fit.slope >= 0.85 && explicit_fit.slope <= 1.15;
    record(8, "linear drift: implicit and Euler-Maruyama both fit order 1", pass,
           format("implicit slope %.4f, explicit slope %.4f (band [0.85, 1.15]), %.0f s",
                  implicit_fit.slope, explicit_fit.slope, seconds_since(start)));
}

} // namespace

int main() {
    const fs::path root = "acceptance_out";
    fs::remove_all(root);
    fs::create_directories(root);

    try {
        run_step_criteria();
        const RegimeResult order1 = run_order1_and_determinism(root);
        const ErrorTable degraded = run_degraded_order(order1.fit.slope);
        const ErrorTable cev = run_cev_order1();
        check_positivity(order1.table, degraded, cev);
        run_scaling_invariance();
        run_linear_sanity();
    } catch (const std::exception& err) {
        std::cerr << "acceptance run aborted: " << err.what() << "\n";
        std::cout << "[FAIL] acceptance suite aborted: " << err.what() << "\n";
        return 1;
    }

    std::sort(verdicts.begin(), verdicts.end(),
              [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
    int failures = 0;
    for (const Verdict& v : verdicts) {
        std::cout << (v.pass ? "[PASS]" : "[FAIL]") << " criterion " << v.id << ": " << v.title
                  << " -- " << v.detail << "\n";
        failures += v.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
