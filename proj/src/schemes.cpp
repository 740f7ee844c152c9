#include "isde/schemes.hpp"

#include <cmath>
#include <sstream>

#include "isde/errors.hpp"
#include "isde/rootfind.hpp"

namespace isde {

namespace {

void require_positive_dt(double dt) {
    if (!(dt > 0.0))
        throw ParameterError("step requires dt > 0");
}

long check_coarse_factor(const IncrementArray& fine, long coarse_factor) {
    const long n = fine.grid().steps;
    if (coarse_factor < 1 || n % coarse_factor != 0)
        throw std::invalid_argument("coarse factor " + std::to_string(coarse_factor) +
                                    " does not divide fine step count " + std::to_string(n));
    return n / coarse_factor;
}

SolverError annotate(const SolverError& err, long path_index, long step_index) {
    std::ostringstream msg;
    msg << err.what() << " (path " << path_index << ", fine step " << step_index << ")";
    return SolverError(msg.str(), path_index, step_index);
}

} // namespace

double cir_step_closed_form(const StepInput& in, const CirParams& p) {
    require_positive_dt(in.dt);
    const double denom = 1.0 + 0.5 * p.k * in.dt;
    if (!(denom > 0.0))
        throw ParameterError("cir closed-form step requires dt < 2/max(-k,0)");
    const double q = p.a - 0.25 * p.sigma * p.sigma;
    if (q < 0.0)
        throw ParameterError("cir closed-form step requires a >= sigma^2/4");

    const double u = in.y_prev + 0.5 * p.sigma * in.dW;
    const double q_dt = q * in.dt;
    const double root = std::sqrt(u * u + 2.0 * denom * q_dt);
    // For u < 0 the textbook form (u + root) cancels; multiply through by
    // (root - u) instead.
    return u >= 0.0 ? (u + root) / (2.0 * denom) : q_dt / (root - u);
}

double implicit_step_rootfind(const StepInput& in, const ProcessSpec& spec, double tol) {
    require_positive_dt(in.dt);
    const StepVerdict verdict = validate_step(spec, in.dt);
    if (!verdict.admissible) {
        std::ostringstream msg;
        msg << "step size inadmissible: kappa*dt = " << verdict.kappa_dt << " >= 1/2";
        throw ParameterError(msg.str());
    }
    const double rhs = in.y_prev + spec.noise * in.dW;
    const double slope_min = 1.0 - spec.kappa * in.dt;
    return solve_monotone_implicit(spec.drift, spec.drift_prime, in.dt, rhs,
                                   spec.interval.lower, slope_min, rhs, in.y_prev, tol)
        .y;
}

SchemePath simulate_path(const ProcessSpec& spec, const IncrementArray& fine, long coarse_factor,
                         StepSolver solver, double tol, long path_index) {
    const long coarse_steps = check_coarse_factor(fine, coarse_factor);
    const double fine_dt = fine.grid().dt();
    const double coarse_dt = fine.grid().horizon / static_cast<double>(coarse_steps);
    const StepVerdict verdict = validate_step(spec, coarse_dt);
    if (!verdict.admissible) {
        std::ostringstream msg;
        msg << "coarse step inadmissible: kappa*dt = " << verdict.kappa_dt << " >= 1/2";
        throw ParameterError(msg.str());
    }
    if (solver == StepSolver::ClosedForm && !spec.exact_step)
        throw ParameterError("process has no closed-form step; use the root-find solver");
    if (!spec.interval.contains(spec.y0))
        throw ParameterError("initial state lies outside the state interval");

    const long n = fine.grid().steps;
    SchemePath path{fine.grid(), coarse_factor,
                    std::vector<double>(static_cast<std::size_t>(n) + 1),
                    std::vector<double>(static_cast<std::size_t>(n) + 1), spec.y0, 0.0};
    path.y[0] = spec.y0;
    path.x[0] = spec.inverse_transform(spec.y0);
    path.min_x = path.x[0];

    const auto& inc = fine.values();
    for (long block = 0; block < coarse_steps; ++block) {
        const long base = block * coarse_factor;
        const double anchor = path.y[static_cast<std::size_t>(base)];
        double w_from_anchor = 0.0;
        for (long j = 1; j <= coarse_factor; ++j) {
            w_from_anchor += inc[static_cast<std::size_t>(base + j - 1)];
            const double elapsed = fine_dt * static_cast<double>(j);
            double value;
            if (solver == StepSolver::ClosedForm) {
                value = spec.exact_step(anchor, elapsed, w_from_anchor);
            } else {
                const double rhs = anchor + spec.noise * w_from_anchor;
                const double slope_min = 1.0 - spec.kappa * elapsed;
                try {
                    value = solve_monotone_implicit(spec.drift, spec.drift_prime, elapsed, rhs,
                                                    spec.interval.lower, slope_min, rhs, anchor,
                                                    tol)
                                .y;
                } catch (const SolverError& err) {
                    throw annotate(err, path_index, base + j);
                }
            }
            if (!spec.interval.contains(value))
                throw SolverError("scheme state left the interval", path_index, base + j);
            const double mapped = spec.inverse_transform(value);
            path.y[static_cast<std::size_t>(base + j)] = value;
            path.x[static_cast<std::size_t>(base + j)] = mapped;
            if (value < path.min_y)
                path.min_y = value;
            if (mapped < path.min_x)
                path.min_x = mapped;
        }
    }
    return path;
}

SchemePath euler_maruyama_path(const ProcessSpec& spec, const IncrementArray& fine,
                               long coarse_factor) {
    if (spec.interval.bounded_below())
        throw ParameterError("euler-maruyama is only defined on the whole real line");
    const long coarse_steps = check_coarse_factor(fine, coarse_factor);
    const double fine_dt = fine.grid().dt();

    const long n = fine.grid().steps;
    SchemePath path{fine.grid(), coarse_factor,
                    std::vector<double>(static_cast<std::size_t>(n) + 1),
                    std::vector<double>(static_cast<std::size_t>(n) + 1), spec.y0, 0.0};
    path.y[0] = spec.y0;
    path.x[0] = spec.inverse_transform(spec.y0);
    path.min_x = path.x[0];

    const auto& inc = fine.values();
    for (long block = 0; block < coarse_steps; ++block) {
        const long base = block * coarse_factor;
        const double anchor = path.y[static_cast<std::size_t>(base)];
        const double drift_value = spec.drift(anchor);
        double w_from_anchor = 0.0;
        for (long j = 1; j <= coarse_factor; ++j) {
            w_from_anchor += inc[static_cast<std::size_t>(base + j - 1)];
            const double elapsed = fine_dt * static_cast<double>(j);
            const double value = anchor + drift_value * elapsed + spec.noise * w_from_anchor;
            const double mapped = spec.inverse_transform(value);
            path.y[static_cast<std::size_t>(base + j)] = value;
            path.x[static_cast<std::size_t>(base + j)] = mapped;
            if (value < path.min_y)
                path.min_y = value;
            if (mapped < path.min_x)
                path.min_x = mapped;
        }
    }
    return path;
}

} // namespace isde
