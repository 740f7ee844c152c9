#pragma once

#include <vector>

#include "isde/brownian.hpp"
#include "isde/processes.hpp"

namespace isde {

/// One-step input for the drift implicit scheme: state at the last coarse
/// node, elapsed time since it (0 < dt <= coarse step), and the Brownian
/// increment over the elapsed window.
struct StepInput {
    double y_prev;
    double dt;
    double dW;
};

enum class StepSolver {
    ClosedForm, ///< use ProcessSpec::exact_step (available for CIR)
    RootFind,   ///< monotone root finding on y - dt f(y)
};

/// Drift implicit step for the square-root CIR transform, as the unique
/// positive root of the step quadratic.  When y_prev + (sigma/2) dW < 0 the
/// root is computed through the product-of-roots form to avoid cancellation.
/// Requires 1 + (k/2) dt > 0 (step bound dt < 2/max(-k,0)) and a >= sigma^2/4.
double cir_step_closed_form(const StepInput& in, const CirParams& p);

/// Drift implicit step by monotone root finding, for any spec satisfying
/// kappa dt < 1/2.  The returned y solves
/// |y - dt f(y) - (y_prev + gamma dW)| <= tol (1 + |y|).
double implicit_step_rootfind(const StepInput& in, const ProcessSpec& spec, double tol);

/// Scheme values at every fine-grid time.  Values at indices that are
/// multiples of coarse_factor are the scheme nodes; the values in between
/// evaluate the scheme's own continuous-time definition anchored at the
/// enclosing coarse node (not a linear interpolation).
struct SchemePath {
    TimeGrid fine_grid;
    long coarse_factor;
    std::vector<double> y; ///< transformed state, size n_fine + 1
    std::vector<double> x; ///< psi(y), size n_fine + 1
    double min_y;          ///< smallest y over the whole path
    double min_x;          ///< smallest x over the whole path
};

/// Run the drift implicit scheme with coarse step coarse_factor * fine dt,
/// evaluated at every fine time using increments accumulated from the fine
/// array (left to right), so paths at different coarse factors built from the
/// same fine increments are exactly coupled.
SchemePath simulate_path(const ProcessSpec& spec, const IncrementArray& fine, long coarse_factor,
                         StepSolver solver, double tol, long path_index = -1);

/// Explicit Euler-Maruyama baseline, defined only on I = R.  Between coarse
/// nodes: y(u) = y_k + f(y_k)(u - t_k) + gamma (W_u - W_{t_k}).
SchemePath euler_maruyama_path(const ProcessSpec& spec, const IncrementArray& fine,
                               long coarse_factor);

} // namespace isde
