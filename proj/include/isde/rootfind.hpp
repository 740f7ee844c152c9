#pragma once

#include <functional>

namespace isde {

struct RootResult {
    double y;        ///< accepted solution
    int iterations;  ///< function evaluations spent
    double residual; ///< y - dt f(y) - rhs at the solution
};

/// Solve y - dt f(y) = rhs for y in (lower_bound, +inf).
///
/// Requires g(y) = y - dt f(y) strictly increasing with slope >= slope_min > 0
/// (the one-sided Lipschitz case kappa dt < 1), and g -> -inf at the lower
/// endpoint, so the root exists and is unique.  A bracket follows from the
/// mean-value bound |root - guess| <= |g(guess) - rhs| / slope_min; toward a
/// finite lower endpoint the bracket is grown by halving the gap to it.
/// Bisection then contracts the bracket, with Newton steps interleaved when
/// fprime is non-null and the step stays inside the bracket.
///
/// Stops when |g(y) - rhs| <= tol (1 + |y|); throws SolverError after
/// max_iter evaluations. interior_point must lie in the domain and is used
/// as an anchor when the guess falls at or below lower_bound.
RootResult solve_monotone_implicit(const std::function<double(double)>& f,
                                   const std::function<double(double)>& fprime,
                                   double dt, double rhs, double lower_bound,
                                   double slope_min, double guess, double interior_point,
                                   double tol, int max_iter = 200);

/// Adaptive Simpson integral of f over [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b, double tol);

} // namespace isde
