#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace isde {

using RealFn = std::function<double(double)>;

/// Open interval (lower, +inf); lower may be -inf.
struct Interval {
    double lower = -std::numeric_limits<double>::infinity();

    bool contains(double y) const { return y > lower; }
    bool bounded_below() const { return std::isfinite(lower); }

    static Interval real_line() { return {}; }
    static Interval positive_half_line() { return {0.0}; }
};

/// A transformed SDE dY = f(Y) dt + gamma dW on I = (lower, +inf), together
/// with the map back to the original state space X.
///
/// drift must satisfy the one-sided Lipschitz condition
/// f(y') - f(y) <= kappa (y' - y) for y <= y' in I, which makes
/// y -> y - h f(y) invertible for kappa h < 1.  All function members must be
/// pure; specs are immutable after construction and safe to share across
/// workers.
struct ProcessSpec {
    std::string label;
    Interval interval;
    RealFn drift;        ///< f
    RealFn drift_prime;  ///< f' (optional; enables Newton polish in the solver)
    RealFn drift_second; ///< f'' (optional, diagnostics only)
    double noise = 1.0;  ///< gamma > 0
    double kappa = 0.0;  ///< one-sided Lipschitz bound for f
    RealFn inverse_transform; ///< psi : Y -> X
    double y0 = 0.0;     ///< initial transformed state, in I
    double x0 = 0.0;     ///< initial original state, psi(y0)

    /// Closed-form one-step solve (y_prev, dt, dW) -> y, when available.
    std::function<double(double, double, double)> exact_step;
};

/// dX = (a - k X) dt + sigma sqrt(X) dW.  Standing assumption sigma^2 <= 2a
/// keeps X strictly positive from x0 > 0.
struct CirParams {
    double a = 1.0;
    double k = 0.0;
    double sigma = 1.0;
    double x0 = 1.0;
};

/// dX = (a - k X) dt + sigma X^alpha dW with 1/2 < alpha < 1.
struct CevParams {
    double a = 1.0;
    double k = 0.0;
    double sigma = 1.0;
    double alpha = 0.75;
    double x0 = 1.0;
};

/// dX = b(X) dt + sigma(X) dW with 0 < sigma_lo <= sigma <= sigma_hi.
/// transform/inverse may be supplied analytically; when null they are
/// realized by adaptive quadrature of 1/sigma from 0 and by monotone root
/// finding on the transform, both to 1e-12 absolute.
struct LampertiSpec {
    RealFn drift_x;         ///< b
    RealFn diffusion;       ///< sigma(x)
    RealFn diffusion_prime; ///< sigma'(x)
    double sigma_lo = 0.0;
    double sigma_hi = 0.0;
    RealFn transform;       ///< phi (optional)
    RealFn inverse;         ///< phi^{-1} (optional)
    double x0 = 0.0;
    double kappa = std::numeric_limits<double>::quiet_NaN(); ///< optional analytic bound
};

void validate(const CirParams& p);
void validate(const CevParams& p);

/// Y = sqrt(X): f(y) = (a - sigma^2/4)/(2y) - (k/2) y on (0, inf),
/// gamma = sigma/2, kappa = max(-k/2, 0), psi(y) = y^2.
ProcessSpec cir_spec(const CirParams& p);

/// Y = X^{1-alpha}: f(y) = (1-alpha)(a y^{-alpha/(1-alpha)} - k y
/// - alpha sigma^2/(2y)) on (0, inf), gamma = sigma (1-alpha),
/// psi(y) = y^{1/(1-alpha)}.  kappa is probed numerically from f' on a
/// log-spaced grid and inflated by 10% unless supplied.
ProcessSpec cev_spec(const CevParams& p);

/// Y = phi(X): f = (b/sigma - sigma'/2) o phi^{-1} on the whole real line,
/// gamma = 1, psi = phi^{-1}.
ProcessSpec lamperti_spec(const LampertiSpec& s);

/// Constant diffusion sigma0 and linear drift b(x) = -lambda x; the Lamperti
/// map degenerates to phi(x) = x / sigma0 and f(y) = -lambda y.
ProcessSpec constant_diffusion_spec(double sigma0, double lambda, double x0);

/// Rescaled construction phi_g = g phi, f_g(y) = g f(y/g), noise g gamma:
/// the X-scheme built from the result coincides with the original's.
ProcessSpec scale_transform(const ProcessSpec& spec, double g);

struct StepVerdict {
    bool admissible;
    double kappa_dt; ///< kappa * dt, accepted iff < 1/2
};

/// Accept dt iff kappa dt < 1/2 (half the bijectivity bound kappa h < 1,
/// keeping the root-finder slope at least 1/2).
StepVerdict validate_step(const ProcessSpec& spec, double dt);

/// Smallest step count n >= 1 with kappa T / n < 1/2.
long min_admissible_steps(const ProcessSpec& spec, double horizon);

/// max f' over a probe grid, inflated by 10% away from zero.  Used for the
/// families without an analytic one-sided Lipschitz constant.
double probe_lipschitz_bound(const RealFn& fprime, const Interval& domain);

} // namespace isde
