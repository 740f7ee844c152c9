#include "isde/rootfind.hpp"

#include <cmath>
#include <limits>

#include "isde/errors.hpp"

namespace isde {

namespace {

inline bool accepted(double residual, double y, double tol) {
    return std::abs(residual) <= tol * (1.0 + std::abs(y));
}

} // namespace

RootResult solve_monotone_implicit(const std::function<double(double)>& f,
                                   const std::function<double(double)>& fprime,
                                   double dt, double rhs, double lower_bound,
                                   double slope_min, double guess, double interior_point,
                                   double tol, int max_iter) {
    const bool bounded_below = std::isfinite(lower_bound);
    int evals = 0;

    auto residual_at = [&](double y) {
        ++evals;
        return y - dt * f(y) - rhs;
    };

    if (bounded_below && !(guess > lower_bound))
        guess = lower_bound + 0.5 * (interior_point - lower_bound);

    double y = guess;
    double r = residual_at(y);
    if (accepted(r, y, tol))
        return {y, evals, r};

    // Bracket [lo, hi] with residual(lo) <= 0 <= residual(hi).
    double lo, hi, r_lo, r_hi;
    const double reach = 1.0625 * std::abs(r) / slope_min;
    double step = reach + 1.0;
    if (r > 0.0) {
        hi = y;
        r_hi = r;
        lo = y - reach;
        if (bounded_below && !(lo > lower_bound))
            lo = lower_bound + 0.5 * (y - lower_bound);
        r_lo = residual_at(lo);
        while (r_lo > 0.0) {
            if (evals >= max_iter)
                throw SolverError("implicit step: bracket expansion exceeded iteration cap");
            hi = lo;
            r_hi = r_lo;
            if (bounded_below) {
                lo = lower_bound + 0.5 * (lo - lower_bound);
            } else {
                lo -= step;
                step *= 2.0;
            }
            r_lo = residual_at(lo);
        }
        if (accepted(r_lo, lo, tol))
            return {lo, evals, r_lo};
    } else {
        lo = y;
        r_lo = r;
        hi = y + reach;
        r_hi = residual_at(hi);
        while (r_hi < 0.0) {
            if (evals >= max_iter)
                throw SolverError("implicit step: bracket expansion exceeded iteration cap");
            lo = hi;
            r_lo = r_hi;
            hi += step;
            step *= 2.0;
            r_hi = residual_at(hi);
        }
        if (accepted(r_hi, hi, tol))
            return {hi, evals, r_hi};
    }

    // Contract the bracket.  With a drift derivative: safeguarded Newton from
    // the most recent point.  Without: Illinois false position, which keeps
    // the bracketing guarantee but converges superlinearly (plain bisection
    // would stall right at the tolerance).
    y = (std::abs(r_lo) <= std::abs(r_hi)) ? lo : hi;
    r = (std::abs(r_lo) <= std::abs(r_hi)) ? r_lo : r_hi;
    double w_lo = r_lo, w_hi = r_hi; // Illinois endpoint weights
    int last_side = 0;
    while (evals < max_iter) {
        double candidate = std::numeric_limits<double>::quiet_NaN();
        if (fprime) {
            const double slope = 1.0 - dt * fprime(y);
            if (slope > 0.0)
                candidate = y - r / slope;
        } else if (w_hi != w_lo) {
            candidate = (lo * w_hi - hi * w_lo) / (w_hi - w_lo);
        }
        if (!(candidate > lo && candidate < hi))
            candidate = lo + 0.5 * (hi - lo);

        y = candidate;
        r = residual_at(y);
        if (accepted(r, y, tol))
            return {y, evals, r};
        if (r > 0.0) {
            hi = y;
            w_hi = r;
            if (last_side > 0)
                w_lo *= 0.5;
            last_side = 1;
        } else {
            lo = y;
            w_lo = r;
            if (last_side < 0)
                w_hi *= 0.5;
            last_side = -1;
        }
        if (!(lo < hi))
            break; // bracket collapsed to adjacent floats
    }
    if (accepted(r, y, tol))
        return {y, evals, r};
    throw SolverError("implicit step: solver did not reach tolerance within iteration cap");
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa, double b, double fb,
                double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b)
        return 0.0;
    if (a > b)
        return -integrate(f, b, a, tol);
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

} // namespace isde
