#include "isde/processes.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "isde/errors.hpp"
#include "isde/rootfind.hpp"
#include "isde/schemes.hpp"

namespace isde {

namespace {

constexpr double kTransformTol = 1e-12;

// y^e with an integer fast path; e may be negative.
double real_power(double y, double e) {
    const double r = std::round(e);
    if (std::abs(e - r) < 1e-12 && std::abs(r) <= 64.0) {
        long n = static_cast<long>(r);
        const bool inv = n < 0;
        n = std::abs(n);
        double acc = 1.0, base = y;
        while (n > 0) {
            if (n & 1)
                acc *= base;
            base *= base;
            n >>= 1;
        }
        return inv ? 1.0 / acc : acc;
    }
    return std::pow(y, e);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out(static_cast<std::size_t>(count));
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        out[static_cast<std::size_t>(i)] = std::exp(llo + (lhi - llo) * i / (count - 1));
    return out;
}

// phi^{-1} by safeguarded Newton on phi, to absolute tolerance kTransformTol.
// phi' = 1/sigma in [1/sigma_hi, 1/sigma_lo] brackets the root inside
// [y sigma_lo, y sigma_hi] (order-swapped for y < 0).
double invert_transform(const RealFn& phi, const RealFn& sigma, double sigma_lo, double sigma_hi,
                        double y) {
    double lo = y >= 0 ? y * sigma_lo : y * sigma_hi;
    double hi = y >= 0 ? y * sigma_hi : y * sigma_lo;
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        const double r = phi(x) - y;
        if (std::abs(r) <= kTransformTol)
            return x;
        if (r > 0)
            hi = x;
        else
            lo = x;
        double candidate = x - r * sigma(x); // Newton with phi' = 1/sigma
        if (!(candidate > lo && candidate < hi))
            candidate = 0.5 * (lo + hi);
        x = candidate;
    }
    throw SolverError("transform inversion did not converge");
}

} // namespace

void validate(const CirParams& p) {
    if (!(p.sigma > 0.0))
        throw ParameterError("cir requires sigma > 0");
    if (!(p.a >= 0.0))
        throw ParameterError("cir requires a >= 0");
    if (!(p.x0 > 0.0))
        throw ParameterError("cir requires x0 > 0");
    if (!(p.sigma * p.sigma <= 2.0 * p.a)) {
        std::ostringstream msg;
        msg << "cir parameters violate 2a >= sigma^2 (a=" << p.a << ", sigma=" << p.sigma << ")";
        throw ParameterError(msg.str());
    }
}

void validate(const CevParams& p) {
    if (!(p.alpha > 0.5 && p.alpha < 1.0))
        throw ParameterError("cev requires alpha in (1/2, 1)");
    if (!(p.a > 0.0))
        throw ParameterError("cev requires a > 0");
    if (!(p.sigma >= 0.0))
        throw ParameterError("cev requires sigma >= 0");
    if (!(p.x0 > 0.0))
        throw ParameterError("cev requires x0 > 0");
}

ProcessSpec cir_spec(const CirParams& p) {
    validate(p);
    const double q = p.a - 0.25 * p.sigma * p.sigma; // > 0 under 2a >= sigma^2
    const double half_k = 0.5 * p.k;

    ProcessSpec spec;
    spec.label = "cir";
    spec.interval = Interval::positive_half_line();
    spec.drift = [q, half_k](double y) { return 0.5 * q / y - half_k * y; };
    spec.drift_prime = [q, half_k](double y) { return -0.5 * q / (y * y) - half_k; };
    spec.drift_second = [q](double y) { return q / (y * y * y); };
    spec.noise = 0.5 * p.sigma;
    spec.kappa = std::max(-half_k, 0.0);
    spec.inverse_transform = [](double y) { return y * y; };
    spec.y0 = std::sqrt(p.x0);
    spec.x0 = p.x0;
    spec.exact_step = [p](double y_prev, double dt, double dW) {
        return cir_step_closed_form({y_prev, dt, dW}, p);
    };
    return spec;
}

ProcessSpec cev_spec(const CevParams& p) {
    validate(p);
    const double one_minus = 1.0 - p.alpha;
    const double e = p.alpha / one_minus; // a-term exponent, y^{-e}
    const double a = p.a, k = p.k;
    const double half_alpha_sigma2 = 0.5 * p.alpha * p.sigma * p.sigma;

    ProcessSpec spec;
    spec.label = "cev";
    spec.interval = Interval::positive_half_line();
    spec.drift = [=](double y) {
        return one_minus * (a * real_power(y, -e) - k * y - half_alpha_sigma2 / y);
    };
    spec.drift_prime = [=](double y) {
        return one_minus * (-a * e * real_power(y, -e - 1.0) - k + half_alpha_sigma2 / (y * y));
    };
    spec.drift_second = [=](double y) {
        return one_minus *
               (a * e * (e + 1.0) * real_power(y, -e - 2.0) - 2.0 * half_alpha_sigma2 / (y * y * y));
    };
    spec.noise = p.sigma * one_minus;
    spec.kappa = probe_lipschitz_bound(spec.drift_prime, spec.interval);
    spec.inverse_transform = [=](double y) { return real_power(y, 1.0 / one_minus); };
    spec.y0 = std::pow(p.x0, one_minus);
    spec.x0 = p.x0;
    return spec;
}

ProcessSpec lamperti_spec(const LampertiSpec& s) {
    if (!(s.sigma_lo > 0.0) || !(s.sigma_hi >= s.sigma_lo))
        throw ParameterError("lamperti requires 0 < sigma_lo <= sigma_hi");
    if (!s.drift_x || !s.diffusion || !s.diffusion_prime)
        throw ParameterError("lamperti requires drift, diffusion and diffusion derivative");

    // Diffusion bounds must hold on a probe grid around the initial state.
    const double span = std::max(10.0, std::abs(s.x0) + 10.0);
    for (int i = 0; i <= 512; ++i) {
        const double x = -span + 2.0 * span * i / 512.0;
        const double sig = s.diffusion(x);
        if (!(sig >= s.sigma_lo - 1e-12) || !(sig <= s.sigma_hi + 1e-12)) {
            std::ostringstream msg;
            msg << "lamperti diffusion bounds violated at x=" << x << " (sigma=" << sig << ")";
            throw ParameterError(msg.str());
        }
    }

    const RealFn sigma = s.diffusion;
    RealFn phi = s.transform;
    if (!phi)
        phi = [sigma](double x) {
            return integrate([&sigma](double z) { return 1.0 / sigma(z); }, 0.0, x, kTransformTol);
        };
    RealFn phi_inv = s.inverse;
    if (!phi_inv) {
        const double lo = s.sigma_lo, hi = s.sigma_hi;
        phi_inv = [phi, sigma, lo, hi](double y) { return invert_transform(phi, sigma, lo, hi, y); };
    }

    const RealFn b = s.drift_x;
    const RealFn sigma_prime = s.diffusion_prime;

    ProcessSpec spec;
    spec.label = "lamperti";
    spec.interval = Interval::real_line();
    spec.drift = [b, sigma, sigma_prime, phi_inv](double y) {
        const double x = phi_inv(y);
        return b(x) / sigma(x) - 0.5 * sigma_prime(x);
    };
    spec.noise = 1.0;
    spec.inverse_transform = phi_inv;
    spec.y0 = phi(s.x0);
    spec.x0 = s.x0;
    if (std::isfinite(s.kappa)) {
        spec.kappa = s.kappa;
    } else {
        const RealFn f = spec.drift;
        spec.kappa = probe_lipschitz_bound(
            [f](double y) {
                const double d = 1e-5 * (1.0 + std::abs(y));
                return (f(y + d) - f(y - d)) / (2.0 * d);
            },
            spec.interval);
    }
    return spec;
}

ProcessSpec constant_diffusion_spec(double sigma0, double lambda, double x0) {
    if (!(sigma0 > 0.0))
        throw ParameterError("constant-diffusion requires sigma0 > 0");

    ProcessSpec spec;
    spec.label = "constant-diffusion";
    spec.interval = Interval::real_line();
    spec.drift = [lambda](double y) { return -lambda * y; };
    spec.drift_prime = [lambda](double) { return -lambda; };
    spec.drift_second = [](double) { return 0.0; };
    spec.noise = 1.0;
    spec.kappa = -lambda;
    spec.inverse_transform = [sigma0](double y) { return sigma0 * y; };
    spec.y0 = x0 / sigma0;
    spec.x0 = x0;
    spec.exact_step = [lambda](double y_prev, double dt, double dW) {
        return (y_prev + dW) / (1.0 + lambda * dt);
    };
    return spec;
}

ProcessSpec scale_transform(const ProcessSpec& spec, double g) {
    if (!(g > 0.0))
        throw ParameterError("scale_transform requires a positive factor");

    ProcessSpec out;
    out.label = spec.label + " (scaled)";
    out.interval.lower = spec.interval.bounded_below() ? g * spec.interval.lower
                                                       : spec.interval.lower;
    const RealFn f = spec.drift;
    out.drift = [f, g](double y) { return g * f(y / g); };
    if (spec.drift_prime) {
        const RealFn fp = spec.drift_prime;
        out.drift_prime = [fp, g](double y) { return fp(y / g); };
    }
    if (spec.drift_second) {
        const RealFn fpp = spec.drift_second;
        out.drift_second = [fpp, g](double y) { return fpp(y / g) / g; };
    }
    out.noise = g * spec.noise;
    out.kappa = spec.kappa;
    const RealFn psi = spec.inverse_transform;
    out.inverse_transform = [psi, g](double y) { return psi(y / g); };
    out.y0 = g * spec.y0;
    out.x0 = spec.x0;
    if (spec.exact_step) {
        const auto step = spec.exact_step;
        out.exact_step = [step, g](double y_prev, double dt, double dW) {
            return g * step(y_prev / g, dt, dW);
        };
    }
    return out;
}

StepVerdict validate_step(const ProcessSpec& spec, double dt) {
    if (!(dt > 0.0))
        throw std::invalid_argument("validate_step: dt must be positive");
    const double kappa_dt = spec.kappa * dt;
    return {kappa_dt < 0.5, kappa_dt};
}

long min_admissible_steps(const ProcessSpec& spec, double horizon) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("min_admissible_steps: horizon must be positive");
    if (spec.kappa <= 0.0)
        return 1;
    long n = static_cast<long>(std::floor(2.0 * spec.kappa * horizon)) + 1;
    if (n < 1)
        n = 1;
    while (!validate_step(spec, horizon / static_cast<double>(n)).admissible)
        ++n;
    return n;
}

double probe_lipschitz_bound(const RealFn& fprime, const Interval& domain) {
    double peak = -std::numeric_limits<double>::infinity();
    if (domain.bounded_below()) {
        for (double offset : log_spaced(1e-6, 1e4, 401)) {
            const double v = fprime(domain.lower + offset);
            if (std::isfinite(v) && v > peak)
                peak = v;
        }
    } else {
        for (double magnitude : log_spaced(1e-6, 50.0, 121)) {
            for (double side : {-1.0, 1.0}) {
                const double v = fprime(side * magnitude);
                if (std::isfinite(v) && v > peak)
                    peak = v;
            }
        }
        const double at_zero = fprime(0.0);
        if (std::isfinite(at_zero) && at_zero > peak)
            peak = at_zero;
    }
    if (!std::isfinite(peak))
        throw ParameterError("drift derivative not finite on the probe grid");
    return peak + 0.1 * std::abs(peak);
}

} // namespace isde
