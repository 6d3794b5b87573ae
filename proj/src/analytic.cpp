#include "pdl/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pdl/error.hpp"

namespace pdl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kUnitTolerance = 1e-12;

// log(cosh y + i sinh y) without overflow for large |y|.
complex log_cosh_plus_i_sinh(double y) {
    const double ay = std::abs(y);
    const double e = std::exp(-2.0 * ay);
    const complex w = 0.5 * (complex{1.0, 1.0} + e * complex{1.0, -1.0});
    const complex l = ay + std::log(w);
    return y >= 0.0 ? l : std::conj(l);
}

void require_angle(double angle, bool allow_zero) {
    if (!std::isfinite(angle) || angle < 0.0 || angle > kHalfPi + kUnitTolerance ||
        (!allow_zero && angle == 0.0)) {
        throw InvalidArgument("target angle must lie in " + std::string(allow_zero ? "[0" : "(0") +
                              ", pi/2], got " + std::to_string(angle));
    }
}

} // namespace

ClosedFormGaussian evolve_closed_form(const GaussianSpec& spec, double z) {
    if (!std::isfinite(z)) {
        throw InvalidArgument("propagation distance must be finite");
    }
    const GaussianProfile launch = launch_profile(spec);
    const double g = spec.gamma;

    // The gamma = 1 propagator in the scaled frame x' = sqrt(g) x, z' = g z,
    // mapped back: the quadratic coefficient follows the Riccati flow
    // a' = -i (2 a^2 + g^2 / 2) from a(0) = g / 2.
    const double y = g * z;
    const complex u{1.0 / std::cosh(2.0 * y), -std::tanh(2.0 * y)};
    const complex log_d = log_cosh_plus_i_sinh(y);

    const complex b0 = launch.linear;
    ClosedFormGaussian out;
    out.z = z;
    out.profile.quadratic = launch.quadratic * u;
    out.profile.linear = b0 * std::exp(-log_d);
    out.profile.log_norm = launch.log_norm - 0.5 * log_d - b0 * b0 * (u - 1.0) / (4.0 * g);
    return out;
}

BeamState evaluate(const ClosedFormGaussian& beam, const Grid& grid) {
    return sample_profile(beam.profile, grid, beam.z);
}

complex log_fidelity(const GaussianSpec& spec, double z) {
    spec.validate();
    if (!std::isfinite(z)) {
        throw InvalidArgument("propagation distance must be finite");
    }
    // The Gaussian overlap sqrt(pi / A) exp(B^2 / (4 A) + C) of launch and
    // evolved profile, reduced with D = cosh y + i sinh y so that nothing
    // cancels:
    //   log F = -log(cosh y) / 2 - |alpha|^2 (1 - sech y) - i (<H> / gamma) tanh y.
    const double y = spec.gamma * std::abs(z);
    const double half_sinh = std::sinh(0.5 * y);
    const double cosh_minus_one = 2.0 * half_sinh * half_sinh;
    const double log_cosh = y < 1.0 ? std::log1p(cosh_minus_one) : y + std::log1p(std::exp(-2.0 * y)) - std::log(2.0);
    const double one_minus_sech = cosh_minus_one / (1.0 + cosh_minus_one);
    const double phase = -mean_energy(spec) / spec.gamma * std::tanh(spec.gamma * z);
    return {-0.5 * log_cosh - 0.5 * r_squared(spec) * one_minus_sech, phase};
}

complex fidelity(const GaussianSpec& spec, double z) { return std::exp(log_fidelity(spec, z)); }

double bures_angle(complex F) {
    const double m = std::abs(F);
    if (!(m <= 1.0 + kUnitTolerance)) {
        throw NumericalError("|F| = " + std::to_string(m) + " exceeds 1");
    }
    return std::acos(std::min(m, 1.0));
}

double bures_angle_at(const GaussianSpec& spec, double z) {
    double l = log_fidelity(spec, z).real();
    if (l > kUnitTolerance) {
        throw NumericalError("closed-form overlap exceeds unity");
    }
    l = std::min(l, 0.0);
    const double sin_sq = -std::expm1(2.0 * l);
    return std::atan2(std::sqrt(sin_sq), std::exp(l));
}

double mean_energy(const GaussianSpec& spec) {
    spec.validate();
    return 0.5 * (spec.p0 * spec.p0 - spec.gamma * spec.gamma * spec.x0 * spec.x0);
}

double energy_variance(const GaussianSpec& spec) {
    spec.validate();
    return spec.gamma * std::sqrt(0.5 + 0.5 * r_squared(spec));
}

double mt_bound(double angle, double delta_h) {
    require_angle(angle, true);
    if (!(delta_h > 0.0)) {
        throw InvalidArgument("energy spread must be positive");
    }
    return angle / delta_h;
}

double ml_bound(double angle, double mean_h) {
    require_angle(angle, true);
    if (!std::isfinite(mean_h)) {
        throw InvalidArgument("mean energy must be finite");
    }
    if (angle == 0.0) {
        return 0.0;
    }
    if (mean_h == 0.0) {
        return kInf;
    }
    return angle / std::abs(mean_h);
}

std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::momentum_dominated: return "momentum-dominated";
    case Regime::position_dominated: return "position-dominated";
    case Regime::balanced: return "balanced";
    case Regime::generic: return "generic";
    }
    return "generic";
}

Regime regime_from_string(std::string_view name) {
    for (auto r : {Regime::momentum_dominated, Regime::position_dominated, Regime::balanced,
                   Regime::generic}) {
        if (to_string(r) == name) {
            return r;
        }
    }
    throw InvalidArgument("unknown regime '" + std::string(name) + "'");
}

Regime classify_regime(const GaussianSpec& spec) {
    spec.validate();
    const double kinetic = spec.p0 * spec.p0;
    const double potential = spec.gamma * spec.gamma * spec.x0 * spec.x0;
    if (std::abs(kinetic - potential) < 1e-9 * (kinetic + potential + 1.0)) {
        return Regime::balanced;
    }
    if (kinetic > 10.0 * potential) {
        return Regime::momentum_dominated;
    }
    if (potential > 10.0 * kinetic) {
        return Regime::position_dominated;
    }
    return Regime::generic;
}

BoundsReport pdl(const GaussianSpec& spec, double angle) {
    require_angle(angle, false);
    BoundsReport report;
    report.regime = classify_regime(spec);
    // Within the balance tolerance <H> is treated as exactly zero.
    report.mean_h = report.regime == Regime::balanced ? 0.0 : mean_energy(spec);
    report.abs_mean_h = std::abs(report.mean_h);
    report.delta_h = energy_variance(spec);
    report.bures_target = angle;
    report.z_mt = mt_bound(angle, report.delta_h);
    report.z_ml = ml_bound(angle, report.mean_h);
    report.z_pdl = std::max(report.z_mt, report.z_ml);
    return report;
}

BoundsReport pdl_from_moments(double mean_h, double delta_h, double angle) {
    require_angle(angle, false);
    BoundsReport report;
    report.mean_h = mean_h;
    report.abs_mean_h = std::abs(mean_h);
    report.delta_h = delta_h;
    report.bures_target = angle;
    report.z_mt = mt_bound(angle, delta_h);
    report.z_ml = ml_bound(angle, mean_h);
    report.z_pdl = std::max(report.z_mt, report.z_ml);
    report.regime = mean_h == 0.0 ? Regime::balanced : Regime::generic;
    return report;
}

OrthogonalityDistances orthogonality_distances(const GaussianSpec& spec) {
    const double gap = std::abs(spec.p0 * spec.p0 - spec.gamma * spec.gamma * spec.x0 * spec.x0);
    const bool balanced = classify_regime(spec) == Regime::balanced;
    return {kHalfPi / energy_variance(spec), balanced ? kInf : std::numbers::pi / gap};
}

AsymptoticOrthogonality asymptotic_orthogonality(const GaussianSpec& spec) {
    const Regime regime = classify_regime(spec);
    const double pi = std::numbers::pi;
    AsymptoticOrthogonality out;
    out.regime = regime;
    out.well_separated = r_squared(spec) >= 100.0;
    if (regime == Regime::momentum_dominated) {
        const double p = std::abs(spec.p0);
        out.z_mt = pi / (std::sqrt(2.0 * spec.gamma) * p);
        out.z_ml = pi / (p * p);
    } else if (regime == Regime::position_dominated) {
        const double x = std::abs(spec.x0);
        out.z_mt = pi / (std::numbers::sqrt2 * std::pow(spec.gamma, 1.5) * x);
        out.z_ml = pi / (spec.gamma * spec.gamma * x * x);
    } else {
        throw RegimeError("asymptotic orthogonality needs a momentum- or position-dominated launch, got " +
                          std::string(to_string(regime)));
    }
    return out;
}

std::optional<double> solve_z_for_angle(const GaussianSpec& spec, double target,
                                        const AngleSolveOptions& options) {
    spec.validate();
    require_angle(target, true);
    if (!(options.scan_step > 0.0) || !(options.scan_limit > options.scan_step)) {
        throw InvalidArgument("angle solver needs 0 < scan_step < scan_limit");
    }
    if (target == 0.0) {
        return 0.0;
    }
    // Two Gaussians always overlap, so exact orthogonality is never reached.
    if (target >= kHalfPi) {
        return std::nullopt;
    }
    const double log_threshold = std::log(std::cos(target));
    auto excess = [&](double z) { return log_fidelity(spec, z).real() - log_threshold; };

    const double h = options.scan_step / spec.gamma;
    const double limit = options.scan_limit / spec.gamma;
    const auto samples = static_cast<long>(std::ceil(limit / h));
    for (long i = 1; i <= samples; ++i) {
        double lo = static_cast<double>(i - 1) * h;
        double hi = static_cast<double>(i) * h;
        if (excess(hi) > 0.0) {
            continue;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (excess(mid) <= 0.0 ? hi : lo) = mid;
        }
        return hi;
    }
    return std::nullopt;
}

double visibility(complex F) {
    const double m = std::abs(F);
    if (!(m <= 1.0 + kUnitTolerance)) {
        throw NumericalError("|F| = " + std::to_string(m) + " exceeds 1");
    }
    const double a = std::min(m, 1.0);
    return 2.0 * a / (1.0 + a * a);
}

} // namespace pdl
