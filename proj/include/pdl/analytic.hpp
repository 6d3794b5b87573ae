#pragma once

#include <optional>
#include <string_view>

#include "pdl/core.hpp"

namespace pdl {

/// Exact solution of i psi_z = (p^2/2 - gamma^2 x^2/2) psi for the matched
/// launch Gaussian, stored as the Gaussian exponent coefficients at z.
struct ClosedFormGaussian {
    GaussianProfile profile;
    double z = 0.0;

    complex quadratic() const { return profile.quadratic; }
    double chirp() const { return -profile.quadratic.imag(); } // phase curvature of exp(i chirp x^2)
    complex center() const { return profile.center(); }
    complex width_parameter() const { return profile.width_parameter(); }
    complex log_norm() const { return profile.log_norm; }

    complex value(double x) const { return profile.value(x); }
};

ClosedFormGaussian evolve_closed_form(const GaussianSpec& spec, double z);

BeamState evaluate(const ClosedFormGaussian& beam, const Grid& grid);

/// log <psi(0)|psi(z)>, from the closed-form Gaussian overlap integral.
complex log_fidelity(const GaussianSpec& spec, double z);

/// F(z) = <psi(0)|psi(z)>.
complex fidelity(const GaussianSpec& spec, double z);

/// arccos|F|. Accepts |F| up to 1 + 1e-12 (clamped); beyond that throws
/// NumericalError.
double bures_angle(complex F);

/// Bures angle evaluated from log|F| so that small angles keep full
/// relative precision.
double bures_angle_at(const GaussianSpec& spec, double z);

/// <H> = (p0^2 - gamma^2 x0^2) / 2, signed.
double mean_energy(const GaussianSpec& spec);

/// Standard deviation of H: gamma sqrt(1/2 + |alpha|^2).
double energy_variance(const GaussianSpec& spec);

// angle / deltaH.
double mt_bound(double angle, double delta_h);
// angle / |mean_h|; +inf on the balance line, 0 for a zero angle.
double ml_bound(double angle, double mean_h);

enum class Regime { momentum_dominated, position_dominated, balanced, generic };

std::string_view to_string(Regime regime);
Regime regime_from_string(std::string_view name);

Regime classify_regime(const GaussianSpec& spec);

struct BoundsReport {
    double mean_h = 0.0;
    double abs_mean_h = 0.0;
    double delta_h = 0.0;
    double bures_target = 0.0;
    double z_mt = 0.0;
    double z_ml = 0.0;
    double z_pdl = 0.0;
    Regime regime = Regime::generic;
};

/// Propagation-distance limit max(z_MT, z_ML) for a target angle in (0, pi/2].
BoundsReport pdl(const GaussianSpec& spec, double angle);

/// Same bounds from raw generator moments (any consistent length unit).
BoundsReport pdl_from_moments(double mean_h, double delta_h, double angle);

struct OrthogonalityDistances {
    double z_mt = 0.0;
    double z_ml = 0.0;
};

OrthogonalityDistances orthogonality_distances(const GaussianSpec& spec);

struct AsymptoticOrthogonality {
    double z_mt = 0.0;
    double z_ml = 0.0;
    Regime regime = Regime::generic;
    // false when R^2 < 100: the leading-order forms are then only indicative
    bool well_separated = false;
};

/// Leading-order orthogonality distances in the momentum- or
/// position-dominated regime. Throws RegimeError if neither applies.
AsymptoticOrthogonality asymptotic_orthogonality(const GaussianSpec& spec);

struct AngleSolveOptions {
    double scan_step = 0.01;  // in units of 1/gamma
    double scan_limit = 30.0; // in units of 1/gamma
};

/// Smallest z > 0 with L(z) >= target, or nullopt when the target is never
/// reached within the scan range. target must lie in [0, pi/2].
std::optional<double> solve_z_for_angle(const GaussianSpec& spec, double target,
                                        const AngleSolveOptions& options = {});

/// Interferometric visibility 2|F| / (1 + |F|^2).
double visibility(complex F);

} // namespace pdl
