#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "pdl/core.hpp"

namespace pdl {

inline constexpr double kSpeedOfLight = 2.99792458e8; // m/s

enum class Parameter { gamma, x0, p0 };
enum class BoundKind { mt, ml, pdl };
enum class LabParameter { index, power, temperature };

std::string_view to_string(Parameter p);
std::string_view to_string(BoundKind b);
std::string_view to_string(LabParameter p);
Parameter parameter_from_string(std::string_view name);
BoundKind bound_from_string(std::string_view name);
LabParameter lab_parameter_from_string(std::string_view name);

struct LabSensitivity {
    double value_si = 0.0;      // metres per unit of the lab parameter (RIU, W, K)
    double value = 0.0;         // in `unit`
    std::string unit;           // mm_per_RIU, mm_per_mW, um_per_mK
    double coupling = 0.0;      // dgamma_lab / d(parameter) [1/m per unit]
    double perturbation = 0.0;  // in the lab parameter's SI unit
    double delta_z = 0.0;       // shift of the bound for that perturbation [m]
    std::string delta_z_unit = "um";
    double delta_z_display = 0.0;
};

struct SensitivityReport {
    std::string parameter;
    BoundKind bound = BoundKind::mt;
    // Branch the value came from (mt or ml); equals bound unless bound == pdl.
    BoundKind branch = BoundKind::mt;
    double angle = 0.0;
    double z = 0.0;              // bound value, dimensionless
    double analytic = 0.0;       // dz/dparameter
    double finite_difference = 0.0;
    // z_PDL is not differentiable where z_MT == z_ML; analytic then holds
    // the right derivative and left_derivative the left one.
    bool crossover = false;
    std::optional<double> left_derivative;
    std::optional<LabSensitivity> lab;
};

/// dz/dx of the MT, ML, or PDL bound at a fixed target angle, analytic and by
/// central differences with step 1e-6 max(1, |x|). For ML the launch must
/// be off the balance line (RegimeError otherwise).
SensitivityReport sensitivity(const GaussianSpec& spec, Parameter parameter, BoundKind bound,
                              double angle = 0.5 * std::numbers::pi);

/// Lab-unit sensitivity through dZ/dX = (dz/dgamma) (dgamma_lab/dX) / gamma_lab^2,
/// with Z = z / gamma_lab and the dimensionless distance unit held at the
/// reference gamma_lab. `perturbation` is in SI units of the parameter.
SensitivityReport lab_sensitivity(const GaussianSpec& spec, const LabUnits& units, LabParameter against,
                                  BoundKind bound, double angle = 0.5 * std::numbers::pi,
                                  double perturbation = 0.0);

/// Coupling dgamma_lab/dX [1/m per unit] that makes the lab sensitivity equal
/// target_si [m per unit].
double calibrate_coupling(const GaussianSpec& spec, const LabUnits& units, BoundKind bound,
                          double target_si, double angle = 0.5 * std::numbers::pi);

// T = n0 z / c, z in metres.
double switch_time(double z_pdl_lab, double n0);

// R = 1 / T. Throws InvalidArgument for z <= 0.
double gate_rate(double z_pdl_lab, double n0);

} // namespace pdl
