#include "pdl/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pdl/analytic.hpp"
#include "pdl/error.hpp"

namespace pdl {

namespace {

struct Moments {
    double mean_h = 0.0;
    double delta_h = 0.0;
    double d_mean_h = 0.0;  // d<H>/dparameter
    double d_delta_h = 0.0; // dDeltaH/dparameter
};

Moments moments_with_gradient(const GaussianSpec& s, Parameter p) {
    Moments m;
    m.mean_h = mean_energy(s);
    m.delta_h = energy_variance(s);
    const double root = std::numbers::sqrt2 * std::sqrt(1.0 + r_squared(s));
    switch (p) {
    case Parameter::x0:
        m.d_delta_h = s.gamma * s.gamma * s.x0 / root;
        m.d_mean_h = -s.gamma * s.gamma * s.x0;
        break;
    case Parameter::p0:
        m.d_delta_h = s.p0 / root;
        m.d_mean_h = s.p0;
        break;
    case Parameter::gamma:
        m.d_delta_h = (s.gamma + 1.5 * s.gamma * s.gamma * s.x0 * s.x0 + 0.5 * s.p0 * s.p0) /
                      (2.0 * m.delta_h);
        m.d_mean_h = -s.gamma * s.x0 * s.x0;
        break;
    }
    return m;
}

double& component(GaussianSpec& s, Parameter p) {
    switch (p) {
    case Parameter::gamma: return s.gamma;
    case Parameter::x0: return s.x0;
    case Parameter::p0: return s.p0;
    }
    return s.gamma;
}

double bound_value(const GaussianSpec& s, BoundKind b, double angle) {
    const double z_mt = angle / energy_variance(s);
    const double z_ml = angle / std::abs(mean_energy(s));
    switch (b) {
    case BoundKind::mt: return z_mt;
    case BoundKind::ml: return z_ml;
    case BoundKind::pdl: return std::max(z_mt, z_ml);
    }
    return z_mt;
}

} // namespace

std::string_view to_string(Parameter p) {
    switch (p) {
    case Parameter::gamma: return "gamma";
    case Parameter::x0: return "x0";
    case Parameter::p0: return "p0";
    }
    return "gamma";
}

std::string_view to_string(BoundKind b) {
    switch (b) {
    case BoundKind::mt: return "MT";
    case BoundKind::ml: return "ML";
    case BoundKind::pdl: return "PDL";
    }
    return "MT";
}

std::string_view to_string(LabParameter p) {
    switch (p) {
    case LabParameter::index: return "index";
    case LabParameter::power: return "power";
    case LabParameter::temperature: return "temperature";
    }
    return "index";
}

Parameter parameter_from_string(std::string_view name) {
    for (auto p : {Parameter::gamma, Parameter::x0, Parameter::p0}) {
        if (to_string(p) == name) return p;
    }
    throw InvalidArgument("unknown parameter '" + std::string(name) + "'");
}

BoundKind bound_from_string(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "mt") return BoundKind::mt;
    if (lower == "ml") return BoundKind::ml;
    if (lower == "pdl") return BoundKind::pdl;
    throw InvalidArgument("unknown bound '" + std::string(name) + "' (expected mt, ml or pdl)");
}

LabParameter lab_parameter_from_string(std::string_view name) {
    for (auto p : {LabParameter::index, LabParameter::power, LabParameter::temperature}) {
        if (to_string(p) == name) return p;
    }
    throw InvalidArgument("unknown lab parameter '" + std::string(name) + "'");
}

SensitivityReport sensitivity(const GaussianSpec& spec, Parameter parameter, BoundKind bound, double angle) {
    spec.validate();
    if (!(angle > 0.0 && angle <= 0.5 * std::numbers::pi + 1e-12)) {
        throw InvalidArgument("target angle must lie in (0, pi/2]");
    }
    if (bound != BoundKind::mt && classify_regime(spec) == Regime::balanced) {
        throw RegimeError("ML sensitivity is undefined on the balance line p0^2 = gamma^2 x0^2");
    }

    const Moments m = moments_with_gradient(spec, parameter);
    const double d_mt = -angle / (m.delta_h * m.delta_h) * m.d_delta_h;
    const double sign = m.mean_h > 0.0 ? 1.0 : -1.0;
    const double d_ml = bound == BoundKind::mt ? 0.0 : -angle * sign / (m.mean_h * m.mean_h) * m.d_mean_h;

    SensitivityReport report;
    report.parameter = std::string(to_string(parameter));
    report.bound = bound;
    report.angle = angle;
    report.z = bound_value(spec, bound, angle);
    switch (bound) {
    case BoundKind::mt:
        report.branch = BoundKind::mt;
        report.analytic = d_mt;
        break;
    case BoundKind::ml:
        report.branch = BoundKind::ml;
        report.analytic = d_ml;
        break;
    case BoundKind::pdl: {
        const double z_mt = bound_value(spec, BoundKind::mt, angle);
        const double z_ml = bound_value(spec, BoundKind::ml, angle);
        if (std::abs(z_mt - z_ml) <= 1e-9 * std::max(z_mt, z_ml)) {
            report.crossover = true;
            report.branch = d_mt >= d_ml ? BoundKind::mt : BoundKind::ml;
            report.analytic = std::max(d_mt, d_ml);
            report.left_derivative = std::min(d_mt, d_ml);
        } else {
            report.branch = z_mt > z_ml ? BoundKind::mt : BoundKind::ml;
            report.analytic = z_mt > z_ml ? d_mt : d_ml;
        }
        break;
    }
    }

    GaussianSpec up = spec;
    GaussianSpec down = spec;
    const double x = component(up, parameter);
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    component(up, parameter) = x + h;
    component(down, parameter) = x - h;
    report.finite_difference = (bound_value(up, bound, angle) - bound_value(down, bound, angle)) /
                               (component(up, parameter) - component(down, parameter));
    return report;
}

namespace {

double coupling_for(const LabUnits& units, LabParameter against) {
    switch (against) {
    case LabParameter::index:
        if (units.dgamma_dn) return *units.dgamma_dn;
        throw InvalidArgument("index sensitivity needs the coupling dgamma/dn");
    case LabParameter::power:
        if (units.dgamma_dP) return *units.dgamma_dP;
        throw InvalidArgument("power sensitivity needs the coupling dgamma/dP");
    case LabParameter::temperature:
        if (units.dgamma_dT) return *units.dgamma_dT;
        if (units.dgamma_dn && units.dn_dT) return *units.dgamma_dn * *units.dn_dT;
        throw InvalidArgument("temperature sensitivity needs dgamma/dT or both dgamma/dn and dn/dT");
    }
    throw InvalidArgument("unknown lab parameter");
}

// SI (m per unit) -> display unit.
std::pair<double, const char*> display_unit(LabParameter against) {
    switch (against) {
    case LabParameter::index: return {1e3, "mm_per_RIU"};
    case LabParameter::power: return {1.0, "mm_per_mW"};
    case LabParameter::temperature: return {1e3, "um_per_mK"};
    }
    return {1.0, ""};
}

double require_gamma_lab(const LabUnits& units) {
    units.validate();
    if (!units.gamma_lab) {
        throw InvalidArgument("lab sensitivity needs gamma_lab");
    }
    return *units.gamma_lab;
}

} // namespace

SensitivityReport lab_sensitivity(const GaussianSpec& spec, const LabUnits& units, LabParameter against,
                                  BoundKind bound, double angle, double perturbation) {
    const double gamma_lab = require_gamma_lab(units);
    const double coupling = coupling_for(units, against);
    if (!std::isfinite(perturbation)) {
        throw InvalidArgument("perturbation must be finite");
    }
    SensitivityReport report = sensitivity(spec, Parameter::gamma, bound, angle);
    report.parameter = std::string(to_string(against));

    LabSensitivity lab;
    lab.coupling = coupling;
    lab.value_si = report.analytic * coupling / (gamma_lab * gamma_lab);
    const auto [scale, unit] = display_unit(against);
    lab.value = lab.value_si * scale;
    lab.unit = unit;
    lab.perturbation = perturbation;
    lab.delta_z = lab.value_si * perturbation;
    lab.delta_z_display = lab.delta_z * 1e6;
    report.lab = lab;
    return report;
}

double calibrate_coupling(const GaussianSpec& spec, const LabUnits& units, BoundKind bound, double target_si,
                          double angle) {
    const double gamma_lab = require_gamma_lab(units);
    const double s_gamma = sensitivity(spec, Parameter::gamma, bound, angle).analytic;
    if (s_gamma == 0.0) {
        throw RegimeError("bound does not depend on gamma here; coupling cannot be calibrated");
    }
    return target_si * gamma_lab * gamma_lab / s_gamma;
}

double switch_time(double z_pdl_lab, double n0) {
    if (!std::isfinite(z_pdl_lab) || z_pdl_lab < 0.0) {
        throw InvalidArgument("switch time needs a finite, non-negative distance");
    }
    if (!(n0 > 0.0)) {
        throw InvalidArgument("group index must be positive");
    }
    return n0 * z_pdl_lab / kSpeedOfLight;
}

double gate_rate(double z_pdl_lab, double n0) {
    if (!(z_pdl_lab > 0.0)) {
        throw InvalidArgument("gate rate needs z_pdl > 0");
    }
    if (!(n0 > 0.0)) {
        throw InvalidArgument("group index must be positive");
    }
    if (std::isinf(z_pdl_lab)) {
        return 0.0;
    }
    return 1.0 / switch_time(z_pdl_lab, n0);
}

} // namespace pdl
