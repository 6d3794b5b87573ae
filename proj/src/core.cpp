#include "pdl/core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pdl/error.hpp"

namespace pdl {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be finite");
    }
}

} // namespace

void GaussianSpec::validate() const {
    require_finite(gamma, "gamma");
    require_finite(x0, "x0");
    require_finite(p0, "p0");
    if (!(gamma > 0.0)) {
        throw InvalidArgument("gamma must be positive");
    }
}

GaussianSpec GaussianSpec::from_displacement(double gamma, complex alpha) {
    const double root = std::sqrt(gamma);
    GaussianSpec spec{gamma, std::numbers::sqrt2 * alpha.real() / root,
                      std::numbers::sqrt2 * alpha.imag() * root};
    spec.validate();
    return spec;
}

GaussianSpec GaussianSpec::from_polar(double gamma, double r, double theta) {
    if (!(r >= 0.0)) {
        throw InvalidArgument("displacement modulus r must be non-negative");
    }
    return from_displacement(gamma, std::polar(r, theta));
}

Displacement displacement(const GaussianSpec& spec) {
    const double root = std::sqrt(spec.gamma);
    const complex alpha{root * spec.x0 / std::numbers::sqrt2,
                        spec.p0 / root / std::numbers::sqrt2};
    double theta = std::arg(alpha);
    if (theta <= -std::numbers::pi) {
        theta = std::numbers::pi;
    }
    return {alpha, std::abs(alpha), theta};
}

double r_squared(const GaussianSpec& spec) {
    return spec.gamma * spec.x0 * spec.x0 + spec.p0 * spec.p0 / spec.gamma;
}

Grid Grid::make(std::size_t n, double x_max) {
    if (!is_power_of_two(n)) {
        throw InvalidArgument("grid size " + std::to_string(n) + " is not a power of two >= 2");
    }
    if (!(x_max > 0.0) || !std::isfinite(x_max)) {
        throw InvalidArgument("grid half-width x_max must be positive and finite");
    }
    auto data = std::make_shared<Data>();
    data->n = n;
    data->x_max = x_max;
    data->dx = 2.0 * x_max / static_cast<double>(n);
    data->dk = 2.0 * std::numbers::pi / (static_cast<double>(n) * data->dx);
    data->x.resize(n);
    data->k.resize(n);
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<std::ptrdiff_t>(j);
        data->x[j] = static_cast<double>(sj - half) * data->dx;
        const std::ptrdiff_t m = sj < half ? sj : sj - static_cast<std::ptrdiff_t>(n);
        data->k[j] = static_cast<double>(m) * data->dk;
    }
    return Grid(std::move(data));
}

double Grid::k_max() const { return std::numbers::pi / data_->dx; }

bool operator==(const Grid& a, const Grid& b) {
    return a.data_ == b.data_ || (a.size() == b.size() && a.x_max() == b.x_max());
}

Grid make_grid(std::size_t n, double x_max) { return Grid::make(n, x_max); }

complex GaussianProfile::value(double x) const {
    return std::exp(-quadratic * x * x + linear * x + log_norm);
}

double GaussianProfile::intensity_mean() const {
    return linear.real() / (2.0 * quadratic.real());
}

double GaussianProfile::intensity_variance() const { return 1.0 / (4.0 * quadratic.real()); }

complex GaussianProfile::width_parameter() const { return 1.0 / (2.0 * quadratic); }

complex GaussianProfile::center() const { return linear / (2.0 * quadratic); }

GaussianProfile launch_profile(const GaussianSpec& spec) {
    spec.validate();
    const double g = spec.gamma;
    // (gamma/pi)^(1/4) exp(-gamma (x - x0)^2 / 2 + i p0 x)
    return {complex{0.5 * g, 0.0}, complex{g * spec.x0, spec.p0},
            complex{0.25 * std::log(g / std::numbers::pi) - 0.5 * g * spec.x0 * spec.x0, 0.0}};
}

double BeamState::norm() const {
    double sum = 0.0;
    for (const auto& v : samples) {
        sum += std::norm(v);
    }
    return sum * grid.dx();
}

BeamState sample_profile(const GaussianProfile& profile, const Grid& grid, double z) {
    BeamState state{grid, std::vector<complex>(grid.size()), z};
    const auto xs = grid.x();
    for (std::size_t j = 0; j < xs.size(); ++j) {
        state.samples[j] = profile.value(xs[j]);
    }
    return state;
}

double launch_truncation(const GaussianSpec& spec, const Grid& grid) {
    spec.validate();
    // |psi|^2 ~ N(x0, 1/(2 gamma)) and |psi~|^2 ~ N(p0, gamma/2)
    const double sg = std::sqrt(spec.gamma);
    const double L = grid.x_max();
    const double K = grid.k_max();
    const double position = 0.5 * std::erfc((L - spec.x0) * sg) + 0.5 * std::erfc((L + spec.x0) * sg);
    const double momentum = 0.5 * std::erfc((K - spec.p0) / sg) + 0.5 * std::erfc((K + spec.p0) / sg);
    return position + momentum;
}

BeamState gaussian_state(const GaussianSpec& spec, const Grid& grid) {
    const double lost = launch_truncation(spec, grid);
    if (lost > 1e-12) {
        std::ostringstream msg;
        msg << "grid truncates the launch state: lost mass " << lost
            << " > 1e-12 (widen x_max or refine n)";
        throw InvalidArgument(msg.str());
    }
    return sample_profile(launch_profile(spec), grid, 0.0);
}

double LabUnits::k0() const {
    if (!(lambda0 > 0.0)) {
        throw InvalidArgument("lambda0 must be positive to form k0");
    }
    return 2.0 * std::numbers::pi * n0 / lambda0;
}

void LabUnits::validate() const {
    if (!(lambda0 > 0.0) || !std::isfinite(lambda0)) {
        throw InvalidArgument("lambda0 must be positive and finite");
    }
    if (!(n0 >= 1.0) || !std::isfinite(n0)) {
        throw InvalidArgument("n0 must be >= 1");
    }
    if (!(w0 > 0.0) || !std::isfinite(w0)) {
        throw InvalidArgument("w0 must be positive and finite");
    }
    if (gamma_lab && (!(*gamma_lab > 0.0) || !std::isfinite(*gamma_lab))) {
        throw InvalidArgument("gamma_lab must be positive and finite");
    }
    for (const auto& c : {dgamma_dn, dgamma_dP, dgamma_dT, dn_dT}) {
        if (c && !std::isfinite(*c)) {
            throw InvalidArgument("lab couplings must be finite");
        }
    }
}

namespace {
double require_gamma_lab(const LabUnits& units) {
    if (!units.gamma_lab) {
        throw InvalidArgument("lab conversion needs gamma_lab");
    }
    if (!(*units.gamma_lab > 0.0)) {
        throw InvalidArgument("gamma_lab must be positive");
    }
    return *units.gamma_lab;
}
} // namespace

double z_to_lab(double z, const LabUnits& units) { return z / require_gamma_lab(units); }

double lab_to_z(double z_lab, const LabUnits& units) { return z_lab * require_gamma_lab(units); }

} // namespace pdl
