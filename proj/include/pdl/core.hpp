#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace pdl {

using complex = std::complex<double>;

/// Launch state of the beam: a gamma-matched Gaussian displaced by (x0, p0).
///
/// The position variance of |psi|^2 is 1/(2 gamma), so in the scaled frame
/// x' = sqrt(gamma) x, p' = p / sqrt(gamma) the launch is a coherent state with
/// amplitude alpha = (x0' + i p0') / sqrt(2).
struct GaussianSpec {
    double gamma = 1.0; // inverted-potential curvature, > 0
    double x0 = 0.0;    // near-field centroid (lateral offset)
    double p0 = 0.0;    // far-field centroid (launch tilt)

    // Throws InvalidArgument unless gamma > 0 and all fields are finite.
    void validate() const;

    /// Inverse of displacement(): the spec whose coherent amplitude is alpha.
    static GaussianSpec from_displacement(double gamma, complex alpha);
    static GaussianSpec from_polar(double gamma, double r, double theta);
};

struct Displacement {
    complex alpha;
    double r = 0.0;     // |alpha|
    double theta = 0.0; // arg(alpha) in (-pi, pi]
};

Displacement displacement(const GaussianSpec& spec);

// R^2 = gamma x0^2 + p0^2 / gamma = 2 |alpha|^2.
double r_squared(const GaussianSpec& spec);

/// Uniform periodic lattice on [-x_max, x_max) with its DFT-conjugate
/// wavenumbers. Copies share the coordinate arrays.
class Grid {
public:
    // n must be a power of two >= 2 and x_max > 0.
    static Grid make(std::size_t n, double x_max);

    std::size_t size() const { return data_->n; }
    double x_max() const { return data_->x_max; }
    double dx() const { return data_->dx; }
    double dk() const { return data_->dk; }
    double k_max() const; // Nyquist wavenumber pi / dx

    std::span<const double> x() const { return data_->x; }
    // FFT ordering: 0, dk, ..., (n/2 - 1) dk, -n/2 dk, ..., -dk.
    std::span<const double> k() const { return data_->k; }

    friend bool operator==(const Grid& a, const Grid& b);

private:
    struct Data {
        std::size_t n = 0;
        double x_max = 0.0;
        double dx = 0.0;
        double dk = 0.0;
        std::vector<double> x;
        std::vector<double> k;
    };
    explicit Grid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
    std::shared_ptr<const Data> data_;
};

Grid make_grid(std::size_t n, double x_max);

/// psi(x) = exp(-quadratic x^2 + linear x + log_norm), Re(quadratic) > 0.
struct GaussianProfile {
    complex quadratic;
    complex linear;
    complex log_norm;

    complex value(double x) const;
    double intensity_mean() const;
    double intensity_variance() const;
    complex width_parameter() const; // sigma^2 = 1 / (2 quadratic)
    complex center() const;          // linear / (2 quadratic)
};

// Coefficients of the unit-norm launch Gaussian for spec.
GaussianProfile launch_profile(const GaussianSpec& spec);

/// Field samples on a grid at propagation distance z.
struct BeamState {
    Grid grid;
    std::vector<complex> samples;
    double z = 0.0;

    double norm() const; // sum |psi_j|^2 dx
};

BeamState sample_profile(const GaussianProfile& profile, const Grid& grid, double z);

// Probability mass of the launch profile that lies outside the window plus
// the spectral mass beyond the Nyquist wavenumber.
double launch_truncation(const GaussianSpec& spec, const Grid& grid);

/// Samples the launch Gaussian. Throws InvalidArgument when the window
/// truncates more than 1e-12 of the mass in position or wavenumber.
BeamState gaussian_state(const GaussianSpec& spec, const Grid& grid);

/// Laboratory calibration. Lengths are SI metres; gamma_lab sets the
/// dimensionless distance unit through z = gamma_lab * Z.
struct LabUnits {
    double lambda0 = 0.0; // vacuum wavelength [m]
    double n0 = 1.0;      // base index
    double w0 = 0.0;      // transverse scale [m], x = X / w0

    std::optional<double> gamma_lab; // [1/m]
    std::optional<double> dgamma_dn; // [1/m per RIU]
    std::optional<double> dgamma_dP; // [1/m per W]
    std::optional<double> dgamma_dT; // [1/m per K]
    std::optional<double> dn_dT;     // [RIU per K]

    double k0() const; // 2 pi n0 / lambda0
    void validate() const;
};

double z_to_lab(double z, const LabUnits& units);
double lab_to_z(double z_lab, const LabUnits& units);

} // namespace pdl
