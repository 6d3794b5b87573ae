#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "pdl/core.hpp"
#include "pdl/error.hpp"
#include "pdl/spectral.hpp"

using namespace pdl;

namespace {

double intensity_moment(const BeamState& s, int order, double about = 0.0) {
    double m = 0.0;
    const auto x = s.grid.x();
    for (std::size_t j = 0; j < x.size(); ++j) {
        m += std::pow(x[j] - about, order) * std::norm(s.samples[j]);
    }
    return m * s.grid.dx();
}

} // namespace

TEST_SUITE("core") {

TEST_CASE("grid lattice and its conjugate") {
    const Grid g = make_grid(8, 4.0);
    CHECK(g.dx() == 1.0);
    const double expected_x[] = {-4, -3, -2, -1, 0, 1, 2, 3};
    for (std::size_t j = 0; j < 8; ++j) CHECK(g.x()[j] == expected_x[j]);
    const double dk = 2.0 * std::numbers::pi / 8.0;
    CHECK(g.dk() == doctest::Approx(dk).epsilon(1e-15));
    const double expected_k[] = {0, 1, 2, 3, -4, -3, -2, -1};
    for (std::size_t j = 0; j < 8; ++j) CHECK(g.k()[j] == doctest::Approx(expected_k[j] * dk).epsilon(1e-15));
    CHECK(g.k_max() == doctest::Approx(std::numbers::pi));

    CHECK(make_grid(4096, 40.0).dx() == 0.01953125);
}

TEST_CASE("grid preconditions") {
    CHECK_THROWS_AS(make_grid(7, 4.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(1, 4.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(0, 4.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(8, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(8, -1.0), InvalidArgument);
    CHECK(make_grid(16, 2.0) == make_grid(16, 2.0));
    CHECK_FALSE(make_grid(16, 2.0) == make_grid(32, 2.0));
}

TEST_CASE("spectral round trip is the identity") {
    oracle::Rng rng(7);
    for (std::size_t n : {2u, 64u, 4096u}) {
        SpectralTransform fft(n);
        std::vector<std::complex<double>> f(n);
        for (auto& v : f) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
        auto g = f;
        fft.forward(g);
        fft.inverse(g);
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(g[j] - f[j]));
        CHECK(err < 1e-14);
    }
}

TEST_CASE("spectral transform matches the DFT definition") {
    const std::size_t n = 16;
    SpectralTransform fft(n);
    oracle::Rng rng(11);
    std::vector<std::complex<double>> f(n);
    for (auto& v : f) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    auto g = f;
    fft.forward(g);
    for (std::size_t m = 0; m < n; ++m) {
        std::complex<double> sum;
        for (std::size_t j = 0; j < n; ++j) {
            sum += f[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(j * m) / double(n));
        }
        CHECK(std::abs(sum - g[m]) < 1e-13);
    }
}

TEST_CASE("vacuum launch") {
    const Grid g = make_grid(4096, 40.0);
    const BeamState s = gaussian_state({1.0, 0.0, 0.0}, g);
    CHECK(s.z == 0.0);
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
    CHECK(std::abs(intensity_moment(s, 1)) < 1e-12);
    CHECK(intensity_moment(s, 2) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("gamma-matched launch width and centroids") {
    const Grid g = make_grid(4096, 40.0);
    const BeamState s = gaussian_state({2.0, 1.0, 0.0}, g);
    CHECK(std::abs(intensity_moment(s, 1) - 1.0) < g.dx() / 2);
    CHECK(intensity_moment(s, 2, 1.0) == doctest::Approx(0.25).epsilon(1e-3));

    // Momentum centroid from the spectrum.
    const BeamState t = gaussian_state({1.5, -0.5, 2.0}, g);
    auto spectrum = t.samples;
    SpectralTransform(g.size()).forward(spectrum);
    double mass = 0.0, first = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        mass += std::norm(spectrum[j]);
        first += g.k()[j] * std::norm(spectrum[j]);
    }
    CHECK(std::abs(first / mass - 2.0) < g.dk() / 2);
    CHECK(std::abs(intensity_moment(t, 1) + 0.5) < g.dx() / 2);
}

TEST_CASE("launch is rejected when the window truncates it") {
    CHECK_THROWS_AS(gaussian_state({1.0, 30.0, 0.0}, make_grid(4096, 32.0)), InvalidArgument);
    // Undersampled: the spectrum reaches past the Nyquist wavenumber.
    CHECK_THROWS_AS(gaussian_state({1.0, 0.0, 20.0}, make_grid(64, 40.0)), InvalidArgument);
    CHECK(launch_truncation({1.0, 0.0, 0.0}, make_grid(4096, 40.0)) < 1e-30);
}

TEST_CASE("launch samples the profile pointwise") {
    const GaussianSpec spec{1.3, 0.4, -0.7};
    const Grid g = make_grid(256, 12.0);
    const BeamState s = gaussian_state(spec, g);
    const auto ref = oracle::launch(spec.gamma, spec.x0, spec.p0);
    for (std::size_t j = 0; j < g.size(); j += 17) {
        CHECK(std::abs(s.samples[j] - ref(g.x()[j])) < 1e-14);
    }
}

TEST_CASE("displacement examples") {
    CHECK(displacement({1.0, 0.0, 0.0}).alpha == complex(0.0, 0.0));
    const auto d1 = displacement({1.0, std::numbers::sqrt2, 0.0});
    CHECK(d1.alpha.real() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(d1.alpha.imag() == 0.0);
    CHECK(d1.theta == 0.0);
    CHECK(d1.r == doctest::Approx(1.0));
    const auto d2 = displacement({4.0, 1.0, 2.0});
    CHECK(d2.alpha.real() == doctest::Approx(2.0 / std::numbers::sqrt2).epsilon(1e-15));
    CHECK(d2.alpha.imag() == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-15));
    CHECK(d2.r * d2.r == doctest::Approx(2.5).epsilon(1e-15));
    // theta lives in (-pi, pi]
    CHECK(displacement({1.0, -1.0, 0.0}).theta == doctest::Approx(std::numbers::pi));
}

TEST_CASE("|alpha|^2 = (gamma x0^2 + p0^2/gamma)/2 for 1000 seeded launches") {
    oracle::Rng rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const GaussianSpec s{rng.uniform(0.05, 5.0), rng.uniform(-10, 10), rng.uniform(-10, 10)};
        const double expected = 0.5 * (s.gamma * s.x0 * s.x0 + s.p0 * s.p0 / s.gamma);
        const double r = displacement(s).r;
        worst = std::max(worst, std::abs(r * r - expected) / std::max(expected, 1e-300));
        CHECK(r_squared(s) == doctest::Approx(2.0 * expected).epsilon(1e-13));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("polar and cartesian launches round trip") {
    oracle::Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const GaussianSpec s{rng.uniform(0.1, 4.0), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        const auto d = displacement(s);
        const auto back = GaussianSpec::from_polar(s.gamma, d.r, d.theta);
        CHECK(back.x0 == doctest::Approx(s.x0).epsilon(1e-12).scale(1.0));
        CHECK(back.p0 == doctest::Approx(s.p0).epsilon(1e-12).scale(1.0));
    }
    CHECK_THROWS_AS(GaussianSpec::from_polar(1.0, -1.0, 0.0), InvalidArgument);
}

TEST_CASE("launch norm is one for seeded valid launches") {
    oracle::Rng rng(99);
    const Grid g = make_grid(2048, 30.0);
    for (int i = 0; i < 50; ++i) {
        const GaussianSpec s{rng.uniform(0.3, 3.0), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(std::abs(gaussian_state(s, g).norm() - 1.0) < 1e-10);
    }
}

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(GaussianSpec({0.0, 0.0, 0.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(GaussianSpec({-1.0, 0.0, 0.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(GaussianSpec({1.0, std::nan(""), 0.0}).validate(), InvalidArgument);
    CHECK_THROWS_AS(GaussianSpec({1.0, 0.0, INFINITY}).validate(), InvalidArgument);
    CHECK_NOTHROW(GaussianSpec({1.0, 0.0, 0.0}).validate());
}

TEST_CASE("lab unit conversion") {
    LabUnits u;
    u.lambda0 = 532e-9;
    u.n0 = 1.52;
    u.w0 = 25e-6;
    CHECK_THROWS_AS(z_to_lab(1.0, u), InvalidArgument);
    u.gamma_lab = 420.0; // 0.42 / mm
    CHECK(z_to_lab(0.756, u) == doctest::Approx(1.8e-3).epsilon(1e-15));
    CHECK(z_to_lab(0.0, u) == 0.0);
    const double Z = 3e-3;
    CHECK(std::abs(z_to_lab(lab_to_z(Z, u), u) - Z) / Z <= 1e-15);
    CHECK(u.k0() == doctest::Approx(2.0 * std::numbers::pi * 1.52 / 532e-9).epsilon(1e-15));

    LabUnits bad = u;
    bad.n0 = 0.9;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    bad = u;
    bad.w0 = 0.0;
    CHECK_THROWS_AS(bad.validate(), InvalidArgument);
    CHECK_NOTHROW(u.validate());
}

} // TEST_SUITE
