#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "oracle.hpp"
#include "pdl/analytic.hpp"
#include "pdl/error.hpp"

using namespace pdl;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

oracle::Coeffs coeffs(const ClosedFormGaussian& g) {
    return {g.profile.quadratic, g.profile.linear, g.profile.log_norm};
}

GaussianSpec random_spec(oracle::Rng& rng, double g_lo, double g_hi, double span) {
    return {rng.uniform(g_lo, g_hi), rng.uniform(-span, span), rng.uniform(-span, span)};
}

} // namespace

TEST_SUITE("analytic") {

TEST_CASE("z = 0 reproduces the launch exactly") {
    oracle::Rng rng(1);
    for (int i = 0; i < 20; ++i) {
        const GaussianSpec s = random_spec(rng, 0.2, 4.0, 3.0);
        const auto g = evolve_closed_form(s, 0.0);
        const auto l = launch_profile(s);
        CHECK(g.profile.quadratic == l.quadratic);
        CHECK(g.profile.linear == l.linear);
        CHECK(g.profile.log_norm == l.log_norm);
        CHECK(fidelity(s, 0.0) == complex(1.0, 0.0));
        CHECK(bures_angle_at(s, 0.0) == 0.0);
    }
}

TEST_CASE("closed-form coefficients solve the Gaussian ODEs") {
    oracle::Rng rng(17);
    for (int i = 0; i < 12; ++i) {
        const GaussianSpec s = random_spec(rng, 0.3, 2.5, 2.0);
        const double z = rng.uniform(0.05, 1.5);
        const auto ref = oracle::evolve(oracle::launch(s.gamma, s.x0, s.p0), s.gamma, z);
        const auto got = coeffs(evolve_closed_form(s, z));
        CHECK(std::abs(got.a - ref.a) < 1e-10);
        CHECK(std::abs(got.b - ref.b) < 1e-10);
        CHECK(std::abs(got.c - ref.c) < 1e-9);
    }
}

TEST_CASE("evolved profile stays normalized and decaying") {
    oracle::Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        const GaussianSpec s = random_spec(rng, 0.3, 2.0, 2.0);
        const auto g = evolve_closed_form(s, rng.uniform(0.0, 8.0));
        CHECK(g.profile.quadratic.real() > 0.0);
        if (g.z * s.gamma < 2.0) {
            const auto c = coeffs(g);
            const double n = oracle::integrate([&](double x) { return oracle::cplx(std::norm(c(x))); }).real();
            CHECK(std::abs(n - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("intensity centroid and variance follow the hyperbolic laws") {
    oracle::Rng rng(23);
    for (int i = 0; i < 30; ++i) {
        const GaussianSpec s = random_spec(rng, 0.3, 3.0, 3.0);
        const double z = rng.uniform(0.0, 2.0 / s.gamma);
        const auto g = evolve_closed_form(s, z);
        const double y = s.gamma * z;
        const double centroid = s.x0 * std::cosh(y) + s.p0 / s.gamma * std::sinh(y);
        CHECK(g.profile.intensity_mean() == doctest::Approx(centroid).epsilon(1e-12).scale(1.0));
        CHECK(g.profile.intensity_variance() == doctest::Approx(std::cosh(2 * y) / (2 * s.gamma)).epsilon(1e-12));

        const auto ref = oracle::evolve(oracle::launch(s.gamma, s.x0, s.p0), s.gamma, z, 4000);
        CHECK(g.profile.intensity_mean() ==
              doctest::Approx(ref.b.real() / (2 * ref.a.real())).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("vacuum fidelity law") {
    for (double z : {0.25, 0.5, 1.0, 2.0, 5.0}) {
        CHECK(std::abs(fidelity({1.0, 0.0, 0.0}, z)) == doctest::Approx(std::pow(std::cosh(z), -0.5)).epsilon(1e-14));
        CHECK(std::abs(fidelity({2.5, 0.0, 0.0}, z / 2.5)) ==
              doctest::Approx(std::pow(std::cosh(z), -0.5)).epsilon(1e-14));
    }
    // The oracle value, independent of the law above.
    const auto v = oracle::launch(1.0, 0.0, 0.0);
    const double q = std::abs(oracle::overlap(v, oracle::evolve(v, 1.0, 0.5)));
    CHECK(q == doctest::Approx(0.9417106158316757).epsilon(1e-11));
    CHECK(std::abs(fidelity({1.0, 0.0, 0.0}, 0.5)) == doctest::Approx(0.9417106158316757).epsilon(1e-14));
}

TEST_CASE("fidelity agrees with quadrature for 50 seeded launches") {
    oracle::Rng rng(50);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        const GaussianSpec s = random_spec(rng, 0.3, 2.5, 2.5);
        const double z = rng.uniform(0.0, 1.5);
        const auto start = coeffs(evolve_closed_form(s, 0.0));
        const auto end = coeffs(evolve_closed_form(s, z));
        const complex q = oracle::overlap(start, end);
        worst = std::max(worst, std::abs(q - fidelity(s, z)));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("fidelity against the ODE oracle at frozen points") {
    const complex f1 = fidelity({2.0, 1.0, 0.5}, 0.7);
    CHECK(std::abs(f1 - complex(0.2606156284899491, 0.28497553201714926)) < 1e-10);
    const complex f2 = fidelity({1.0, 3.0, 0.0}, 1.0);
    CHECK(std::abs(f2 - complex(-0.1585015190474471, -0.04653709729083201)) < 1e-10);
    CHECK(std::abs(fidelity({0.5, -2.0, 1.0}, 1.3)) == doctest::Approx(0.6325706910480555).epsilon(1e-10));
}

TEST_CASE("displacement accelerates distinguishability") {
    CHECK(std::abs(fidelity({1.0, 3.0, 0.0}, 1.0)) < std::abs(fidelity({1.0, 0.0, 0.0}, 1.0)));
    CHECK(std::abs(fidelity({1.0, 3.0, 0.0}, 1.0)) == doctest::Approx(0.16519).epsilon(1e-4));
}

TEST_CASE("bures angle") {
    CHECK(bures_angle(1.0) == 0.0);
    CHECK(bures_angle(0.0) == doctest::Approx(kHalfPi).epsilon(1e-15));
    CHECK(bures_angle(complex(0.0, 1.0 + 5e-13)) == 0.0);
    CHECK_THROWS_AS(bures_angle(1.0 + 1e-9), NumericalError);
    CHECK_THROWS_AS(bures_angle(std::nan("")), NumericalError);
    CHECK(bures_angle(std::abs(fidelity({1.0, 0.0, 0.0}, 0.5))) ==
          doctest::Approx(0.34311697729596585).epsilon(1e-12));
    CHECK(bures_angle_at({1.0, 0.0, 0.0}, 0.5) == doctest::Approx(0.34311697729596585).epsilon(1e-14));
}

TEST_CASE("small angles keep relative precision") {
    // L ~ Delta H z near z = 0, far below where acos(|F|) loses digits.
    const GaussianSpec s{1.0, 0.0, 0.0};
    for (double z : {1e-5, 1e-7}) {
        CHECK(bures_angle_at(s, z) / (energy_variance(s) * z) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("angle and visibility stay in range") {
    oracle::Rng rng(8);
    for (int i = 0; i < 500; ++i) {
        const GaussianSpec s = random_spec(rng, 0.1, 4.0, 5.0);
        const double z = rng.uniform(0.0, 10.0);
        const double l = bures_angle_at(s, z);
        CHECK(l >= 0.0);
        CHECK(l <= kHalfPi);
        const double v = visibility(fidelity(s, z));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("mean energy and spread examples") {
    CHECK(mean_energy({1.0, 0.0, 0.0}) == 0.0);
    CHECK(mean_energy({1.0, 1.0, 1.0}) == 0.0);
    CHECK(mean_energy({2.0, 1.0, 0.0}) == -2.0);
    CHECK(energy_variance({1.0, 0.0, 0.0}) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(energy_variance({1.0, 1.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(energy_variance({2.0, 0.0, 2.0}) == doctest::Approx(2.0 * std::sqrt(1.5)).epsilon(1e-15));
    CHECK_THROWS_AS(mean_energy({0.0, 1.0, 1.0}), InvalidArgument);
}

TEST_CASE("moments match quadrature of the generator") {
    oracle::Rng rng(31);
    for (int i = 0; i < 10; ++i) {
        const GaussianSpec s = random_spec(rng, 0.5, 2.0, 2.0);
        const auto e = oracle::energy(oracle::launch(s.gamma, s.x0, s.p0), s.gamma);
        CHECK(mean_energy(s) == doctest::Approx(e.mean).epsilon(1e-9).scale(1.0));
        CHECK(energy_variance(s) == doctest::Approx(e.spread).epsilon(1e-9));
    }
}

TEST_CASE("|<H>| = gamma r^2 |cos 2 theta|") {
    oracle::Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
        const GaussianSpec s = random_spec(rng, 0.1, 5.0, 5.0);
        const auto d = displacement(s);
        const double polar = s.gamma * d.r * d.r * std::abs(std::cos(2.0 * d.theta));
        CHECK(std::abs(mean_energy(s)) == doctest::Approx(polar).epsilon(1e-12).scale(1e-12));
    }
}

TEST_CASE("single bound examples") {
    CHECK(mt_bound(kHalfPi, 1.0) == kHalfPi);
    CHECK(ml_bound(kHalfPi, 0.0) == kInf);
    CHECK(ml_bound(0.0, 0.0) == 0.0);
    CHECK(ml_bound(1.0, -2.0) == 0.5);
    CHECK(mt_bound(0.34311697729596585, std::sqrt(0.5)) == doctest::Approx(0.4852406827724162).epsilon(1e-14));
    CHECK(mt_bound(0.34311697729596585, std::sqrt(0.5)) <= 0.5);
    CHECK_THROWS_AS(mt_bound(kHalfPi, 0.0), InvalidArgument);
    CHECK_THROWS_AS(mt_bound(2.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(ml_bound(-0.1, 1.0), InvalidArgument);
}

TEST_CASE("propagation distance limit examples") {
    const auto vac = pdl::pdl({1.0, 0.0, 0.0}, kHalfPi);
    CHECK(vac.z_mt == doctest::Approx(kPi / std::numbers::sqrt2).epsilon(1e-15));
    CHECK(vac.z_ml == kInf);
    CHECK(vac.z_pdl == kInf);
    CHECK(vac.regime == Regime::balanced);

    const auto mom = pdl::pdl({1.0, 0.0, 50.0}, kHalfPi);
    CHECK(mom.regime == Regime::momentum_dominated);
    CHECK(mom.z_mt == doctest::Approx(kPi / (std::numbers::sqrt2 * 50.0)).epsilon(1e-3));

    const auto pos = pdl::pdl({1.0, 2.0, 0.0}, kHalfPi);
    CHECK(pos.regime == Regime::position_dominated);
    CHECK(pos.mean_h == -2.0);
    CHECK(pos.z_ml == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK(pos.z_mt == doctest::Approx(kHalfPi / std::sqrt(0.5 + 2.0)).epsilon(1e-15));
    CHECK(pos.z_pdl == std::max(pos.z_mt, pos.z_ml));

    CHECK_THROWS_AS(pdl::pdl({1.0, 0.0, 0.0}, 0.0), InvalidArgument);
}

TEST_CASE("z_pdl is the larger bound for seeded launches") {
    oracle::Rng rng(12);
    for (int i = 0; i < 300; ++i) {
        const GaussianSpec s = random_spec(rng, 0.1, 4.0, 4.0);
        const auto r = pdl::pdl(s, rng.uniform(0.01, kHalfPi));
        CHECK(r.z_pdl == std::max(r.z_mt, r.z_ml));
        CHECK(r.delta_h >= s.gamma / std::numbers::sqrt2);
        CHECK(std::isfinite(r.z_mt));
    }
}

TEST_CASE("bounds from raw moments") {
    const auto r = pdl_from_moments(-330.0, 290.0, kHalfPi);
    CHECK(r.z_mt == kHalfPi / 290.0);
    CHECK(r.z_ml == kHalfPi / 330.0);
    CHECK(r.z_pdl == r.z_mt);
    CHECK(pdl_from_moments(0.0, 1.0, 1.0).z_ml == kInf);
}

TEST_CASE("regime classification") {
    CHECK(classify_regime({1.0, 0.0, 50.0}) == Regime::momentum_dominated);
    CHECK(classify_regime({1.0, 50.0, 0.0}) == Regime::position_dominated);
    CHECK(classify_regime({1.0, 1.0, 1.0}) == Regime::balanced);
    CHECK(classify_regime({2.0, 1.0, 2.0}) == Regime::balanced);
    CHECK(classify_regime({1.0, 1.0, 2.0}) == Regime::generic);
    for (auto r : {Regime::momentum_dominated, Regime::position_dominated, Regime::balanced, Regime::generic}) {
        CHECK(regime_from_string(to_string(r)) == r);
    }
    CHECK_THROWS_AS(regime_from_string("sideways"), InvalidArgument);
}

TEST_CASE("orthogonality distances") {
    const auto vac = orthogonality_distances({1.0, 0.0, 0.0});
    CHECK(vac.z_mt == doctest::Approx(kPi / std::numbers::sqrt2).epsilon(1e-15));
    CHECK(vac.z_ml == kInf);
    CHECK(orthogonality_distances({1.0, 0.0, 50.0}).z_ml == doctest::Approx(kPi / 2500).epsilon(1e-15));
}

TEST_CASE("asymptotic regimes") {
    const auto exact_p = orthogonality_distances({1.0, 0.0, 50.0});
    const auto approx_p = asymptotic_orthogonality({1.0, 0.0, 50.0});
    CHECK(approx_p.regime == Regime::momentum_dominated);
    CHECK(approx_p.well_separated);
    CHECK(approx_p.z_mt == doctest::Approx(0.044428829381583664).epsilon(1e-12));
    // The exact spread carries the 1/2 vacuum term: relative gap ~ 1/(4 |alpha|^2).
    CHECK(std::abs(exact_p.z_mt / approx_p.z_mt - 1.0) < 1e-3);
    CHECK(approx_p.z_ml == exact_p.z_ml);

    const auto exact_x = orthogonality_distances({1.0, 50.0, 0.0});
    const auto approx_x = asymptotic_orthogonality({1.0, 50.0, 0.0});
    CHECK(approx_x.regime == Regime::position_dominated);
    CHECK(approx_x.z_ml == kPi / 2500);
    CHECK(exact_x.z_ml == kPi / 2500);
    CHECK(std::abs(exact_x.z_mt / approx_x.z_mt - 1.0) < 1e-3);

    CHECK_THROWS_AS(asymptotic_orthogonality({1.0, 1.0, 1.0}), RegimeError);
    CHECK_THROWS_AS(asymptotic_orthogonality({1.0, 1.0, 2.0}), RegimeError);
    CHECK_FALSE(asymptotic_orthogonality({1.0, 0.0, 4.0}).well_separated);
}

TEST_CASE("asymptotic forms converge as the displacement grows") {
    double previous = 1.0;
    for (double p : {10.0, 30.0, 100.0, 300.0}) {
        const GaussianSpec s{1.3, 0.0, p};
        const double gap = std::abs(orthogonality_distances(s).z_mt / asymptotic_orthogonality(s).z_mt - 1.0);
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK(previous < 1e-5);
}

TEST_CASE("solving for a target angle") {
    const GaussianSpec vac{1.0, 0.0, 0.0};
    CHECK_FALSE(solve_z_for_angle(vac, kHalfPi).has_value());
    CHECK(*solve_z_for_angle(vac, 0.0) == 0.0);
    const auto z = solve_z_for_angle(vac, 0.34311697729596585);
    REQUIRE(z.has_value());
    CHECK(std::abs(*z - 0.5) < 1e-6);
    CHECK_THROWS_AS(solve_z_for_angle(vac, 2.0), InvalidArgument);

    oracle::Rng rng(77);
    for (int i = 0; i < 30; ++i) {
        const GaussianSpec s = random_spec(rng, 0.3, 3.0, 3.0);
        const double target = rng.uniform(0.05, 1.2);
        const auto hit = solve_z_for_angle(s, target);
        if (!hit) continue;
        CHECK(bures_angle_at(s, *hit) == doctest::Approx(target).epsilon(1e-9));
        CHECK(*hit >= mt_bound(target, energy_variance(s)) - 1e-12);
    }
}

TEST_CASE("visibility") {
    CHECK(visibility(1.0) == 1.0);
    CHECK(visibility(0.0) == 0.0);
    CHECK(visibility(fidelity({1.0, 0.0, 0.0}, 0.5)) == doctest::Approx(0.9981992695029777).epsilon(1e-14));
    CHECK_THROWS_AS(visibility(1.1), NumericalError);
}

TEST_CASE("MT inequality for 200 seeded launches") {
    oracle::Rng rng(20240611);
    for (int i = 0; i < 200; ++i) {
        const GaussianSpec s = random_spec(rng, 0.3, 3.0, 3.0);
        const double z = rng.uniform(0.0, 3.0);
        CHECK(bures_angle_at(s, z) <= energy_variance(s) * z + 1e-9);
    }
}

TEST_CASE("MT bound is locally tight") {
    double c_max = 0.0;
    for (const GaussianSpec& s :
         {GaussianSpec{1.0, 0.0, 0.0}, GaussianSpec{1.0, 1.0, 0.5}, GaussianSpec{2.0, 0.5, -1.0},
          GaussianSpec{0.5, -2.0, 1.0}, GaussianSpec{1.5, 1.0, 1.0}}) {
        for (double z : {1e-3, 1e-2, 1e-1}) {
            const double rel = std::abs(bures_angle_at(s, z) / (energy_variance(s) * z) - 1.0);
            c_max = std::max(c_max, rel / (z * z));
        }
    }
    CHECK(c_max < 5.0);
}

TEST_CASE("energy spread grows with gamma, |x0| and |p0|") {
    oracle::Rng rng(100);
    for (int i = 0; i < 100; ++i) {
        const GaussianSpec s = random_spec(rng, 0.2, 3.0, 3.0);
        const double h = 1e-6;
        auto shifted = [&](int which, double d) {
            GaussianSpec t = s;
            (which == 0 ? t.gamma : which == 1 ? t.x0 : t.p0) += d;
            return t;
        };
        CHECK(energy_variance(shifted(0, h)) > energy_variance(shifted(0, -h)));
        const double sx = s.x0 >= 0 ? 1.0 : -1.0;
        const double sp = s.p0 >= 0 ? 1.0 : -1.0;
        CHECK(energy_variance(shifted(1, sx * h)) > energy_variance(shifted(1, -sx * h)));
        CHECK(energy_variance(shifted(2, sp * h)) > energy_variance(shifted(2, -sp * h)));
        CHECK(orthogonality_distances(shifted(0, h)).z_mt < orthogonality_distances(shifted(0, -h)).z_mt);
        CHECK(orthogonality_distances(shifted(1, sx * h)).z_mt < orthogonality_distances(shifted(1, -sx * h)).z_mt);
        CHECK(orthogonality_distances(shifted(2, sp * h)).z_mt < orthogonality_distances(shifted(2, -sp * h)).z_mt);
    }
}

} // TEST_SUITE
