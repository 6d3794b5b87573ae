#include "pdl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "pdl/analytic.hpp"
#include "pdl/io.hpp"
#include "pdl/numeric.hpp"

namespace pdl {

SeededUniform::SeededUniform(std::uint64_t seed) : engine_(seed) {}

double SeededUniform::operator()(double lo, double hi) {
    // Top 53 bits give a uniform double in [0, 1).
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

using Task = std::function<std::vector<Check>()>;

std::string label(const GaussianSpec& s) {
    return "gamma=" + format_number(s.gamma) + " x0=" + format_number(s.x0) + " p0=" + format_number(s.p0);
}

Check make_check(std::string name, double measured, double tolerance, std::string detail = {}) {
    Check c;
    c.name = std::move(name);
    c.measured = measured;
    c.tolerance = tolerance;
    c.passed = std::isfinite(measured) && measured < tolerance;
    c.detail = std::move(detail);
    return c;
}

Check failed_check(std::string name, double tolerance, const std::exception& e) {
    Check c;
    c.name = std::move(name);
    c.measured = std::numeric_limits<double>::quiet_NaN();
    c.tolerance = tolerance;
    c.passed = false;
    c.detail = e.what();
    return c;
}

std::size_t steps_for(double z, double dz) {
    return static_cast<std::size_t>(std::max<long long>(1, std::llround(z / dz)));
}

double closed_form_error(const GaussianSpec& spec, const BeamState& numeric) {
    return l2_distance(numeric, evaluate(evolve_closed_form(spec, numeric.z), numeric.grid));
}

// Largest L2 error against the closed form at each of the given distances,
// which must be multiples of the first.
std::vector<Check> equivalence(const GaussianSpec& spec, std::vector<double> zs, const VerifyOptions& o) {
    const std::string name = "closed form vs split-step (" + label(spec) + ")";
    constexpr double tol = 1e-6;
    try {
        const Grid grid = make_grid(o.n, o.x_max);
        SplitStepOptions so;
        so.dz = o.dz;
        so.stride = steps_for(zs.front(), o.dz);
        so.steps = steps_for(zs.back(), o.dz);
        so.keep_snapshots = true;
        const auto traj = split_step(gaussian_state(spec, grid), InvertedParabola{spec.gamma}, so);
        double worst = 0.0;
        std::ostringstream detail;
        for (const auto& p : traj.points) {
            if (p.z == 0.0) continue;
            const double err = closed_form_error(spec, *p.snapshot);
            worst = std::max(worst, err);
            detail << "z=" << format_number(p.z) << " L2=" << format_number(err) << ' ';
        }
        detail << "dz=" << format_number(o.dz);
        return {make_check(name, worst, tol, detail.str())};
    } catch (const std::exception& e) {
        return {failed_check(name, tol, e)};
    }
}

std::vector<Check> vacuum_fidelity(std::vector<double> zs, const VerifyOptions& o) {
    const std::string name = "vacuum fidelity law |F| = cosh(z)^-1/2";
    constexpr double tol = 1e-6;
    try {
        const GaussianSpec vac{};
        const Grid grid = make_grid(o.n, o.x_max);
        const BeamState launch = gaussian_state(vac, grid);
        SplitStepOptions so;
        so.dz = o.dz;
        so.stride = steps_for(zs.front(), o.dz);
        so.steps = steps_for(zs.back(), o.dz);
        const auto traj = split_step(launch, InvertedParabola{vac.gamma}, so);
        double worst = 0.0;
        std::ostringstream detail;
        for (const auto& p : traj.points) {
            if (p.z == 0.0) continue;
            const double law = 1.0 / std::sqrt(std::cosh(vac.gamma * p.z));
            const double closed = std::abs(fidelity(vac, p.z));
            const BeamState profile = evaluate(evolve_closed_form(vac, p.z), grid);
            complex sum{};
            for (std::size_t j = 0; j < grid.size(); ++j) {
                sum += std::conj(launch.samples[j]) * profile.samples[j];
            }
            const double quadrature = std::abs(sum) * grid.dx();
            const double numeric = std::abs(p.observables.overlap);
            const double d = std::max({std::abs(law - closed), std::abs(law - quadrature),
                                       std::abs(law - numeric), std::abs(closed - quadrature),
                                       std::abs(closed - numeric), std::abs(quadrature - numeric)});
            worst = std::max(worst, d);
            detail << "z=" << format_number(p.z) << " |F|=" << format_number(law) << ' ';
        }
        detail << "(closed form, quadrature, split-step; max pairwise difference)";
        return {make_check(name, worst, tol, detail.str())};
    } catch (const std::exception& e) {
        return {failed_check(name, tol, e)};
    }
}

std::vector<Check> mt_inequality(std::uint64_t seed) {
    const std::string name = "MT inequality L(z) <= dH z (200 seeded launches)";
    constexpr double slack = 1e-9;
    SeededUniform rng(seed);
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
        GaussianSpec s;
        s.gamma = rng(0.2, 3.0);
        s.x0 = rng(-3.0, 3.0);
        s.p0 = rng(-3.0, 3.0);
        const double z = rng(0.0, 3.0) / s.gamma;
        worst = std::max(worst, bures_angle_at(s, z) - energy_variance(s) * z);
    }
    Check c = make_check(name, worst, slack, "max of L - dH z; seed " + std::to_string(seed));
    c.passed = worst <= slack;
    return {c};
}

std::vector<GaussianSpec> tightness_set() {
    return {{1, 0, 0}, {1, 1, 0.5}, {1, 0, 1}, {2, 1, 0}, {0.5, 1, 1}};
}

std::vector<Check> mt_tightness() {
    const std::string name = "MT local tightness |L/(dH z) - 1| <= C z^2, z <= 0.1";
    double c_max = 0.0;
    for (const auto& s : tightness_set()) {
        for (double z : {1e-3, 3e-3, 1e-2, 3e-2, 1e-1}) {
            const double ratio = bures_angle_at(s, z) / (energy_variance(s) * z);
            c_max = std::max(c_max, std::abs(ratio - 1.0) / (z * z));
        }
    }
    return {make_check(name, c_max, 5.0, "smallest C covering all sampled points")};
}

std::vector<GaussianSpec> moment_cases(std::uint64_t seed, bool quick) {
    SeededUniform rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::vector<GaussianSpec> cases;
    const std::vector<double> gammas = quick ? std::vector<double>{1.0} : std::vector<double>{0.5, 1.0, 2.0};
    for (double g : gammas) {
        for (int i = 0; i < 5; ++i) {
            cases.push_back({g, rng(-1.5, 1.5), rng(-1.5, 1.5)});
        }
    }
    return cases;
}

// Relative error scale for <H>: |<H>| can vanish, dH cannot.
double energy_scale(const GaussianSpec& s) {
    return std::max(std::abs(mean_energy(s)), energy_variance(s));
}

std::vector<Check> spectral_moments(const std::vector<GaussianSpec>& cases, const VerifyOptions& o) {
    const std::string name = "spectral <H>, dH vs closed forms at z=0";
    constexpr double tol = 1e-8;
    try {
        const Grid grid = make_grid(o.n, o.x_max);
        double worst = 0.0;
        for (const auto& s : cases) {
            const BeamState psi = gaussian_state(s, grid);
            const auto obs = observables(psi, psi, InvertedParabola{s.gamma});
            worst = std::max(worst, std::abs(obs.mean_h - mean_energy(s)) / energy_scale(s));
            worst = std::max(worst, std::abs(obs.delta_h - energy_variance(s)) / energy_variance(s));
        }
        return {make_check(name, worst, tol, std::to_string(cases.size()) + " launches")};
    } catch (const std::exception& e) {
        return {failed_check(name, tol, e)};
    }
}

std::vector<Check> conservation(const GaussianSpec& s, const VerifyOptions& o) {
    const std::string name = "conservation over z=1 (" + label(s) + ")";
    const std::string norm_name = "norm drift per 1000 steps (" + label(s) + ")";
    constexpr double tol = 1e-6;
    constexpr double norm_tol = 1e-10;
    try {
        const Grid grid = make_grid(o.conservation_n, o.conservation_x_max);
        SplitStepOptions so;
        so.dz = o.conservation_dz;
        so.steps = steps_for(1.0, so.dz);
        so.stride = so.steps;
        const auto traj = split_step(gaussian_state(s, grid), InvertedParabola{s.gamma}, so);
        const auto& a = traj.points.front().observables;
        const auto& b = traj.points.back().observables;
        const double drift_h = std::abs(b.mean_h - a.mean_h) / energy_scale(s);
        const double drift_dh = std::abs(b.delta_h - a.delta_h) / a.delta_h;
        const double drift_norm = std::abs(b.norm - a.norm) * 1000.0 / static_cast<double>(so.steps);
        return {make_check(name, std::max(drift_h, drift_dh), tol,
                           "<H> " + format_number(drift_h) + ", dH " + format_number(drift_dh) + ", dz=" +
                               format_number(so.dz)),
                make_check(norm_name, drift_norm, norm_tol, std::to_string(so.steps) + " steps")};
    } catch (const std::exception& e) {
        return {failed_check(name, tol, e), failed_check(norm_name, norm_tol, e)};
    }
}

std::vector<Check> convergence(double z, const VerifyOptions& o) {
    const std::string name = "second-order convergence at z=" + format_number(z) + " (vacuum)";
    constexpr double tol = 1e-6;
    const GaussianSpec s{};
    try {
        const Grid grid = make_grid(o.n, o.x_max);
        const BeamState launch = gaussian_state(s, grid);
        auto error_at = [&](double dz) {
            SplitStepOptions so;
            so.dz = dz;
            so.steps = steps_for(z, dz);
            so.stride = so.steps;
            return closed_form_error(s, split_step(launch, InvertedParabola{s.gamma}, so).final_state);
        };
        const double coarse = error_at(o.dz);
        const double fine = error_at(0.5 * o.dz);
        const double ratio = coarse / fine;
        Check c = make_check(name, coarse, tol,
                             "L2 " + format_number(coarse) + " at dz=" + format_number(o.dz) +
                                 ", halving ratio " + format_number(ratio) + " (expected 3.5 to 4.5)");
        c.passed = c.passed && ratio >= 3.5 && ratio <= 4.5;
        return {c};
    } catch (const std::exception& e) {
        return {failed_check(name, tol, e)};
    }
}

std::vector<GaussianSpec> default_cases() {
    return {{1.0, 0.0, 0.0}, {1.0, 1.0, 0.5}, {1.0, 0.0, 1.0}};
}

} // namespace

VerifyReport run_verification(const VerifyOptions& o) {
    std::vector<Task> tasks;
    auto cases = o.cases.empty() ? default_cases() : o.cases;
    if (o.quick && o.cases.empty()) {
        cases.resize(1);
    }
    const std::vector<double> eq_z = o.quick ? std::vector<double>{0.5} : std::vector<double>{0.5, 1.0};
    for (const auto& s : cases) {
        tasks.push_back([s, eq_z, &o] { return equivalence(s, eq_z, o); });
    }
    const std::vector<double> fid_z =
        o.quick ? std::vector<double>{0.25, 0.5} : std::vector<double>{0.25, 0.5, 1.0, 2.0};
    tasks.push_back([fid_z, &o] { return vacuum_fidelity(fid_z, o); });
    tasks.push_back([&o] { return mt_inequality(o.seed); });
    tasks.push_back([] { return mt_tightness(); });
    const auto moments = moment_cases(o.seed, o.quick);
    tasks.push_back([moments, &o] { return spectral_moments(moments, o); });
    const std::size_t conserved = o.quick ? 1 : moments.size();
    for (std::size_t i = 0; i < conserved; ++i) {
        tasks.push_back([s = moments[i], &o] { return conservation(s, o); });
    }
    tasks.push_back([z = o.quick ? 0.5 : 1.0, &o] { return convergence(z, o); });

    std::vector<std::vector<Check>> results(tasks.size());
    const std::size_t workers = std::clamp<std::size_t>(o.jobs, 1, tasks.size());
    auto work = [&](std::size_t first) {
        for (std::size_t i = first; i < tasks.size(); i += workers) {
            results[i] = tasks[i]();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    VerifyReport report;
    for (auto& r : results) {
        for (auto& c : r) report.checks.push_back(std::move(c));
    }
    return report;
}

} // namespace pdl
