#include "pdl/numeric.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "pdl/spectral.hpp"

namespace pdl {

namespace {

using Field = std::vector<complex>;

void require_same_grid(const BeamState& a, const BeamState& b) {
    if (!(a.grid == b.grid) || a.samples.size() != b.samples.size()) {
        throw InvalidArgument("states live on different grids");
    }
}

// Periodic convolution of |psi|^2 with the unit-mass Gaussian kernel, scaled
// by eta. Uses the continuous transform of the kernel, exp(-sigma^2 k^2 / 2).
std::vector<double> nonlocal_potential(const Field& psi, const Grid& grid,
                                       const NonlocalDefocusing& model,
                                       const SpectralTransform& fft) {
    Field work(psi.size());
    for (std::size_t j = 0; j < psi.size(); ++j) {
        work[j] = std::norm(psi[j]);
    }
    fft.forward(work);
    const auto k = grid.k();
    const double s2 = model.kernel_width * model.kernel_width;
    for (std::size_t j = 0; j < work.size(); ++j) {
        work[j] *= std::exp(-0.5 * s2 * k[j] * k[j]);
    }
    fft.inverse(work);
    std::vector<double> v(psi.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = model.eta * work[j].real();
    }
    return v;
}

std::vector<double> potential_of(const Field& psi, const Grid& grid, const PotentialModel& model,
                                 const SpectralTransform& fft) {
    if (const auto* parabola = std::get_if<InvertedParabola>(&model)) {
        const auto x = grid.x();
        std::vector<double> v(x.size());
        const double g2 = parabola->gamma * parabola->gamma;
        for (std::size_t j = 0; j < x.size(); ++j) {
            v[j] = -0.5 * g2 * x[j] * x[j];
        }
        return v;
    }
    return nonlocal_potential(psi, grid, std::get<NonlocalDefocusing>(model), fft);
}

Observables measure(const BeamState& state, const BeamState& reference, const PotentialModel& model,
                    const SpectralTransform& fft) {
    const auto x = state.grid.x();
    const auto k = state.grid.k();
    const double dx = state.grid.dx();
    const Field& psi = state.samples;

    Observables out;
    out.z = state.z;
    double m0 = 0.0;
    double m1 = 0.0;
    complex overlap{0.0, 0.0};
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double p = std::norm(psi[j]);
        m0 += p;
        m1 += p * x[j];
        overlap += std::conj(reference.samples[j]) * psi[j];
    }
    out.norm = m0 * dx;
    out.centroid = m1 / m0;
    double m2 = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        const double d = x[j] - out.centroid;
        m2 += d * d * std::norm(psi[j]);
    }
    out.variance = m2 / m0;
    out.overlap = overlap * dx;

    Field h_psi = psi;
    fft.forward(h_psi);
    for (std::size_t j = 0; j < h_psi.size(); ++j) {
        h_psi[j] *= 0.5 * k[j] * k[j];
    }
    fft.inverse(h_psi);
    const std::vector<double> v = potential_of(psi, state.grid, model, fft);
    double mean = 0.0;
    double second = 0.0;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        h_psi[j] += v[j] * psi[j];
        mean += (std::conj(psi[j]) * h_psi[j]).real();
        second += std::norm(h_psi[j]);
    }
    out.mean_h = mean / m0;
    out.delta_h = std::sqrt(std::max(0.0, second / m0 - out.mean_h * out.mean_h));
    return out;
}

} // namespace

void validate(const PotentialModel& model) {
    if (const auto* parabola = std::get_if<InvertedParabola>(&model)) {
        if (!(parabola->gamma >= 0.0) || !std::isfinite(parabola->gamma)) {
            throw InvalidArgument("inverted-parabola gamma must be finite and >= 0");
        }
        return;
    }
    const auto& nl = std::get<NonlocalDefocusing>(model);
    if (!(nl.eta > 0.0) || !std::isfinite(nl.eta)) {
        throw InvalidArgument("nonlocal coupling eta must be positive");
    }
    if (!(nl.kernel_width > 0.0) || !std::isfinite(nl.kernel_width)) {
        throw InvalidArgument("nonlocal kernel width must be positive");
    }
}

std::vector<double> potential_samples(const BeamState& state, const PotentialModel& model) {
    validate(model);
    const SpectralTransform fft(state.grid.size());
    return potential_of(state.samples, state.grid, model, fft);
}

Observables observables(const BeamState& state, const BeamState& reference,
                        const PotentialModel& model) {
    require_same_grid(state, reference);
    validate(model);
    const SpectralTransform fft(state.grid.size());
    return measure(state, reference, model, fft);
}

Trajectory split_step(const BeamState& initial, const PotentialModel& model,
                      const SplitStepOptions& options) {
    validate(model);
    if (!(options.dz > 0.0) || !std::isfinite(options.dz)) {
        throw InvalidArgument("step size dz must be positive");
    }
    if (options.stride == 0) {
        throw InvalidArgument("stride must be at least 1");
    }
    if (!(options.edge_fraction > 0.0 && options.edge_fraction < 1.0)) {
        throw InvalidArgument("edge fraction must lie in (0, 1)");
    }

    const Grid& grid = initial.grid;
    const std::size_t n = grid.size();
    const auto x = grid.x();
    const auto k = grid.k();
    const double dx = grid.dx();
    const double dz = options.dz;
    const SpectralTransform fft(n);

    Field half_kinetic(n);
    for (std::size_t j = 0; j < n; ++j) {
        half_kinetic[j] = std::polar(1.0, -0.25 * k[j] * k[j] * dz);
    }
    const bool linear = std::holds_alternative<InvertedParabola>(model);
    Field potential_phase(n);
    auto set_potential_phase = [&](const std::vector<double>& v) {
        for (std::size_t j = 0; j < n; ++j) {
            potential_phase[j] = std::polar(1.0, -v[j] * dz);
        }
    };
    if (linear) {
        set_potential_phase(potential_of(initial.samples, grid, model, fft));
    }
    const double edge = (1.0 - options.edge_fraction) * grid.x_max();

    Trajectory traj{dz, options.steps, options.stride, {}, initial};

    BeamState state = initial;
    auto record = [&] {
        TrajectoryPoint point;
        point.z = state.z;
        point.observables = measure(state, initial, model, fft);
        if (options.keep_snapshots) {
            point.snapshot = state;
        }
        traj.points.push_back(std::move(point));
    };

    if (options.steps > 0) {
        record();
    }
    Field& psi = state.samples;
    for (std::size_t step = 1; step <= options.steps; ++step) {
        fft.forward(psi);
        for (std::size_t j = 0; j < n; ++j) psi[j] *= half_kinetic[j];
        fft.inverse(psi);

        if (!linear) {
            set_potential_phase(potential_of(psi, grid, model, fft));
        }
        for (std::size_t j = 0; j < n; ++j) psi[j] *= potential_phase[j];

        fft.forward(psi);
        for (std::size_t j = 0; j < n; ++j) psi[j] *= half_kinetic[j];
        fft.inverse(psi);
        state.z = static_cast<double>(step) * dz;

        double total = 0.0;
        double outer = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = std::norm(psi[j]);
            total += p;
            if (std::abs(x[j]) >= edge) outer += p;
        }
        if (!std::isfinite(total)) {
            traj.final_state = state;
            throw PropagationError("non-finite field at z = " + std::to_string(state.z), std::move(traj));
        }
        if (outer * dx > options.edge_tolerance) {
            std::ostringstream msg;
            msg << "window exhausted at z = " << state.z << ": mass " << outer * dx
                << " in the outer " << options.edge_fraction * 100.0 << "% of the window";
            traj.final_state = state;
            throw PropagationError(msg.str(), std::move(traj));
        }
        if (step % options.stride == 0) {
            record();
        }
    }
    traj.final_state = std::move(state);
    return traj;
}

double l2_distance(const BeamState& a, const BeamState& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    for (std::size_t j = 0; j < a.samples.size(); ++j) {
        sum += std::norm(a.samples[j] - b.samples[j]);
    }
    return std::sqrt(sum * a.grid.dx());
}

CurvatureFit effective_gamma(const Grid& grid, std::span<const double> potential, double centroid,
                             double half_window) {
    if (potential.size() != grid.size()) {
        throw InvalidArgument("potential samples do not match the grid");
    }
    if (!(half_window > 0.0) || !std::isfinite(centroid)) {
        throw InvalidArgument("fit window must be positive around a finite centroid");
    }
    const auto x = grid.x();
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (std::abs(x[j] - centroid) <= half_window) idx.push_back(j);
    }
    if (idx.size() < 3) {
        throw InvalidArgument("fit window holds fewer than three grid points");
    }
    // Columns 1, d, d^2 with d scaled to [-1, 1] for conditioning.
    Eigen::MatrixXd design(idx.size(), 3);
    Eigen::VectorXd rhs(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const double d = (x[idx[i]] - centroid) / half_window;
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        design(static_cast<Eigen::Index>(i), 1) = d;
        design(static_cast<Eigen::Index>(i), 2) = d * d;
        rhs(static_cast<Eigen::Index>(i)) = potential[idx[i]];
    }
    const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);

    CurvatureFit fit;
    fit.points = idx.size();
    fit.curvature = 2.0 * coef(2) / (half_window * half_window);
    fit.residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(idx.size()));
    if (!(fit.curvature < 0.0)) {
        throw ModelError("potential is not an inverted parabola near the beam (V'' = " +
                         std::to_string(fit.curvature) + " >= 0, focusing medium)");
    }
    fit.gamma = std::sqrt(-fit.curvature);
    return fit;
}

} // namespace pdl
