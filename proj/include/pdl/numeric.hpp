#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "pdl/core.hpp"
#include "pdl/error.hpp"

namespace pdl {

// V(x) = -gamma^2 x^2 / 2. gamma = 0 gives free diffraction.
struct InvertedParabola {
    double gamma = 1.0;
};

// Defocusing nonlocal response: the index change is -eta (K * |psi|^2) with
// K a unit-mass Gaussian of standard deviation kernel_width, so the
// potential is V = +eta (K * |psi|^2), a hump that is locally an inverted
// parabola when kernel_width is much larger than the beam.
struct NonlocalDefocusing {
    double eta = 0.0;
    double kernel_width = 0.0;
};

using PotentialModel = std::variant<InvertedParabola, NonlocalDefocusing>;

void validate(const PotentialModel& model);

// V(x_j) for the given state (the state only matters for the nonlocal model).
std::vector<double> potential_samples(const BeamState& state, const PotentialModel& model);

struct Observables {
    double z = 0.0;
    double norm = 0.0;
    double centroid = 0.0;
    double variance = 0.0;
    complex overlap;
    double mean_h = 0.0;
    double delta_h = 0.0;
};

/// Moments of state, its overlap with reference, and <H>, Delta H with the
/// kinetic term applied spectrally. Throws InvalidArgument on grid mismatch.
Observables observables(const BeamState& state, const BeamState& reference,
                        const PotentialModel& model);

struct TrajectoryPoint {
    double z = 0.0;
    Observables observables;
    std::optional<BeamState> snapshot;
};

struct Trajectory {
    double dz = 0.0;
    std::size_t steps = 0;
    std::size_t stride = 1;
    // Recorded at step 0, stride, 2 stride, ... (empty when steps == 0).
    std::vector<TrajectoryPoint> points;
    BeamState final_state;
};

struct SplitStepOptions {
    double dz = 1e-3;
    std::size_t steps = 0;
    std::size_t stride = 1;
    bool keep_snapshots = false;
    double edge_fraction = 0.1;   // outer fraction of the window watched for mass
    double edge_tolerance = 1e-6; // allowed mass in that band
};

/// Mass reached the window edge (or the field went non-finite). Carries the
/// trajectory recorded up to the failing step.
class PropagationError : public NumericalError {
public:
    PropagationError(const std::string& what, Trajectory partial)
        : NumericalError(what), partial_(std::move(partial)) {}
    const Trajectory& partial() const { return partial_; }

private:
    Trajectory partial_;
};

/// Second-order Strang splitting: half kinetic step in wavenumber space,
/// full potential step, half kinetic step. The nonlocal potential is
/// rebuilt from |psi|^2 once per step.
Trajectory split_step(const BeamState& initial, const PotentialModel& model,
                      const SplitStepOptions& options);

// Relative L2 distance ||a - b|| (both assumed unit norm).
double l2_distance(const BeamState& a, const BeamState& b);

struct CurvatureFit {
    double gamma = 0.0;     // sqrt(-V'')
    double curvature = 0.0; // V'' at the centroid
    double residual = 0.0;  // RMS misfit of the parabola
    std::size_t points = 0;
};

/// Least-squares parabola through the potential samples with
/// |x - centroid| <= half_window. Throws ModelError if V'' >= 0.
CurvatureFit effective_gamma(const Grid& grid, std::span<const double> potential, double centroid,
                             double half_window);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

} // namespace pdl
