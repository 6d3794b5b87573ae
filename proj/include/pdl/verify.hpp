#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "pdl/core.hpp"

namespace pdl {

struct Check {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct VerifyOptions {
    bool quick = false;
    std::uint64_t seed = 20240611;
    unsigned jobs = 1;
    // Solver settings for the equivalence, fidelity and convergence checks.
    double dz = 1e-3;
    std::size_t n = 4096;
    double x_max = 40.0;
    // Conservation runs use a finer step: Strang splitting conserves a
    // shadow Hamiltonian, so <H> drifts by O(dz^2).
    double conservation_dz = 1e-4;
    std::size_t conservation_n = 2048;
    double conservation_x_max = 30.0;
    // Launches for the equivalence check; empty means vacuum plus two
    // displaced defaults.
    std::vector<GaussianSpec> cases;
};

struct VerifyReport {
    std::vector<Check> checks;
    bool passed() const;
};

/// Cross-checks of the closed form, the split-step solver and the bounds.
/// Checks are independent and run on up to options.jobs threads; the report
/// order does not depend on the thread count.
VerifyReport run_verification(const VerifyOptions& options);

/// Seeded uniform doubles from std::mt19937_64, portable across standard
/// libraries (the std distributions are not).
class SeededUniform {
public:
    explicit SeededUniform(std::uint64_t seed);
    double operator()(double lo, double hi);

private:
    std::mt19937_64 engine_;
};

} // namespace pdl
