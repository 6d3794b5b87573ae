#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pdl {

enum class AxisScale { linear, log };

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;
    AxisScale scale = AxisScale::linear;

    void validate() const;
    double value(std::size_t i) const;

    friend bool operator==(const Axis&, const Axis&) = default;
};

// Where L(z) comes from: the analytic fidelity curve, or one fixed angle
// for every grid point. Parsed from "fidelity" or "fixed:<radians>".
struct AngleSource {
    bool fixed = false;
    double angle = 0.0;

    static AngleSource parse(std::string_view text);
    std::string to_string() const;

    friend bool operator==(const AngleSource&, const AngleSource&) = default;
};

struct SweepOptions {
    double theta = 0.0;
    double gamma = 1.0;
    AngleSource angle;
    // Reject theta = pi/4 (mod pi/2), where <H> vanishes for every |alpha|.
    bool require_finite_ml = true;
    unsigned jobs = 1;
};

/// Row-major table over (z, |alpha|^2): row i is z_axis.value(i).
struct SweepTable {
    Axis z_axis;
    Axis a_squared_axis;
    double theta = 0.0;
    double gamma = 1.0;
    AngleSource angle;

    std::vector<double> bures_angle;
    std::vector<double> abs_fidelity;
    std::vector<double> z_mt;
    std::vector<double> z_ml;
    std::vector<double> z_pdl;

    std::size_t index(std::size_t iz, std::size_t ia) const { return iz * a_squared_axis.count + ia; }
    std::size_t size() const { return z_axis.count * a_squared_axis.count; }

    friend bool operator==(const SweepTable&, const SweepTable&) = default;
};

SweepTable sweep_bounds(const Axis& z_axis, const Axis& a_squared_axis, const SweepOptions& options);

// Long-format CSV: z,a_squared,bures_angle,abs_fidelity,z_mt,z_ml,z_pdl.
void export_csv(std::ostream& out, const SweepTable& table);
void export_json(std::ostream& out, const SweepTable& table);
SweepTable import_json(std::istream& in);

/// gnuplot "matrix nonuniform" block for one quantity (z_mt, z_ml, z_pdl,
/// bures_angle, abs_fidelity).
void export_gnuplot_matrix(std::ostream& out, const SweepTable& table, std::string_view quantity);

} // namespace pdl
