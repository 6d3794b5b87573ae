#include "pdl/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>

#include "pdl/analytic.hpp"
#include "pdl/core.hpp"
#include "pdl/error.hpp"
#include "pdl/io.hpp"
#include "pdl/metrology.hpp"
#include "pdl/numeric.hpp"
#include "pdl/sweep.hpp"
#include "pdl/verify.hpp"

namespace pdl::cli {

namespace {

constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    // common
    std::string output;
    std::optional<std::string> format;
    unsigned jobs = 1;
    std::uint64_t seed = 20240611;
    bool print_config = false;

    // launch
    double gamma = 1.0;
    std::optional<double> x0, p0, r, theta;
    double angle = 0.5 * std::numbers::pi;

    // grid and solver
    std::size_t n = 4096;
    double x_max = 40.0;
    double dz = 1e-3;
    std::optional<std::size_t> steps;
    std::optional<double> z;
    std::size_t stride = 10;
    std::string potential = "linear";
    double eta = 0.0;
    double kernel_width = 0.0;
    std::string snapshot_output;

    // lab calibration; lengths in the units named by each flag
    double lambda0_nm = 532.0;
    double n0 = 1.0;
    double w0_um = 25.0;
    std::optional<double> gamma_lab_per_mm;
    std::optional<double> dgamma_dn_per_mm;      // 1/mm per RIU
    std::optional<double> dgamma_dp_per_mm_mw;   // 1/mm per mW
    std::optional<double> dgamma_dt_per_mm_k;    // 1/mm per K
    std::optional<double> dn_dt;                 // RIU per K
    std::optional<double> delta_h_over_k0_per_cm;
    std::optional<double> mean_h_over_k0_per_cm;
    std::optional<double> expected_z_pdl_mm;

    // sweep
    double z_min = 0.04, z_max = 2.0;
    std::size_t z_count = 50;
    std::string z_scale = "linear";
    double a2_min = 0.01, a2_max = 4.0;
    std::size_t a2_count = 50;
    std::string a2_scale = "linear";
    std::string angle_from = "fidelity";
    bool allow_degenerate = false;
    std::string gnuplot_matrix;
    std::string gnuplot_quantity = "z_pdl";

    // sensitivity
    std::string parameter = "gamma";
    std::string bound = "mt";
    std::optional<std::string> against;
    double perturbation = 0.0;

    // verify
    bool quick = false;
};

// Operating point quoted in the literature for the micro-cell example,
// with the distance reported there.
constexpr double kLiteratureDeltaH = 3.3; // 1/cm
constexpr double kLiteratureMeanH = 2.9;  // 1/cm
constexpr double kLiteratureZPdl = 1.8;   // mm

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be finite");
    }
}

GaussianSpec resolve_spec(const RunConfig& c) {
    const bool cartesian = c.x0 || c.p0;
    const bool polar = c.r || c.theta;
    if (cartesian && polar) {
        throw InvalidArgument("give the launch either as --x0/--p0 or as --r/--theta, not both");
    }
    GaussianSpec spec;
    if (polar) {
        require_finite(c.r.value_or(0.0), "r");
        require_finite(c.theta.value_or(0.0), "theta");
        spec = GaussianSpec::from_polar(c.gamma, c.r.value_or(0.0), c.theta.value_or(0.0));
    } else {
        spec = GaussianSpec{c.gamma, c.x0.value_or(0.0), c.p0.value_or(0.0)};
    }
    spec.validate();
    return spec;
}

bool has_lab(const RunConfig& c) {
    return c.gamma_lab_per_mm || c.delta_h_over_k0_per_cm || c.mean_h_over_k0_per_cm;
}

LabUnits resolve_units(const RunConfig& c) {
    LabUnits u;
    u.lambda0 = c.lambda0_nm * 1e-9;
    u.n0 = c.n0;
    u.w0 = c.w0_um * 1e-6;
    if (c.gamma_lab_per_mm) u.gamma_lab = *c.gamma_lab_per_mm * 1e3;
    if (c.dgamma_dn_per_mm) u.dgamma_dn = *c.dgamma_dn_per_mm * 1e3;
    if (c.dgamma_dp_per_mm_mw) u.dgamma_dP = *c.dgamma_dp_per_mm_mw * 1e6;
    if (c.dgamma_dt_per_mm_k) u.dgamma_dT = *c.dgamma_dt_per_mm_k * 1e3;
    u.dn_dT = c.dn_dt;
    u.validate();
    return u;
}

Format output_format(const RunConfig& c, Format fallback) {
    return c.format ? format_from_string(*c.format) : fallback;
}

// Lab-unit echo of the bounds. Generator moments come from the overrides
// (given as H/k0 in 1/cm) or from the dimensionless ones scaled by gamma_lab.
Json lab_bounds(const RunConfig& c, const BoundsReport& report, std::vector<std::string>& notes) {
    const LabUnits units = resolve_units(c);
    auto scaled = [&](double dimensionless, const char* what) {
        if (!units.gamma_lab) {
            throw InvalidArgument(std::string("lab bounds need --gamma-lab-per-mm or --") + what);
        }
        return dimensionless * *units.gamma_lab;
    };
    const double delta_h = c.delta_h_over_k0_per_cm ? *c.delta_h_over_k0_per_cm * 100.0
                                                    : scaled(report.delta_h, "delta-h-over-k0-per-cm");
    const double mean_h = c.mean_h_over_k0_per_cm ? *c.mean_h_over_k0_per_cm * 100.0
                                                  : scaled(report.mean_h, "mean-h-over-k0-per-cm");
    require_finite(delta_h, "delta H");
    require_finite(mean_h, "mean H");
    const BoundsReport lab = pdl_from_moments(mean_h, delta_h, report.bures_target);

    Json j;
    if (units.gamma_lab) j["gamma_lab_per_mm"] = *units.gamma_lab * 1e-3;
    j["k0_per_m"] = units.k0();
    j["n0"] = units.n0;
    j["moments"] = c.delta_h_over_k0_per_cm || c.mean_h_over_k0_per_cm ? "override" : "scaled";
    j["delta_h_per_cm"] = c.delta_h_over_k0_per_cm.value_or(delta_h * 1e-2);
    j["mean_h_per_cm"] = c.mean_h_over_k0_per_cm.value_or(mean_h * 1e-2);
    j["z_mt_mm"] = json_number(lab.z_mt * 1e3);
    j["z_ml_mm"] = json_number(lab.z_ml * 1e3);
    j["z_pdl_mm"] = json_number(lab.z_pdl * 1e3);
    if (std::isfinite(lab.z_pdl)) {
        j["t_switch_ps"] = switch_time(lab.z_pdl, units.n0) * 1e12;
        if (lab.z_pdl > 0.0) j["gate_rate_per_s"] = gate_rate(lab.z_pdl, units.n0);
    }

    std::optional<double> expected = c.expected_z_pdl_mm;
    std::string source = "expected";
    if (!expected && c.delta_h_over_k0_per_cm && c.mean_h_over_k0_per_cm &&
        *c.delta_h_over_k0_per_cm == kLiteratureDeltaH && *c.mean_h_over_k0_per_cm == kLiteratureMeanH) {
        expected = kLiteratureZPdl;
        source = "literature";
    }
    if (expected) {
        const double z_mm = lab.z_pdl * 1e3;
        const double rel = std::abs(z_mm - *expected) / *expected;
        j["expected_z_pdl_mm"] = *expected;
        j["reproduced"] = rel <= 0.02;
        if (rel > 0.02) {
            std::ostringstream note;
            note << std::setprecision(4) << "discrepancy: computed z_PDL = " << z_mm << " mm (z_MT = "
                 << lab.z_mt * 1e3 << " mm, z_ML = " << lab.z_ml * 1e3 << " mm) from delta H/k0 = "
                 << delta_h * 1e-2 << " /cm and <H>/k0 = " << mean_h * 1e-2 << " /cm; the " << source
                 << " value is " << *expected << " mm, off by a factor " << z_mm / *expected;
            notes.push_back(note.str());
        }
    }
    return j;
}

void emit_notes(const std::vector<std::string>& notes, Json& doc, std::ostream& err) {
    if (!notes.empty()) {
        doc["notes"] = notes;
        for (const auto& n : notes) err << "note: " << n << '\n';
    }
}

int cmd_bounds(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const GaussianSpec spec = resolve_spec(c);
    const BoundsReport report = pdl(spec, c.angle);
    const Displacement d = displacement(spec);
    Json doc;
    doc["gamma"] = spec.gamma;
    doc["x0"] = spec.x0;
    doc["p0"] = spec.p0;
    doc["alpha_r"] = d.r;
    doc["alpha_theta"] = d.theta;
    const Json fields = to_json(report);
    for (const auto& [k, v] : fields.items()) doc[k] = v;
    std::vector<std::string> notes;
    if (has_lab(c)) {
        doc["lab"] = lab_bounds(c, report, notes);
    }
    emit_notes(notes, doc, err);
    write_record(out, doc, output_format(c, Format::json));
    return kOk;
}

Json trajectory_json(const Trajectory& t) {
    Json j;
    j["dz"] = t.dz;
    j["steps"] = t.steps;
    j["stride"] = t.stride;
    auto points = Json::array();
    for (const auto& p : t.points) {
        const auto& o = p.observables;
        Json q;
        q["z"] = p.z;
        q["norm"] = o.norm;
        q["centroid"] = o.centroid;
        q["variance"] = o.variance;
        q["re_overlap"] = o.overlap.real();
        q["im_overlap"] = o.overlap.imag();
        q["mean_h"] = o.mean_h;
        q["delta_h"] = o.delta_h;
        points.push_back(q);
    }
    j["points"] = points;
    return j;
}

void write_snapshots(const std::string& path, const Trajectory& t) {
    std::ofstream file(path);
    if (!file) {
        throw InvalidArgument("cannot open snapshot file '" + path + "'");
    }
    file << "z,x,re,im\n";
    for (const auto& p : t.points) {
        if (!p.snapshot) continue;
        const auto x = p.snapshot->grid.x();
        for (std::size_t j = 0; j < x.size(); ++j) {
            file << format_number(p.z) << ',' << format_number(x[j]) << ','
                 << format_number(p.snapshot->samples[j].real()) << ','
                 << format_number(p.snapshot->samples[j].imag()) << '\n';
        }
    }
}

int cmd_propagate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const GaussianSpec spec = resolve_spec(c);
    if (c.steps && c.z) {
        throw InvalidArgument("give either --steps or --z, not both");
    }
    if (!(c.dz > 0.0) || !std::isfinite(c.dz)) {
        throw InvalidArgument("dz must be positive and finite");
    }
    SplitStepOptions options;
    options.dz = c.dz;
    if (c.z) {
        if (!(*c.z >= 0.0) || !std::isfinite(*c.z)) throw InvalidArgument("z must be non-negative and finite");
        options.steps = static_cast<std::size_t>(std::llround(*c.z / c.dz));
    } else {
        options.steps = c.steps.value_or(1000);
    }
    options.stride = c.stride;
    options.keep_snapshots = !c.snapshot_output.empty();

    PotentialModel model = InvertedParabola{spec.gamma};
    if (c.potential == "nonlocal") {
        model = NonlocalDefocusing{c.eta, c.kernel_width};
    }
    const Grid grid = make_grid(c.n, c.x_max);
    const BeamState launch = gaussian_state(spec, grid);
    const Format format = output_format(c, Format::csv);

    auto write = [&](const Trajectory& t, const std::string& error) {
        if (format == Format::csv) {
            write_trajectory_csv(out, t);
            if (!error.empty()) out << "# error: " << error << '\n';
        } else {
            Json j = trajectory_json(t);
            if (!error.empty()) j["error"] = error;
            out << j.dump(2) << '\n';
        }
        out.flush();
        if (options.keep_snapshots) write_snapshots(c.snapshot_output, t);
    };
    try {
        write(split_step(launch, model, options), {});
    } catch (const PropagationError& e) {
        write(e.partial(), e.what());
        err << "error: " << e.what() << " (partial trajectory written)\n";
        return kNumericalError;
    }
    return kOk;
}

AxisScale scale_from(const std::string& s) {
    return s == "log" ? AxisScale::log : AxisScale::linear;
}

int cmd_sweep(const RunConfig& c, std::ostream& out, std::ostream&) {
    Axis z_axis{"z", c.z_min, c.z_max, c.z_count, scale_from(c.z_scale)};
    Axis a_axis{"a_squared", c.a2_min, c.a2_max, c.a2_count, scale_from(c.a2_scale)};
    SweepOptions options;
    options.theta = c.theta.value_or(0.0);
    options.gamma = c.gamma;
    options.angle = AngleSource::parse(c.angle_from);
    options.require_finite_ml = !c.allow_degenerate;
    options.jobs = c.jobs;
    const SweepTable table = sweep_bounds(z_axis, a_axis, options);
    if (!c.gnuplot_matrix.empty()) {
        std::ofstream file(c.gnuplot_matrix);
        if (!file) throw InvalidArgument("cannot open '" + c.gnuplot_matrix + "'");
        export_gnuplot_matrix(file, table, c.gnuplot_quantity);
    }
    if (output_format(c, Format::csv) == Format::csv) {
        export_csv(out, table);
    } else {
        export_json(out, table);
    }
    return kOk;
}

int cmd_sensitivity(const RunConfig& c, std::ostream& out, std::ostream&) {
    const GaussianSpec spec = resolve_spec(c);
    const BoundKind bound = bound_from_string(c.bound);
    SensitivityReport report;
    if (c.against) {
        require_finite(c.perturbation, "perturbation");
        report = lab_sensitivity(spec, resolve_units(c), lab_parameter_from_string(*c.against), bound, c.angle,
                                 c.perturbation);
    } else {
        report = sensitivity(spec, parameter_from_string(c.parameter), bound, c.angle);
    }
    Json doc;
    doc["gamma"] = spec.gamma;
    doc["x0"] = spec.x0;
    doc["p0"] = spec.p0;
    const Json fields = to_json(report);
    for (const auto& [k, v] : fields.items()) doc[k] = v;
    write_record(out, doc, output_format(c, Format::json));
    return kOk;
}

std::string csv_quote(const std::string& s) {
    std::string q = "\"";
    for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
    }
    return q + "\"";
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream&) {
    VerifyOptions options;
    options.quick = c.quick;
    options.seed = c.seed;
    options.jobs = c.jobs;
    options.dz = c.dz;
    options.n = c.n;
    options.x_max = c.x_max;
    const VerifyReport report = run_verification(options);

    if (!c.format) {
        std::size_t passed = 0;
        for (const auto& k : report.checks) {
            passed += k.passed;
            out << (k.passed ? "PASS  " : "FAIL  ") << k.name << "  measured=" << format_number(k.measured)
                << " tolerance=" << format_number(k.tolerance);
            if (!k.detail.empty()) out << "  [" << k.detail << ']';
            out << '\n';
        }
        out << passed << '/' << report.checks.size() << " checks passed\n";
    } else if (format_from_string(*c.format) == Format::json) {
        Json j;
        j["passed"] = report.passed();
        j["seed"] = c.seed;
        j["quick"] = c.quick;
        auto checks = Json::array();
        for (const auto& k : report.checks) {
            Json q;
            q["name"] = k.name;
            q["passed"] = k.passed;
            q["measured"] = json_number(k.measured);
            q["tolerance"] = k.tolerance;
            q["detail"] = k.detail;
            checks.push_back(q);
        }
        j["checks"] = checks;
        out << j.dump(2) << '\n';
    } else {
        out << "name,passed,measured,tolerance,detail\n";
        for (const auto& k : report.checks) {
            out << csv_quote(k.name) << ',' << (k.passed ? "true" : "false") << ',' << format_number(k.measured)
                << ',' << format_number(k.tolerance) << ',' << csv_quote(k.detail) << '\n';
        }
    }
    return report.passed() ? kOk : kVerificationFailed;
}

std::string exact(double v) { return format_number(v); }
std::string exact(const std::string& v) { return v; }
template <class T>
    requires std::is_integral_v<T>
std::string exact(T v) {
    return std::to_string(v);
}

bool is_literal(const std::string& v) {
    if (v == "true" || v == "false") return true;
    double parsed = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
    return ec == std::errc{} && ptr == v.data() + v.size();
}

// Resolved value of every configurable option as "key = value" lines that
// --config reads back; the active subcommand's options form a section.
void print_resolved(const CLI::App& app, std::ostream& out, const std::string& section) {
    std::vector<const CLI::App*> scopes{&app};
    for (const CLI::App* sub : app.get_subcommands([](const CLI::App* a) { return a->get_name().empty(); })) {
        scopes.push_back(sub);
    }
    if (!section.empty()) out << '[' << section << "]\n";
    for (const CLI::App* scope : scopes) {
        for (const CLI::Option* o : scope->get_options()) {
            const std::string name = o->get_single_name();
            if (!o->get_configurable() || name == "help" || name == "config" || name == "print-config" ||
                name == "version") {
                continue;
            }
            std::string value;
            if (o->count() > 0) {
                value = o->get_type_size() == 0 ? "true" : o->as<std::string>();
            } else {
                value = o->get_default_str();
            }
            if (value.empty()) continue;
            out << name << " = " << (is_literal(value) ? value : '"' + value + '"') << '\n';
        }
    }
    for (const CLI::App* sub : app.get_subcommands()) {
        if (!sub->get_name().empty()) print_resolved(*sub, out, sub->get_name());
    }
}

void add_launch_options(CLI::App& app, RunConfig& c) {
    auto* g = app.add_option_group("launch");
    g->add_option("--gamma", c.gamma, "inverted-potential curvature gamma > 0")->default_str(exact(c.gamma));
    auto* x0 = g->add_option("--x0", c.x0, "lateral offset");
    auto* p0 = g->add_option("--p0", c.p0, "launch tilt");
    auto* r = g->add_option("--r", c.r, "|alpha| of the coherent displacement");
    auto* th = g->add_option("--theta", c.theta, "arg(alpha) [rad]; also the sweep phase");
    x0->excludes(r);
    p0->excludes(r);
    (void)th;
    g->add_option("--angle", c.angle, "target Bures angle [rad] in (0, pi/2]")->default_str(exact(c.angle));
}

void add_solver_options(CLI::App& app, RunConfig& c) {
    auto* g = app.add_option_group("grid and solver");
    g->add_option("--n", c.n, "grid points (power of two)")->default_str(exact(c.n));
    g->add_option("--x-max", c.x_max, "half-width of the window")->default_str(exact(c.x_max));
    g->add_option("--dz", c.dz, "propagation step")->default_str(exact(c.dz));
    g->add_option("--steps", c.steps, "number of steps");
    g->add_option("--z", c.z, "propagation distance (sets steps = z/dz)");
    g->add_option("--stride", c.stride, "record every stride steps")->default_str(exact(c.stride));
    g->add_option("--potential", c.potential, "linear or nonlocal")
        ->check(CLI::IsMember({"linear", "nonlocal"}))
        ->default_str(exact(c.potential));
    g->add_option("--eta", c.eta, "nonlocal response strength")->default_str(exact(c.eta));
    g->add_option("--kernel-width", c.kernel_width, "nonlocal kernel standard deviation")
        ->default_str(exact(c.kernel_width));
    g->add_option("--snapshot-output", c.snapshot_output, "CSV file for field snapshots (z,x,re,im)");
}

void add_lab_options(CLI::App& app, RunConfig& c) {
    auto* g = app.add_option_group("lab units");
    g->add_option("--lambda0-nm", c.lambda0_nm, "vacuum wavelength [nm]")->default_str(exact(c.lambda0_nm));
    g->add_option("--n0", c.n0, "base (group) index")->default_str(exact(c.n0));
    g->add_option("--w0-um", c.w0_um, "transverse scale [um]")->default_str(exact(c.w0_um));
    g->add_option("--gamma-lab-per-mm", c.gamma_lab_per_mm, "lab curvature; sets z = gamma_lab Z");
    g->add_option("--dgamma-dn", c.dgamma_dn_per_mm, "dgamma_lab/dn [1/mm per RIU]");
    g->add_option("--dgamma-dp", c.dgamma_dp_per_mm_mw, "dgamma_lab/dP [1/mm per mW]");
    g->add_option("--dgamma-dt", c.dgamma_dt_per_mm_k, "dgamma_lab/dT [1/mm per K]");
    g->add_option("--dn-dt", c.dn_dt, "dn/dT [RIU per K]");
    g->add_option("--delta-h-over-k0-per-cm", c.delta_h_over_k0_per_cm, "lab Delta H / k0 [1/cm]");
    g->add_option("--mean-h-over-k0-per-cm", c.mean_h_over_k0_per_cm, "lab <H> / k0 [1/cm]");
    g->add_option("--expected-z-pdl-mm", c.expected_z_pdl_mm, "reference z_PDL to compare against [mm]");
}

std::string version_text() {
    std::ostringstream s;
    s << "pdl_optics " << kVersion << "\nc = " << format_number(kSpeedOfLight) << " m/s";
    return s.str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Propagation-distance limits for Gaussian beams in inverted-oscillator media", "pdl_optics"};
    app.set_config("--config", "", "configuration file (TOML/INI key = value)");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_version_flag("--version", version_text());
    app.add_option("--output,-o", c.output, "write results to this file instead of stdout");
    app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--jobs,-j", c.jobs, "worker threads")
        ->envname("PDL_OPTICS_JOBS")
        ->check(CLI::Range(1u, 1024u))
        ->default_str(exact(c.jobs));
    app.add_option("--seed", c.seed, "seed for randomized checks")->default_str(exact(c.seed));
    app.add_flag("--print-config", c.print_config, "print the resolved configuration and exit");
    add_launch_options(app, c);
    add_solver_options(app, c);
    add_lab_options(app, c);
    app.require_subcommand(1);

    auto* bounds = app.add_subcommand("bounds", "MT, ML and PDL distances for a launch")->fallthrough();
    auto* propagate = app.add_subcommand("propagate", "split-step propagation, observables CSV")->fallthrough();
    auto* sweep = app.add_subcommand("sweep", "bounds over a (z, |alpha|^2) grid")->fallthrough();
    sweep->add_option("--z-min", c.z_min)->default_str(exact(c.z_min));
    sweep->add_option("--z-max", c.z_max)->default_str(exact(c.z_max));
    sweep->add_option("--z-count", c.z_count)->default_str(exact(c.z_count));
    sweep->add_option("--z-scale", c.z_scale)->check(CLI::IsMember({"linear", "log"}))->default_str(exact(c.z_scale));
    sweep->add_option("--a2-min", c.a2_min)->default_str(exact(c.a2_min));
    sweep->add_option("--a2-max", c.a2_max)->default_str(exact(c.a2_max));
    sweep->add_option("--a2-count", c.a2_count)->default_str(exact(c.a2_count));
    sweep->add_option("--a2-scale", c.a2_scale)->check(CLI::IsMember({"linear", "log"}))->default_str(exact(c.a2_scale));
    sweep->add_option("--angle-from", c.angle_from, "fidelity or fixed:<radians>")->default_str(exact(c.angle_from));
    sweep->add_flag("--allow-degenerate", c.allow_degenerate, "accept theta = pi/4 (ML then infinite)");
    sweep->add_option("--gnuplot-matrix", c.gnuplot_matrix, "also write a gnuplot nonuniform matrix");
    sweep->add_option("--gnuplot-quantity", c.gnuplot_quantity)
        ->check(CLI::IsMember({"z_mt", "z_ml", "z_pdl", "bures_angle", "abs_fidelity"}))
        ->default_str(exact(c.gnuplot_quantity));
    auto* sens = app.add_subcommand("sensitivity", "dz/dx of a bound, analytic and finite-difference")
                     ->fallthrough();
    sens->add_option("--parameter", c.parameter)
        ->check(CLI::IsMember({"gamma", "x0", "p0"}))
        ->default_str(exact(c.parameter));
    sens->add_option("--bound", c.bound, "mt, ml or pdl")->default_str(exact(c.bound));
    sens->add_option("--against", c.against, "lab parameter: index, power or temperature")
        ->check(CLI::IsMember({"index", "power", "temperature"}));
    sens->add_option("--perturbation", c.perturbation, "lab perturbation in SI units (RIU, W, K)")
        ->default_str(exact(c.perturbation));
    auto* verify = app.add_subcommand("verify", "closed form vs split-step cross-checks")->fallthrough();
    verify->add_flag("--quick", c.quick, "reduced subset");

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            app.exit(e, out, err);
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kConfigError;
    }

    if (c.print_config) {
        print_resolved(app, out, "");
        return kOk;
    }

    std::ofstream file;
    if (!c.output.empty()) {
        file.open(c.output);
        if (!file) {
            err << "error: cannot open output file '" << c.output << "'\n";
            return kConfigError;
        }
    }
    std::ostream& sink = c.output.empty() ? out : file;

    try {
        if (*bounds) return cmd_bounds(c, sink, err);
        if (*propagate) return cmd_propagate(c, sink, err);
        if (*sweep) return cmd_sweep(c, sink, err);
        if (*sens) return cmd_sensitivity(c, sink, err);
        if (*verify) return cmd_verify(c, sink, err);
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericalError;
    }
    return kConfigError;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

} // namespace pdl::cli
