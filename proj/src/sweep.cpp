#include "pdl/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "pdl/analytic.hpp"
#include "pdl/core.hpp"
#include "pdl/error.hpp"
#include "pdl/io.hpp"

namespace pdl {

void Axis::validate() const {
    if (count == 0) {
        throw InvalidArgument("axis '" + name + "' must have at least one point");
    }
    if (!std::isfinite(min) || !std::isfinite(max)) {
        throw InvalidArgument("axis '" + name + "' bounds must be finite");
    }
    if (max < min) {
        throw InvalidArgument("axis '" + name + "' has max < min");
    }
    if (scale == AxisScale::log && !(min > 0.0)) {
        throw InvalidArgument("log axis '" + name + "' needs min > 0");
    }
}

double Axis::value(std::size_t i) const {
    if (count == 1 || i == 0) return min;
    if (i + 1 == count) return max;
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    if (scale == AxisScale::log) {
        return std::exp(std::log(min) + t * (std::log(max) - std::log(min)));
    }
    return min + t * (max - min);
}

AngleSource AngleSource::parse(std::string_view text) {
    if (text == "fidelity") {
        return {};
    }
    constexpr std::string_view prefix = "fixed:";
    if (text.substr(0, prefix.size()) == prefix) {
        const auto rest = text.substr(prefix.size());
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
        if (ec != std::errc{} || ptr != rest.data() + rest.size() || rest.empty()) {
            throw InvalidArgument("malformed angle in '" + std::string(text) + "'");
        }
        if (!(value >= 0.0 && value <= 0.5 * std::numbers::pi + 1e-12)) {
            throw InvalidArgument("fixed angle must lie in [0, pi/2]");
        }
        return {true, value};
    }
    throw InvalidArgument("angle source must be 'fidelity' or 'fixed:<radians>', got '" + std::string(text) + "'");
}

std::string AngleSource::to_string() const {
    return fixed ? "fixed:" + format_number(angle) : "fidelity";
}

namespace {

void evaluate_point(SweepTable& t, std::size_t iz, std::size_t ia) {
    const double z = t.z_axis.value(iz);
    const double a2 = t.a_squared_axis.value(ia);
    const auto spec = GaussianSpec::from_polar(t.gamma, std::sqrt(a2), t.theta);
    // Same tolerance as the degenerate-phase check: cos 2 theta below it is zero.
    const double c2 = std::cos(2.0 * t.theta);
    const double mean_h = std::abs(c2) < 1e-12 ? 0.0 : -t.gamma * a2 * c2;
    const double delta_h = t.gamma * std::sqrt(0.5 + a2);
    const double angle = t.angle.fixed ? t.angle.angle : bures_angle_at(spec, z);
    const std::size_t k = t.index(iz, ia);
    t.bures_angle[k] = angle;
    t.abs_fidelity[k] = std::exp(log_fidelity(spec, z).real());
    t.z_mt[k] = mt_bound(angle, delta_h);
    t.z_ml[k] = ml_bound(angle, mean_h);
    t.z_pdl[k] = std::max(t.z_mt[k], t.z_ml[k]);
}

} // namespace

SweepTable sweep_bounds(const Axis& z_axis, const Axis& a_squared_axis, const SweepOptions& options) {
    z_axis.validate();
    a_squared_axis.validate();
    if (!(options.gamma > 0.0) || !std::isfinite(options.gamma)) {
        throw InvalidArgument("gamma must be positive and finite");
    }
    if (!std::isfinite(options.theta)) {
        throw InvalidArgument("theta must be finite");
    }
    if (z_axis.min < 0.0) {
        throw InvalidArgument("z axis must be non-negative");
    }
    if (a_squared_axis.min < 0.0) {
        throw InvalidArgument("|alpha|^2 axis must be non-negative");
    }
    if (options.require_finite_ml && std::abs(std::cos(2.0 * options.theta)) < 1e-12) {
        throw RegimeError("theta = pi/4 (mod pi/2) makes <H> vanish for every |alpha|^2; ML is undefined");
    }

    SweepTable t;
    t.z_axis = z_axis;
    t.a_squared_axis = a_squared_axis;
    t.theta = options.theta;
    t.gamma = options.gamma;
    t.angle = options.angle;
    const std::size_t n = t.size();
    for (auto* v : {&t.bures_angle, &t.abs_fidelity, &t.z_mt, &t.z_ml, &t.z_pdl}) {
        v->assign(n, 0.0);
    }

    // Rows are dealt round-robin; every cell is written by exactly one worker.
    const std::size_t rows = z_axis.count;
    const std::size_t workers = std::clamp<std::size_t>(options.jobs, 1, rows);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&](std::size_t first) {
        try {
            for (std::size_t iz = first; iz < rows; iz += workers) {
                for (std::size_t ia = 0; ia < a_squared_axis.count; ++ia) {
                    evaluate_point(t, iz, ia);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return t;
}

void export_csv(std::ostream& out, const SweepTable& t) {
    out << "z,a_squared,bures_angle,abs_fidelity,z_mt,z_ml,z_pdl\n";
    for (std::size_t iz = 0; iz < t.z_axis.count; ++iz) {
        for (std::size_t ia = 0; ia < t.a_squared_axis.count; ++ia) {
            const std::size_t k = t.index(iz, ia);
            out << format_number(t.z_axis.value(iz)) << ',' << format_number(t.a_squared_axis.value(ia)) << ','
                << format_number(t.bures_angle[k]) << ',' << format_number(t.abs_fidelity[k]) << ','
                << format_number(t.z_mt[k]) << ',' << format_number(t.z_ml[k]) << ','
                << format_number(t.z_pdl[k]) << '\n';
        }
    }
}

namespace {

Json axis_json(const Axis& a) {
    Json j;
    j["name"] = a.name;
    j["min"] = a.min;
    j["max"] = a.max;
    j["count"] = a.count;
    j["scale"] = a.scale == AxisScale::log ? "log" : "linear";
    return j;
}

Axis axis_from_json(const Json& j) {
    Axis a;
    a.name = j.at("name").get<std::string>();
    a.min = j.at("min").get<double>();
    a.max = j.at("max").get<double>();
    a.count = j.at("count").get<std::size_t>();
    const auto scale = j.at("scale").get<std::string>();
    if (scale == "log") {
        a.scale = AxisScale::log;
    } else if (scale != "linear") {
        throw InvalidArgument("unknown axis scale '" + scale + "'");
    }
    a.validate();
    return a;
}

Json values_json(const std::vector<double>& v) {
    auto arr = Json::array();
    for (double x : v) arr.push_back(json_number(x));
    return arr;
}

std::vector<double> values_from_json(const Json& j, std::size_t expected, const char* name) {
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(number_from_json(x));
    if (v.size() != expected) {
        throw InvalidArgument(std::string("sweep JSON field '") + name + "' has the wrong length");
    }
    return v;
}

const std::vector<double>& quantity_values(const SweepTable& t, std::string_view q) {
    if (q == "z_mt") return t.z_mt;
    if (q == "z_ml") return t.z_ml;
    if (q == "z_pdl") return t.z_pdl;
    if (q == "bures_angle") return t.bures_angle;
    if (q == "abs_fidelity") return t.abs_fidelity;
    throw InvalidArgument("unknown sweep quantity '" + std::string(q) + "'");
}

} // namespace

void export_json(std::ostream& out, const SweepTable& t) {
    Json j;
    j["axes"] = {axis_json(t.z_axis), axis_json(t.a_squared_axis)};
    j["layout"] = "row-major over (z, a_squared)";
    j["theta"] = t.theta;
    j["gamma"] = t.gamma;
    j["angle_source"] = t.angle.to_string();
    Json values;
    values["bures_angle"] = values_json(t.bures_angle);
    values["abs_fidelity"] = values_json(t.abs_fidelity);
    values["z_mt"] = values_json(t.z_mt);
    values["z_ml"] = values_json(t.z_ml);
    values["z_pdl"] = values_json(t.z_pdl);
    j["values"] = values;
    out << j.dump(2) << '\n';
}

SweepTable import_json(std::istream& in) {
    Json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed sweep JSON: ") + e.what());
    }
    try {
        SweepTable t;
        const auto& axes = j.at("axes");
        if (axes.size() != 2) {
            throw InvalidArgument("sweep JSON needs exactly two axes");
        }
        t.z_axis = axis_from_json(axes[0]);
        t.a_squared_axis = axis_from_json(axes[1]);
        t.theta = j.at("theta").get<double>();
        t.gamma = j.at("gamma").get<double>();
        t.angle = AngleSource::parse(j.at("angle_source").get<std::string>());
        const auto& v = j.at("values");
        const std::size_t n = t.size();
        t.bures_angle = values_from_json(v.at("bures_angle"), n, "bures_angle");
        t.abs_fidelity = values_from_json(v.at("abs_fidelity"), n, "abs_fidelity");
        t.z_mt = values_from_json(v.at("z_mt"), n, "z_mt");
        t.z_ml = values_from_json(v.at("z_ml"), n, "z_ml");
        t.z_pdl = values_from_json(v.at("z_pdl"), n, "z_pdl");
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed sweep JSON: ") + e.what());
    }
}

void export_gnuplot_matrix(std::ostream& out, const SweepTable& t, std::string_view quantity) {
    const auto& v = quantity_values(t, quantity);
    // gnuplot reads NaN as a missing point, which is how +inf is drawn.
    auto cell = [](double x) { return std::isfinite(x) ? format_number(x) : std::string("NaN"); };
    out << t.a_squared_axis.count;
    for (std::size_t ia = 0; ia < t.a_squared_axis.count; ++ia) {
        out << ' ' << format_number(t.a_squared_axis.value(ia));
    }
    out << '\n';
    for (std::size_t iz = 0; iz < t.z_axis.count; ++iz) {
        out << format_number(t.z_axis.value(iz));
        for (std::size_t ia = 0; ia < t.a_squared_axis.count; ++ia) {
            out << ' ' << cell(v[t.index(iz, ia)]);
        }
        out << '\n';
    }
}

} // namespace pdl
