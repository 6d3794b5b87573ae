#include "pdl/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "pdl/error.hpp"
#include "pdl/numeric.hpp"

namespace pdl {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

Json json_number(double value) {
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    if (std::isnan(value)) {
        return "nan";
    }
    return value;
}

double number_from_json(const Json& j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InvalidArgument("expected a number or \"inf\" in JSON, got " + j.dump());
}

Json to_json(const BoundsReport& r) {
    Json j;
    j["mean_energy"] = json_number(r.mean_h);
    j["delta_h"] = json_number(r.delta_h);
    j["bures_target"] = json_number(r.bures_target);
    j["z_mt"] = json_number(r.z_mt);
    j["z_ml"] = json_number(r.z_ml);
    j["z_pdl"] = json_number(r.z_pdl);
    j["regime"] = std::string(to_string(r.regime));
    return j;
}

BoundsReport bounds_from_json(const Json& j) {
    BoundsReport r;
    r.mean_h = number_from_json(j.at("mean_energy"));
    r.abs_mean_h = std::abs(r.mean_h);
    r.delta_h = number_from_json(j.at("delta_h"));
    r.bures_target = number_from_json(j.at("bures_target"));
    r.z_mt = number_from_json(j.at("z_mt"));
    r.z_ml = number_from_json(j.at("z_ml"));
    r.z_pdl = number_from_json(j.at("z_pdl"));
    r.regime = regime_from_string(j.at("regime").get<std::string>());
    return r;
}

Json to_json(const SensitivityReport& r) {
    Json j;
    j["parameter"] = r.parameter;
    j["bound"] = std::string(to_string(r.bound));
    j["branch"] = std::string(to_string(r.branch));
    j["angle"] = json_number(r.angle);
    j["z"] = json_number(r.z);
    j["analytic"] = json_number(r.analytic);
    j["finite_difference"] = json_number(r.finite_difference);
    j["crossover"] = r.crossover;
    if (r.left_derivative) {
        j["left_derivative"] = json_number(*r.left_derivative);
    }
    if (r.lab) {
        Json lab;
        lab["value"] = json_number(r.lab->value);
        lab["unit"] = r.lab->unit;
        lab["value_si"] = json_number(r.lab->value_si);
        lab["coupling_per_m"] = json_number(r.lab->coupling);
        lab["perturbation"] = json_number(r.lab->perturbation);
        lab["delta_z"] = json_number(r.lab->delta_z_display);
        lab["delta_z_unit"] = r.lab->delta_z_unit;
        j["lab"] = lab;
    }
    return j;
}

Format format_from_string(std::string_view name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw InvalidArgument("unknown format '" + std::string(name) + "' (expected csv or json)");
}

namespace {

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& cells) {
    for (const auto& [key, value] : j.items()) {
        const std::string name = prefix.empty() ? key : prefix + "." + key;
        if (value.is_object()) {
            flatten(value, name, cells);
        } else if (value.is_string()) {
            cells.emplace_back(name, value.get<std::string>());
        } else if (value.is_number_float()) {
            cells.emplace_back(name, format_number(value.get<double>()));
        } else if (!value.is_array()) {
            cells.emplace_back(name, value.dump());
        }
    }
}

} // namespace

void write_record(std::ostream& out, const Json& record, Format format) {
    if (format == Format::json) {
        out << record.dump(2) << '\n';
        return;
    }
    std::vector<std::pair<std::string, std::string>> cells;
    flatten(record, "", cells);
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out << (i ? "," : "") << cells[i].first;
    }
    out << '\n';
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out << (i ? "," : "") << cells[i].second;
    }
    out << '\n';
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    out << "z,norm,centroid,variance,re_overlap,im_overlap,mean_h,delta_h\n";
    for (const auto& p : trajectory.points) {
        const auto& o = p.observables;
        out << format_number(p.z) << ',' << format_number(o.norm) << ',' << format_number(o.centroid) << ','
            << format_number(o.variance) << ',' << format_number(o.overlap.real()) << ','
            << format_number(o.overlap.imag()) << ',' << format_number(o.mean_h) << ','
            << format_number(o.delta_h) << '\n';
    }
}

} // namespace pdl
