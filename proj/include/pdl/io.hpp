#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pdl/analytic.hpp"
#include "pdl/metrology.hpp"

namespace pdl {

// Shortest decimal that round-trips; +inf/-inf as "inf"/"-inf", NaN as "nan".
std::string format_number(double value);

using Json = nlohmann::ordered_json;

// JSON number, or the string "inf"/"-inf" for infinities.
Json json_number(double value);
// Inverse of json_number.
double number_from_json(const Json& j);

Json to_json(const BoundsReport& report);
BoundsReport bounds_from_json(const Json& j);

Json to_json(const SensitivityReport& report);

enum class Format { csv, json };

Format format_from_string(std::string_view name);

/// One record: pretty JSON, or a header line plus one value line where
/// nested objects flatten to dotted keys and arrays are dropped.
void write_record(std::ostream& out, const Json& record, Format format);

} // namespace pdl
