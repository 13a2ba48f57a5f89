#pragma once

#include <string>

#include <json.hpp>

#include "obp/asymptotics.hpp"
#include "obp/types.hpp"

namespace obp::io {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

nlohmann::json tuple_to_json(const OrderedTuple& t);
OrderedTuple tuple_from_json(const nlohmann::json& j);

nlohmann::json interlacing_to_json(const InterlacingArray& t);
InterlacingArray interlacing_from_json(const nlohmann::json& j);

nlohmann::json measure_to_json(const EmpiricalMeasure& m);
EmpiricalMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const lab::ExperimentReport& rep);
std::string report_to_csv(const lab::ExperimentReport& rep);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace obp::io
