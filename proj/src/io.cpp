#include "obp/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace obp::io {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json tuple_to_json(const OrderedTuple& t) {
  json j;
  j["ordered_tuple"]["values"] = t.values();
  j["ordered_tuple"]["ordering"] = (t.ordering() == Ordering::strict) ? "strict" : "weak";
  return j;
}

OrderedTuple tuple_from_json(const json& j) {
  if (!j.contains("ordered_tuple")) throw parse_error("missing key 'ordered_tuple'");
  const json& t = j.at("ordered_tuple");
  std::vector<double> values = t.at("values").get<std::vector<double>>();
  std::string ord = t.value("ordering", "strict");
  if (ord == "strict") return OrderedTuple::strict_from_file(std::move(values));
  if (ord == "weak") return OrderedTuple::weak_from_file(std::move(values));
  throw parse_error("ordering must be 'strict' or 'weak'");
}

json interlacing_to_json(const InterlacingArray& t) {
  json j;
  j["interlacing"]["levels"] = t.levels();
  if (t.has_top()) j["interlacing"]["top"] = t.top();
  return j;
}

InterlacingArray interlacing_from_json(const json& j) {
  if (!j.contains("interlacing")) throw parse_error("missing key 'interlacing'");
  const json& t = j.at("interlacing");
  auto levels = t.at("levels").get<std::vector<std::vector<double>>>();
  std::optional<std::vector<double>> top;
  if (t.contains("top")) top = t.at("top").get<std::vector<double>>();
  return InterlacingArray::from_file(std::move(levels), std::move(top));
}

json measure_to_json(const EmpiricalMeasure& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms) atoms.push_back({{"x", a.x}, {"w", a.w}});
  json j;
  j["measure"]["atoms"] = std::move(atoms);
  j["measure"]["support_bound"] = m.support_bound;
  return j;
}

EmpiricalMeasure measure_from_json(const json& j) {
  if (!j.contains("measure")) throw parse_error("missing key 'measure'");
  const json& t = j.at("measure");
  std::vector<EmpiricalMeasure::Atom> atoms;
  for (const auto& a : t.at("atoms")) {
    atoms.push_back({a.at("x").get<double>(), a.at("w").get<double>()});
  }
  return EmpiricalMeasure(std::move(atoms), t.at("support_bound").get<double>());
}

json report_to_json(const lab::ExperimentReport& rep) {
  json rows = json::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"label", r.label},
                    {"observed", r.observed},
                    {"predicted", r.predicted},
                    {"delta", r.delta},
                    {"stderr", r.stderror}});
  }
  return json{{"report",
               {{"name", rep.name},
                {"seed", rep.seed},
                {"pass", rep.pass},
                {"rows", std::move(rows)},
                {"notes", rep.notes},
                {"version", kLibraryVersion}}}};
}

std::string report_to_csv(const lab::ExperimentReport& rep) {
  bool numeric_labels = !rep.rows.empty();
  for (const auto& r : rep.rows) {
    if (r.label.find_first_not_of("0123456789") != std::string::npos) numeric_labels = false;
  }
  std::ostringstream out;
  out << (numeric_labels ? "N" : "label") << ",observed,predicted,delta,stderr\n";
  for (const auto& r : rep.rows) {
    out << r.label << ',' << format_double(r.observed) << ',' << format_double(r.predicted)
        << ',' << format_double(r.delta) << ',' << format_double(r.stderror) << '\n';
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw parse_error("cannot write file: " + path);
  out << content;
}

}  // namespace obp::io
