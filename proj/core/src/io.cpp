#include "gsc/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gsc/errors.hpp"

namespace gsc {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_constellation_csv(std::ostream& out, const Constellation& c) {
  for (int d = 0; d < c.dims(); ++d) out << "dim" << d + 1 << ',';
  out << "label\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (int d = 0; d < c.dims(); ++d) out << format_double(c(i, d)) << ',';
    out << c.labels()[i] << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    fields.push_back(field);
  }
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const char* first = s.data();
  if (!s.empty() && s[0] == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParameterError("constellation CSV line " + std::to_string(line_no) +
                         ": invalid number '" + s + "'");
  }
  return v;
}

}  // namespace

Constellation read_constellation_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParameterError("constellation CSV: empty input");
  const auto header = split_csv_line(line);
  const int dims = static_cast<int>(header.size()) - 1;
  if (dims < 2 || dims % 2 != 0 || header.back() != "label") {
    throw ParameterError("constellation CSV: header must be dim1,...,dim{2N},label");
  }
  for (int d = 0; d < dims; ++d) {
    if (header[d] != "dim" + std::to_string(d + 1)) {
      throw ParameterError("constellation CSV: unexpected column '" + header[d] + "'");
    }
  }

  std::vector<double> coords;
  std::vector<std::uint32_t> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != dims + 1) {
      throw ParameterError("constellation CSV line " + std::to_string(line_no) +
                           ": expected " + std::to_string(dims + 1) + " fields");
    }
    for (int d = 0; d < dims; ++d) coords.push_back(parse_double(fields[d], line_no));
    std::uint32_t label = 0;
    const auto& lf = fields.back();
    const auto res = std::from_chars(lf.data(), lf.data() + lf.size(), label);
    if (res.ec != std::errc() || res.ptr != lf.data() + lf.size()) {
      throw ParameterError("constellation CSV line " + std::to_string(line_no) +
                           ": invalid label '" + lf + "'");
    }
    labels.push_back(label);
  }
  return Constellation(std::move(coords), std::move(labels), dims / 2);
}

std::string meta_to_json(const ConstellationMeta& meta) {
  nlohmann::ordered_json j;
  j["M"] = meta.size;
  j["n_pairs"] = meta.n_pairs;
  j["design_snr_db"] = meta.design_snr_db ? nlohmann::ordered_json(*meta.design_snr_db)
                                          : nlohmann::ordered_json(nullptr);
  j["metric"] = meta.metric;
  j["kind"] = meta.kind;
  j["seed"] = meta.seed ? nlohmann::ordered_json(*meta.seed) : nlohmann::ordered_json(nullptr);
  return j.dump(2) + "\n";
}

ConstellationMeta meta_from_json(const std::string& text) try {
  const auto j = nlohmann::json::parse(text);
  ConstellationMeta meta;
  meta.size = j.at("M").get<std::size_t>();
  meta.n_pairs = j.at("n_pairs").get<int>();
  if (j.contains("design_snr_db") && !j["design_snr_db"].is_null()) {
    meta.design_snr_db = j["design_snr_db"].get<double>();
  }
  meta.metric = j.value("metric", "");
  meta.kind = j.value("kind", "");
  if (j.contains("seed") && !j["seed"].is_null()) meta.seed = j["seed"].get<std::uint64_t>();
  return meta;
} catch (const nlohmann::json::exception& e) {
  throw ParameterError(std::string("sidecar JSON: ") + e.what());
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

void save_constellation(const std::filesystem::path& csv_path, const Constellation& c,
                        const ConstellationMeta& meta) {
  if (csv_path.has_parent_path()) std::filesystem::create_directories(csv_path.parent_path());
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) throw ParameterError("cannot write " + csv_path.string());
  write_constellation_csv(csv, c);
  std::ofstream js(sidecar_path(csv_path), std::ios::binary);
  if (!js) throw ParameterError("cannot write " + sidecar_path(csv_path).string());
  js << meta_to_json(meta);
}

Constellation load_constellation(const std::filesystem::path& csv_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw ParameterError("cannot open " + csv_path.string());
  return read_constellation_csv(in);
}

void write_trace_csv(std::ostream& out, const OptTrace& trace) {
  out << "iter,f,grad_norm,delta,step_norm,rho,accepted,n_objective_evals\n";
  for (const auto& r : trace.records) {
    out << r.iter << ',' << format_double(r.f) << ',' << format_double(r.grad_norm) << ','
        << format_double(r.delta) << ',' << format_double(r.step_norm) << ','
        << format_double(r.rho) << ',' << (r.accepted ? 1 : 0) << ',' << r.n_objective_evals
        << '\n';
  }
}

}  // namespace gsc
