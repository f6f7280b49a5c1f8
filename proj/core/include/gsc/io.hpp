#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "gsc/constellation.hpp"
#include "gsc/optim.hpp"

namespace gsc {

/// Sidecar metadata stored next to a constellation CSV.
struct ConstellationMeta {
  std::size_t size = 0;
  int n_pairs = 1;
  std::optional<double> design_snr_db;
  std::string metric;
  std::string kind;
  std::optional<std::uint64_t> seed;
};

/// "%.17g", enough digits to round-trip any double.
std::string format_double(double value);

/// CSV with header dim1,...,dim{2N},label and one row per symbol.
void write_constellation_csv(std::ostream& out, const Constellation& c);
Constellation read_constellation_csv(std::istream& in);

std::string meta_to_json(const ConstellationMeta& meta);
ConstellationMeta meta_from_json(const std::string& text);

/// `path` with its extension replaced by .json.
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

/// Writes the CSV and its JSON sidecar.
void save_constellation(const std::filesystem::path& csv_path, const Constellation& c,
                        const ConstellationMeta& meta);
Constellation load_constellation(const std::filesystem::path& csv_path);

/// iter,f,grad_norm,delta,step_norm,rho,accepted,n_objective_evals
void write_trace_csv(std::ostream& out, const OptTrace& trace);

}  // namespace gsc
