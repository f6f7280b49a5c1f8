#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "gsc/air.hpp"
#include "gsc/constellation.hpp"
#include "gsc/errors.hpp"
#include "gsc/fibre.hpp"
#include "gsc/grad.hpp"
#include "gsc/io.hpp"
#include "gsc/labeling.hpp"
#include "gsc/optim.hpp"
#include "gsc/parallel.hpp"
#include "gsc/shaping.hpp"

namespace gsc::cli {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  std::uint64_t seed = 0;
  int ghq_order = 10;
  std::size_t jobs = 0;
  std::string output;
};

struct FibreArgs {
  std::optional<double> c;
  std::optional<double> snr_gaussian_db;
};

struct ShapeArgs {
  std::size_t m = 64;
  int pairs = 1;
  std::string metric = "gmi";
  std::string symmetry = "none";
  std::vector<std::string> starts{"square", "ring", "gaussian"};
  int max_iters = 10000;
  FibreArgs fibre;
};

// Metric values are reported to 6 decimals.
double round6(double v) { return std::isfinite(v) ? std::round(v * 1e6) / 1e6 : v; }

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string format_snr(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

bool is_power_of_two(std::size_t v) { return v >= 2 && (v & (v - 1)) == 0; }

void add_fibre_options(CLI::App* cmd, FibreArgs& f) {
  cmd->add_option("--fibre-c", f.c, "Eta ratio c of the nonlinear fibre model")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--fibre-snr-gaussian-db", f.snr_gaussian_db,
                  "SNR of a Gaussian signal at optimum launch power (defaults to --snr-db)");
}

void add_shape_options(CLI::App* cmd, ShapeArgs& a) {
  cmd->add_option("--pairs", a.pairs, "Number of 2D pairs N")->check(CLI::Range(1, 4));
  cmd->add_option("--metric", a.metric, "mi or gmi")->check(CLI::IsMember({"mi", "gmi"}));
  cmd->add_option("--symmetry", a.symmetry, "none or orthant")
      ->check(CLI::IsMember({"none", "orthant"}));
  cmd->add_option("--starts", a.starts, "Comma-separated start kinds")
      ->delimiter(',')
      ->check(CLI::IsMember({"square", "ring", "lattice", "gaussian"}));
  cmd->add_option("--max-iters", a.max_iters, "Trust-region iteration cap")
      ->check(CLI::PositiveNumber);
  add_fibre_options(cmd, a.fibre);
}

std::variant<AwgnChannel, FibreModel> make_channel(std::optional<double> snr_db,
                                                   const FibreArgs& f, int n_pairs) {
  if (f.c) {
    if (n_pairs != 1) {
      throw UnsupportedDimensionError("the fibre model is defined for --pairs 1 only");
    }
    FibreModel fm;
    fm.c = *f.c;
    if (f.snr_gaussian_db) {
      fm.snr_gaussian_db = *f.snr_gaussian_db;
    } else if (snr_db) {
      fm.snr_gaussian_db = *snr_db;
    } else {
      throw UsageError("--fibre-c needs --fibre-snr-gaussian-db or --snr-db");
    }
    fm.validate();
    return fm;
  }
  if (f.snr_gaussian_db) throw UsageError("--fibre-snr-gaussian-db requires --fibre-c");
  if (!snr_db) throw UsageError("--snr-db is required");
  return AwgnChannel::from_snr_db(*snr_db);
}

double design_snr(const std::variant<AwgnChannel, FibreModel>& ch) {
  if (const auto* a = std::get_if<AwgnChannel>(&ch)) return a->snr_db();
  return std::get<FibreModel>(ch).snr_gaussian_db;
}

struct StartSet {
  std::vector<Constellation> starts;
  std::vector<std::string> names;
  std::vector<std::string> warnings;
};

// Gaussian starts draw with seed, seed + 1, ... in list order.
StartSet build_starts(const std::vector<std::string>& kinds, std::size_t M, int pairs,
                      std::uint64_t seed, bool orthant) {
  StartSet set;
  std::uint64_t gaussian_count = 0;
  for (const auto& name : kinds) {
    GenerateOptions opt;
    opt.kind = parse_start_kind(name);
    opt.size = M;
    opt.n_pairs = pairs;
    opt.orthant_symmetric = orthant;
    opt.seed = opt.kind == StartKind::Gaussian ? seed + gaussian_count++ : seed;
    try {
      set.starts.push_back(generate(opt));
      set.names.push_back(opt.kind == StartKind::Gaussian
                              ? name + ":" + std::to_string(opt.seed)
                              : name);
    } catch (const ParameterError& e) {
      set.warnings.push_back("start '" + name + "' skipped: " + e.what());
    }
  }
  return set;
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string kind = "square";
  std::size_t m = 16;
  int pairs = 1;
  std::optional<std::string> basis;
  int rings = 0;
  std::string symmetry = "none";
};

int cmd_generate(const GenerateArgs& a, const Globals& g, std::ostream& out) {
  GenerateOptions opt;
  opt.kind = parse_start_kind(a.kind);
  opt.size = a.m;
  opt.n_pairs = a.pairs;
  opt.seed = g.seed;
  if (a.basis) opt.basis = parse_label_basis(*a.basis);
  opt.n_rings = a.rings;
  opt.orthant_symmetric = parse_symmetry(a.symmetry) == Symmetry::Orthant;
  const Constellation c = generate(opt);

  if (g.output.empty()) {
    write_constellation_csv(out, c);
    return kExitOk;
  }
  ConstellationMeta meta;
  meta.size = c.size();
  meta.n_pairs = c.n_pairs();
  meta.metric = "none";
  meta.kind = a.kind;
  meta.seed = g.seed;
  save_constellation(g.output, c, meta);
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string constellation;
  std::optional<double> snr_db;
  std::string metric = "gmi";
  FibreArgs fibre;
};

int cmd_evaluate(const EvaluateArgs& a, const Globals& g, std::ostream& out) {
  const Constellation c = normalize(load_constellation(a.constellation));
  const Metric metric = parse_metric(a.metric);
  const auto channel = make_channel(a.snr_db, a.fibre, c.n_pairs());
  const GhqGrid grid(g.ghq_order, c.dims());

  ojson j;
  j["M"] = c.size();
  j["n_pairs"] = c.n_pairs();
  j["metric"] = a.metric;
  double snr_db = design_snr(channel);
  if (const auto* fm = std::get_if<FibreModel>(&channel)) {
    const double phi = excess_kurtosis(c);
    snr_db = snr_for_constellation(*fm, phi);
    j["fibre_c"] = fm->c;
    j["snr_gaussian_db"] = fm->snr_gaussian_db;
    j["excess_kurtosis"] = round6(phi);
  }
  const AirReport r = evaluate(c, AwgnChannel::from_snr_db(snr_db), grid);
  const double value = metric == Metric::MI ? r.mi : r.gmi;
  j["snr_db"] = round6(snr_db);
  j["mi"] = round6(r.mi);
  j["gmi"] = round6(r.gmi);
  j["capacity_2d"] = round6(r.capacity_2d);
  j["gap_gmi"] = round6(r.gap_gmi);
  j["value"] = round6(value);
  j["gap"] = round6(c.n_pairs() * r.capacity_2d - value);

  const std::string text = j.dump(2) + "\n";
  if (g.output.empty()) {
    out << text;
  } else {
    write_text(g.output, text);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
  ShapeArgs shape;
  std::optional<double> snr_db;
  std::optional<std::string> start_file;
};

int cmd_optimize(const OptimizeArgs& a, const Globals& g, std::ostream& out,
                 std::ostream& err) {
  const ShapeArgs& s = a.shape;
  if (!is_power_of_two(s.m)) throw UsageError("--m must be a power of two >= 2");
  const Symmetry sym = parse_symmetry(s.symmetry);

  ShapingObjective objective;
  objective.metric = parse_metric(s.metric);
  objective.channel = make_channel(a.snr_db, s.fibre, s.pairs);
  objective.grid = GhqGrid(g.ghq_order, 2 * s.pairs);

  StartSet set;
  if (a.start_file) {
    set.starts.push_back(load_constellation(*a.start_file));
    set.names.push_back(*a.start_file);
    if (set.starts[0].size() != s.m || set.starts[0].n_pairs() != s.pairs) {
      throw UsageError("--start-file does not match --m/--pairs");
    }
  } else {
    set = build_starts(s.starts, s.m, s.pairs, g.seed, sym == Symmetry::Orthant);
  }
  for (const auto& w : set.warnings) err << "warning: " << w << '\n';
  if (set.starts.empty()) throw UsageError("no usable start constellation");

  OptimizerConfig cfg;
  cfg.symmetry = sym;
  cfg.max_iters = s.max_iters;
  const MultiStartResult r = multi_start(set.starts, objective, cfg);
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';

  const fs::path csv = g.output.empty() ? fs::path("optimized.csv") : fs::path(g.output);
  fs::path trace_path = csv;
  trace_path.replace_extension(".trace.csv");

  ConstellationMeta meta;
  meta.size = s.m;
  meta.n_pairs = s.pairs;
  meta.design_snr_db = design_snr(objective.channel);
  meta.metric = s.metric;
  meta.kind = "optimized";
  meta.seed = g.seed;
  save_constellation(csv, r.best.constellation, meta);
  std::ostringstream trace;
  write_trace_csv(trace, r.best.trace);
  write_text(trace_path.string(), trace.str());

  ojson j;
  j["metric"] = s.metric;
  j["value"] = round6(r.best.value);
  j["start_value"] = round6(r.best.start_value);
  j["best_start"] = set.names[r.best_index];
  ojson per_start = ojson::array();
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    per_start.push_back({{"start", set.names[k]},
                         {"value", r.values[k] ? ojson(round6(*r.values[k])) : ojson(nullptr)}});
  }
  j["starts"] = per_start;
  j["iterations"] = r.best.trace.records.size();
  j["objective_evals"] = r.best.trace.n_objective_evals;
  j["constellation"] = csv.string();
  j["trace"] = trace_path.string();
  out << j.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  ShapeArgs shape;
  std::vector<std::size_t> m_list;
  std::vector<double> snr_list;
};

struct SweepCell {
  std::size_t M = 0;
  double snr_db = 0.0;
  double value = std::nan("");
  double gap = std::nan("");
  double wall = 0.0;
  bool ok = false;
  std::vector<std::string> warnings;
  std::optional<Constellation> best;
};

void run_cell(SweepCell& cell, const SweepArgs& a, const Globals& g) {
  const ShapeArgs& s = a.shape;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Symmetry sym = parse_symmetry(s.symmetry);
    ShapingObjective objective;
    objective.metric = parse_metric(s.metric);
    objective.channel = make_channel(cell.snr_db, s.fibre, s.pairs);
    objective.grid = GhqGrid(g.ghq_order, 2 * s.pairs);

    StartSet set = build_starts(s.starts, cell.M, s.pairs, g.seed, sym == Symmetry::Orthant);
    cell.warnings = set.warnings;
    if (set.starts.empty()) throw ParameterError("no usable start constellation");

    OptimizerConfig cfg;
    cfg.symmetry = sym;
    cfg.max_iters = s.max_iters;
    MultiStartResult r = multi_start(set.starts, objective, cfg);
    cell.warnings.insert(cell.warnings.end(), r.warnings.begin(), r.warnings.end());

    // Capacity at the SNR the constellation actually sees.
    double snr_eff = cell.snr_db;
    if (const auto* fm = std::get_if<FibreModel>(&objective.channel)) {
      snr_eff = snr_for_constellation(*fm, excess_kurtosis(r.best.constellation));
    }
    cell.value = r.best.value;
    cell.gap = s.pairs * capacity_2d(snr_eff) - r.best.value;
    cell.best = std::move(r.best.constellation);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.warnings.push_back(e.what());
  }
  cell.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_sweep(const SweepArgs& a, const Globals& g, std::ostream& out, std::ostream& err) {
  if (a.m_list.empty() || a.snr_list.empty()) throw UsageError("--m-list and --snr-list are required");
  for (std::size_t M : a.m_list) {
    if (!is_power_of_two(M)) throw UsageError("--m-list entries must be powers of two >= 2");
  }
  for (std::size_t k = 1; k < a.snr_list.size(); ++k) {
    if (!(a.snr_list[k] > a.snr_list[k - 1])) {
      throw UsageError("--snr-list must be strictly increasing");
    }
  }
  if (a.shape.fibre.snr_gaussian_db) {
    throw UsageError("sweep takes the Gaussian-signal SNR from --snr-list");
  }

  std::vector<SweepCell> cells;
  for (std::size_t M : a.m_list) {
    for (double snr : a.snr_list) {
      SweepCell c;
      c.M = M;
      c.snr_db = snr;
      cells.push_back(std::move(c));
    }
  }

  const std::size_t jobs =
      std::min(cells.size(), g.jobs > 0 ? g.jobs : std::max<std::size_t>(1, std::thread::hardware_concurrency()));
  const std::size_t saved_threads = thread_count();
  // Cells already run in parallel; keep each kernel single-threaded then.
  if (jobs > 1) set_thread_count(1);
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::size_t k = next++; k < cells.size(); k = next++) run_cell(cells[k], a, g);
      });
    }
  }
  set_thread_count(saved_threads);

  std::ostringstream table;
  table << "M,snr_db,metric_value,gap,wall_time_s\n";
  std::size_t n_ok = 0;
  for (const auto& c : cells) {
    for (const auto& w : c.warnings) {
      err << "warning: M=" << c.M << " snr_db=" << format_snr(c.snr_db) << ": " << w << '\n';
    }
    n_ok += c.ok ? 1 : 0;
    table << c.M << ',' << format_snr(c.snr_db) << ',' << fixed(c.value, 6) << ','
          << fixed(c.gap, 6) << ',' << fixed(c.wall, 3) << '\n';
  }

  if (g.output.empty()) {
    out << table.str();
  } else {
    const fs::path dir(g.output);
    fs::create_directories(dir);
    write_text((dir / "sweep.csv").string(), table.str());
    for (const auto& c : cells) {
      if (!c.best) continue;
      ConstellationMeta meta;
      meta.size = c.M;
      meta.n_pairs = a.shape.pairs;
      meta.design_snr_db = c.snr_db;
      meta.metric = a.shape.metric;
      meta.kind = "optimized";
      meta.seed = g.seed;
      save_constellation(dir / ("M" + std::to_string(c.M) + "_snr" + format_snr(c.snr_db) + ".csv"),
                         *c.best, meta);
    }
  }
  return n_ok > 0 ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------- gradcheck

struct GradcheckArgs {
  std::optional<std::string> constellation;
  std::size_t m = 16;
  int pairs = 1;
  double snr_db = 10.0;
  std::string metric = "gmi";
  double fd_step = 1e-5;
  double tolerance = 1e-6;
  FibreArgs fibre;
};

int cmd_gradcheck(const GradcheckArgs& a, bool custom_step, const Globals& g,
                  std::ostream& out, std::ostream& err) {
  Constellation c = [&] {
    if (a.constellation) return load_constellation(*a.constellation);
    GenerateOptions opt;
    opt.kind = StartKind::Gaussian;
    opt.size = a.m;
    opt.n_pairs = a.pairs;
    opt.seed = g.seed;
    return generate(opt);
  }();

  ShapingObjective objective;
  objective.metric = parse_metric(a.metric);
  objective.channel = make_channel(a.snr_db, a.fibre, c.n_pairs());
  objective.grid = GhqGrid(g.ghq_order, c.dims());

  const ObjectiveGradient og = objective(c);
  const auto fd = fd_gradient(
      [&](std::span<const double> x) {
        return objective.value(c.with_coords(std::vector<double>(x.begin(), x.end())));
      },
      c.coords(), a.fd_step);
  const double rel = relative_linf_error(og.grad, fd);
  const bool pass = rel < a.tolerance;

  ojson j;
  j["M"] = c.size();
  j["n_pairs"] = c.n_pairs();
  j["metric"] = a.metric;
  j["objective"] = a.fibre.c ? "nonlinear" : "awgn";
  j["snr_db"] = design_snr(objective.channel);
  j["value"] = round6(og.value);
  j["fd_step"] = a.fd_step;
  j["tolerance"] = a.tolerance;
  j["max_rel_err"] = rel;
  j["pass"] = pass;
  const std::string text = j.dump(2) + "\n";
  if (g.output.empty()) {
    out << text;
  } else {
    write_text(g.output, text);
  }

  if (pass) return kExitOk;
  if (custom_step) {
    err << "warning: max_rel_err " << rel << " exceeds " << a.tolerance
        << " with a custom --fd-step; reported as a diagnostic only\n";
    return kExitOk;
  }
  return kExitFailure;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geometric constellation shaping: generate, evaluate and optimize constellations",
               "gsc"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Seed for random starts");
  app.add_option("--ghq-order", g.ghq_order, "Gauss-Hermite nodes per dimension")
      ->check(CLI::Range(1, 200));
  app.add_option("--jobs", g.jobs, "Worker threads (default: CPU count)")
      ->check(CLI::PositiveNumber);
  app.add_option("-o,--output", g.output, "Output file (directory for sweep)");

  GenerateArgs gen_a;
  auto* gen = app.add_subcommand("generate", "Write a starting constellation");
  gen->add_option("--kind", gen_a.kind, "square, ring, lattice or gaussian")
      ->check(CLI::IsMember({"square", "ring", "lattice", "gaussian"}));
  gen->add_option("--m", gen_a.m, "Constellation size M")->required();
  gen->add_option("--pairs", gen_a.pairs, "Number of 2D pairs N")->check(CLI::Range(1, 4));
  gen->add_option("--label-basis", gen_a.basis, "cartesian or spherical")
      ->check(CLI::IsMember({"cartesian", "spherical"}));
  gen->add_option("--rings", gen_a.rings, "Ring count for --kind ring (0: default)")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--symmetry", gen_a.symmetry, "none or orthant")
      ->check(CLI::IsMember({"none", "orthant"}));

  EvaluateArgs ev_a;
  auto* ev = app.add_subcommand("evaluate", "MI/GMI report for a constellation (JSON)");
  ev->add_option("--constellation", ev_a.constellation, "Constellation CSV")->required();
  ev->add_option("--snr-db", ev_a.snr_db, "AWGN SNR in dB");
  ev->add_option("--metric", ev_a.metric, "mi or gmi")->check(CLI::IsMember({"mi", "gmi"}));
  add_fibre_options(ev, ev_a.fibre);

  OptimizeArgs op_a;
  auto* op = app.add_subcommand("optimize", "Multi-start trust-region shaping");
  op->add_option("--m", op_a.shape.m, "Constellation size M")->required();
  op->add_option("--snr-db", op_a.snr_db, "AWGN SNR in dB");
  op->add_option("--start-file", op_a.start_file, "Start from this constellation CSV");
  add_shape_options(op, op_a.shape);

  SweepArgs sw_a;
  auto* sw = app.add_subcommand("sweep", "Optimize every (M, SNR) cell; gap-to-capacity table");
  sw->add_option("--m-list", sw_a.m_list, "Comma-separated sizes")->delimiter(',')->required();
  sw->add_option("--snr-list", sw_a.snr_list, "Comma-separated SNRs in dB")
      ->delimiter(',')
      ->required();
  add_shape_options(sw, sw_a.shape);

  GradcheckArgs gc_a;
  auto* gc = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradient (JSON)");
  gc->add_option("--constellation", gc_a.constellation, "Constellation CSV (default: random)");
  gc->add_option("--m", gc_a.m, "Size of the random constellation");
  gc->add_option("--pairs", gc_a.pairs, "Pairs of the random constellation")
      ->check(CLI::Range(1, 4));
  gc->add_option("--snr-db", gc_a.snr_db, "AWGN SNR in dB");
  gc->add_option("--metric", gc_a.metric, "mi or gmi")->check(CLI::IsMember({"mi", "gmi"}));
  auto* fd_opt = gc->add_option("--fd-step", gc_a.fd_step, "Central-difference step")
                     ->check(CLI::PositiveNumber);
  gc->add_option("--tolerance", gc_a.tolerance, "Pass threshold on the relative error")
      ->check(CLI::PositiveNumber);
  add_fibre_options(gc, gc_a.fibre);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  const std::size_t saved_threads = thread_count();
  if (g.jobs > 0 && !sw->parsed()) set_thread_count(g.jobs);
  int code = kExitFailure;
  try {
    if (gen->parsed()) code = cmd_generate(gen_a, g, out);
    if (ev->parsed()) code = cmd_evaluate(ev_a, g, out);
    if (op->parsed()) code = cmd_optimize(op_a, g, out, err);
    if (sw->parsed()) code = cmd_sweep(sw_a, g, out, err);
    if (gc->parsed()) code = cmd_gradcheck(gc_a, fd_opt->count() > 0, g, out, err);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    code = kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    code = kExitFailure;
  }
  set_thread_count(saved_threads);
  return code;
}

}  // namespace gsc::cli
