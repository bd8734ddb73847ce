#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <span>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "annealroot/basin.hpp"
#include "annealroot/convergence.hpp"
#include "annealroot/error.hpp"
#include "annealroot/kuramoto.hpp"
#include "annealroot/report.hpp"

namespace annealroot::cli {
namespace {

/// Command-line misuse that is not a library error.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kSubcommands = {"table1",  "table2",   "fractal",  "entropy",
                                               "order",   "cuberoot", "kuramoto", "manifest"};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string default_format(const std::string& sub) {
  if (sub == "fractal") return "ppm";
  if (sub == "cuberoot") return "md";
  if (sub == "kuramoto" || sub == "manifest") return "json";
  return "csv";
}

std::vector<std::string> allowed_formats(const std::string& sub) {
  if (sub == "table1" || sub == "table2") return {"csv", "json", "md"};
  if (sub == "fractal") return {"ppm", "json"};
  if (sub == "entropy" || sub == "order") return {"csv", "json"};
  if (sub == "cuberoot") return {"md", "json"};
  return {"json"};
}

GridSpec grid_of(const CliConfig& cfg) {
  GridSpec g;
  g.nx = cfg.nx;
  g.ny = cfg.ny;
  g.validate();
  return g;
}

IterationConfig scalar_config(const CliConfig& cfg) {
  IterationConfig ic;
  ic.epsilon = cfg.eps.value_or(1e-14);
  ic.max_iter = cfg.max_iter;
  ic.validate();
  return ic;
}

SweepOptions sweep_options(const CliConfig& cfg) {
  SweepOptions so;
  so.jobs = cfg.jobs.value_or(default_jobs());
  return so;
}

/// The single schedule a subcommand runs with; nullopt when none was requested
/// and `required` is false.
std::optional<BetaSchedule> schedule_of(const CliConfig& cfg, bool required) {
  if (cfg.schedule == "anneal") {
    if (cfg.beta) throw UsageError("--beta cannot be combined with --schedule anneal");
    return BetaSchedule::annealing();
  }
  if (cfg.schedule != "fixed") throw UsageError("--schedule must be fixed or anneal");
  if (!cfg.beta) {
    if (required) throw UsageError("--beta is required with --schedule fixed");
    return std::nullopt;
  }
  return BetaSchedule::fixed(*cfg.beta);
}

std::string descriptor_of(const BetaSchedule& s) {
  return s.is_annealing() ? std::string("anneal") : fmt("%.17g", s.beta());
}

std::vector<ScalarProblem> problems_of(const CliConfig& cfg) {
  if (cfg.function_id) return {find_problem(*cfg.function_id)};
  return list_problems();
}

const ScalarProblem& required_problem(const CliConfig& cfg) {
  if (!cfg.function_id) throw UsageError("--function is required");
  return find_problem(*cfg.function_id);
}

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

std::string do_table(const CliConfig& cfg, const std::string& format) {
  const auto problems = problems_of(cfg);
  ReportOptions ro;
  ro.sweep = sweep_options(cfg);
  ro.entropy_box = cfg.box;
  const TableKind kind = cfg.subcommand == "table1" ? TableKind::Table1 : TableKind::Table2;
  const auto rows = kind == TableKind::Table1
                        ? build_table1(problems, grid_of(cfg), scalar_config(cfg), ro)
                        : build_table2(problems, grid_of(cfg), scalar_config(cfg), ro);
  if (format == "json") return table_to_json(rows).dump(2) + "\n";
  if (format == "md") return table_to_markdown(rows, kind);
  return table_to_csv(rows);
}

std::string do_fractal(const CliConfig& cfg, const std::string& format) {
  const ScalarProblem& p = required_problem(cfg);
  const BetaSchedule sched = *schedule_of(cfg, true);
  SweepOptions so = sweep_options(cfg);
  so.timing = false;
  const auto [map, metrics] = sweep(p, grid_of(cfg), sched, scalar_config(cfg), so);
  if (format == "json") {
    nlohmann::json j = basin_map_to_json(map);
    j["function"] = p.id;
    j["beta"] = descriptor_of(sched);
    return j.dump() + "\n";
  }
  return render_ppm(map, default_palette(map.catalog.roots.size()));
}

std::string do_entropy(const CliConfig& cfg, const std::string& format) {
  const ScalarProblem& p = required_problem(cfg);
  const GridSpec grid = grid_of(cfg);
  if (cfg.box < 1 || grid.nx % cfg.box != 0 || grid.ny % cfg.box != 0) {
    throw Error(ErrorCode::IncompatibleCovering,
                "box size " + std::to_string(cfg.box) + " does not divide the grid");
  }
  const IterationConfig ic = scalar_config(cfg);
  SweepOptions so = sweep_options(cfg);
  so.timing = false;

  std::vector<std::pair<std::string, double>> points;
  if (cfg.beta_sweep) {
    if (cfg.beta || cfg.schedule != "fixed") {
      throw UsageError("--beta-sweep cannot be combined with --beta or --schedule anneal");
    }
    const auto [lo, hi, step] = *cfg.beta_sweep;
    for (const auto& [b, s] : entropy_beta_sweep(p, grid, ic, lo, hi, step, cfg.box, so)) {
      points.emplace_back(fmt("%.17g", b), s);
    }
  } else {
    const BetaSchedule sched = *schedule_of(cfg, true);
    const auto [map, metrics] = sweep(p, grid, sched, ic, so);
    points.emplace_back(descriptor_of(sched), basin_entropy(map, cfg.box));
  }

  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [b, s] : points) arr.push_back({{"beta", b}, {"entropy", s}});
    return nlohmann::json({{"function", p.id}, {"box", cfg.box}, {"points", arr}}).dump(2) + "\n";
  }
  std::string out = "function,beta,entropy\n";
  for (const auto& [b, s] : points) out += p.id + "," + b + "," + fmt("%.17g", s) + "\n";
  return out;
}

std::string do_order(const CliConfig& cfg, const std::string& format) {
  const auto problems = problems_of(cfg);
  std::vector<BetaSchedule> schedules;
  if (auto s = schedule_of(cfg, false)) {
    schedules.push_back(*s);
  } else {
    schedules = {BetaSchedule::fixed(0.0), BetaSchedule::fixed(1.0), BetaSchedule::annealing()};
  }
  const GridSpec grid = grid_of(cfg);
  const IterationConfig ic = scalar_config(cfg);

  std::string csv = "function,beta_mode,beta,q_final,valid\n";
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : problems) {
    for (const auto& s : schedules) {
      const auto sample = order_from_grid(p, grid, s, ic);
      const bool valid = sample && sample->estimate.valid;
      const std::string mode = s.is_annealing() ? "anneal" : "fixed";
      const std::string beta = s.is_annealing() ? "" : fmt("%.17g", s.beta());
      csv += p.id + "," + mode + "," + beta + "," +
             (valid ? fmt("%.17g", sample->estimate.q_final) : "") + "," +
             (valid ? "true" : "false") + "\n";
      nlohmann::json row = {{"function", p.id}, {"beta_mode", mode}, {"valid", valid}};
      if (!s.is_annealing()) row["beta"] = s.beta();
      if (valid) {
        row["q_final"] = sample->estimate.q_final;
        row["start"] = complex_json(sample->start);
        row["iterations"] = sample->outcome.iterations;
      }
      arr.push_back(std::move(row));
    }
  }
  return format == "json" ? arr.dump(2) + "\n" : csv;
}

std::string do_cuberoot(const std::string& format) {
  const CubeRootWindow w = cube_root_window();
  const ScalarProblem p = cube_root_problem();
  const std::vector<double> betas = {0.0, 0.25, w.lower, 0.3, 0.5, w.beta_min, 0.6, 0.75,
                                     w.upper, 0.9, 1.0};
  const double x0 = 1.0;

  struct Line {
    double beta, predicted, measured;
    std::string regime;
  };
  std::vector<Line> lines;
  for (double b : betas) {
    const auto step = extended_step(p, Complex(x0, 0.0), b);
    const double measured = step ? std::abs(step->next.real() / x0) : std::nan("");
    std::string regime = w.converges(b) ? "contracting" : "diverging";
    if (b == w.beta_min) regime = "root in one step";
    if (b == w.lower || b == w.upper) regime = "boundary";
    lines.push_back({b, CubeRootWindow::contraction(b), measured, regime});
  }

  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& l : lines) {
      arr.push_back({{"beta", l.beta},
                     {"predicted", l.predicted},
                     {"measured", l.measured},
                     {"regime", l.regime}});
    }
    return nlohmann::json({{"lower", w.lower},
                           {"upper", w.upper},
                           {"beta_min", w.beta_min},
                           {"contraction", arr}})
               .dump(2) +
           "\n";
  }
  std::ostringstream out;
  out << "window: (" << fmt("%.5f", w.lower) << ", " << fmt("%.5f", w.upper) << ")\n"
      << "beta_min: " << fmt("%.5f", w.beta_min) << "\n\n"
      << "| beta     | predicted |x1/x0| | measured |x1/x0| | regime           |\n"
      << "|---------:|-----------------:|----------------:|:-----------------|\n";
  for (const auto& l : lines) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "| %8.5f | %16.12f | %15.12f | %-16s |\n", l.beta,
                  l.predicted, l.measured, l.regime.c_str());
    out << buf;
  }
  return out.str();
}

std::string do_kuramoto(const CliConfig& cfg) {
  KuramotoSystem sys;
  if (cfg.input_path && cfg.random_rotors) {
    throw UsageError("--input and --random are mutually exclusive");
  }
  if (cfg.input_path) {
    if (cfg.seed) throw UsageError("--seed only applies to --random systems");
    std::ifstream in(*cfg.input_path);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + *cfg.input_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::MalformedInput, std::string("kuramoto JSON: ") + e.what());
    }
    sys = kuramoto_from_json(j);
  } else if (cfg.random_rotors) {
    sys = random_kuramoto_system(*cfg.random_rotors, cfg.seed.value_or(0), cfg.kappa);
  } else {
    throw UsageError("kuramoto needs --input FILE or --random N");
  }

  const BetaSchedule sched = cfg.schedule == "anneal"
                                 ? *schedule_of(cfg, true)
                                 : BetaSchedule::fixed(cfg.beta.value_or(0.0));
  IterationConfig ic = default_vector_config();
  if (cfg.eps) ic.epsilon = *cfg.eps;
  ic.max_iter = cfg.max_iter;
  if (cfg.restarts < 0) throw UsageError("--restarts must be non-negative");
  const SyncSolution sol =
      solve_sync_with_restarts(sys, sched, ic, cfg.restarts, cfg.seed.value_or(0));

  nlohmann::json j = sync_solution_to_json(sol);
  j["system"] = kuramoto_to_json(sys);
  j["sync_variance"] = sync_variance(sys, sol);
  return j.dump(2) + "\n";
}

std::string do_manifest() {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : list_problems()) {
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& r : p.known_roots) roots.push_back(complex_json(r));
    arr.push_back({{"id", p.id}, {"formula", p.display}, {"known_roots", roots}});
  }
  return nlohmann::json({{"functions", arr}}).dump(2) + "\n";
}

std::string produce(const CliConfig& cfg, const std::string& format) {
  const std::string& sub = cfg.subcommand;
  if (cfg.seed && sub != "kuramoto") throw UsageError("--seed only applies to kuramoto");
  if (sub == "table1" || sub == "table2") return do_table(cfg, format);
  if (sub == "fractal") return do_fractal(cfg, format);
  if (sub == "entropy") return do_entropy(cfg, format);
  if (sub == "order") return do_order(cfg, format);
  if (sub == "cuberoot") return do_cuberoot(format);
  if (sub == "kuramoto") return do_kuramoto(cfg);
  if (sub == "manifest") return do_manifest();
  throw UsageError("unknown subcommand '" + sub + "'");
}

/// Writes next to the destination and renames, so a failure leaves no partial file.
void write_atomically(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path dest(path);
  fs::path tmp = dest;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.close();
    if (!f) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error(ErrorCode::Io, "write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, dest, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot create " + dest.string());
  }
}

void parse_grid(const std::string& text, CliConfig& cfg) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const int nx = std::stoi(text.substr(0, x), &a);
    const int ny = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1) throw std::invalid_argument(text);
    cfg.nx = nx;
    cfg.ny = ny;
  } catch (const std::logic_error&) {
    throw UsageError("--grid expects NxM, got '" + text + "'");
  }
}

void parse_beta_sweep(const std::string& text, CliConfig& cfg) {
  std::array<double, 3> v{};
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ':' || c2 != ':' || !in.eof()) {
    throw UsageError("--beta-sweep expects LO:HI:STEP, got '" + text + "'");
  }
  cfg.beta_sweep = v;
}

/// Fills settings absent from the command line with values from a JSON object.
void apply_config_file(const std::string& path, CliConfig& cfg, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::MalformedInput, "config file must hold an object");

  auto unset = [&](const char* flag) { return app.count(flag) == 0; };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "function") {
        if (unset("--function")) cfg.function_id = v.get<std::string>();
      } else if (key == "beta") {
        if (unset("--beta")) cfg.beta = v.get<double>();
      } else if (key == "schedule") {
        if (unset("--schedule")) cfg.schedule = v.get<std::string>();
      } else if (key == "grid") {
        if (unset("--grid")) parse_grid(v.get<std::string>(), cfg);
      } else if (key == "eps") {
        if (unset("--eps")) cfg.eps = v.get<double>();
      } else if (key == "max_iter") {
        if (unset("--max-iter")) cfg.max_iter = v.get<int>();
      } else if (key == "out") {
        if (unset("--out")) cfg.out_path = v.get<std::string>();
      } else if (key == "format") {
        if (unset("--format")) cfg.format = v.get<std::string>();
      } else if (key == "seed") {
        if (unset("--seed")) cfg.seed = v.get<std::uint64_t>();
      } else if (key == "jobs") {
        if (unset("--jobs")) cfg.jobs = v.get<int>();
      } else if (key == "box") {
        if (unset("--box")) cfg.box = v.get<int>();
      } else if (key == "kappa") {
        if (unset("--kappa")) cfg.kappa = v.get<double>();
      } else if (key == "restarts") {
        if (unset("--restarts")) cfg.restarts = v.get<int>();
      } else if (key == "input") {
        if (unset("--input")) cfg.input_path = v.get<std::string>();
      } else if (key == "random") {
        if (unset("--random")) cfg.random_rotors = v.get<int>();
      } else {
        throw Error(ErrorCode::MalformedInput, "unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedInput, std::string("config file: ") + e.what());
  }
}

int code_of(ErrorCode c) { return static_cast<int>(c); }

const char* kExitCodeHelp =
    "Exit codes:\n"
    "  0  success\n"
    "  1  invalid argument value\n"
    "  2  command-line usage error\n"
    "  3  unknown function id\n"
    "  4  malformed input (Kuramoto JSON, config file)\n"
    "  5  entropy box size does not divide the grid\n"
    "  6  singular Jacobian\n"
    "  7  degenerate input\n"
    "  8  I/O failure\n"
    "  9  internal error\n"
    "Environment: ANNEALROOT_JOBS overrides the default worker count.";

}  // namespace

int run(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const std::string format = cfg.format.value_or(default_format(cfg.subcommand));
    if (std::find(kSubcommands.begin(), kSubcommands.end(), cfg.subcommand) ==
        kSubcommands.end()) {
      throw UsageError("unknown subcommand '" + cfg.subcommand + "'");
    }
    const auto allowed = allowed_formats(cfg.subcommand);
    if (std::find(allowed.begin(), allowed.end(), format) == allowed.end()) {
      throw UsageError("format '" + format + "' is not available for " + cfg.subcommand);
    }
    if (cfg.jobs && *cfg.jobs < 1) throw UsageError("--jobs must be at least 1");

    const std::string bytes = produce(cfg, format);
    if (cfg.out_path) {
      write_atomically(*cfg.out_path, bytes);
    } else {
      out << bytes;
      out.flush();
    }
    return kOk;
  } catch (const UsageError& e) {
    err << "annealroot: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "annealroot: " << e.what() << "\n";
    return code_of(e.code());
  } catch (const std::exception& e) {
    err << "annealroot: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Extended Newton-Raphson root finding: basins, orders and synchronization",
               "annealroot"};
  app.footer(kExitCodeHelp);
  app.require_subcommand(1);
  app.fallthrough();

  CliConfig cfg;
  std::string grid_text, sweep_text, config_path;
  std::uint64_t seed = 0;
  int jobs = 0, random_n = 0;
  double beta = 0.0, eps = 0.0;
  std::string function, out_path, format, input;

  app.add_option("--function", function, "Function id f1..f14");
  app.add_option("--beta", beta, "Fixed beta");
  app.add_option("--schedule", cfg.schedule, "fixed or anneal")->check(CLI::IsMember({"fixed", "anneal"}));
  app.add_option("--grid", grid_text, "Grid size NxM (default 1000x1000)");
  app.add_option("--eps", eps, "Displacement stopping threshold");
  app.add_option("--max-iter", cfg.max_iter, "Iteration cap (default 50)");
  app.add_option("--out", out_path, "Output file (default stdout)");
  app.add_option("--format", format, "csv, json, ppm or md")
      ->check(CLI::IsMember({"csv", "json", "ppm", "md"}));
  app.add_option("--seed", seed, "Seed for random Kuramoto systems");
  app.add_option("--jobs", jobs, "Worker threads (default: ANNEALROOT_JOBS or all cores)");
  app.add_option("--box", cfg.box, "Entropy box size (default 20)");
  app.add_option("--beta-sweep", sweep_text, "entropy: LO:HI:STEP");
  app.add_option("--input", input, "kuramoto: system JSON file");
  app.add_option("--random", random_n, "kuramoto: random system with N rotors");
  app.add_option("--kappa", cfg.kappa, "kuramoto: coupling for random systems");
  app.add_option("--restarts", cfg.restarts, "kuramoto: seeded restarts after phi0 = 0");
  app.add_option("--config", config_path, "JSON file of defaults; flags take precedence");

  app.add_subcommand("table1", "Iterations, convergence and time for five fixed betas");
  app.add_subcommand("table2", "Newton, beta = 1 and annealing, with convergence order");
  app.add_subcommand("fractal", "Basin map as PPM image or JSON labels");
  app.add_subcommand("entropy", "Basin entropy at one beta or over a beta sweep");
  app.add_subcommand("order", "Computational order of convergence per function and beta");
  app.add_subcommand("cuberoot", "Convergence window of f(x) = x^(1/3)");
  app.add_subcommand("kuramoto", "Phase-locked state of a Kuramoto network");
  app.add_subcommand("manifest", "JSON listing of the registered functions");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "annealroot: " << e.what() << "\n";
    return kUsage;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (app.count("--function")) cfg.function_id = function;
    if (app.count("--beta")) cfg.beta = beta;
    if (app.count("--grid")) parse_grid(grid_text, cfg);
    if (app.count("--eps")) cfg.eps = eps;
    if (app.count("--out")) cfg.out_path = out_path;
    if (app.count("--format")) cfg.format = format;
    if (app.count("--seed")) cfg.seed = seed;
    if (app.count("--jobs")) cfg.jobs = jobs;
    if (app.count("--beta-sweep")) parse_beta_sweep(sweep_text, cfg);
    if (app.count("--input")) cfg.input_path = input;
    if (app.count("--random")) cfg.random_rotors = random_n;
    if (app.count("--config")) apply_config_file(config_path, cfg, app);
  } catch (const UsageError& e) {
    err << "annealroot: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "annealroot: " << e.what() << "\n";
    return code_of(e.code());
  }
  return run(cfg, out, err);
}

}  // namespace annealroot::cli
