#include "annealroot/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "annealroot/convergence.hpp"
#include "annealroot/error.hpp"

namespace annealroot {

std::optional<double> TableRow::get(const std::string& metric, const std::string& beta) const {
  const auto it = columns.find({metric, beta});
  if (it == columns.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> beta_descriptors(TableKind kind) {
  if (kind == TableKind::Table1) return {"-1", "-0.5", "0", "0.5", "1"};
  return {"0", "1", "anneal"};
}

BetaSchedule schedule_for(const std::string& descriptor) {
  if (descriptor == "anneal") return BetaSchedule::annealing();
  try {
    std::size_t used = 0;
    const double beta = std::stod(descriptor, &used);
    if (used == descriptor.size()) return BetaSchedule::fixed(beta);
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::InvalidArgument, "bad beta descriptor '" + descriptor + "'");
}

double round_for_metric(const std::string& metric, double value) {
  double scale = 100.0;
  if (metric == metric::kIterations) scale = 10.0;
  if (metric == metric::kConvergencePct) scale = 1.0;
  if (metric == metric::kEntropy) scale = 1e4;
  return std::round(value * scale) / scale;
}

namespace {

void put(TableRow& row, const std::string& metric, const std::string& beta, double v) {
  row.raw[{metric, beta}] = v;
  row.columns[{metric, beta}] = round_for_metric(metric, v);
}

// Runs every descriptor for one problem; descriptor "0" is the time reference.
TableRow build_row(const ScalarProblem& p, const GridSpec& grid, const IterationConfig& cfg,
                   const ReportOptions& opts, TableKind kind) {
  TableRow row;
  row.function_id = p.id;
  const auto descs = beta_descriptors(kind);
  const bool entropy_ok =
      opts.entropy_box >= 1 && grid.nx % opts.entropy_box == 0 && grid.ny % opts.entropy_box == 0;

  std::map<std::string, double> times;
  for (const auto& d : descs) {
    const BetaSchedule sched = schedule_for(d);
    const auto [map, m] = sweep(p, grid, sched, cfg, opts.sweep);
    if (m.converged > 0) put(row, metric::kIterations, d, m.mean_iterations);
    put(row, metric::kConvergencePct, d, m.convergence_pct);
    if (entropy_ok) put(row, metric::kEntropy, d, basin_entropy(map, opts.entropy_box));
    times[d] = m.wall_time_per_point;

    if (kind == TableKind::Table2) {
      if (const auto sample = order_from_grid(p, grid, sched, cfg); sample && sample->estimate.valid) {
        put(row, metric::kOrder, d, sample->estimate.q_final);
      }
    }
  }

  const double ref = times["0"];
  for (const auto& d : descs) {
    if (d == "0") {
      put(row, metric::kRelTime, d, 1.0);
    } else if (ref > 0.0 && times[d] > 0.0) {
      put(row, metric::kRelTime, d, times[d] / ref);
    }
  }
  return row;
}

std::vector<TableRow> build_table(std::span<const ScalarProblem> problems, const GridSpec& grid,
                                  const IterationConfig& cfg, const ReportOptions& opts,
                                  TableKind kind) {
  grid.validate();
  cfg.validate();
  std::vector<TableRow> rows;
  rows.reserve(problems.size());
  for (const auto& p : problems) rows.push_back(build_row(p, grid, cfg, opts, kind));
  return rows;
}

const char* kCsvHeader =
    "function,beta_mode,beta,mean_iterations,convergence_pct,rel_time,entropy,order";

const std::vector<std::string>& csv_metrics() {
  static const std::vector<std::string> m = {metric::kIterations, metric::kConvergencePct,
                                             metric::kRelTime, metric::kEntropy, metric::kOrder};
  return m;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// Descriptors in the order they appear in a row's columns, beta ascending, "anneal" last.
std::vector<std::string> row_descriptors(const TableRow& row) {
  std::vector<std::string> descs;
  for (const auto& [key, v] : row.columns) {
    if (std::find(descs.begin(), descs.end(), key.second) == descs.end()) {
      descs.push_back(key.second);
    }
  }
  std::sort(descs.begin(), descs.end(), [](const std::string& a, const std::string& b) {
    if (a == "anneal" || b == "anneal") return b == "anneal" && a != "anneal";
    return std::stod(a) < std::stod(b);
  });
  return descs;
}

}  // namespace

std::vector<TableRow> build_table1(std::span<const ScalarProblem> problems,
                                   const GridSpec& grid, const IterationConfig& cfg,
                                   const ReportOptions& opts) {
  return build_table(problems, grid, cfg, opts, TableKind::Table1);
}

std::vector<TableRow> build_table1(const GridSpec& grid, const IterationConfig& cfg,
                                   const ReportOptions& opts) {
  return build_table1(list_problems(), grid, cfg, opts);
}

std::vector<TableRow> build_table2(std::span<const ScalarProblem> problems,
                                   const GridSpec& grid, const IterationConfig& cfg,
                                   const ReportOptions& opts) {
  return build_table(problems, grid, cfg, opts, TableKind::Table2);
}

std::vector<TableRow> build_table2(const GridSpec& grid, const IterationConfig& cfg,
                                   const ReportOptions& opts) {
  return build_table2(list_problems(), grid, cfg, opts);
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& row : rows) {
    for (const auto& d : row_descriptors(row)) {
      const bool anneal = d == "anneal";
      out << row.function_id << ',' << (anneal ? "anneal" : "fixed") << ','
          << (anneal ? "" : d);
      for (const auto& m : csv_metrics()) {
        out << ',';
        if (const auto v = row.get(m, d)) out << format_number(*v);
      }
      out << '\n';
    }
  }
  return out.str();
}

std::vector<TableRow> table_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::MalformedInput, "unexpected table CSV header");
  }
  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3 + csv_metrics().size()) {
      throw Error(ErrorCode::MalformedInput, "table CSV row has wrong field count");
    }
    std::string desc;
    if (f[1] == "anneal") {
      desc = "anneal";
    } else if (f[1] == "fixed") {
      desc = f[2];
    } else {
      throw Error(ErrorCode::MalformedInput, "beta_mode must be fixed or anneal");
    }
    if (rows.empty() || rows.back().function_id != f[0]) {
      rows.push_back({});
      rows.back().function_id = f[0];
    }
    for (std::size_t k = 0; k < csv_metrics().size(); ++k) {
      const std::string& cell = f[3 + k];
      if (cell.empty()) continue;
      try {
        rows.back().columns[{csv_metrics()[k], desc}] = std::stod(cell);
      } catch (const std::logic_error&) {
        throw Error(ErrorCode::MalformedInput, "non-numeric table CSV cell '" + cell + "'");
      }
    }
  }
  return rows;
}

nlohmann::json table_to_json(const std::vector<TableRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json cells = nlohmann::json::object();
    for (const auto& [key, v] : row.raw) cells[key.first][key.second] = v;
    out.push_back({{"function", row.function_id}, {"metrics", std::move(cells)}});
  }
  return out;
}

std::string table_to_markdown(const std::vector<TableRow>& rows, TableKind kind) {
  struct Block {
    const char* metric;
    const char* title;
    const char* fmt;
    bool higher_is_better;
  };
  std::vector<Block> blocks = {
      {metric::kIterations, "Iterations", "%.1f", false},
      {metric::kConvergencePct, "Conv. %", "%.0f", true},
      {metric::kRelTime, "Rel. time", "%.2f", false},
  };
  if (kind == TableKind::Table2) blocks.push_back({metric::kOrder, "Order", "%.2f", true});
  const auto descs = beta_descriptors(kind);

  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{"Function"};
  for (const auto& b : blocks) {
    for (const auto& d : descs) header.push_back(std::string(b.title) + " " + d);
  }
  grid.push_back(header);

  for (const auto& row : rows) {
    std::vector<std::string> line{row.function_id};
    for (const auto& b : blocks) {
      std::optional<double> best;
      for (const auto& d : descs) {
        if (const auto v = row.get(b.metric, d)) {
          if (!best || (b.higher_is_better ? *v > *best : *v < *best)) best = v;
        }
      }
      for (const auto& d : descs) {
        const auto v = row.get(b.metric, d);
        if (!v) {
          line.push_back("-");
          continue;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, b.fmt, *v);
        line.push_back(*v == *best ? "**" + std::string(buf) + "**" : std::string(buf));
      }
    }
    grid.push_back(line);
  }

  std::vector<std::size_t> width(header.size(), 3);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& line) {
    out << '|';
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << ' ' << line[c] << std::string(width[c] - line[c].size(), ' ') << " |";
    }
    out << '\n';
  };
  emit(grid[0]);
  out << '|';
  for (std::size_t c = 0; c < width.size(); ++c) {
    out << (c == 0 ? ":" : "") << std::string(width[c] + (c == 0 ? 1 : 1), '-')
        << (c == 0 ? "" : ":") << '|';
  }
  out << '\n';
  for (std::size_t r = 1; r < grid.size(); ++r) emit(grid[r]);
  return out.str();
}

}  // namespace annealroot
