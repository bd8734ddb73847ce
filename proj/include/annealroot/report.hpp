#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "annealroot/basin.hpp"

namespace annealroot {

namespace metric {
inline constexpr const char* kIterations = "iterations";
inline constexpr const char* kConvergencePct = "convergence_pct";
inline constexpr const char* kRelTime = "rel_time";
inline constexpr const char* kOrder = "order";
inline constexpr const char* kEntropy = "entropy";
}  // namespace metric

/// (metric, beta descriptor) -> value. Descriptors: "-1", "-0.5", "0", "0.5", "1", "anneal".
using ColumnKey = std::pair<std::string, std::string>;

struct TableRow {
  std::string function_id;
  /// Values rounded to printed precision (iterations 0.1, convergence 1,
  /// rel_time and order 0.01, entropy 0.0001).
  std::map<ColumnKey, double> columns;
  /// Same cells at full precision.
  std::map<ColumnKey, double> raw;

  std::optional<double> get(const std::string& metric, const std::string& beta) const;
};

enum class TableKind { Table1, Table2 };

/// Beta descriptors in column order for a table.
std::vector<std::string> beta_descriptors(TableKind kind);

/// Schedule for a descriptor ("anneal" or a fixed beta literal).
BetaSchedule schedule_for(const std::string& descriptor);

struct ReportOptions {
  SweepOptions sweep;
  /// Box size for the entropy column; skipped when it does not divide the grid.
  int entropy_box = 20;
};

/// Five fixed betas per function: iterations, convergence %, relative time.
std::vector<TableRow> build_table1(std::span<const ScalarProblem> problems,
                                   const GridSpec& grid, const IterationConfig& cfg,
                                   const ReportOptions& opts = {});
std::vector<TableRow> build_table1(const GridSpec& grid, const IterationConfig& cfg,
                                   const ReportOptions& opts = {});

/// beta = 0, beta = 1 and annealing, plus the convergence-order column.
/// The order cell is absent when no start converges in at least eight steps.
std::vector<TableRow> build_table2(std::span<const ScalarProblem> problems,
                                   const GridSpec& grid, const IterationConfig& cfg,
                                   const ReportOptions& opts = {});
std::vector<TableRow> build_table2(const GridSpec& grid, const IterationConfig& cfg,
                                   const ReportOptions& opts = {});

/// One line per (function, beta):
/// function,beta_mode,beta,mean_iterations,convergence_pct,rel_time,entropy,order
/// using the rounded columns; absent cells are empty fields.
std::string table_to_csv(const std::vector<TableRow>& rows);
/// Inverse of table_to_csv. Throws Error(MalformedInput) on bad input.
std::vector<TableRow> table_from_csv(const std::string& csv);

/// Full-precision cells.
nlohmann::json table_to_json(const std::vector<TableRow>& rows);

/// Aligned Markdown with tied best cells in bold.
std::string table_to_markdown(const std::vector<TableRow>& rows, TableKind kind);

/// Rounds to the printed precision of the metric.
double round_for_metric(const std::string& metric, double value);

}  // namespace annealroot
