#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "annealroot/grid.hpp"
#include "annealroot/iteration.hpp"

namespace annealroot {

/// Distinct roots discovered by a sweep, in first-seen order.
struct RootCatalog {
  std::vector<Complex> roots;
  double match_tol = 1e-6;

  /// Index of the root within match_tol of z, if any.
  std::optional<int> match(Complex z) const;
};

/// Residual bound an endpoint must satisfy before it may join the catalog.
inline constexpr double kCatalogResidual = 1e-10;

inline constexpr int kDivergent = -1;

struct BasinMap {
  GridSpec grid;
  std::vector<int> labels;       ///< root index, or kDivergent
  std::vector<int> iter_counts;  ///< completed steps per cell
  RootCatalog catalog;
  int max_iter = 50;

  int label(int i, int j) const { return labels[grid.index(i, j)]; }
  int iterations(int i, int j) const { return iter_counts[grid.index(i, j)]; }
};

struct SweepMetrics {
  double mean_iterations = 0.0;     ///< over converged cells only
  double convergence_pct = 0.0;
  double wall_time_per_point = 0.0; ///< seconds, converged cells only
  long total_points = 0;
  long converged = 0;
};

struct SweepOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  int jobs = 0;
  /// Record per-cell wall time of converged cells.
  bool timing = true;
};

/// Worker count from ANNEALROOT_JOBS, else hardware concurrency (at least 1).
int default_jobs();

/// Iterates every grid cell independently and labels it by final root.
///
/// Workers only record raw endpoints; the catalog is built afterwards by a
/// serial row-major pass (seeded with known_roots), so the result does not
/// depend on the worker count. A converged endpoint becomes a new catalog
/// entry only if |f| < kCatalogResidual and it lies more than 2 match_tol
/// from every existing root; converged endpoints that fail these tests keep
/// their iteration count but are labelled kDivergent.
std::pair<BasinMap, SweepMetrics> sweep(const ScalarProblem& p, const GridSpec& grid,
                                        const BetaSchedule& sched, const IterationConfig& cfg,
                                        const SweepOptions& opts = {});

/// Mean Gibbs entropy of outcome labels over non-overlapping box x box tiles.
/// kDivergent counts as its own outcome. Throws Error(IncompatibleCovering)
/// unless box divides both grid dimensions.
double basin_entropy(const BasinMap& map, int box = 20);

/// sweep + basin_entropy at beta = lo, lo + step, ... <= hi.
std::vector<std::pair<double, double>> entropy_beta_sweep(
    const ScalarProblem& p, const GridSpec& grid, const IterationConfig& cfg, double beta_lo,
    double beta_hi, double step, int box = 20, const SweepOptions& opts = {});

using Rgb = std::array<std::uint8_t, 3>;

/// n_roots distinct hues followed by the reserved divergent colour.
std::vector<Rgb> default_palette(std::size_t n_roots);

/// Binary P6 image. Cell colour is palette[label] scaled by
/// 1 - 0.75 * iterations / max_iter; divergent cells take palette.back() at
/// full brightness. Image rows run from im_max (top) to im_min.
/// Throws Error(InvalidArgument) if palette.size() < catalog size + 1.
std::string render_ppm(const BasinMap& map, const std::vector<Rgb>& palette);

/// Labels, counts and catalog as JSON (row-major arrays).
nlohmann::json basin_map_to_json(const BasinMap& map);

/// Spread (max pairwise distance) of the images under one extended step of
/// n_samples points on a circle of the given radius around a near-critical
/// point x_s. Samples that trip the derivative guard are dropped.
///
/// Throws Error(InvalidArgument) if |f'(x_s)| >= 1e-8, and
/// Error(DegenerateInput) ("all samples singular") if no sample survives.
double singularity_probe(const ScalarProblem& p, Complex x_s, double radius, int n_samples,
                         double beta = 0.0);

}  // namespace annealroot
