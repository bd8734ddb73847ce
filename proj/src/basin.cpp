#include "annealroot/basin.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

#include "annealroot/error.hpp"

namespace annealroot {

void GridSpec::validate() const {
  if (!(re_min < re_max) || !(im_min < im_max)) {
    throw Error(ErrorCode::InvalidArgument, "grid bounds must satisfy min < max");
  }
  if (nx < 1 || ny < 1) throw Error(ErrorCode::InvalidArgument, "grid dims must be >= 1");
}

std::optional<int> RootCatalog::match(Complex z) const {
  std::optional<int> best;
  double best_d = match_tol;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double d = std::abs(z - roots[k]);
    if (d <= best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

int default_jobs() {
  if (const char* env = std::getenv("ANNEALROOT_JOBS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct CellResult {
  Complex end;
  Status status;
  int iterations;
  double seconds;
};

void run_rows(const ScalarProblem& p, const GridSpec& grid, const BetaSchedule& sched,
              const IterationConfig& cfg, bool timing, int row_begin, int row_end,
              std::vector<CellResult>& cells) {
  using Clock = std::chrono::steady_clock;
  for (int j = row_begin; j < row_end; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const auto t0 = timing ? Clock::now() : Clock::time_point{};
      const IterationOutcome o = iterate(p, grid.point(i, j), sched, cfg);
      double secs = 0.0;
      if (timing) secs = std::chrono::duration<double>(Clock::now() - t0).count();
      cells[grid.index(i, j)] = {o.final, o.status, o.iterations, secs};
    }
  }
}

}  // namespace

std::pair<BasinMap, SweepMetrics> sweep(const ScalarProblem& p, const GridSpec& grid,
                                        const BetaSchedule& sched, const IterationConfig& cfg,
                                        const SweepOptions& opts) {
  grid.validate();
  IterationConfig run_cfg = cfg;
  run_cfg.validate();
  run_cfg.trace = false;

  std::vector<CellResult> cells(grid.size());
  const int jobs = std::clamp(opts.jobs > 0 ? opts.jobs : default_jobs(), 1, grid.ny);
  if (jobs == 1) {
    run_rows(p, grid, sched, run_cfg, opts.timing, 0, grid.ny, cells);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
      const int begin = static_cast<int>(static_cast<long>(grid.ny) * w / jobs);
      const int end = static_cast<int>(static_cast<long>(grid.ny) * (w + 1) / jobs);
      workers.emplace_back([&, begin, end] {
        run_rows(p, grid, sched, run_cfg, opts.timing, begin, end, cells);
      });
    }
  }

  BasinMap map;
  map.grid = grid;
  map.max_iter = run_cfg.max_iter;
  map.catalog.roots = p.known_roots;
  map.labels.assign(grid.size(), kDivergent);
  map.iter_counts.resize(grid.size());

  SweepMetrics m;
  m.total_points = static_cast<long>(grid.size());
  double iter_sum = 0.0;
  double time_sum = 0.0;
  const double tol = map.catalog.match_tol;

  for (std::size_t k = 0; k < cells.size(); ++k) {
    const CellResult& c = cells[k];
    map.iter_counts[k] = c.iterations;
    if (c.status != Status::Converged) continue;

    ++m.converged;
    iter_sum += c.iterations;
    time_sum += c.seconds;

    if (const auto hit = map.catalog.match(c.end)) {
      map.labels[k] = *hit;
      continue;
    }
    const bool isolated = std::all_of(
        map.catalog.roots.begin(), map.catalog.roots.end(),
        [&](Complex r) { return std::abs(c.end - r) > 2.0 * tol; });
    if (isolated && std::abs(p.eval(c.end)) < kCatalogResidual) {
      map.labels[k] = static_cast<int>(map.catalog.roots.size());
      map.catalog.roots.push_back(c.end);
    }
  }

  if (m.converged > 0) {
    m.mean_iterations = iter_sum / static_cast<double>(m.converged);
    m.wall_time_per_point = time_sum / static_cast<double>(m.converged);
  }
  m.convergence_pct = 100.0 * static_cast<double>(m.converged) / m.total_points;
  return {std::move(map), m};
}

double basin_entropy(const BasinMap& map, int box) {
  const GridSpec& g = map.grid;
  if (box < 1 || g.nx % box != 0 || g.ny % box != 0) {
    throw Error(ErrorCode::IncompatibleCovering,
                "incompatible covering: box " + std::to_string(box) +
                    " does not divide grid " + std::to_string(g.nx) + "x" +
                    std::to_string(g.ny));
  }
  const double cells = static_cast<double>(box) * box;
  std::vector<std::pair<int, int>> counts;
  double total = 0.0;
  long tiles = 0;
  for (int tj = 0; tj < g.ny; tj += box) {
    for (int ti = 0; ti < g.nx; ti += box) {
      counts.clear();
      for (int j = tj; j < tj + box; ++j) {
        for (int i = ti; i < ti + box; ++i) {
          const int l = map.label(i, j);
          auto it = std::find_if(counts.begin(), counts.end(),
                                 [l](const auto& c) { return c.first == l; });
          if (it == counts.end()) {
            counts.emplace_back(l, 1);
          } else {
            ++it->second;
          }
        }
      }
      double s = 0.0;
      for (const auto& [label, n] : counts) {
        const double prob = n / cells;
        s -= prob * std::log(prob);
      }
      total += s;
      ++tiles;
    }
  }
  return total / static_cast<double>(tiles);
}

std::vector<std::pair<double, double>> entropy_beta_sweep(
    const ScalarProblem& p, const GridSpec& grid, const IterationConfig& cfg, double beta_lo,
    double beta_hi, double step, int box, const SweepOptions& opts) {
  if (!(beta_lo <= beta_hi)) throw Error(ErrorCode::InvalidArgument, "beta_lo > beta_hi");
  if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "step must be > 0");
  // Check the covering before spending time on sweeps.
  if (box < 1 || grid.nx % box != 0 || grid.ny % box != 0) {
    BasinMap probe;
    probe.grid = grid;
    (void)basin_entropy(probe, box);
  }
  const long count = static_cast<long>(std::floor((beta_hi - beta_lo) / step + 1e-9)) + 1;
  std::vector<std::pair<double, double>> curve;
  curve.reserve(count);
  SweepOptions quiet = opts;
  quiet.timing = false;
  for (long k = 0; k < count; ++k) {
    const double beta = beta_lo + static_cast<double>(k) * step;
    const auto [map, metrics] = sweep(p, grid, BetaSchedule::fixed(beta), cfg, quiet);
    curve.emplace_back(beta, basin_entropy(map, box));
  }
  return curve;
}

namespace {

Rgb hsv(double h, double s, double v) {
  const double c = v * s;
  const double hp = std::fmod(h, 360.0) / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) {
    r = c, g = x;
  } else if (hp < 2) {
    r = x, g = c;
  } else if (hp < 3) {
    g = c, b = x;
  } else if (hp < 4) {
    g = x, b = c;
  } else if (hp < 5) {
    r = x, b = c;
  } else {
    r = c, b = x;
  }
  const double m = v - c;
  auto to8 = [m](double t) { return static_cast<std::uint8_t>(std::lround((t + m) * 255.0)); };
  return {to8(r), to8(g), to8(b)};
}

}  // namespace

std::vector<Rgb> default_palette(std::size_t n_roots) {
  static const std::vector<Rgb> base = {
      {230, 57, 70},  {42, 157, 143}, {69, 123, 157}, {244, 162, 97},
      {131, 56, 236}, {255, 209, 102}, {6, 214, 160}, {239, 71, 209},
  };
  std::vector<Rgb> out;
  out.reserve(n_roots + 1);
  for (std::size_t k = 0; k < n_roots; ++k) {
    if (k < base.size()) {
      out.push_back(base[k]);
    } else {
      // Golden-angle hue walk for large catalogs.
      out.push_back(hsv(137.50776405 * static_cast<double>(k), 0.65, 0.95));
    }
  }
  out.push_back({0, 0, 0});
  return out;
}

std::string render_ppm(const BasinMap& map, const std::vector<Rgb>& palette) {
  if (palette.size() < map.catalog.roots.size() + 1) {
    throw Error(ErrorCode::InvalidArgument, "palette too small for catalog");
  }
  const GridSpec& g = map.grid;
  std::string out = "P6\n" + std::to_string(g.nx) + " " + std::to_string(g.ny) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + 3 * g.size());
  std::size_t pos = header;
  const double max_iter = std::max(1, map.max_iter);
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = 0; i < g.nx; ++i) {
      const int label = map.label(i, j);
      Rgb px;
      if (label < 0) {
        px = palette.back();
      } else {
        const double shade = 1.0 - 0.75 * map.iterations(i, j) / max_iter;
        const Rgb& base = palette[static_cast<std::size_t>(label)];
        for (int c = 0; c < 3; ++c) {
          px[c] = static_cast<std::uint8_t>(std::lround(base[c] * shade));
        }
      }
      out[pos++] = static_cast<char>(px[0]);
      out[pos++] = static_cast<char>(px[1]);
      out[pos++] = static_cast<char>(px[2]);
    }
  }
  return out;
}

nlohmann::json basin_map_to_json(const BasinMap& map) {
  nlohmann::json roots = nlohmann::json::array();
  for (Complex r : map.catalog.roots) roots.push_back({r.real(), r.imag()});
  const GridSpec& g = map.grid;
  return {
      {"grid",
       {{"re_min", g.re_min},
        {"re_max", g.re_max},
        {"im_min", g.im_min},
        {"im_max", g.im_max},
        {"nx", g.nx},
        {"ny", g.ny}}},
      {"max_iter", map.max_iter},
      {"match_tol", map.catalog.match_tol},
      {"catalog", std::move(roots)},
      {"labels", map.labels},
      {"iter_counts", map.iter_counts},
  };
}

double singularity_probe(const ScalarProblem& p, Complex x_s, double radius, int n_samples,
                         double beta) {
  if (!(std::abs(p.deriv(x_s)) < 1e-8)) {
    throw Error(ErrorCode::InvalidArgument, "x_s is not a critical point: |f'(x_s)| >= 1e-8");
  }
  if (n_samples < 2 || !(radius > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need n_samples >= 2 and radius > 0");
  }
  std::vector<Complex> images;
  images.reserve(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    const Complex z = x_s + std::polar(radius, 2.0 * std::numbers::pi * k / n_samples);
    if (const auto step = extended_step(p, z, beta)) images.push_back(step->next);
  }
  if (images.empty()) throw Error(ErrorCode::DegenerateInput, "all samples singular");
  double spread = 0.0;
  for (std::size_t a = 0; a < images.size(); ++a) {
    for (std::size_t b = a + 1; b < images.size(); ++b) {
      spread = std::max(spread, std::abs(images[a] - images[b]));
    }
  }
  return spread;
}

}  // namespace annealroot
