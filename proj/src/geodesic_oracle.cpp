#include "cohesive/geodesic_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>

#include "cohesive/csv.hpp"

namespace cohesive {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

struct Step {
  int di;
  int dj;
};

// First eight entries form the 8-neighbor stencil.
constexpr std::array<Step, 16> kSteps = {{{1, 0},
                                          {-1, 0},
                                          {0, 1},
                                          {0, -1},
                                          {1, 1},
                                          {1, -1},
                                          {-1, 1},
                                          {-1, -1},
                                          {1, 2},
                                          {1, -2},
                                          {-1, 2},
                                          {-1, -2},
                                          {2, 1},
                                          {2, -1},
                                          {-2, 1},
                                          {-2, -1}}};

}  // namespace

void GeodesicGrid::validate() const {
  if (n_alpha < 16 || n_beta < 16) throw std::invalid_argument("geodesic grid needs >= 16 nodes per axis");
  if (stencil != 8 && stencil != 16) throw std::invalid_argument("stencil must be 8 or 16");
}

GeodesicGrid GeodesicGrid::refined(double factor) const {
  if (!(factor > 1.0)) throw std::invalid_argument("refinement factor must exceed 1");
  GeodesicGrid g = *this;
  g.n_alpha = static_cast<std::size_t>(std::lround(static_cast<double>(n_alpha - 1) * factor)) + 1;
  g.n_beta = static_cast<std::size_t>(std::lround(static_cast<double>(n_beta - 1) * factor)) + 1;
  return g;
}

double segment_length(const PlanePoint& a, const PlanePoint& b, const DamagePotential& pot) {
  const double da = std::abs(b[0] - a[0]);
  const double db = b[1] - a[1];
  if (da == 0.0) {
    const double ra = 1.0 - a[1];
    const double rb = 1.0 - b[1];
    return 0.5 * std::abs(ra * ra - rb * rb);
  }
  if (db == 0.0) {
    const double p = pot.product(a[1]);
    return std::isfinite(p) ? p * da : kInf;
  }
  if ((a[1] == 1.0 || b[1] == 1.0) && !std::isfinite(pot.product(1.0))) return kInf;
  double total = 0.0;
  for (std::size_t k = 0; k < 8; ++k) {
    const double beta = a[1] + 0.5 * (kGaussNodes[k] + 1.0) * db;
    const double p = pot.product(beta) * da;
    const double v = (1.0 - beta) * db;
    total += kGaussWeights[k] * std::hypot(p, v);
  }
  return 0.5 * total;
}

double metric_length(const std::vector<PlanePoint>& polyline, const DamagePotential& pot) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
    total += segment_length(polyline[i], polyline[i + 1], pot);
  }
  return total;
}

double polish_path(std::vector<PlanePoint>& path, const DamagePotential& pot, double s,
                   int max_sweeps) {
  if (path.size() < 3) return metric_length(path, pot);
  const std::size_t n = path.size();
  std::vector<double> seg(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) seg[i] = segment_length(path[i], path[i + 1], pot);
  double total = 0.0;
  for (double c : seg) total += c;

  // Compass search per vertex; steps start at the local edge scale.
  std::vector<std::array<double, 2>> step(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double da = std::max(std::abs(path[i + 1][0] - path[i - 1][0]), 1e-3 * std::max(s, 1e-3));
    const double db = std::max(std::abs(path[i + 1][1] - path[i - 1][1]), 1e-3);
    step[i] = {0.25 * da, 0.25 * db};
  }
  const std::array<double, 2> lo = {0.0, 0.0};
  const std::array<double, 2> hi = {s, 1.0};

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double gained = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      for (int axis = 0; axis < 2; ++axis) {
        if (step[i][axis] < 1e-9 * (hi[axis] - lo[axis] + 1e-12)) continue;
        bool moved = false;
        for (double sign : {1.0, -1.0}) {
          PlanePoint trial = path[i];
          trial[axis] = std::clamp(trial[axis] + sign * step[i][axis], lo[axis], hi[axis]);
          if (trial[axis] == path[i][axis]) continue;
          const double left = segment_length(path[i - 1], trial, pot);
          const double right = segment_length(trial, path[i + 1], pot);
          const double delta = left + right - seg[i - 1] - seg[i];
          if (delta < 0.0) {
            path[i] = trial;
            seg[i - 1] = left;
            seg[i] = right;
            gained -= delta;
            moved = true;
            break;
          }
        }
        step[i][axis] *= moved ? 1.5 : 0.5;
      }
    }
    total -= gained;
    if (gained <= 1e-12 * std::max(total, 1e-12)) break;
  }
  total = 0.0;
  for (double c : seg) total += c;
  return total;
}

GeodesicResult geodesic_g(const DamagePotential& pot, double s, const GeodesicGrid& grid,
                          bool polish) {
  grid.validate();
  if (!(s >= 0.0)) throw std::domain_error("opening must be nonnegative");
  GeodesicResult result;
  result.grid = grid;
  if (s == 0.0) {
    result.path = {{0.0, 1.0}};
    return result;
  }
  const std::size_t na = grid.n_alpha;
  const std::size_t nb = grid.n_beta;
  const double ha = s / static_cast<double>(na - 1);
  const double hb = 1.0 / static_cast<double>(nb - 1);
  const auto n_steps = static_cast<std::size_t>(grid.stencil);
  auto beta_at = [&](std::size_t j) { return j + 1 == nb ? 1.0 : hb * static_cast<double>(j); };

  // Edge costs depend on the row and the step only.
  std::vector<double> cost(nb * n_steps, kInf);
  for (std::size_t j = 0; j < nb; ++j) {
    for (std::size_t k = 0; k < n_steps; ++k) {
      const long jj = static_cast<long>(j) + kSteps[k].dj;
      if (jj < 0 || jj >= static_cast<long>(nb)) continue;
      cost[j * n_steps + k] = segment_length({0.0, beta_at(j)},
                                             {ha * kSteps[k].di, beta_at(static_cast<std::size_t>(jj))},
                                             pot);
    }
  }

  const std::size_t total = na * nb;
  std::vector<double> dist(total, kInf);
  std::vector<std::size_t> parent(total, total);
  std::vector<char> done(total, 0);
  const std::size_t source = (nb - 1) * na;
  const std::size_t target = (nb - 1) * na + (na - 1);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    if (u == target) break;
    const std::size_t j = u / na;
    const std::size_t i = u % na;
    for (std::size_t k = 0; k < n_steps; ++k) {
      const long ii = static_cast<long>(i) + kSteps[k].di;
      const long jj = static_cast<long>(j) + kSteps[k].dj;
      if (ii < 0 || ii >= static_cast<long>(na) || jj < 0 || jj >= static_cast<long>(nb)) continue;
      const double c = cost[j * n_steps + k];
      if (!std::isfinite(c)) continue;
      const std::size_t v = static_cast<std::size_t>(jj) * na + static_cast<std::size_t>(ii);
      if (d + c < dist[v]) {
        dist[v] = d + c;
        parent[v] = u;
        heap.push({dist[v], v});
      }
    }
  }
  if (!std::isfinite(dist[target])) throw std::domain_error("target unreachable on grid");

  for (std::size_t v = target; v != total; v = parent[v]) {
    result.path.push_back({ha * static_cast<double>(v % na), beta_at(v / na)});
  }
  std::reverse(result.path.begin(), result.path.end());
  result.grid_value = dist[target];
  result.value = dist[target];
  if (polish) {
    // Coarse to fine: local descent propagates slowly along long chains.
    const std::size_t fine = result.path.size();
    const std::size_t stride = std::max<std::size_t>(1, fine / 64);
    std::vector<PlanePoint> path;
    for (std::size_t i = 0; i < fine; i += stride) path.push_back(result.path[i]);
    if (path.back() != result.path.back()) path.push_back(result.path.back());
    double polished = polish_path(path, pot, s);
    while (path.size() < std::min<std::size_t>(fine, 1024)) {
      std::vector<PlanePoint> finer;
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        finer.push_back(path[i]);
        finer.push_back({0.5 * (path[i][0] + path[i + 1][0]), 0.5 * (path[i][1] + path[i + 1][1])});
      }
      finer.push_back(path.back());
      path = std::move(finer);
      polished = polish_path(path, pot, s);
    }
    if (polished < result.grid_value) {
      result.value = polished;
      result.path = std::move(path);
    }
  }
  return result;
}

RefinementResult refine_until_stable(const DamagePotential& pot, double s,
                                     const GeodesicGrid& start, double factor, double tol,
                                     int max_refinements, bool polish) {
  if (!(factor > 1.0)) throw std::invalid_argument("refinement factor must exceed 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  RefinementResult out;
  GeodesicGrid grid = start;
  out.last = geodesic_g(pot, s, grid, polish);
  out.values.push_back(out.last.value);
  out.grids.push_back(grid);
  if (s == 0.0) {
    out.stable = true;
    return out;
  }
  for (int r = 0; r < max_refinements; ++r) {
    grid = grid.refined(factor);
    out.last = geodesic_g(pot, s, grid, polish);
    out.values.push_back(out.last.value);
    out.grids.push_back(grid);
    const double prev = out.values[out.values.size() - 2];
    const double cur = out.values.back();
    if (std::abs(prev - cur) < tol * std::max(std::abs(cur), 1e-12)) {
      out.stable = true;
      break;
    }
  }
  out.value = out.values.back();
  return out;
}

void write_path_csv(std::ostream& out, const std::vector<PlanePoint>& path) {
  csv::write_row(out, {"alpha", "beta"});
  for (const auto& p : path) csv::write_row(out, {csv::num(p[0]), csv::num(p[1])});
}

}  // namespace cohesive
