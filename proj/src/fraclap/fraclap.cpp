#include "zerolab/fraclap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <numbers>
#include <thread>

#include "zerolab/errors.hpp"
#include "zerolab/gauss.hpp"
#include "zerolab/process.hpp"

namespace zerolab::fraclap {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNormalizationTolerance = 1e-6;

struct Node {
  double at;
  double weight;
};

struct Direction {
  Point u;
  double weight;  // weights sum to 1 over the hemisphere
};

void append_panel(std::vector<Node>& out, double a, double b, int n) {
  const auto& rule = gauss_legendre(n);
  const bool log_map = b > 2.0 * a;
  if (log_map) {
    const double la = std::log(a), lb = std::log(b);
    const double half = 0.5 * (lb - la), mid = 0.5 * (lb + la);
    for (int i = 0; i < n; ++i) {
      const double rho = std::exp(mid + half * rule.nodes[i]);
      out.push_back({rho, rule.weights[i] * half * rho});
    }
  } else {
    const double half = 0.5 * (b - a), mid = 0.5 * (b + a);
    for (int i = 0; i < n; ++i) out.push_back({mid + half * rule.nodes[i], rule.weights[i] * half});
  }
}

// Radial nodes on [inner, outer]: one panel per decade, plus dyadic breakpoints
// around the distance to the field's structure.
std::vector<Node> radial_rule(double dist, const QuadConfig& cfg) {
  std::vector<double> cuts;
  for (double b = cfg.inner_radius; b < cfg.outer_radius; b *= 10.0) cuts.push_back(b);
  cuts.push_back(cfg.outer_radius);
  const double scale = cfg.feature_scale;
  if (dist > 2.0 * scale) {
    cuts.push_back(dist);
    for (double step = scale; step < dist; step *= 2.0) {
      cuts.push_back(dist - step);
      cuts.push_back(dist + step);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> kept;
  for (double c : cuts) {
    if (c < cfg.inner_radius || c > cfg.outer_radius) continue;
    if (!kept.empty() && c <= kept.back() * (1.0 + 1e-12)) continue;
    kept.push_back(c);
  }
  const int min_nodes = std::max(8, cfg.nodes_per_decade / 2);
  std::vector<Node> out;
  for (std::size_t i = 0; i + 1 < kept.size(); ++i) {
    const double a = kept[i], b = kept[i + 1];
    const int n = std::max(min_nodes, static_cast<int>(std::ceil(cfg.nodes_per_decade * std::log10(b / a))));
    append_panel(out, a, b, n);
  }
  return out;
}

// Angular panels on [0, pi/2], graded toward 0 with `levels` dyadic refinements.
std::vector<Node> graded_angles(int levels, int n) {
  std::vector<double> cuts{0.0};
  for (int j = levels; j >= 1; --j) cuts.push_back(0.5 * kPi * std::ldexp(1.0, -j));
  cuts.push_back(0.5 * kPi);
  std::vector<Node> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const auto& rule = gauss_legendre(n);
    const double half = 0.5 * (cuts[i + 1] - cuts[i]), mid = 0.5 * (cuts[i + 1] + cuts[i]);
    for (int k = 0; k < n; ++k) out.push_back({mid + half * rule.nodes[k], rule.weights[k] * half});
  }
  return out;
}

std::vector<Direction> hemisphere_rule(const Point& axis, double dist, const QuadConfig& cfg) {
  const int d = axis.dim;
  std::vector<Direction> out;
  if (d == 1) {
    out.push_back({Point::on_axis(1, 1.0), 1.0});
    return out;
  }
  const double ratio = dist / cfg.feature_scale;
  const int levels = ratio > 1.0 ? static_cast<int>(std::ceil(std::log2(ratio))) + 1 : 0;
  const auto angles = graded_angles(levels, cfg.angular_nodes);

  if (d == 2) {
    Point perp(2);
    perp[0] = -axis[1];
    perp[1] = axis[0];
    for (const auto& a : angles) {
      for (double sign : {1.0, -1.0}) {
        Point u = std::cos(a.at) * axis + (sign * std::sin(a.at)) * perp;
        out.push_back({u, a.weight / kPi});
      }
    }
    return out;
  }

  // d = 3: orthonormal frame (axis, e1, e2), polar angle from the axis, uniform azimuth.
  Point helper(3);
  helper[std::fabs(axis[0]) < 0.9 ? 0 : 1] = 1.0;
  double dot = 0.0;
  for (int i = 0; i < 3; ++i) dot += helper[i] * axis[i];
  Point e1 = helper - dot * axis;
  e1 *= 1.0 / e1.norm();
  Point e2(3);
  e2[0] = axis[1] * e1[2] - axis[2] * e1[1];
  e2[1] = axis[2] * e1[0] - axis[0] * e1[2];
  e2[2] = axis[0] * e1[1] - axis[1] * e1[0];
  const int m = cfg.angular_nodes;
  for (const auto& a : angles) {
    const double s = std::sin(a.at), c = std::cos(a.at);
    for (int j = 0; j < m; ++j) {
      const double phi = 2.0 * kPi * j / m;
      Point u = c * axis + (s * std::cos(phi)) * e1 + (s * std::sin(phi)) * e2;
      out.push_back({u, a.weight * s / m});
    }
  }
  return out;
}

// Hemisphere average of (f(x + rho u) + f(x - rho u)) / 2.
double shifted_average(const Field& f, const Point& x, double rho, const std::vector<Direction>& dirs) {
  double acc = 0.0;
  for (const auto& dir : dirs) {
    const Point step = rho * dir.u;
    acc += dir.weight * 0.5 * (f(x + step) + f(x - step));
  }
  return acc;
}

// Hemisphere average of f(x) - (f(x + rho u) + f(x - rho u)) / 2, formed per direction so
// that constant fields cancel exactly.
double second_difference(const Field& f, const Point& x, double fx, double rho, const std::vector<Direction>& dirs) {
  double acc = 0.0;
  for (const auto& dir : dirs) {
    const Point step = rho * dir.u;
    acc += dir.weight * (fx - 0.5 * (f(x + step) + f(x - step)));
  }
  return acc;
}

double integrate(const Field& f, double alpha, const Point& x, const QuadConfig& cfg) {
  const int d = x.dim;
  Point center(d);
  for (int i = 0; i < d; ++i) center[i] = cfg.feature_center[i];
  Point rel = x - center;
  const double dist = rel.norm();
  Point axis = dist > 0.0 ? (1.0 / dist) * rel : Point::on_axis(d, 1.0);

  const auto radial = radial_rule(dist, cfg);
  const auto dirs = hemisphere_rule(axis, dist, cfg);
  const double fx = f(x);

  double body = 0.0;
  for (const auto& node : radial) {
    body += node.weight * std::pow(node.at, -1.0 - alpha) * second_difference(f, x, fx, node.at, dirs);
  }

  // Inside inner_radius: fit a rho^2 + b rho^4 through two samples and integrate exactly.
  const double eps = cfg.inner_radius;
  const double s1 = second_difference(f, x, fx, eps, dirs);
  const double s2 = second_difference(f, x, fx, 0.5 * eps, dirs);
  const double b = (s1 - 4.0 * s2) / (0.75 * std::pow(eps, 4));
  const double a = (s1 - b * std::pow(eps, 4)) / (eps * eps);
  const double inner = a * std::pow(eps, 2.0 - alpha) / (2.0 - alpha) + b * std::pow(eps, 4.0 - alpha) / (4.0 - alpha);

  // Beyond outer_radius: f(x) exactly, and the shifted average as a fitted power law.
  const double big = cfg.outer_radius;
  double weight_sum = 0.0;
  for (const auto& dir : dirs) weight_sum += dir.weight;
  double tail = weight_sum * fx * std::pow(big, -alpha) / alpha;
  if (cfg.tail_order >= 2) {
    const double t_far = shifted_average(f, x, big, dirs);
    const double t_near = shifted_average(f, x, 0.5 * big, dirs);
    double decay = 0.0;
    if (t_far != 0.0 && t_near / t_far > 1.0) decay = std::log2(t_near / t_far);
    tail -= t_far * std::pow(big, -alpha) / (alpha + decay);
  }

  const double total = stable_constant(d, alpha) * unit_sphere_area(d) * (body + inner + tail);
  if (!std::isfinite(total)) throw NumericalError("frac_laplacian: non-finite field value encountered");
  return total;
}

}  // namespace

void QuadConfig::validate() const {
  if (!(inner_radius > 0.0) || !(outer_radius > inner_radius)) {
    throw ConfigError("quadrature: need 0 < inner_radius < outer_radius");
  }
  if (nodes_per_decade < 8 || angular_nodes < 8) throw ConfigError("quadrature: node counts must be >= 8");
  if (tail_order < 1 || tail_order > 2) throw ConfigError("quadrature: tail_order must be 1 or 2");
  if (!(tolerance >= 0.0)) throw ConfigError("quadrature: tolerance must be non-negative");
  if (!(feature_scale > 0.0)) throw ConfigError("quadrature: feature_scale must be positive");
  if (workers < 1) throw ConfigError("quadrature: workers must be >= 1");
}

void check_normalization(int d, double alpha) {
  const double symbol = symbol_from_density(ProcessSpec::stable(d, alpha), 1.0);
  if (std::fabs(symbol - 1.0) > kNormalizationTolerance) {
    throw NumericalError("fractional Laplacian normalization check failed: symbol at |xi|=1 is " +
                         std::to_string(symbol));
  }
}

double frac_laplacian(const Field& f, double alpha, const Point& x, const QuadConfig& cfg) {
  cfg.validate();
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("frac_laplacian: alpha must lie in (0,2)");
  if (x.dim < 1 || x.dim > kMaxDim) throw ConfigError("frac_laplacian: only d <= 3 is supported");
  const double value = integrate(f, alpha, x, cfg);
  if (cfg.tolerance > 0.0) {
    QuadConfig coarse = cfg;
    coarse.nodes_per_decade = std::max(8, cfg.nodes_per_decade / 2);
    coarse.angular_nodes = std::max(8, cfg.angular_nodes / 2);
    const double estimate = std::fabs(value - integrate(f, alpha, x, coarse));
    if (estimate > cfg.tolerance) {
      char msg[128];
      std::snprintf(msg, sizeof(msg), "frac_laplacian: estimated quadrature error %.3g exceeds tolerance %.3g", estimate,
                    cfg.tolerance);
      throw NumericalError(msg);
    }
  }
  return value;
}

ResidualReport residual(const eigenpair::EigenpairSpec& spec, const std::vector<Point>& grid, const QuadConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (spec.d > kMaxDim) throw ConfigError("residual: only d <= 3 is supported");
  check_normalization(spec.d, spec.alpha);
  for (const auto& x : grid) {
    if (x.dim != spec.d) throw ConfigError("residual: grid point dimension does not match d");
  }

  const Field phi = [&spec](const Point& y) { return eigenpair::eigenfunction_value(spec, y); };
  ResidualReport report;
  report.rows.resize(grid.size());
  std::vector<std::exception_ptr> errors(grid.size());

  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < grid.size(); i += stride) {
      try {
        auto& row = report.rows[i];
        row.x = grid[i];
        row.laplacian = frac_laplacian(phi, spec.alpha, grid[i], cfg);
        const double phi_x = phi(grid[i]);
        row.potential_term = phi_x == 0.0 ? 0.0 : eigenpair::potential_value(spec, grid[i]) * phi_x;
        row.residual = row.laplacian + row.potential_term;
        const double scale = std::fabs(row.laplacian) + std::fabs(row.potential_term);
        row.has_relative = phi_x != 0.0 && scale > 0.0;
        row.relative = row.has_relative ? row.residual / scale : 0.0;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), std::max<std::size_t>(1, grid.size()));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (const auto& row : report.rows) {
    report.max_abs = std::max(report.max_abs, std::fabs(row.residual));
    if (row.has_relative) report.max_rel = std::max(report.max_rel, std::fabs(row.relative));
  }
  return report;
}

}  // namespace zerolab::fraclap
