#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "zerolab/errors.hpp"
#include "zerolab/levysim.hpp"

namespace zerolab::levysim {
namespace {

constexpr std::size_t kChunk = 64;
constexpr double kKolmogorov99 = 1.6276;

// Runs fn(i) for i in [0, n). Each index is handled exactly once and results are written by
// index, so outputs do not depend on the number of workers.
template <class Fn>
void for_each_path(std::size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n <= kChunk) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    try {
      for (;;) {
        const std::size_t first = next.fetch_add(kChunk);
        if (first >= n) return;
        const std::size_t last = std::min(n, first + kChunk);
        for (std::size_t i = first; i < last; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(n);
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double step_size(const IncrementSampler& sampler, const Domain& domain, const Point& x, const PathConfig& cfg) {
  if (cfg.adapt_fraction <= 0.0) return cfg.dt;
  const double reach = cfg.adapt_fraction * domain.boundary_distance(x);
  if (!(reach > 0.0)) return cfg.dt;
  return std::max(cfg.dt, 1.0 / maximal_symbol(sampler.process(), 1.0 / reach));
}

// Radial potential with a log-spaced lookup table for the hypergeometric family.
class RadialPotential {
 public:
  explicit RadialPotential(const PotentialModel& model) : model_(model) {
    if (model.family != PotentialFamily::hypergeometric) return;
    const int n = static_cast<int>(std::round((kLogMax - kLogMin) * kPerDecade)) + 1;
    table_.resize(n);
    for (int i = 0; i < n; ++i) table_[i] = model.value(std::pow(10.0, kLogMin + static_cast<double>(i) / kPerDecade));
    tail_power_ = model.tail_power();
  }

  double operator()(double r) const {
    if (table_.empty()) return model_.value(r);
    const double lr = std::log10(std::max(r, std::pow(10.0, kLogMin)));
    const double pos = (lr - kLogMin) * kPerDecade;
    const auto last = static_cast<double>(table_.size() - 1);
    if (pos >= last) return table_.back() * std::pow(10.0, -tail_power_ * (lr - kLogMax));
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return table_[i] + frac * (table_[i + 1] - table_[i]);
  }

 private:
  static constexpr double kLogMin = -4.0;
  static constexpr double kLogMax = 9.0;
  static constexpr double kPerDecade = 400.0;
  PotentialModel model_;
  std::vector<double> table_;
  double tail_power_ = 0.0;
};

}  // namespace

void PathConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("paths: dt must be positive");
  if (!(horizon >= dt)) throw ConfigError("paths: need dt <= horizon");
  if (n_paths < 1) throw ConfigError("paths: n_paths must be >= 1");
  if (workers < 1) throw ConfigError("paths: workers must be >= 1");
  if (!(adapt_fraction >= 0.0)) throw ConfigError("paths: adapt_fraction must be non-negative");
  if (!(censor_threshold >= 0.0 && censor_threshold <= 1.0)) throw ConfigError("paths: censor_threshold must lie in [0,1]");
  if (!(weight_floor >= 0.0)) throw ConfigError("paths: weight_floor must be non-negative");
}

Domain Domain::ball(const Point& center, double radius) {
  if (!(radius > 0.0)) throw ConfigError("domain: radius must be positive");
  Domain d;
  d.kind = Kind::ball;
  d.center = center;
  d.radius = radius;
  return d;
}

Domain Domain::ball_complement(const Point& center, double radius) {
  Domain d = ball(center, radius);
  d.kind = Kind::ball_complement;
  return d;
}

bool Domain::contains(const Point& x) const {
  const double r = (x - center).norm();
  return kind == Kind::ball ? r < radius : r > radius;
}

double Domain::boundary_distance(const Point& x) const { return std::fabs((x - center).norm() - radius); }

double pairwise_sum(const double* values, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += values[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
  MCEstimate est;
  est.seed = seed;
  est.n = values.size();
  if (values.empty()) return est;
  const double n = static_cast<double>(values.size());
  est.mean = pairwise_sum(values.data(), values.size()) / n;
  if (values.size() > 1) {
    std::vector<double> dev(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - est.mean) * (values[i] - est.mean);
    est.std_error = std::sqrt(pairwise_sum(dev.data(), dev.size()) / (n - 1.0) / n);
  }
  return est;
}

ExitSample exit_time(const IncrementSampler& sampler, const Domain& domain, const Point& start, const PathConfig& cfg,
                     Stream& stream) {
  ExitSample out;
  Point x = start;
  double t = 0.0;
  for (;;) {
    if (!domain.contains(x)) break;
    if (t >= cfg.horizon * (1.0 - 1e-12)) {
      out.censored = true;
      break;
    }
    const double h = std::min(step_size(sampler, domain, x, cfg), cfg.horizon - t);
    x += sampler.sample(h, stream);
    t += h;
    ++out.steps;
  }
  out.tau = t;
  out.position = x;
  return out;
}

ExitReport mean_exit_time(const ProcessSpec& proc, double r, const PathConfig& cfg, std::uint64_t salt) {
  cfg.validate();
  const IncrementSampler sampler(proc, cfg.small_jump_cutoff);
  const Point origin(proc.d);
  const Domain domain = Domain::ball(origin, r);
  std::vector<double> tau(cfg.n_paths);
  std::vector<char> censored(cfg.n_paths, 0);
  for_each_path(cfg.n_paths, cfg.workers, [&](std::size_t i) {
    Stream stream(cfg.seed, i, salt);
    const auto s = exit_time(sampler, domain, origin, cfg, stream);
    tau[i] = s.tau;
    censored[i] = s.censored ? 1 : 0;
  });
  std::vector<double> kept;
  kept.reserve(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (!censored[i]) kept.push_back(tau[i]);
  }
  ExitReport rep;
  rep.tau = summarize(kept, cfg.seed);
  rep.censored = tau.size() - kept.size();
  rep.dt = cfg.dt;
  rep.bias_note = "exit detected only at step times; the estimate is biased upward and the bias vanishes as dt -> 0";
  return rep;
}

MCEstimate survival_prob(const ProcessSpec& proc, double r, double eta, const PathConfig& cfg, std::uint64_t salt) {
  if (!(eta > 0.0) || !(r > 0.0)) throw ConfigError("survival_prob: r and eta must be positive");
  PathConfig local = cfg;
  local.horizon = eta;
  local.dt = std::min(cfg.dt, eta);
  local.validate();
  const IncrementSampler sampler(proc, cfg.small_jump_cutoff);
  const Point origin(proc.d);
  const Domain domain = Domain::ball(origin, r);
  std::vector<double> hit(local.n_paths);
  for_each_path(local.n_paths, local.workers, [&](std::size_t i) {
    Stream stream(local.seed, i, salt);
    hit[i] = exit_time(sampler, domain, origin, local, stream).censored ? 0.0 : 1.0;
  });
  return summarize(hit, local.seed);
}

FKReport fk_functional(const ProcessSpec& proc, const PotentialModel& potential, const Domain& domain, const Point& x,
                       const std::function<double(const Point&)>& payoff, double payoff_bound, const PathConfig& cfg,
                       std::uint64_t salt) {
  cfg.validate();
  potential.validate();
  if (x.dim != proc.d || domain.center.dim != proc.d) throw ConfigError("fk_functional: dimension mismatch");
  if (!domain.contains(x)) throw ConfigError("fk_functional: start point must lie in the domain");
  if (!(payoff_bound > 0.0)) throw ConfigError("fk_functional: payoff_bound must be positive");
  const IncrementSampler sampler(proc, cfg.small_jump_cutoff);
  const RadialPotential v(potential);
  const double log_floor = cfg.weight_floor > 0.0 ? std::log(cfg.weight_floor / payoff_bound) : -INFINITY;

  std::vector<double> value(cfg.n_paths, 0.0);
  std::vector<char> status(cfg.n_paths, 0);  // 0 exited, 1 censored, 2 truncated
  for_each_path(cfg.n_paths, cfg.workers, [&](std::size_t i) {
    Stream stream(cfg.seed, i, salt);
    Point y = x;
    double t = 0.0;
    double log_weight = 0.0;
    for (;;) {
      if (!domain.contains(y)) {
        value[i] = std::exp(log_weight) * payoff(y);
        return;
      }
      if (log_weight < log_floor) {
        status[i] = 2;
        return;
      }
      if (t >= cfg.horizon * (1.0 - 1e-12)) {
        status[i] = 1;
        return;
      }
      const double h = std::min(step_size(sampler, domain, y, cfg), cfg.horizon - t);
      log_weight -= v(y.norm()) * h;
      y += sampler.sample(h, stream);
      t += h;
    }
  });
  FKReport rep;
  rep.value = summarize(value, cfg.seed);
  for (char s : status) {
    if (s == 1) ++rep.censored;
    if (s == 2) ++rep.truncated;
  }
  rep.censored_fraction = static_cast<double>(rep.censored) / static_cast<double>(cfg.n_paths);
  rep.reliable = rep.censored_fraction <= cfg.censor_threshold;
  return rep;
}

LambdaReport lifetime_lambda(const ProcessSpec& proc, const PotentialModel& potential, const Point& x,
                             const PathConfig& cfg, std::uint64_t salt) {
  cfg.validate();
  potential.validate();
  const double rx = x.norm();
  if (x.dim != proc.d) throw ConfigError("lifetime_lambda: dimension mismatch");
  if (potential.family != PotentialFamily::constant && !(rx >= 2.0 * potential.r0)) {
    throw ConfigError("lifetime_lambda: need |x| >= 2 r0");
  }
  LambdaReport rep;
  rep.v_star = potential.outer_sup(rx);
  rep.psi = maximal_symbol(proc, 1.0 / rx);
  const IncrementSampler sampler(proc, cfg.small_jump_cutoff);
  const Domain domain = Domain::ball(x, 0.5 * rx);
  std::vector<double> value(cfg.n_paths);
  std::vector<char> censored(cfg.n_paths, 0);
  for_each_path(cfg.n_paths, cfg.workers, [&](std::size_t i) {
    Stream stream(cfg.seed, i, salt);
    const auto s = exit_time(sampler, domain, x, cfg, stream);
    censored[i] = s.censored ? 1 : 0;
    value[i] = rep.v_star == 0.0 ? s.tau : -std::expm1(-rep.v_star * s.tau) / rep.v_star;
  });
  rep.lambda = summarize(value, cfg.seed);
  rep.censored = static_cast<std::size_t>(std::count(censored.begin(), censored.end(), 1));
  return rep;
}

double exit_radius_cdf(double alpha, double r, double s) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("exit_radius_cdf: alpha must lie in (0,2)");
  if (s <= r) return 0.0;
  // With s = r sqrt(1+u^2) the radial exit density becomes proportional to u^{1-alpha}/(1+u^2);
  // the part u > 1 is mapped to v = 1/u, giving v^{alpha-1}/(1+v^2).
  static thread_local boost::math::quadrature::tanh_sinh<double> quad;
  auto near = [alpha](double u) { return u <= 0.0 ? 0.0 : std::pow(u, 1.0 - alpha) / (1.0 + u * u); };
  auto far = [alpha](double v) { return v <= 0.0 ? 0.0 : std::pow(v, alpha - 1.0) / (1.0 + v * v); };
  const double near_total = quad.integrate(near, 0.0, 1.0);
  const double far_total = quad.integrate(far, 0.0, 1.0);
  const double u = std::sqrt((s / r) * (s / r) - 1.0);
  double mass;
  if (u <= 1.0) {
    mass = quad.integrate(near, 0.0, u);
  } else {
    mass = near_total + quad.integrate(far, 1.0 / u, 1.0);
  }
  return std::clamp(mass / (near_total + far_total), 0.0, 1.0);
}

ExitLawReport exit_law_check(const ProcessSpec& proc, double r, const PathConfig& cfg, std::uint64_t salt) {
  cfg.validate();
  if (proc.family != ProcessFamily::isotropic_stable) throw ConfigError("exit_law_check: isotropic stable processes only");
  const IncrementSampler sampler(proc, cfg.small_jump_cutoff);
  const Point origin(proc.d);
  const Domain domain = Domain::ball(origin, r);
  std::vector<double> radius(cfg.n_paths);
  std::vector<Point> direction(cfg.n_paths);
  std::vector<char> censored(cfg.n_paths, 0);
  for_each_path(cfg.n_paths, cfg.workers, [&](std::size_t i) {
    Stream stream(cfg.seed, i, salt);
    const auto s = exit_time(sampler, domain, origin, cfg, stream);
    censored[i] = s.censored ? 1 : 0;
    radius[i] = s.position.norm();
    direction[i] = radius[i] > 0.0 ? (1.0 / radius[i]) * s.position : s.position;
  });

  ExitLawReport rep;
  std::vector<double> kept;
  Point direction_sum(proc.d);
  for (std::size_t i = 0; i < radius.size(); ++i) {
    if (censored[i]) {
      ++rep.censored;
      continue;
    }
    if (radius[i] < r) ++rep.inside;
    kept.push_back(radius[i]);
    direction_sum += direction[i];
  }
  rep.n = kept.size();
  if (kept.empty()) return rep;
  std::sort(kept.begin(), kept.end());
  const double n = static_cast<double>(kept.size());
  std::vector<double> cdf(kept.size());
  for_each_path(kept.size(), cfg.workers, [&](std::size_t i) { cdf[i] = exit_radius_cdf(proc.alpha, r, kept[i]); });
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const double above = static_cast<double>(i + 1) / n - cdf[i];
    const double below = cdf[i] - static_cast<double>(i) / n;
    rep.ks_statistic = std::max({rep.ks_statistic, above, below});
  }
  rep.critical_value = kKolmogorov99 / std::sqrt(n);
  rep.pass = rep.ks_statistic < rep.critical_value && rep.inside == 0;
  rep.mean_direction = proc.d >= 2 ? direction_sum.norm() / n : 0.0;
  return rep;
}

std::vector<PathPoint> sample_path(const ProcessSpec& proc, const Point& start, double dt, std::size_t steps,
                                   std::uint64_t seed, std::uint64_t path) {
  if (!(dt > 0.0)) throw ConfigError("sample_path: dt must be positive");
  const IncrementSampler sampler(proc);
  Stream stream(seed, path, 0);
  std::vector<PathPoint> out;
  out.reserve(steps + 1);
  Point x = start;
  out.push_back({0.0, x});
  for (std::size_t k = 1; k <= steps; ++k) {
    x += sampler.sample(dt, stream);
    out.push_back({static_cast<double>(k) * dt, x});
  }
  return out;
}

}  // namespace zerolab::levysim
