#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "zerolab/philox.hpp"
#include "zerolab/point.hpp"
#include "zerolab/potential.hpp"
#include "zerolab/process.hpp"

namespace zerolab::levysim {

/// Monte-Carlo estimate of a mean.
struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

struct PathConfig {
  double dt = 1e-3;  ///< time step; the smallest step when adaptive stepping is on
  double horizon = 100.0;
  std::uint64_t seed = 1;
  std::size_t n_paths = 10000;
  int workers = 1;
  /// Adaptive stepping: step h = max(dt, 1/Psi(1/(fraction * distance to the boundary))); 0 keeps h = dt.
  double adapt_fraction = 0.0;
  /// Layered processes: jumps below this size are replaced by a Gaussian with matching covariance.
  double small_jump_cutoff = 1e-3;
  /// Censored fraction above which an estimate is flagged unreliable.
  double censor_threshold = 0.01;
  /// Feynman-Kac: a path stops, contributing zero, once its weight times the payoff bound drops below this.
  double weight_floor = 1e-9;

  void validate() const;
};

/// Draws increments X_h of the process.
class IncrementSampler {
 public:
  explicit IncrementSampler(const ProcessSpec& proc, double small_jump_cutoff = 1e-3);

  Point sample(double h, Stream& s) const;

  /// Symmetric alpha-stable variable with E exp(i t X) = exp(-|t|^alpha) (Chambers-Mallows-Stuck).
  static double symmetric_stable(double alpha, Stream& s);
  /// Positive beta-stable variable with E exp(-l S) = exp(-l^beta), beta in (0,1) (Kanter).
  static double positive_stable(double beta, Stream& s);

  const ProcessSpec& process() const { return proc_; }

 private:
  Point unit_direction(Stream& s) const;

  ProcessSpec proc_;
  // layered decomposition
  double cutoff_ = 1e-3;
  double gauss_sd_ = 0.0;  // per coordinate and unit time
  double rate_mid_ = 0.0;
  double rate_large_ = 0.0;
};

/// Domain for exit problems: an open ball, or the complement of a closed ball.
struct Domain {
  enum class Kind { ball, ball_complement };
  Kind kind = Kind::ball;
  Point center;
  double radius = 1.0;

  static Domain ball(const Point& center, double radius);
  static Domain ball_complement(const Point& center, double radius);

  bool contains(const Point& x) const;
  /// Distance from x to the boundary sphere.
  double boundary_distance(const Point& x) const;
};

struct ExitSample {
  double tau = 0.0;
  Point position;
  bool censored = false;
  std::size_t steps = 0;
};

/// One path from `start` until it leaves `domain` (checked at step times) or the horizon passes.
ExitSample exit_time(const IncrementSampler& sampler, const Domain& domain, const Point& start, const PathConfig& cfg,
                     Stream& stream);

struct ExitReport {
  MCEstimate tau;  ///< mean over uncensored paths
  std::size_t censored = 0;
  double dt = 0.0;
  std::string bias_note;
};

/// Mean exit time of B(0, r) started at the origin.
ExitReport mean_exit_time(const ProcessSpec& proc, double r, const PathConfig& cfg, std::uint64_t salt = 0);

/// Estimate of P^0(tau_{B(0,r)} <= eta).
MCEstimate survival_prob(const ProcessSpec& proc, double r, double eta, const PathConfig& cfg, std::uint64_t salt = 0);

struct FKReport {
  MCEstimate value;
  std::size_t censored = 0;
  std::size_t truncated = 0;  ///< paths stopped by the weight floor
  double censored_fraction = 0.0;
  bool reliable = true;
};

/// E^x[exp(-int_0^tau V(X_s) ds) g(X_tau)], tau the exit time of `domain`, with a left-endpoint
/// Riemann sum for the time integral. `payoff_bound` bounds |g| and sets the weight-floor scale.
FKReport fk_functional(const ProcessSpec& proc, const PotentialModel& potential, const Domain& domain, const Point& x,
                       const std::function<double(const Point&)>& payoff, double payoff_bound, const PathConfig& cfg,
                       std::uint64_t salt = 0);

struct LambdaReport {
  MCEstimate lambda;
  double v_star = 0.0;  ///< sup_{|y| >= |x|/2} V(y)
  double psi = 0.0;     ///< Psi(1/|x|)
  std::size_t censored = 0;
};

/// E^x[int_0^{tau_{B(x,|x|/2)}} exp(-V*(x) t) dt], with V*(x) the outer supremum of the potential.
LambdaReport lifetime_lambda(const ProcessSpec& proc, const PotentialModel& potential, const Point& x,
                             const PathConfig& cfg, std::uint64_t salt = 0);

/// CDF of |X_tau| for the isotropic stable process leaving B(0, r) from its centre, by numerical
/// integration of the closed-form exit density.
double exit_radius_cdf(double alpha, double r, double s);

struct ExitLawReport {
  double ks_statistic = 0.0;
  double critical_value = 0.0;  ///< 1% level, asymptotic Kolmogorov distribution
  bool pass = false;
  std::size_t n = 0;
  std::size_t censored = 0;
  std::size_t inside = 0;  ///< exit positions still inside the ball (must be zero)
  double mean_direction = 0.0;  ///< length of the mean exit direction (d >= 2; near 0 for isotropy)
};

ExitLawReport exit_law_check(const ProcessSpec& proc, double r, const PathConfig& cfg, std::uint64_t salt = 0);

/// Path samples (t, X_t) at fixed step for debugging dumps.
struct PathPoint {
  double t;
  Point x;
};
std::vector<PathPoint> sample_path(const ProcessSpec& proc, const Point& start, double dt, std::size_t steps,
                                   std::uint64_t seed, std::uint64_t path = 0);

/// Pairwise (cascade) sum; deterministic for a given input order.
double pairwise_sum(const double* values, std::size_t n);

/// Mean and standard error of per-path values.
MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed);

}  // namespace zerolab::levysim
