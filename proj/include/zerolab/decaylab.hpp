#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zerolab/potential.hpp"
#include "zerolab/process.hpp"
#include "zerolab/rate.hpp"

namespace zerolab::decaylab {

/// Ratio K = u/v at r and its shell integral h(r) = int_{R0 <= |y| <= r} K(|y|) dy in R^d.
struct KernelValues {
  double K = 0.0;
  double h = 0.0;
};

/// r may be +infinity; h is then the (possibly infinite) total integral.
KernelValues K_and_h(const RateFunction& u, const RateFunction& v, double R0, double r, int d);

/// p-th step of the upper self-improving bound: c3 |f| (K sum_{k<p} (eta h)^k / k! + c4^p).
double upper_iteration(int p, double K, double h, double c3, double c4, double eta, double norm_f);
/// Its limit c3 |f| K exp(eta h).
double upper_limit(double K, double h, double c3, double eta, double norm_f);

/// p-th step of the lower bound: eta K sum_{k<p} (eta (h - h1))^k / k!.
double lower_iteration(int p, double K, double h, double h1, double eta);
/// Its limit eta K exp(eta (h - h1)).
double lower_limit(double K, double h, double h1, double eta);

/// Decay regime of positive solutions: 1 when Psi(1/r)/V -> 0 and nu/V is integrable at infinity,
/// 2 when the ratio vanishes but the integral diverges, 3 when liminf Psi(1/r)/V > 0.
int scenario_classify(const ProcessSpec& proc, const PotentialModel& pot);

enum class SolutionTrait { positive, antisymmetric, negative_potential };
const char* to_string(SolutionTrait t);

enum class EnvelopeSide { lower, upper };
enum class RateField { a, b, c };

/// Exponent left free by the bound: field = base + coefficient * value with value in (lo, hi).
struct FreeExponent {
  std::string name;
  EnvelopeSide side = EnvelopeSide::lower;
  RateField field = RateField::a;
  double base = 0.0;
  double coefficient = 1.0;
  double lo = 0.0;
  double hi = 1.0;
  bool lo_closed = false;
  bool hi_closed = false;
};

struct EnvelopePrediction {
  int scenario = 0;  ///< 0 when the potential is negative at infinity
  std::optional<RateFunction> lower;
  std::optional<RateFunction> upper;
  /// Extra decay of the upper bound away from the nodal strip {|x_axis| < 1} (antisymmetric solutions).
  std::optional<RateFunction> upper_axis_factor;
  std::vector<FreeExponent> free_exponents;
  std::vector<std::string> free_constants;
  std::string rule;

  /// Upper rate including the axis factor when present.
  double upper_log_value(double r, bool on_axis) const;
};

/// Envelope for solutions with the given trait. `p` is an L^p exponent known for the solution.
EnvelopePrediction envelope_predict(const ProcessSpec& proc, const PotentialModel& pot, SolutionTrait trait,
                                    std::optional<double> p = std::nullopt);

struct Sample {
  double r;
  double value;
};

struct DecayFit {
  RateFunction rate;
  double log_amplitude = 0.0;  ///< value ~ exp(log_amplitude) * rate(r)
  double se_a = 0.0;
  double se_b = 0.0;
  double se_c = 0.0;
  double rms_residual = 0.0;  ///< root mean square of log residuals
  double condition = 0.0;     ///< condition number of the scaled design matrix
  std::size_t n = 0;
};

/// Least-squares fit of log(value) against the chosen form (default: pure power). The stretched
/// form profiles delta over a grid.
DecayFit fit_decay(const std::vector<Sample>& samples, std::optional<RateForm> hint = std::nullopt);

struct EnvelopeCheck {
  bool has_lower = false;
  bool has_upper = false;
  double lower_ratio_min = 0.0;
  double lower_ratio_max = 0.0;
  double upper_ratio_min = 0.0;
  double upper_ratio_max = 0.0;
  /// Largest decrease of value/lower and largest increase of value/upper along increasing r.
  double lower_drift = 1.0;
  double upper_drift = 1.0;
  bool lower_pass = true;
  bool upper_pass = true;
  bool pass = true;
  double band = 50.0;
  std::size_t used = 0;
  std::vector<std::pair<std::string, double>> profiled;  ///< chosen free exponents
};

/// Compares samples with the envelope; free exponents are profiled within their intervals.
/// `on_axis` applies the antisymmetric axis factor to the upper bound.
EnvelopeCheck check_envelope(const std::vector<Sample>& samples, const EnvelopePrediction& prediction,
                             double band = 50.0, bool on_axis = true);

}  // namespace zerolab::decaylab
