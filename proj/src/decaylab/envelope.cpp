#include <algorithm>
#include <cmath>
#include <limits>

#include "zerolab/decaylab.hpp"
#include "zerolab/errors.hpp"

namespace zerolab::decaylab {
namespace {

constexpr double kTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool same(double x, double y) { return std::fabs(x - y) <= kTol * std::max(1.0, std::fabs(y)); }

// |V| ~ r^{-power} (log r)^{log_power} at infinity.
struct Tail {
  double power;
  double log_power;
};

Tail potential_tail(const ProcessSpec& proc, const PotentialModel& pot) {
  pot.validate();
  proc.validate();
  if (pot.family == PotentialFamily::constant && pot.level == 0.0) {
    throw ConfigError("decay analysis: the zero potential has no tail");
  }
  if (pot.family == PotentialFamily::hypergeometric) {
    if (proc.family != ProcessFamily::isotropic_stable || proc.d != pot.spec.d || !same(proc.alpha, pot.spec.alpha)) {
      throw ConfigError("decay analysis: hypergeometric potential requires the matching isotropic stable process");
    }
  }
  return {pot.tail_power(), pot.log_power()};
}

// Psi(1/r) ~ r^{-psi_power}; nu(r) ~ r^{-d-jump_power}.
double psi_power(const ProcessSpec& proc) { return proc.family == ProcessFamily::isotropic_stable ? proc.alpha : 2.0; }
double jump_power(const ProcessSpec& proc) {
  return proc.family == ProcessFamily::isotropic_stable ? proc.alpha : proc.gamma;
}

FreeExponent free_exponent(std::string name, EnvelopeSide side, RateField field, double base, double coefficient,
                           double lo, double hi, bool lo_closed, bool hi_closed) {
  FreeExponent f;
  f.name = std::move(name);
  f.side = side;
  f.field = field;
  f.base = base;
  f.coefficient = coefficient;
  f.lo = lo;
  f.hi = hi;
  f.lo_closed = lo_closed;
  f.hi_closed = hi_closed;
  return f;
}

double upper_from_lp(std::optional<double> p, int d) {
  if (!(*p > 1.0)) throw ConfigError("envelope_predict: the L^p exponent must exceed 1");
  return d / *p;
}

EnvelopePrediction positive_envelope(const ProcessSpec& proc, const PotentialModel& pot, std::optional<double> p) {
  const Tail tail = potential_tail(proc, pot);
  if (pot.sign_at_infinity() != eigenpair::Sign::positive) {
    throw ConfigError("envelope_predict: positive solutions need a potential positive at infinity");
  }
  const int d = proc.d;
  EnvelopePrediction e;
  e.scenario = scenario_classify(proc, pot);
  e.free_constants = {"C1", "C2"};

  auto polynomial_weak = [&](double floor_exponent) {
    // liminf Psi(1/r)/V > 0: lower r^{-(d - gamma)}, gamma in (0,1); upper r^{-d/p} if phi in L^p.
    e.lower = RateFunction::power(floor_exponent);
    e.free_exponents.push_back(
        free_exponent("gamma", EnvelopeSide::lower, RateField::a, floor_exponent, -1.0, 0.0, 1.0, false, false));
    if (p) e.upper = RateFunction::power(upper_from_lp(p, d));
    e.free_constants = {"C3", "C4"};
  };

  if (proc.family == ProcessFamily::layered_stable) {
    if (tail.log_power != 0.0 || pot.family == PotentialFamily::hypergeometric) {
      throw ConfigError("envelope_predict: layered processes support power potentials only");
    }
    const double beta = tail.power;
    if (beta < 2.0) {
      e.lower = e.upper = RateFunction::power(d + proc.gamma - beta);
      e.rule = "layered process, power potential with beta < 2: two-sided r^-(d+gamma-beta)";
    } else {
      e.lower = RateFunction::power(d + proc.gamma - 2.0);
      if (p) e.upper = RateFunction::power(upper_from_lp(p, d));
      e.rule = "layered process, power potential with beta >= 2: lower r^-(d+gamma-2), upper r^-(d/p)";
    }
    return e;
  }

  const double alpha = proc.alpha;
  if (tail.log_power == 0.0) {
    const double beta = tail.power;
    if (beta < alpha && !same(beta, alpha)) {
      e.lower = e.upper = RateFunction::power(d + alpha - beta);
      e.rule = "stable process, power potential with beta < alpha: two-sided r^-(d+alpha-beta)";
    } else {
      polynomial_weak(d);
      e.rule = "stable process, power potential with beta >= alpha: lower r^-(d-gamma), upper r^-(d/p)";
    }
    return e;
  }
  if (!same(tail.power, alpha)) {
    throw ConfigError("envelope_predict: logarithmic potentials must decay like r^-alpha (log r)^delta");
  }
  const double delta = tail.log_power;
  if (delta > 1.0 && !same(delta, 1.0)) {
    e.lower = e.upper = RateFunction::power_log(d, delta, 2.0);
    e.rule = "stable process, log potential with delta > 1: two-sided r^-d (log r)^-delta";
  } else if (same(delta, 1.0)) {
    e.lower = RateFunction::power_log(d, 0.0, 2.0);
    e.upper = RateFunction::power_log(d, 0.0, 2.0);
    e.free_exponents.push_back(free_exponent("gamma1", EnvelopeSide::lower, RateField::b, 1.0, -1.0, 0.0, 1.0, false, true));
    e.free_exponents.push_back(free_exponent("gamma2", EnvelopeSide::upper, RateField::b, 1.0, -1.0, 1.0, kInf, true, false));
    e.free_constants = {"C1", "C2", "eta* = C1^-1 C4 (C5 v 1) C6"};
    e.rule = "stable process, log potential with delta = 1: r^-d (log r)^-(1-gamma1) below, r^-d (log r)^-(1-gamma2) above";
  } else if (delta > 0.0) {
    e.lower = RateFunction::stretched(d, delta, 1.0, delta, 2.0);
    e.upper = RateFunction::stretched(d, delta, 1.0, delta, 2.0);
    e.free_exponents.push_back(free_exponent("gamma1", EnvelopeSide::lower, RateField::c, 0.0, 1.0, 0.0, 1.0, false, true));
    e.free_exponents.push_back(free_exponent("gamma2", EnvelopeSide::upper, RateField::c, 0.0, 1.0, 1.0, kInf, true, false));
    e.free_constants = {"C6", "C7", "eta* = C1^-1 C4 (C5 v 1) C6"};
    e.rule = "stable process, log potential with delta in (0,1): stretched envelopes with exponents gamma1 <= 1 <= gamma2";
  } else {
    polynomial_weak(d);
    e.rule = "stable process, log potential with delta <= 0: lower r^-(d-gamma), upper r^-(d/p)";
  }
  return e;
}

}  // namespace

int scenario_classify(const ProcessSpec& proc, const PotentialModel& pot) {
  const Tail tail = potential_tail(proc, pot);
  if (pot.sign_at_infinity() != eigenpair::Sign::positive) {
    throw ConfigError("scenario_classify: the potential must be positive at infinity");
  }
  const double a = psi_power(proc);
  const double n = jump_power(proc);
  const bool ratio_vanishes = (tail.power < a && !same(tail.power, a)) || (same(tail.power, a) && tail.log_power > 0.0);
  if (!ratio_vanishes) return 3;
  // shell integral of nu/V ~ int r^{-1-n+power} (log r)^{-log_power} dr
  const bool integrable =
      (tail.power < n && !same(tail.power, n)) || (same(tail.power, n) && tail.log_power > 1.0 && !same(tail.log_power, 1.0));
  return integrable ? 1 : 2;
}

const char* to_string(SolutionTrait t) {
  switch (t) {
    case SolutionTrait::positive:
      return "positive";
    case SolutionTrait::antisymmetric:
      return "antisymmetric";
    case SolutionTrait::negative_potential:
      return "negative_potential";
  }
  return "?";
}

double EnvelopePrediction::upper_log_value(double r, bool on_axis) const {
  if (!upper) throw ConfigError("envelope: no upper bound");
  double out = upper->log_value(r);
  if (on_axis && upper_axis_factor) out += upper_axis_factor->log_value(r);
  return out;
}

EnvelopePrediction envelope_predict(const ProcessSpec& proc, const PotentialModel& pot, SolutionTrait trait,
                                    std::optional<double> p) {
  if (trait == SolutionTrait::positive) return positive_envelope(proc, pot, p);

  if (proc.family != ProcessFamily::isotropic_stable) {
    throw ConfigError("envelope_predict: sign-changing solutions are supported for stable processes only");
  }
  const int d = proc.d;
  const double alpha = proc.alpha;

  if (trait == SolutionTrait::negative_potential) {
    const Tail tail = potential_tail(proc, pot);
    if (pot.sign_at_infinity() != eigenpair::Sign::negative) {
      throw ConfigError("envelope_predict: the potential must be negative at infinity");
    }
    const bool dominated = (tail.power > alpha && !same(tail.power, alpha)) || (same(tail.power, alpha) && tail.log_power <= 0.0);
    if (!dominated) throw ConfigError("envelope_predict: need |V| <= C r^-alpha at infinity");
    if (!p) throw ConfigError("envelope_predict: negative potentials need the L^p exponent of the solution");
    const double cap = upper_from_lp(p, d);
    EnvelopePrediction e;
    e.scenario = 0;
    e.upper = RateFunction::power(cap);
    e.free_exponents.push_back(free_exponent("q", EnvelopeSide::upper, RateField::a, 0.0, 1.0, 0.0, cap, false, false));
    e.free_constants = {"C(q)", "R"};
    e.rule = "stable process, negative potential, antisymmetric solution in L^p: |phi| <= C r^-q for q < d/p off the nodal strip";
    return e;
  }

  // Antisymmetric solutions: the upper bounds for positive solutions hold for |phi|, and the two
  // sharpest cases gain an extra factor away from the nodal strip.
  EnvelopePrediction e = positive_envelope(proc, pot, p);
  e.lower.reset();
  std::erase_if(e.free_exponents, [](const FreeExponent& f) { return f.side == EnvelopeSide::lower; });
  if (!e.upper) throw ConfigError("envelope_predict: no upper bound available; supply the L^p exponent");
  const Tail tail = potential_tail(proc, pot);
  if (tail.log_power == 0.0 && tail.power < alpha && !same(tail.power, alpha)) {
    e.upper_axis_factor = RateFunction::power(alpha - tail.power);
    e.rule = "stable process, power potential with beta < alpha, antisymmetric: r^-(d+alpha-beta) times r^-(alpha-beta) off the nodal strip";
  } else if (same(tail.power, alpha) && tail.log_power > 1.0 && !same(tail.log_power, 1.0)) {
    e.upper_axis_factor = RateFunction::power_log(0.0, tail.log_power, 2.0);
    e.rule = "stable process, log potential with delta > 1, antisymmetric: extra (log r)^-delta off the nodal strip";
  } else {
    e.rule += " (upper bound for |phi|)";
  }
  e.free_constants = {"C1"};
  return e;
}

}  // namespace zerolab::decaylab
