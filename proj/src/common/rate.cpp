#include <cmath>
#include <sstream>

#include "zerolab/errors.hpp"
#include "zerolab/rate.hpp"

namespace zerolab {

RateFunction RateFunction::power(double a, double valid_from) {
  RateFunction f;
  f.form = RateForm::power;
  f.a = a;
  f.valid_from = valid_from;
  return f;
}

RateFunction RateFunction::power_log(double a, double b, double valid_from) {
  RateFunction f = power(a, valid_from);
  f.form = RateForm::power_log;
  f.b = b;
  return f;
}

RateFunction RateFunction::stretched(double a, double b, double c, double delta, double valid_from) {
  RateFunction f = power_log(a, b, valid_from);
  f.form = RateForm::stretched;
  f.c = c;
  f.delta = delta;
  return f;
}

double RateFunction::log_value(double r) const {
  if (!(r > 0.0)) throw ConfigError("rate function evaluated at non-positive radius");
  const double lr = std::log(r);
  if (form == RateForm::power) return -a * lr;
  if (!(r > 1.0)) throw ConfigError("logarithmic rate function evaluated at r <= 1");
  double out = -a * lr - b * std::log(lr);
  if (form == RateForm::stretched) out += c / (1.0 - delta) * std::pow(lr, 1.0 - delta);
  return out;
}

double RateFunction::operator()(double r) const { return std::exp(log_value(r)); }

void RateFunction::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) throw ConfigError("rate function: non-finite parameter");
  if (form == RateForm::stretched && !(delta > 0.0 && delta < 1.0)) {
    throw ConfigError("rate function: stretched form requires delta in (0,1)");
  }
  if (form != RateForm::power && !(valid_from > 1.0) && valid_from != 1.0) {
    throw ConfigError("rate function: logarithmic forms need valid_from >= 1");
  }
}

std::string RateFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  const auto neg = [](double x) { return x == 0.0 ? 0.0 : -x; };
  switch (form) {
    case RateForm::power:
      os << "r^" << neg(a);
      break;
    case RateForm::power_log:
      os << "r^" << neg(a) << " (log r)^" << neg(b);
      break;
    case RateForm::stretched:
      os << "exp(" << c << "/(1-" << delta << ") (log r)^(1-" << delta << ")) r^" << neg(a) << " (log r)^" << neg(b);
      break;
  }
  return os.str();
}

const char* to_string(RateForm f) {
  switch (f) {
    case RateForm::power:
      return "power";
    case RateForm::power_log:
      return "power_log";
    case RateForm::stretched:
      return "stretched";
  }
  return "unknown";
}

}  // namespace zerolab
