#include "relaxrk/euler/physics.hpp"

namespace relaxrk::euler {

void GasModel::validate() const {
  if (!(gamma > 1.0)) throw ConfigError("gas gamma must exceed 1, got " + std::to_string(gamma));
  if (!(R > 0.0)) throw ConfigError("gas constant R must be positive, got " + std::to_string(R));
}

InterfaceMode parse_interface_mode(const std::string& name) {
  if (name == "ec") return InterfaceMode::ec;
  if (name == "es_rusanov") return InterfaceMode::es_rusanov;
  throw ConfigError("unknown interface mode '" + name + "' (valid: ec, es_rusanov)");
}

std::string to_string(InterfaceMode mode) { return mode == InterfaceMode::ec ? "ec" : "es_rusanov"; }

double log_mean(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw NumericalError("log_mean needs positive arguments, got " + std::to_string(a) + " and " +
                         std::to_string(b));
  }
  return detail::log_mean_unchecked(a, b);
}

}  // namespace relaxrk::euler
