#include "gsc/fibre.hpp"

#include <cmath>
#include <string>

#include "gsc/errors.hpp"

namespace gsc {

void FibreModel::validate() const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw ParameterError("FibreModel: eta ratio c must be >= 0");
  if (!std::isfinite(snr_gaussian_db)) throw ParameterError("FibreModel: baseline SNR must be finite");
}

namespace {

double checked_base(double c, double phi) {
  const double base = 1.0 + c * phi;
  if (!(base > 0.0)) {
    throw DomainError("fibre model: 1 + c*phi = " + std::to_string(base) + " is not positive");
  }
  return base;
}

}  // namespace

double snr_for_constellation(const FibreModel& fm, double phi) {
  const double base = checked_base(fm.c, phi);
  return fm.snr_gaussian_db + 10.0 * std::log10(std::pow(base, -1.0 / 3.0));
}

double nonlinear_scale(double c, double phi) { return std::pow(checked_base(c, phi), -1.0 / 6.0); }

}  // namespace gsc
