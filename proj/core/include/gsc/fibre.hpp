#pragma once

#include <optional>

namespace gsc {

/// Nonlinear fibre channel at optimum launch power, reduced to the eta ratio
/// c = eta2 / eta1 and the SNR obtained with a Gaussian-distributed signal.
struct FibreModel {
  double c = 0.0;
  double snr_gaussian_db = 0.0;
  // Link metadata; carried along for reporting only.
  std::optional<double> eta1;
  std::optional<double> eta2;
  std::optional<double> p_ase;

  void validate() const;
};

/// SNR at optimum launch power for a signal with excess kurtosis phi:
/// snr_gaussian_db + 10 log10((1 + c phi)^(-1/3)).
double snr_for_constellation(const FibreModel& fm, double phi);

/// Amplitude factor (1 + c phi)^(-1/6).
double nonlinear_scale(double c, double phi);

}  // namespace gsc
