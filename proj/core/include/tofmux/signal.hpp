#pragma once

// Continuous-wave ToF correlation, phase demodulation and the bucket-level
// interference/saturation model.
//
// Reflected and demodulation signals are sinusoids:
//   R(t) = a_r sin(2 pi f (t - tau)) + b_r
//   D(t) = a_d sin(2 pi f t) + b_d
// and one modulation period T = 1/f of their correlation is
//   C(psi) = A_C cos(psi + phi) + B_C,  A_C = a_r a_d T / 2,  B_C = b_r b_d T,
// with psi = 2 pi f t_d and phi = 2 pi f tau.

#include <array>
#include <numbers>
#include <span>

namespace tofmux {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct ModulationParams {
  double a_r = 1.0;
  double b_r = 0.0;
  double a_d = 1.0;
  double b_d = 0.0;
  double mod_freq = 24e6;  // Hz
  double tau = 0.0;        // s

  double period() const { return 1.0 / mod_freq; }
  double phase() const { return 2.0 * std::numbers::pi * mod_freq * tau; }
  void validate() const;
};

struct CorrelationSamples {
  // Buckets at psi = 0, 90, 180 and 270 degrees.
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double a_c = 0.0;
  double b_c = 0.0;

  std::array<double, 4> buckets() const { return {c0, c1, c2, c3}; }
};

struct CorrelationValue {
  double value = 0.0;
  double a_c = 0.0;
  double b_c = 0.0;
};

struct PixelState {
  std::array<double, 4> accumulated{};
  double well_capacity = 0.0;
  bool saturated = false;
};

// Trapezoidal integral of D(t + t_d) R(t) over one modulation period.
// Requires steps >= 64.
double correlate_numeric(const ModulationParams& params, double t_d,
                         int steps);

CorrelationValue correlate_closed_form(const ModulationParams& params,
                                       double psi);

// Four closed-form buckets at 0/90/180/270 degrees.
CorrelationSamples sample_buckets(const ModulationParams& params);

// atan2(c3 - c1, c0 - c2) in [0, 2 pi). Throws DegenerateSamples when both
// differences are zero.
double estimate_phase(const CorrelationSamples& samples);

// N-bucket generalisation for buckets taken at psi_j = 2 pi j / N (N >= 3).
// For N == 4 this is exactly estimate_phase above. Otherwise an AC amplitude
// at rounding level of the bucket sum counts as degenerate.
double estimate_phase(std::span<const double> buckets);

double phase_to_depth(double phi, double mod_freq);
double ambiguity_range(double mod_freq);

// Energy per own modulation period that an interferer's light deposits in the
// bucket at `psi`, demodulated by `own`. Coherent light (equal modulation
// frequency) keeps its AC term at phase phi' + relative_phase; incoherent
// light only contributes its DC term b_r' b_d T.
double interference_contribution(const ModulationParams& own,
                                 const ModulationParams& interferer, double psi,
                                 bool coherent, double relative_phase);

// Own buckets plus overlap_fraction times the interferer's contribution as
// seen through the own demodulation signal. A coherent interferer (equal
// modulation frequency) adds A_C' cos(psi + phi' + relative_phase) + B_C';
// an incoherent one adds only its time-averaged DC term.
CorrelationSamples superpose_interference(const ModulationParams& own,
                                          const ModulationParams& interferer,
                                          double overlap_fraction,
                                          bool coherent,
                                          double relative_phase = 0.0);

// Saturated iff any bucket reaches the well capacity.
PixelState integrate_pixel(const CorrelationSamples& samples,
                           double well_capacity);

bool any_saturated(std::span<const double> buckets, double well_capacity);

}  // namespace tofmux
