#include "tofmux/signal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tofmux/error.hpp"

namespace tofmux {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double phi) {
  if (phi < 0.0) phi += kTwoPi;
  // -tiny + 2 pi can round up to exactly 2 pi.
  if (phi >= kTwoPi) phi = 0.0;
  return phi;
}

}  // namespace

double interference_contribution(const ModulationParams& own,
                                 const ModulationParams& interferer, double psi,
                                 bool coherent, double relative_phase) {
  const double period = own.period();
  const double dc = interferer.b_r * own.b_d * period;
  if (!coherent) return dc;
  const double ac = interferer.a_r * own.a_d * period / 2.0;
  return ac * std::cos(psi + interferer.phase() + relative_phase) + dc;
}

void ModulationParams::validate() const {
  if (a_r < 0.0 || a_d < 0.0) {
    throw std::invalid_argument("modulation amplitudes must be >= 0");
  }
  if (!(mod_freq > 0.0)) throw std::invalid_argument("mod_freq must be > 0");
  if (tau < 0.0) throw std::invalid_argument("tau must be >= 0");
}

double correlate_numeric(const ModulationParams& params, double t_d,
                         int steps) {
  if (steps < 64) throw std::invalid_argument("correlate_numeric: steps < 64");
  params.validate();
  const double period = params.period();
  const double w = kTwoPi * params.mod_freq;
  const double h = period / steps;
  auto integrand = [&](double t) {
    const double d = params.a_d * std::sin(w * (t + t_d)) + params.b_d;
    const double r = params.a_r * std::sin(w * (t - params.tau)) + params.b_r;
    return d * r;
  };
  double sum = 0.5 * (integrand(0.0) + integrand(period));
  for (int i = 1; i < steps; ++i) sum += integrand(i * h);
  return sum * h;
}

CorrelationValue correlate_closed_form(const ModulationParams& params,
                                       double psi) {
  params.validate();
  const double period = params.period();
  CorrelationValue out;
  out.a_c = params.a_r * params.a_d * period / 2.0;
  out.b_c = params.b_r * params.b_d * period;
  out.value = out.a_c * std::cos(psi + params.phase()) + out.b_c;
  return out;
}

CorrelationSamples sample_buckets(const ModulationParams& params) {
  CorrelationSamples s;
  const auto c0 = correlate_closed_form(params, 0.0);
  s.c0 = c0.value;
  s.c1 = correlate_closed_form(params, std::numbers::pi / 2.0).value;
  s.c2 = correlate_closed_form(params, std::numbers::pi).value;
  s.c3 = correlate_closed_form(params, 3.0 * std::numbers::pi / 2.0).value;
  s.a_c = c0.a_c;
  s.b_c = c0.b_c;
  return s;
}

double estimate_phase(const CorrelationSamples& samples) {
  const double num = samples.c3 - samples.c1;
  const double den = samples.c0 - samples.c2;
  if (num == 0.0 && den == 0.0) {
    throw DegenerateSamples("zero-amplitude correlation: phase undefined");
  }
  return wrap_phase(std::atan2(num, den));
}

double estimate_phase(std::span<const double> buckets) {
  const std::size_t n = buckets.size();
  if (n < 3) throw std::invalid_argument("estimate_phase: need >= 3 buckets");
  if (n == 4) {
    return estimate_phase(
        CorrelationSamples{buckets[0], buckets[1], buckets[2], buckets[3]});
  }
  double re = 0.0;
  double im = 0.0;
  double mass = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double psi = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    re += buckets[j] * std::cos(psi);
    im -= buckets[j] * std::sin(psi);
    mass += std::fabs(buckets[j]);
  }
  // cos/sin of the bucket angles are inexact, so equal buckets leave a
  // residue of a few ulps instead of zero
  const double floor = 4.0 * static_cast<double>(n) *
                       std::numeric_limits<double>::epsilon() * mass;
  if (std::hypot(re, im) <= floor) {
    throw DegenerateSamples("zero-amplitude correlation: phase undefined");
  }
  return wrap_phase(std::atan2(im, re));
}

double phase_to_depth(double phi, double mod_freq) {
  if (!(phi >= 0.0 && phi < kTwoPi)) {
    throw std::invalid_argument("phase_to_depth: phi outside [0, 2 pi)");
  }
  if (!(mod_freq > 0.0)) throw std::invalid_argument("mod_freq must be > 0");
  return kSpeedOfLight * phi / (4.0 * std::numbers::pi * mod_freq);
}

double ambiguity_range(double mod_freq) {
  if (!(mod_freq > 0.0)) throw std::invalid_argument("mod_freq must be > 0");
  return kSpeedOfLight / (2.0 * mod_freq);
}

CorrelationSamples superpose_interference(const ModulationParams& own,
                                          const ModulationParams& interferer,
                                          double overlap_fraction,
                                          bool coherent,
                                          double relative_phase) {
  if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0)) {
    throw std::invalid_argument("overlap_fraction outside [0, 1]");
  }
  interferer.validate();
  if (coherent && interferer.mod_freq != own.mod_freq) {
    throw std::invalid_argument(
        "coherent superposition needs equal modulation frequencies");
  }
  CorrelationSamples s = sample_buckets(own);
  double* const buckets[] = {&s.c0, &s.c1, &s.c2, &s.c3};
  for (int j = 0; j < 4; ++j) {
    const double psi = j * std::numbers::pi / 2.0;
    *buckets[j] += overlap_fraction *
                   interference_contribution(own, interferer, psi, coherent,
                                             relative_phase);
  }
  return s;
}

PixelState integrate_pixel(const CorrelationSamples& samples,
                           double well_capacity) {
  if (!(well_capacity > 0.0)) {
    throw std::invalid_argument("well_capacity must be > 0");
  }
  PixelState p;
  p.accumulated = samples.buckets();
  p.well_capacity = well_capacity;
  p.saturated = any_saturated(p.accumulated, well_capacity);
  return p;
}

bool any_saturated(std::span<const double> buckets, double well_capacity) {
  for (double b : buckets) {
    if (b >= well_capacity) return true;
  }
  return false;
}

}  // namespace tofmux
