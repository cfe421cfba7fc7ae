#include "lagsim/speed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "lagsim/errors.hpp"

namespace lagsim {

SpeedModel SpeedModel::constant(double v) {
  if (v < 0.0) throw ConfigError("constant speed v must be >= 0");
  SpeedModel s;
  s.kind = SpeedKind::constant;
  s.v = v;
  return s;
}

SpeedModel SpeedModel::piecewise(std::vector<double> rates,
                                 std::vector<double> durations) {
  if (rates.empty() || rates.size() != durations.size()) {
    throw ConfigError("piecewise speed needs matching rates and durations");
  }
  for (double d : durations) {
    if (!(d > 0.0)) throw ConfigError("piecewise durations must be > 0");
  }
  SpeedModel s;
  s.kind = SpeedKind::piecewise;
  s.rates = std::move(rates);
  s.durations = std::move(durations);
  return s;
}

SpeedModel SpeedModel::sinusoid(double mean, double amplitude, double period) {
  if (!(period > 0.0)) throw ConfigError("sinusoidal period must be > 0");
  if (amplitude < 0.0) throw ConfigError("sinusoidal amplitude must be >= 0");
  SpeedModel s;
  s.kind = SpeedKind::sinusoidal;
  s.mean = mean;
  s.amplitude = amplitude;
  s.period = period;
  return s;
}

SpeedModel SpeedModel::with_noise(double noise_scale) const {
  if (noise_scale < 0.0) throw ConfigError("noise_scale must be >= 0");
  SpeedModel s = *this;
  s.noise_scale = noise_scale;
  return s;
}

bool SpeedModel::is_constant_rate() const {
  switch (kind) {
    case SpeedKind::constant: return true;
    case SpeedKind::sinusoidal: return amplitude == 0.0;
    case SpeedKind::piecewise:
      return std::all_of(rates.begin(), rates.end(),
                         [&](double r) { return r == rates.front(); });
  }
  return false;
}

double SpeedModel::vbar() const {
  switch (kind) {
    case SpeedKind::constant: return v;
    case SpeedKind::sinusoidal: return mean;
    case SpeedKind::piecewise: {
      const double total = std::accumulate(durations.begin(), durations.end(), 0.0);
      double s = 0.0;
      for (std::size_t i = 0; i < rates.size(); ++i) s += rates[i] * durations[i];
      return s / total;
    }
  }
  return 0.0;
}

double SpeedModel::v_sup() const {
  switch (kind) {
    case SpeedKind::constant: return v;
    case SpeedKind::sinusoidal: return mean + amplitude;
    case SpeedKind::piecewise: return *std::max_element(rates.begin(), rates.end());
  }
  return 0.0;
}

double SpeedModel::v_inf() const {
  switch (kind) {
    case SpeedKind::constant: return v;
    case SpeedKind::sinusoidal: return mean - amplitude;
    case SpeedKind::piecewise: return *std::min_element(rates.begin(), rates.end());
  }
  return 0.0;
}

double SpeedModel::cumulative(double t) const {
  switch (kind) {
    case SpeedKind::constant:
      return v * t;
    case SpeedKind::sinusoidal: {
      const double w = 2.0 * M_PI / period;
      return mean * t + amplitude / w * (1.0 - std::cos(w * t));
    }
    case SpeedKind::piecewise: {
      const double cycle = std::accumulate(durations.begin(), durations.end(), 0.0);
      double per_cycle = 0.0;
      for (std::size_t i = 0; i < rates.size(); ++i) {
        per_cycle += rates[i] * durations[i];
      }
      const double full = std::floor(t / cycle);
      double rem = t - full * cycle;
      double acc = full * per_cycle;
      for (std::size_t i = 0; i < rates.size() && rem > 0.0; ++i) {
        const double leg = std::min(rem, durations[i]);
        acc += rates[i] * leg;
        rem -= leg;
      }
      return acc;
    }
  }
  return 0.0;
}

double SpeedModel::displacement(double t0, double t1) const {
  if (kind == SpeedKind::constant) return v * (t1 - t0);
  return cumulative(t1) - cumulative(t0);
}

std::vector<double> SpeedModel::breakpoints_between(double t0, double t1) const {
  std::vector<double> pts;
  if (kind != SpeedKind::piecewise) return pts;
  const double cycle = std::accumulate(durations.begin(), durations.end(), 0.0);
  double base = std::floor(t0 / cycle) * cycle;
  while (base < t1) {
    double mark = base;
    for (double d : durations) {
      mark += d;
      if (mark > t0 && mark < t1) pts.push_back(mark);
    }
    base += cycle;
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::string SpeedModel::describe() const {
  std::ostringstream os;
  switch (kind) {
    case SpeedKind::constant:
      os << "constant(v=" << v << ")";
      break;
    case SpeedKind::sinusoidal:
      os << "sinusoid(mean=" << mean << ", amp=" << amplitude
         << ", period=" << period << ")";
      break;
    case SpeedKind::piecewise:
      os << "piecewise[" << rates.size() << " legs]";
      break;
  }
  if (noise_scale > 0.0) os << " + brownian(" << noise_scale << ")";
  return os.str();
}

}  // namespace lagsim
