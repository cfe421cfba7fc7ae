#include "lagsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "lagsim/errors.hpp"

namespace lagsim {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      const std::string piece = trim(s.substr(start, i - start));
      if (!piece.empty()) out.push_back(piece);
      start = i + 1;
    }
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  // digits only: stoull would silently wrap a leading minus sign
  const bool digits = !v.empty() &&
                      std::all_of(v.begin(), v.end(), [](unsigned char c) {
                        return std::isdigit(c);
                      });
  if (digits) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      // overflow falls through to the error below
    }
  }
  throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" +
                    v + "'");
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

std::string fmt_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// Declarative key table: section -> allowed keys, with the setter logic
// centralised in apply_key below.
const std::map<std::string, std::vector<std::string>>& key_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"measure",
       {"family", "atoms", "rate_scale", "mean_effect", "scale", "delta",
        "lower_cut", "tail_coef", "tail_delta", "support"}},
      {"truncation", {"epsilon"}},
      {"fixation", {"kind", "sigma"}},
      {"speed",
       {"kind", "v", "mean", "amplitude", "period", "rates", "durations",
        "noise_scale"}},
      {"scenario", {"x0", "horizon", "output_grid_step", "event_cap", "log_rejected"}},
      {"run", {"seeds", "seed_list", "master_seed", "workers"}},
      {"outputs", {"directory", "formats", "emit_plot_script"}},
      {"analysis", {"boundary_tol", "return_level"}},
  };
  return table;
}

void apply_key(RunConfig& c, const std::string& section, const std::string& key,
               const std::string& value) {
  const auto sec = key_table().find(section);
  if (sec == key_table().end()) {
    throw ConfigError("unknown section '[" + section + "]'");
  }
  if (std::find(sec->second.begin(), sec->second.end(), key) ==
      sec->second.end()) {
    throw ConfigError("unknown key '" + section + "." + key + "'");
  }
  const std::string dotted = section + "." + key;

  if (section == "measure") {
    if (key == "family") c.measure_family = value;
    else if (key == "atoms") {
      c.atoms.clear();
      for (const std::string& pair : split(value, ',')) {
        const auto parts = split(pair, ':');
        if (parts.size() != 2) {
          throw ConfigError("key 'measure.atoms': expected 'location:weight' "
                            "pairs, got '" + pair + "'");
        }
        c.atoms.push_back({parse_double(dotted, parts[0]),
                           parse_double(dotted, parts[1])});
      }
    } else if (key == "rate_scale") c.rate_scale = parse_double(dotted, value);
    else if (key == "mean_effect") c.mean_effect = parse_double(dotted, value);
    else if (key == "scale") c.scale = parse_double(dotted, value);
    else if (key == "delta") c.delta = parse_double(dotted, value);
    else if (key == "lower_cut") c.lower_cut = parse_double(dotted, value);
    else if (key == "tail_coef") c.tail_coef = parse_double(dotted, value);
    else if (key == "tail_delta") c.tail_delta = parse_double(dotted, value);
    else if (key == "support") {
      if (value == "positive") c.two_sided = false;
      else if (value == "two_sided") c.two_sided = true;
      else throw ConfigError("key 'measure.support': expected positive|two_sided");
    }
  } else if (section == "truncation") {
    if (value == "auto") {
      c.epsilon_auto = true;
      c.epsilon = 0.0;
    } else {
      c.epsilon_auto = false;
      c.epsilon = parse_double(dotted, value);
      if (c.epsilon < 0.0) throw ConfigError("key 'truncation.epsilon': must be >= 0");
    }
  } else if (section == "fixation") {
    if (key == "kind") c.fixation_kind = value;
    else c.sigma = parse_double(dotted, value);
  } else if (section == "speed") {
    if (key == "kind") c.speed_kind = value;
    else if (key == "v") c.v = parse_double(dotted, value);
    else if (key == "mean") c.speed_mean = parse_double(dotted, value);
    else if (key == "amplitude") c.amplitude = parse_double(dotted, value);
    else if (key == "period") c.period = parse_double(dotted, value);
    else if (key == "noise_scale") c.noise_scale = parse_double(dotted, value);
    else if (key == "rates") {
      c.rates.clear();
      for (const std::string& r : split(value, ',')) {
        c.rates.push_back(parse_double(dotted, r));
      }
    } else if (key == "durations") {
      c.durations.clear();
      for (const std::string& d : split(value, ',')) {
        c.durations.push_back(parse_double(dotted, d));
      }
    }
  } else if (section == "scenario") {
    if (key == "x0") c.x0 = parse_double(dotted, value);
    else if (key == "horizon") c.horizon = parse_double(dotted, value);
    else if (key == "output_grid_step") c.output_grid_step = parse_double(dotted, value);
    else if (key == "event_cap") c.event_cap = parse_u64(dotted, value);
    else if (key == "log_rejected") c.log_rejected = parse_bool(dotted, value);
  } else if (section == "run") {
    if (key == "seeds") c.seed_count = parse_u64(dotted, value);
    else if (key == "seed_list") {
      c.seed_list.clear();
      for (const std::string& s : split(value, ',')) {
        c.seed_list.push_back(parse_u64(dotted, s));
      }
    } else if (key == "master_seed") c.master_seed = parse_u64(dotted, value);
    else if (key == "workers") c.workers = static_cast<int>(parse_u64(dotted, value));
  } else if (section == "outputs") {
    if (key == "directory") c.out_dir = value;
    else if (key == "formats") {
      c.formats = split(value, ',');
      for (const std::string& f : c.formats) {
        if (f != "csv" && f != "jsonl" && f != "json-report") {
          throw ConfigError("key 'outputs.formats': unknown format '" + f + "'");
        }
      }
    } else c.emit_plot_script = parse_bool(dotted, value);
  } else if (section == "analysis") {
    if (key == "boundary_tol") c.boundary_tol = parse_double(dotted, value);
    else c.return_level = parse_double(dotted, value);
  }
}

}  // namespace

std::vector<std::uint64_t> RunConfig::seeds() const {
  if (!seed_list.empty()) return seed_list;
  if (seed_count == 0) throw ConfigError("key 'run.seeds': must be >= 1");
  std::vector<std::uint64_t> s(seed_count);
  for (std::uint64_t i = 0; i < seed_count; ++i) s[i] = i;
  return s;
}

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno) +
                          ": malformed section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      if (key_table().find(section) == key_table().end()) {
        throw ConfigError("unknown section '[" + section + "]'");
      }
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineno) +
                        ": key outside any section");
    }
    apply_key(c, section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[measure]\n";
  os << "family = " << c.measure_family << "\n";
  if (c.measure_family == "atoms") {
    os << "atoms = ";
    for (std::size_t i = 0; i < c.atoms.size(); ++i) {
      if (i) os << ", ";
      os << fmt_double(c.atoms[i].location) << ":" << fmt_double(c.atoms[i].weight);
    }
    os << "\n";
  } else if (c.measure_family == "exponential") {
    os << "rate_scale = " << fmt_double(c.rate_scale) << "\n";
    os << "mean_effect = " << fmt_double(c.mean_effect) << "\n";
  } else if (c.measure_family == "half_gaussian") {
    os << "rate_scale = " << fmt_double(c.rate_scale) << "\n";
    os << "scale = " << fmt_double(c.scale) << "\n";
  } else if (c.measure_family == "power_law") {
    os << "rate_scale = " << fmt_double(c.rate_scale) << "\n";
    os << "delta = " << fmt_double(c.delta) << "\n";
    os << "lower_cut = " << fmt_double(c.lower_cut) << "\n";
  } else if (c.measure_family == "small_jump_power_law") {
    os << "rate_scale = " << fmt_double(c.rate_scale) << "\n";
    os << "delta = " << fmt_double(c.delta) << "\n";
    os << "tail_coef = " << fmt_double(c.tail_coef) << "\n";
    os << "tail_delta = " << fmt_double(c.tail_delta) << "\n";
  }
  os << "support = " << (c.two_sided ? "two_sided" : "positive") << "\n";

  os << "\n[truncation]\n";
  os << "epsilon = " << (c.epsilon_auto ? "auto" : fmt_double(c.epsilon)) << "\n";

  os << "\n[fixation]\n";
  os << "kind = " << c.fixation_kind << "\n";
  os << "sigma = " << fmt_double(c.sigma) << "\n";

  os << "\n[speed]\n";
  os << "kind = " << c.speed_kind << "\n";
  if (c.speed_kind == "constant") {
    os << "v = " << fmt_double(c.v) << "\n";
  } else if (c.speed_kind == "sinusoidal") {
    os << "mean = " << fmt_double(c.speed_mean) << "\n";
    os << "amplitude = " << fmt_double(c.amplitude) << "\n";
    os << "period = " << fmt_double(c.period) << "\n";
  } else if (c.speed_kind == "piecewise") {
    os << "rates = ";
    for (std::size_t i = 0; i < c.rates.size(); ++i) {
      if (i) os << ", ";
      os << fmt_double(c.rates[i]);
    }
    os << "\ndurations = ";
    for (std::size_t i = 0; i < c.durations.size(); ++i) {
      if (i) os << ", ";
      os << fmt_double(c.durations[i]);
    }
    os << "\n";
  }
  if (c.noise_scale != 0.0) {
    os << "noise_scale = " << fmt_double(c.noise_scale) << "\n";
  }

  os << "\n[scenario]\n";
  os << "x0 = " << fmt_double(c.x0) << "\n";
  os << "horizon = " << fmt_double(c.horizon) << "\n";
  os << "output_grid_step = " << fmt_double(c.output_grid_step) << "\n";
  os << "event_cap = " << c.event_cap << "\n";
  os << "log_rejected = " << (c.log_rejected ? "true" : "false") << "\n";

  os << "\n[run]\n";
  if (!c.seed_list.empty()) {
    os << "seed_list = ";
    for (std::size_t i = 0; i < c.seed_list.size(); ++i) {
      if (i) os << ", ";
      os << c.seed_list[i];
    }
    os << "\n";
  } else {
    os << "seeds = " << c.seed_count << "\n";
  }
  os << "master_seed = " << c.master_seed << "\n";
  os << "workers = " << c.workers << "\n";

  os << "\n[outputs]\n";
  if (!c.out_dir.empty()) os << "directory = " << c.out_dir << "\n";
  os << "formats = ";
  for (std::size_t i = 0; i < c.formats.size(); ++i) {
    if (i) os << ", ";
    os << c.formats[i];
  }
  os << "\n";
  os << "emit_plot_script = " << (c.emit_plot_script ? "true" : "false") << "\n";

  os << "\n[analysis]\n";
  os << "boundary_tol = " << fmt_double(c.boundary_tol) << "\n";
  os << "return_level = " << fmt_double(c.return_level) << "\n";
  return os.str();
}

void set_config_key(RunConfig& c, const std::string& dotted_key,
                    const std::string& value) {
  const std::size_t dot = dotted_key.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("expected 'section.key', got '" + dotted_key + "'");
  }
  apply_key(c, dotted_key.substr(0, dot), dotted_key.substr(dot + 1), value);
}

MutationMeasure build_measure(const RunConfig& c) {
  const SupportSign sign =
      c.two_sided ? SupportSign::two_sided : SupportSign::positive_only;
  if (c.measure_family == "atoms") {
    return MutationMeasure::discrete_atoms(c.atoms);
  }
  if (c.measure_family == "exponential") {
    return MutationMeasure::exponential(c.rate_scale, c.mean_effect, sign);
  }
  if (c.measure_family == "half_gaussian") {
    return MutationMeasure::half_gaussian(c.rate_scale, c.scale, sign);
  }
  if (c.measure_family == "power_law") {
    return MutationMeasure::power_law_tail(c.rate_scale, c.delta, c.lower_cut, sign);
  }
  if (c.measure_family == "small_jump_power_law") {
    return MutationMeasure::small_jump_power_law(c.rate_scale, c.delta,
                                                 c.tail_coef, c.tail_delta, sign);
  }
  throw ConfigError("key 'measure.family': unknown family '" + c.measure_family + "'");
}

FixationModel build_fixation(const RunConfig& c) {
  if (c.fixation_kind == "kimura") return FixationModel::kimura(c.sigma);
  if (c.fixation_kind == "haldane") return FixationModel::haldane(c.sigma);
  if (c.fixation_kind == "step_limit") return FixationModel::step_limit();
  throw ConfigError("key 'fixation.kind': unknown kind '" + c.fixation_kind + "'");
}

SpeedModel build_speed(const RunConfig& c) {
  SpeedModel base;
  if (c.speed_kind == "constant") {
    base = SpeedModel::constant(c.v);
  } else if (c.speed_kind == "sinusoidal") {
    base = SpeedModel::sinusoid(c.speed_mean, c.amplitude, c.period);
  } else if (c.speed_kind == "piecewise") {
    base = SpeedModel::piecewise(c.rates, c.durations);
  } else {
    throw ConfigError("key 'speed.kind': unknown kind '" + c.speed_kind + "'");
  }
  return c.noise_scale > 0.0 ? base.with_noise(c.noise_scale) : base;
}

Scenario build_scenario(const RunConfig& c) {
  Scenario sc;
  sc.measure = build_measure(c);
  sc.model = build_fixation(c);
  sc.speed = build_speed(c);
  sc.trunc = c.epsilon_auto
                 ? TruncationPolicy::automatic(sc.measure, sc.speed.vbar())
                 : TruncationPolicy::resolve(sc.measure, c.epsilon);
  sc.x0 = c.x0;
  sc.horizon = c.horizon;
  sc.output_grid_step = c.output_grid_step;
  sc.event_cap = c.event_cap;
  sc.log_rejected = c.log_rejected;
  sc.validate();
  return sc;
}

}  // namespace lagsim
