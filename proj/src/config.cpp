#include "catline/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace catline {

namespace {

struct RawValue {
  std::string text;
  int line = 0;
};

using Section = std::map<std::string, RawValue>;
using RawConfig = std::map<std::string, Section>;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

[[noreturn]] void fail_at(int line, const std::string& msg) {
  std::ostringstream os;
  os << msg << " (line " << line << ")";
  throw ConfigError(os.str());
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Strip a trailing '#' comment, honoring quoted strings.
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

RawConfig tokenize(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail_at(lineno, "malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "system" && section != "drive" && section != "collision" &&
          section != "run") {
        fail_at(lineno, "unknown section [" + section + "]");
      }
      if (raw.count(section)) fail_at(lineno, "duplicate section [" + section + "]");
      raw[section] = {};
      continue;
    }
    if (section.empty()) fail_at(lineno, "key outside any section");
    size_t eq = s.find('=');
    if (eq == std::string::npos) fail_at(lineno, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail_at(lineno, "empty key");
    if (value.empty()) fail_at(lineno, "empty value for key '" + key + "'");
    if (raw[section].count(key)) {
      fail_at(lineno, "duplicate key '" + key + "' in [" + section + "]");
    }
    raw[section][key] = RawValue{value, lineno};
  }
  return raw;
}

// Typed consumption of raw values. Each getter erases the key so leftover
// keys can be reported as unknown.
class Reader {
 public:
  explicit Reader(RawConfig raw) : raw_(std::move(raw)) {}

  bool has(const std::string& sec, const std::string& key) const {
    auto s = raw_.find(sec);
    return s != raw_.end() && s->second.count(key) > 0;
  }

  std::optional<RawValue> take(const std::string& sec, const std::string& key) {
    auto s = raw_.find(sec);
    if (s == raw_.end()) return std::nullopt;
    auto it = s->second.find(key);
    if (it == s->second.end()) return std::nullopt;
    RawValue v = it->second;
    s->second.erase(it);
    return v;
  }

  double number(const std::string& sec, const std::string& key, double dflt) {
    auto v = take(sec, key);
    if (!v) return dflt;
    return parse_number(*v, key);
  }

  std::optional<double> number_opt(const std::string& sec,
                                   const std::string& key) {
    auto v = take(sec, key);
    if (!v) return std::nullopt;
    return parse_number(*v, key);
  }

  long integer(const std::string& sec, const std::string& key, long dflt) {
    auto v = take(sec, key);
    if (!v) return dflt;
    const double d = parse_number(*v, key);
    const long l = static_cast<long>(d);
    if (static_cast<double>(l) != d) {
      fail_at(v->line, "key '" + key + "' must be an integer");
    }
    return l;
  }

  std::uint64_t unsigned_integer(const std::string& sec, const std::string& key,
                                 std::uint64_t dflt) {
    auto v = take(sec, key);
    if (!v) return dflt;
    errno = 0;
    char* end = nullptr;
    const unsigned long long u = std::strtoull(v->text.c_str(), &end, 10);
    if (errno != 0 || end == v->text.c_str() || *end != '\0') {
      fail_at(v->line, "key '" + key + "' must be an unsigned integer");
    }
    return u;
  }

  bool boolean(const std::string& sec, const std::string& key, bool dflt) {
    auto v = take(sec, key);
    if (!v) return dflt;
    if (v->text == "true") return true;
    if (v->text == "false") return false;
    fail_at(v->line, "key '" + key + "' must be true or false");
  }

  std::optional<std::string> string_opt(const std::string& sec,
                                        const std::string& key) {
    auto v = take(sec, key);
    if (!v) return std::nullopt;
    if (v->text.size() < 2 || v->text.front() != '"' || v->text.back() != '"') {
      fail_at(v->line, "key '" + key + "' must be a quoted string");
    }
    return v->text.substr(1, v->text.size() - 2);
  }

  std::string string(const std::string& sec, const std::string& key,
                     const std::string& dflt) {
    auto s = string_opt(sec, key);
    return s ? *s : dflt;
  }

  std::vector<double> number_list(const std::string& sec,
                                  const std::string& key) {
    auto v = take(sec, key);
    if (!v) return {};
    std::vector<double> out;
    std::istringstream in(v->text);
    std::string item;
    while (std::getline(in, item, ',')) {
      RawValue rv{trim(item), v->line};
      if (rv.text.empty()) fail_at(v->line, "empty list item for '" + key + "'");
      out.push_back(parse_number(rv, key));
    }
    return out;
  }

  void check_consumed() const {
    for (const auto& [sec, keys] : raw_) {
      for (const auto& [key, v] : keys) {
        fail_at(v.line, "unknown key '" + key + "' in [" + sec + "]");
      }
    }
  }

  bool has_section(const std::string& sec) const { return raw_.count(sec) > 0; }

  void drop_section_if_empty(const std::string& sec) {
    auto it = raw_.find(sec);
    if (it != raw_.end() && it->second.empty()) raw_.erase(it);
  }

 private:
  static double parse_number(const RawValue& v, const std::string& key) {
    errno = 0;
    char* end = nullptr;
    const double d = std::strtod(v.text.c_str(), &end);
    if (errno != 0 || end == v.text.c_str() || *end != '\0' ||
        !std::isfinite(d)) {
      fail_at(v.line, "key '" + key + "' must be a decimal literal");
    }
    return d;
  }

  RawConfig raw_;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double target_eps2(const ScenarioConfig& c) {
  return c.scenario == Scenario::Ramp ? c.drive.eps2_0 : c.system.eps2;
}

double target_alpha(const ScenarioConfig& c) {
  const double e = target_eps2(c);
  if (e <= 0.0 || c.system.kerr <= 0.0) return 0.0;
  return std::sqrt(e / c.system.kerr);
}

bool uses_collisions(Scenario s) {
  return s == Scenario::Homogenize || s == Scenario::Classify;
}

}  // namespace

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::Stabilize: return "stabilize";
    case Scenario::Ramp: return "ramp";
    case Scenario::Homogenize: return "homogenize";
    case Scenario::Classify: return "classify";
  }
  fail("unreachable scenario");
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "stabilize") return Scenario::Stabilize;
  if (name == "ramp") return Scenario::Ramp;
  if (name == "homogenize") return Scenario::Homogenize;
  if (name == "classify") return Scenario::Classify;
  fail("unknown scenario '" + name + "'");
}

ScenarioConfig parse_config(const std::string& text,
                            std::optional<Scenario> scenario_override) {
  Reader r(tokenize(text));
  ScenarioConfig c;

  auto scenario_str = r.string_opt("run", "scenario");
  if (scenario_str) {
    c.scenario = scenario_from_name(*scenario_str);
    if (scenario_override && *scenario_override != c.scenario) {
      fail("config scenario '" + *scenario_str +
           "' does not match the requested scenario '" +
           scenario_name(*scenario_override) + "'");
    }
  } else if (scenario_override) {
    c.scenario = *scenario_override;
  } else {
    fail("scenario missing: set scenario in [run] or pass it on the command line");
  }

  // [system]
  if (!r.has("system", "k")) fail("required key 'k' missing in [system]");
  if (!r.has("system", "eps2")) fail("required key 'eps2' missing in [system]");
  c.system.kerr = r.number("system", "k", 0.0);
  c.system.eps2 = r.number("system", "eps2", 0.0);
  c.system.delta_ar = r.number("system", "delta_ar", 0.0);
  c.system.delta_ir = r.number("system", "delta_ir", c.system.delta_ar);
  c.system.kappa1 = r.number("system", "kappa1", 0.0);
  c.system.kappa2 = r.number("system", "kappa2", 0.0);
  c.system.omega_scale = r.number("system", "omega_scale", 37.7e9);

  // [drive]
  const std::string kind = r.string("drive", "kind", "constant");
  if (kind == "constant") {
    c.drive.kind = DriveSchedule::Kind::Constant;
  } else if (kind == "ramp") {
    c.drive.kind = DriveSchedule::Kind::Ramp;
  } else {
    fail("drive kind must be \"constant\" or \"ramp\" (got \"" + kind + "\")");
  }
  c.drive.eps2_0 = r.number("drive", "eps2_0",
                            c.drive.kind == DriveSchedule::Kind::Constant
                                ? c.system.eps2
                                : 0.0);
  c.drive.tau_ramp = r.number("drive", "tau_ramp", 0.0);

  // [run]
  if (!r.has("run", "dt")) fail("required key 'dt' missing in [run]");
  c.run.dt = r.number("run", "dt", 0.0);
  c.run.t_final = r.number("run", "t_final", 0.0);
  c.run.record_every = static_cast<int>(r.integer("run", "record_every", 100));
  c.run.window = static_cast<int>(r.integer("run", "window", 200));
  c.run.tol = r.number("run", "tol", 1e-3);
  c.run.out_dir = r.string("run", "out_dir", "out");
  c.run.seed = r.unsigned_integer("run", "seed", 1);

  // dim: integer or "auto".
  if (r.has("run", "dim")) {
    auto v = r.take("run", "dim");
    if (v->text == "\"auto\"" || v->text == "auto") {
      c.run.dim = required_dim(target_alpha(c));
    } else {
      errno = 0;
      char* end = nullptr;
      const long d = std::strtol(v->text.c_str(), &end, 10);
      if (errno != 0 || end == v->text.c_str() || *end != '\0') {
        fail_at(v->line, "key 'dim' must be an integer or \"auto\"");
      }
      c.run.dim = static_cast<int>(d);
    }
  } else {
    c.run.dim = required_dim(target_alpha(c));
  }

  // [collision]
  if (uses_collisions(c.scenario)) {
    if (!r.has("collision", "tau")) {
      fail("required key 'tau' missing in [collision]");
    }
    c.collision.eps_x = r.number("collision", "eps_x", 1e-3);
    c.collision.tau = r.number("collision", "tau", 0.0);
    c.collision.n_collisions =
        static_cast<int>(r.integer("collision", "n_collisions", 5000));
    const std::string model =
        r.string("collision", "reservoir_model", "logical-2level");
    if (model == "logical-2level") {
      c.collision.reservoir_model = ReservoirModel::Logical2Level;
    } else if (model == "full-fock") {
      c.collision.reservoir_model = ReservoirModel::FullFock;
    } else {
      fail("reservoir_model must be \"logical-2level\" or \"full-fock\"");
    }
    c.collision.probe_dissipation =
        r.boolean("collision", "probe_dissipation", true);
    const std::string mixing = r.string("collision", "mixing", "roundrobin");
    if (mixing == "roundrobin") {
      c.collision.mixing = MixingMode::RoundRobin;
    } else if (mixing == "random") {
      c.collision.mixing = MixingMode::SeededRandom;
    } else {
      fail("mixing must be \"roundrobin\" or \"random\"");
    }
    std::vector<double> thetas = r.number_list("collision", "theta");
    std::vector<double> phis = r.number_list("collision", "phi");
    std::vector<double> weights = r.number_list("collision", "weight");
    if (thetas.empty()) thetas.push_back(0.0);
    if (phis.empty()) phis.assign(thetas.size(), 0.0);
    if (weights.empty() && thetas.size() == 1) weights.push_back(1.0);
    if (phis.size() != thetas.size() || weights.size() != thetas.size()) {
      fail("theta, phi and weight lists must have the same length");
    }
    c.collision.reservoirs.clear();
    for (size_t i = 0; i < thetas.size(); ++i) {
      c.collision.reservoirs.push_back({thetas[i], phis[i], weights[i]});
    }
    c.collision.seed = c.run.seed;
    c.collision.dt = c.run.dt;
  } else if (r.has_section("collision")) {
    r.drop_section_if_empty("collision");
    if (r.has_section("collision")) {
      fail("section [collision] is not used by scenario '" +
           scenario_name(c.scenario) + "'");
    }
  }

  r.check_consumed();
  validate_config(c);
  return c;
}

ScenarioConfig load_config(const std::string& path,
                           std::optional<Scenario> scenario_override) {
  std::ifstream in(path);
  if (!in) fail("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), scenario_override);
}

void validate_config(const ScenarioConfig& c) {
  if (c.system.kerr <= 0.0) fail("k must be > 0");
  if (c.system.eps2 < 0.0) fail("eps2 must be >= 0");
  if (c.system.kappa1 < 0.0) fail("kappa1 must be >= 0");
  if (c.system.kappa2 < 0.0) fail("kappa2 must be >= 0");
  if (c.system.omega_scale <= 0.0) fail("omega_scale must be > 0");

  if (c.drive.kind == DriveSchedule::Kind::Ramp) {
    if (c.scenario != Scenario::Ramp) {
      fail("drive kind \"ramp\" is only valid for the ramp scenario");
    }
    if (c.drive.tau_ramp <= 0.0) fail("tau_ramp must be > 0 for a ramp drive");
    if (c.drive.eps2_0 <= 0.0) fail("eps2_0 must be > 0 for a ramp drive");
  } else {
    if (c.scenario == Scenario::Ramp) {
      fail("ramp scenario requires drive kind \"ramp\"");
    }
    if (c.drive.eps2_0 != c.system.eps2) {
      fail("eps2_0 must equal system eps2 for a constant drive");
    }
    if (c.drive.tau_ramp != 0.0) {
      fail("tau_ramp is only valid for a ramp drive");
    }
  }

  if (c.scenario == Scenario::Stabilize || c.scenario == Scenario::Homogenize ||
      c.scenario == Scenario::Classify) {
    // Stabilization and collision scenarios need a nonzero drive: the odd
    // cat is undefined at alpha = 0.
    if (c.system.eps2 <= 0.0) {
      fail("eps2 must be > 0 for scenario '" + scenario_name(c.scenario) + "'");
    }
  }

  if (c.run.dt <= 0.0) fail("dt must be > 0");
  if (c.run.dim < 2) fail("dim must be >= 2");
  const int needed = required_dim(target_alpha(c));
  if (c.run.dim < needed) {
    std::ostringstream os;
    os << "dim " << c.run.dim << " below sizing rule " << needed
       << " for target alpha = " << fmt(target_alpha(c));
    fail(os.str());
  }
  if (c.run.record_every < 1) fail("record_every must be >= 1");
  if (c.run.window < 2) fail("window must be >= 2");
  if (c.run.tol <= 0.0) fail("tol must be > 0");

  if (c.scenario == Scenario::Stabilize || c.scenario == Scenario::Ramp) {
    if (c.run.t_final <= 0.0) fail("t_final must be > 0");
  } else if (c.run.t_final != 0.0) {
    fail("t_final is only used by stabilize and ramp scenarios");
  }

  if (uses_collisions(c.scenario)) {
    if (c.collision.eps_x < 0.0) fail("eps_x must be >= 0");
    if (c.collision.tau <= 0.0) fail("tau must be > 0");
    if (c.collision.n_collisions < 1) fail("n_collisions must be >= 1");
    if (c.collision.reservoirs.empty()) {
      fail("at least one reservoir (theta/phi/weight) required");
    }
    double wsum = 0.0;
    for (const auto& rspec : c.collision.reservoirs) {
      if (rspec.weight < 0.0) fail("weights must be >= 0");
      wsum += rspec.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-12) fail("weights must sum to 1");
    if (c.collision.seed != c.run.seed) fail("collision seed must match run seed");
    if (c.collision.dt != c.run.dt) fail("collision dt must match run dt");
  }
}

std::string render_config(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "[system]\n";
  os << "k = " << fmt(c.system.kerr) << "\n";
  os << "eps2 = " << fmt(c.system.eps2) << "\n";
  os << "delta_ar = " << fmt(c.system.delta_ar) << "\n";
  os << "delta_ir = " << fmt(c.system.delta_ir) << "\n";
  os << "kappa1 = " << fmt(c.system.kappa1) << "\n";
  os << "kappa2 = " << fmt(c.system.kappa2) << "\n";
  os << "omega_scale = " << fmt(c.system.omega_scale) << "\n";
  os << "\n[drive]\n";
  os << "kind = \""
     << (c.drive.kind == DriveSchedule::Kind::Constant ? "constant" : "ramp")
     << "\"\n";
  os << "eps2_0 = " << fmt(c.drive.eps2_0) << "\n";
  if (c.drive.kind == DriveSchedule::Kind::Ramp) {
    os << "tau_ramp = " << fmt(c.drive.tau_ramp) << "\n";
  }
  if (uses_collisions(c.scenario)) {
    os << "\n[collision]\n";
    os << "eps_x = " << fmt(c.collision.eps_x) << "\n";
    os << "tau = " << fmt(c.collision.tau) << "\n";
    os << "n_collisions = " << c.collision.n_collisions << "\n";
    os << "reservoir_model = \""
       << (c.collision.reservoir_model == ReservoirModel::Logical2Level
               ? "logical-2level"
               : "full-fock")
       << "\"\n";
    os << "probe_dissipation = "
       << (c.collision.probe_dissipation ? "true" : "false") << "\n";
    os << "mixing = \""
       << (c.collision.mixing == MixingMode::RoundRobin ? "roundrobin"
                                                        : "random")
       << "\"\n";
    auto join = [&](auto get) {
      std::string s;
      for (size_t i = 0; i < c.collision.reservoirs.size(); ++i) {
        if (i) s += ", ";
        s += fmt(get(c.collision.reservoirs[i]));
      }
      return s;
    };
    os << "theta = " << join([](const ReservoirSpec& r) { return r.theta; })
       << "\n";
    os << "phi = " << join([](const ReservoirSpec& r) { return r.phi; }) << "\n";
    os << "weight = " << join([](const ReservoirSpec& r) { return r.weight; })
       << "\n";
  }
  os << "\n[run]\n";
  os << "scenario = \"" << scenario_name(c.scenario) << "\"\n";
  os << "dim = " << c.run.dim << "\n";
  if (c.scenario == Scenario::Stabilize || c.scenario == Scenario::Ramp) {
    os << "t_final = " << fmt(c.run.t_final) << "\n";
  }
  os << "dt = " << fmt(c.run.dt) << "\n";
  os << "record_every = " << c.run.record_every << "\n";
  os << "window = " << c.run.window << "\n";
  os << "tol = " << fmt(c.run.tol) << "\n";
  os << "out_dir = \"" << c.run.out_dir << "\"\n";
  os << "seed = " << c.run.seed << "\n";
  return os.str();
}

}  // namespace catline
