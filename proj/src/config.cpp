#include "qplasma/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "qplasma/diagio.hpp"

namespace qplasma::config {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool to_double(const std::string& s, double& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

bool to_int(const std::string& s, int& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool to_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1" || s == "yes") {
    out = true;
    return true;
  }
  if (s == "false" || s == "0" || s == "no") {
    out = false;
    return true;
  }
  return false;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += diagio::format_double(v[i]);
  }
  return s;
}

struct Field {
  std::function<bool(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
  const char* type;
};

template <class M>
Field dbl(M ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, const std::string& v) { return to_double(v, c.*m); },
          [m](const ScenarioConfig& c) { return diagio::format_double(c.*m); }, "number"};
}
template <class M>
Field integer(M ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, const std::string& v) { return to_int(v, c.*m); },
          [m](const ScenarioConfig& c) { return std::to_string(c.*m); }, "integer"};
}
template <class M>
Field str(M ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, const std::string& v) {
            c.*m = v;
            return !v.empty();
          },
          [m](const ScenarioConfig& c) { return c.*m; }, "string"};
}
Field boolean(bool ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, const std::string& v) { return to_bool(v, c.*m); },
          [m](const ScenarioConfig& c) { return std::string(c.*m ? "true" : "false"); }, "boolean"};
}
Field list(std::vector<double> ScenarioConfig::*m) {
  return {[m](ScenarioConfig& c, const std::string& v) {
            std::vector<double> out;
            if (!trim(v).empty()) {
              std::stringstream ss(v);
              std::string item;
              while (std::getline(ss, item, ',')) {
                double x;
                if (!to_double(trim(item), x)) return false;
                out.push_back(x);
              }
            }
            c.*m = std::move(out);
            return true;
          },
          [m](const ScenarioConfig& c) { return join(c.*m); }, "number list"};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> f = {
      {"model", str(&ScenarioConfig::model)},
      {"equilibrium", str(&ScenarioConfig::equilibrium)},
      {"t_over_tf", dbl(&ScenarioConfig::t_over_tf)},
      {"alpha", dbl(&ScenarioConfig::alpha)},
      {"K", dbl(&ScenarioConfig::K)},
      {"wavelengths", integer(&ScenarioConfig::wavelengths)},
      {"H", dbl(&ScenarioConfig::H)},
      {"nx", integer(&ScenarioConfig::nx)},
      {"nv", integer(&ScenarioConfig::nv)},
      {"v_max", dbl(&ScenarioConfig::v_max)},
      {"dt", dbl(&ScenarioConfig::dt)},
      {"t_end", dbl(&ScenarioConfig::t_end)},
      {"diag_every", integer(&ScenarioConfig::diag_every)},
      {"snapshot_every", integer(&ScenarioConfig::snapshot_every)},
      {"snapshot_final", boolean(&ScenarioConfig::snapshot_final)},
      {"interpolation", str(&ScenarioConfig::interpolation)},
      {"init", str(&ScenarioConfig::init)},
      {"streams", list(&ScenarioConfig::streams)},
      {"occupations", str(&ScenarioConfig::occupations)},
      {"gamma", dbl(&ScenarioConfig::gamma)},
      {"p0", dbl(&ScenarioConfig::p0)},
      {"vortex_threshold", dbl(&ScenarioConfig::vortex_threshold)},
      {"vortex_min_v_cells", integer(&ScenarioConfig::vortex_min_v_cells)},
      {"vortex_min_x_fraction", dbl(&ScenarioConfig::vortex_min_x_fraction)},
      {"out_dir", str(&ScenarioConfig::out_dir)},
  };
  return f;
}

const Field* find_field(const std::string& key) {
  for (const auto& [k, f] : fields())
    if (k == key) return &f;
  return nullptr;
}

void assign(ScenarioConfig& c, const std::string& key, const std::string& value, int line,
            std::vector<ConfigIssue>& issues, std::map<std::string, int>& lines) {
  const Field* f = find_field(key);
  if (!f) {
    issues.push_back({line, key, "unknown key"});
    return;
  }
  if (!f->set(c, value)) {
    issues.push_back({line, key, std::string("expected ") + f->type + ", got '" + value + "'"});
    return;
  }
  lines[key] = line;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

double ScenarioConfig::box_length() const { return 2.0 * std::numbers::pi * wavelengths / K; }

PhaseSpaceGrid ScenarioConfig::grid() const {
  PhaseSpaceGrid g;
  g.space.length = box_length();
  g.space.nx = static_cast<std::size_t>(nx);
  g.nv = static_cast<std::size_t>(nv);
  g.v_max = v_max;
  return g;
}

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : DomainError([&] {
        std::ostringstream msg;
        msg << issues.size() << " configuration error(s)";
        for (const auto& i : issues) {
          msg << "\n  ";
          if (i.line > 0) msg << "line " << i.line << ": ";
          msg << i.key << ": " << i.message;
        }
        return msg.str();
      }()),
      issues_(std::move(issues)) {}

std::vector<ConfigIssue> validate(const ScenarioConfig& c) {
  std::vector<ConfigIssue> out;
  auto bad = [&](const std::string& key, const std::string& msg) { out.push_back({0, key, msg}); };
  if (c.model != "vlasov" && c.model != "wigner" && c.model != "hartree" && c.model != "fluid")
    bad("model", "must be one of vlasov, wigner, hartree, fluid");
  if (c.equilibrium != "waterbag1d" && c.equilibrium != "fd3d_projected_T0" && c.equilibrium != "fd3d_projected")
    bad("equilibrium", "must be one of waterbag1d, fd3d_projected_T0, fd3d_projected");
  if (c.equilibrium == "fd3d_projected" && !(c.t_over_tf > 0.0 && c.t_over_tf <= 1.0))
    bad("t_over_tf", "must lie in (0, 1] for fd3d_projected");
  if (!(c.t_over_tf >= 0.0 && c.t_over_tf <= 1.0)) bad("t_over_tf", "must lie in [0, 1]");
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) bad("alpha", "must lie in [0, 1]");
  if (!(c.K > 0.0)) bad("K", "must be positive");
  if (c.wavelengths < 1) bad("wavelengths", "must be a positive integer");
  if (!(c.H >= 0.0)) bad("H", "must be non-negative");
  if ((c.model == "wigner" || c.model == "hartree" || c.model == "fluid") && !(c.H > 0.0))
    bad("H", "must be positive for model " + c.model);
  if (c.nx < 8 || !is_power_of_two(c.nx)) bad("nx", "must be a power of two >= 8");
  if (c.nv < 8 || c.nv % 2 != 0) bad("nv", "must be even and >= 8");
  if (!(c.v_max > 0.0)) bad("v_max", "must be positive");
  if (!(c.dt > 0.0)) bad("dt", "must be positive");
  if (!(c.t_end > 0.0)) bad("t_end", "must be positive");
  if (c.dt > 0.0 && c.t_end > 0.0) {
    const double steps = c.t_end / c.dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * steps) bad("t_end", "must be an integer multiple of dt");
  }
  if (c.diag_every < 1) bad("diag_every", "must be >= 1");
  if (c.snapshot_every < 0) bad("snapshot_every", "must be >= 0");
  if (c.interpolation != "spline" && c.interpolation != "spectral") bad("interpolation", "must be spline or spectral");
  if (c.init != "equilibrium" && c.init != "mixture") bad("init", "must be equilibrium or mixture");
  if (c.occupations != "fd" && c.occupations != "uniform") bad("occupations", "must be fd or uniform");
  if ((c.model == "hartree" || (c.model == "wigner" && c.init == "mixture")) && c.streams.empty())
    bad("streams", "needs at least one stream velocity for model " + c.model);
  if (!(c.gamma > 1.0)) bad("gamma", "must exceed 1");
  if (!(c.p0 >= 0.0)) bad("p0", "must be non-negative");
  if (!(c.vortex_threshold > 0.0 && c.vortex_threshold < 1.0)) bad("vortex_threshold", "must lie in (0, 1)");
  if (c.vortex_min_v_cells < 1) bad("vortex_min_v_cells", "must be >= 1");
  if (!(c.vortex_min_x_fraction > 0.0 && c.vortex_min_x_fraction <= 1.0))
    bad("vortex_min_x_fraction", "must lie in (0, 1]");
  return out;
}

ScenarioConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  ScenarioConfig c;
  std::vector<ConfigIssue> issues;
  std::map<std::string, int> lines;
  std::istringstream is{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      issues.push_back({lineno, line, "expected 'key = value'"});
      continue;
    }
    assign(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno, issues, lines);
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      issues.push_back({0, o, "override must be key=value"});
      continue;
    }
    assign(c, trim(o.substr(0, eq)), trim(o.substr(eq + 1)), 0, issues, lines);
  }
  for (auto issue : validate(c)) {
    const auto it = lines.find(issue.key);
    if (it != lines.end()) issue.line = it->second;
    issues.push_back(std::move(issue));
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

ScenarioConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DomainError("cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), overrides);
}

std::string serialize(const ScenarioConfig& c) {
  std::string out;
  for (const auto& [k, f] : fields()) out += k + " = " + f.get(c) + "\n";
  return out;
}

std::string config_hash(const ScenarioConfig& c) {
  ScenarioConfig copy = c;
  copy.out_dir = "";
  std::string text;
  for (const auto& [k, f] : fields())
    if (k != "out_dir") text += k + " = " + f.get(copy) + "\n";
  return diagio::fnv1a_hex(text);
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, f] : fields()) k.push_back(name);
    return k;
  }();
  return keys;
}

}  // namespace qplasma::config
