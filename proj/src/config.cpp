#include "uavinspect/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "uavinspect/errors.hpp"

namespace uavinspect {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "mesh", "region_min", "region_max", "initial_positions", "agents", "d_proj",
      "k_p",  "k_d",        "mu_o",       "d_o",               "r",      "eps",
      "alpha", "beta",      "dt",         "t_max",             "grid_h", "u_max",
      "log",  "summary"};
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string format_real(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

double to_real(const std::string& key, const std::string& token) {
  double value = 0.0;
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    throw ParseError("config key '" + key + "': '" + token + "' is not a number");
  }
  return value;
}

std::vector<double> to_reals(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  std::vector<double> out;
  for (std::string token; in >> token;) out.push_back(to_real(key, token));
  return out;
}

Vec3 to_vec(const std::string& key, const std::string& text) {
  const auto v = to_reals(key, text);
  if (v.size() != 3) throw ParseError("config key '" + key + "' needs exactly 3 numbers");
  return {v[0], v[1], v[2]};
}

std::vector<Vec3> to_vec_list(const std::string& key, const std::string& text) {
  std::vector<Vec3> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ';');) {
    if (trim(item).empty()) continue;
    out.push_back(to_vec(key, item));
  }
  if (out.empty()) throw ParseError("config key '" + key + "' lists no positions");
  return out;
}

std::string vec_text(const Vec3& v) {
  return format_real(v.x) + " " + format_real(v.y) + " " + format_real(v.z);
}

void split_assignment(const std::string& line, std::map<std::string, std::string>& entries,
                      const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string::npos) throw ParseError(where + ": expected 'key = value'");
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (!known_keys().contains(key)) throw ParseError(where + ": unknown config key '" + key + "'");
  if (value.empty()) throw ParseError(where + ": config key '" + key + "' has no value");
  entries[key] = value;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& text) {
  std::filesystem::path p(text);
  if (p.is_relative() && !base.empty()) p = base / p;
  return p;
}

void require_positive(const std::string& key, double value) {
  if (!(value > 0.0)) throw ParseError("config key '" + key + "' must be positive");
}

}  // namespace

Scenario parse_config(std::istream& in, const std::vector<std::string>& overrides,
                      const std::filesystem::path& base_dir) {
  std::map<std::string, std::string> entries;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    split_assignment(text, entries, "line " + std::to_string(line));
  }
  for (const std::string& o : overrides) split_assignment(o, entries, "override '" + o + "'");

  for (const char* key : {"mesh", "region_min", "region_max", "initial_positions"}) {
    if (!entries.contains(key)) {
      throw ParseError(std::string("missing required config key '") + key + "'");
    }
  }

  auto real_or = [&](const std::string& key, double fallback) {
    const auto it = entries.find(key);
    const double value = it == entries.end() ? fallback : to_real(key, it->second);
    require_positive(key, value);
    return value;
  };

  Scenario s;
  s.mesh_path = resolve(base_dir, entries["mesh"]);
  s.region = {to_vec("region_min", entries["region_min"]),
              to_vec("region_max", entries["region_max"])};
  s.initial_positions = to_vec_list("initial_positions", entries["initial_positions"]);
  if (entries.contains("agents")) {
    const double count = to_real("agents", entries["agents"]);
    if (count != static_cast<double>(s.initial_positions.size())) {
      throw ParseError("config key 'agents' says " + entries["agents"] + " but " +
                       std::to_string(s.initial_positions.size()) + " positions are listed");
    }
  }
  s.d_proj = real_or("d_proj", s.d_proj);
  s.gains.k_p = real_or("k_p", s.gains.k_p);
  s.gains.k_d = real_or("k_d", s.gains.k_d);
  s.gains.mu_o = real_or("mu_o", s.gains.mu_o);
  s.gains.d_o = real_or("d_o", s.gains.d_o);
  s.gains.r = real_or("r", s.gains.r);
  s.gains.eps = real_or("eps", s.gains.mu_o);
  s.alpha = real_or("alpha", s.alpha);
  s.beta = real_or("beta", s.beta);
  s.dt = real_or("dt", s.dt);
  if (s.dt > StepParams::kMaxDt) throw ParseError("config key 'dt' must not exceed 0.1 s");
  s.grid_h = real_or("grid_h", s.grid_h);
  s.u_max = real_or("u_max", s.u_max);
  if (entries.contains("t_max")) {
    s.t_max = to_real("t_max", entries["t_max"]);
    if (s.t_max < 0.0) throw ParseError("config key 't_max' must be non-negative");
  }
  if (entries.contains("log")) s.log_path = resolve(base_dir, entries["log"]);
  if (entries.contains("summary")) s.summary_path = resolve(base_dir, entries["summary"]);
  try {
    s.region.validate();
  } catch (const InvariantError&) {
    throw ParseError("config keys 'region_min'/'region_max': min must be below max on every axis");
  }
  return s;
}

Scenario load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path.string());
  return parse_config(in, overrides, path.parent_path());
}

void emit_config(std::ostream& out, const Scenario& s, const std::filesystem::path& base_dir) {
  auto rel = [&](const std::filesystem::path& p) {
    if (base_dir.empty() || p.is_relative()) return p.generic_string();
    const auto r = p.lexically_relative(base_dir);
    const bool inside = !r.empty() && *r.begin() != "..";
    return (inside ? r : p).generic_string();
  };
  out << "# distances in m, times in s, accelerations in m/s^2\n";
  out << "mesh = " << rel(s.mesh_path) << '\n';
  out << "region_min = " << vec_text(s.region.min) << '\n';
  out << "region_max = " << vec_text(s.region.max) << '\n';
  out << "agents = " << s.initial_positions.size() << '\n';
  out << "initial_positions = ";
  for (std::size_t i = 0; i < s.initial_positions.size(); ++i) {
    out << (i ? "; " : "") << vec_text(s.initial_positions[i]);
  }
  out << '\n';
  out << "d_proj = " << format_real(s.d_proj) << '\n';
  out << "k_p = " << format_real(s.gains.k_p) << '\n';
  out << "k_d = " << format_real(s.gains.k_d) << '\n';
  out << "mu_o = " << format_real(s.gains.mu_o) << '\n';
  out << "d_o = " << format_real(s.gains.d_o) << '\n';
  out << "r = " << format_real(s.gains.r) << "  # m^2, threshold on 0.5 |q_bar - p|^2\n";
  if (s.gains.eps != s.gains.mu_o) out << "eps = " << format_real(s.gains.eps) << '\n';
  out << "alpha = " << format_real(s.alpha) << '\n';
  out << "beta = " << format_real(s.beta) << '\n';
  out << "dt = " << format_real(s.dt) << '\n';
  out << "t_max = " << format_real(s.t_max) << '\n';
  out << "grid_h = " << format_real(s.grid_h) << '\n';
  out << "u_max = " << format_real(s.u_max) << '\n';
  if (!s.log_path.empty()) out << "log = " << rel(s.log_path) << '\n';
  if (!s.summary_path.empty()) out << "summary = " << rel(s.summary_path) << '\n';
}

}  // namespace uavinspect
