#include "holosim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "holosim/error.hpp"

namespace holosim {

namespace {

struct KeySpec {
  const char* name;  // section.key
  ValueKind kind;
  const char* default_text;
};

// Figure defaults: r = 2 for the coupling sweep, lambda*tau = 1e-3 for the
// squeezing sweep.
constexpr KeySpec kSchema[] = {
    {"general.seed", ValueKind::Integer, "1"},
    {"general.workers", ValueKind::Integer, "0"},
    {"general.cutoff", ValueKind::Integer, "0"},
    {"coupling.r", ValueKind::Number, "2"},
    {"coupling.M", ValueKind::List, "0, 0.5, 1, 2"},
    {"coupling.lambda_tau", ValueKind::Sweep, "log(1e-6, 1e-2, 41)"},
    {"coupling.zero_endpoint", ValueKind::Bool, "true"},
    {"squeezing.lambda_tau", ValueKind::Number, "1e-3"},
    {"squeezing.M", ValueKind::List, "0, 0.5, 1, 2"},
    {"squeezing.r", ValueKind::Sweep, "linear(0.25, 3, 56)"},
    {"modccr.epsilon", ValueKind::List, "0.01, 0.05, 0.1"},
    {"modccr.r", ValueKind::Sweep, "linear(0.1, 3, 30)"},
    {"modccr.fock_r_max", ValueKind::Number, "1.2"},
    {"modccr.fock_tail_tol", ValueKind::Number, "1e-14"},
    {"phase-mc.r", ValueKind::Number, "0.6"},
    {"phase-mc.mu", ValueKind::Number, "0.8"},
    {"phase-mc.sigma", ValueKind::Number, "1e-2"},
    {"phase-mc.rho", ValueKind::List, "0, 0.5"},
    {"phase-mc.samples", ValueKind::Integer, "100000"},
    {"phase-mc.cutoff", ValueKind::Integer, "12"},
    {"phase-mc.step", ValueKind::Number, "1e-3"},
    {"validate.glauber_nodes", ValueKind::Integer, "48"},
};

const KeySpec* find_spec(const std::string& name) {
  for (const KeySpec& s : kSchema) {
    if (name == s.name) return &s;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + s + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) out.push_back(parse_double(part));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::vector<double> parse_grid(const std::string& s) {
  const bool is_log = s.rfind("log(", 0) == 0;
  const bool is_linear = s.rfind("linear(", 0) == 0;
  if (!is_log && !is_linear) return parse_list(s);
  if (s.back() != ')') throw std::invalid_argument("grid must end with ')'");
  const std::string inner = s.substr(s.find('(') + 1, s.size() - s.find('(') - 2);
  const auto parts = split(inner, ',');
  if (parts.size() != 3) throw std::invalid_argument("grid needs (start, stop, points)");
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const std::int64_t points = parse_int(parts[2]);
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (!(stop > start)) throw std::invalid_argument("grid needs stop > start");
  if (is_log && start <= 0.0) throw std::invalid_argument("log grid needs start > 0");
  std::vector<double> out(static_cast<std::size_t>(points));
  // weighted endpoints rather than start + k*step: decade and round grid
  // points (1e-3, r = 2) come out exact
  const double lo = is_log ? std::log10(start) : start;
  const double hi = is_log ? std::log10(stop) : stop;
  const auto n = static_cast<double>(points - 1);
  for (std::int64_t k = 0; k < points; ++k) {
    const auto kd = static_cast<double>(k);
    const double x = (lo * (n - kd) + hi * kd) / n;
    out[static_cast<std::size_t>(k)] = is_log ? std::pow(10.0, x) : x;
  }
  // pin the endpoints exactly
  out.front() = start;
  out.back() = stop;
  return out;
}

ConfigValue parse_value(ValueKind kind, const std::string& text) {
  ConfigValue v{kind, text, {}};
  switch (kind) {
    case ValueKind::Number: v.values = {parse_double(text)}; break;
    case ValueKind::Integer: v.values = {static_cast<double>(parse_int(text))}; break;
    case ValueKind::Bool:
      if (text != "true" && text != "false") throw std::invalid_argument("expected true or false");
      v.values = {text == "true" ? 1.0 : 0.0};
      break;
    case ValueKind::List: v.values = parse_list(text); break;
    case ValueKind::Sweep: v.values = parse_grid(text); break;
  }
  return v;
}

[[noreturn]] void config_error(int line, const std::string& what) {
  fail(ErrorCode::ConfigError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

RunConfig::RunConfig() {
  for (const KeySpec& s : kSchema) values_.emplace(s.name, parse_value(s.kind, s.default_text));
}

RunConfig RunConfig::parse(std::string_view text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') config_error(line, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      const bool known = std::any_of(std::begin(kSchema), std::end(kSchema), [&](const KeySpec& s) {
        return std::string_view(s.name).substr(0, section.size() + 1) == section + ".";
      });
      if (!known) config_error(line, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) config_error(line, "expected key = value");
    if (section.empty()) config_error(line, "key outside a section");
    const std::string name = section + "." + trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const KeySpec* spec = find_spec(name);
    if (!spec) config_error(line, "unknown key '" + name + "'");
    if (!seen.insert(name).second) config_error(line, "duplicate key '" + name + "'");
    try {
      cfg.values_[name] = parse_value(spec->kind, value);
    } catch (const std::invalid_argument& e) {
      config_error(line, name + ": " + e.what());
    }
  }
  if (cfg.integer("phase-mc.samples") < 1000) fail(ErrorCode::ConfigError, "phase-mc.samples must be >= 1000");
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream file(path);
  if (!file) fail(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse(buffer.str());
}

const ConfigValue& RunConfig::get(const std::string& key, ValueKind kind) const {
  const auto it = values_.find(key);
  require(it != values_.end(), ErrorCode::ConfigError, "unknown key '" + key + "'");
  require(it->second.kind == kind, ErrorCode::ConfigError, "key '" + key + "' read with the wrong type");
  return it->second;
}

double RunConfig::number(const std::string& key) const { return get(key, ValueKind::Number).values.front(); }

std::int64_t RunConfig::integer(const std::string& key) const {
  return static_cast<std::int64_t>(get(key, ValueKind::Integer).values.front());
}

bool RunConfig::boolean(const std::string& key) const { return get(key, ValueKind::Bool).values.front() != 0.0; }

const std::vector<double>& RunConfig::values(const std::string& key) const {
  const auto it = values_.find(key);
  require(it != values_.end(), ErrorCode::ConfigError, "unknown key '" + key + "'");
  return it->second.values;
}

void RunConfig::set(const std::string& key, const std::string& text) {
  const KeySpec* spec = find_spec(key);
  require(spec != nullptr, ErrorCode::ConfigError, "unknown key '" + key + "'");
  try {
    values_[key] = parse_value(spec->kind, text);
  } catch (const std::invalid_argument& e) {
    fail(ErrorCode::ConfigError, key + ": " + e.what());
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const KeySpec& s : kSchema) out.emplace_back(s.name, values_.at(s.name).text);
  return out;
}

}  // namespace holosim
