#include "dh/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace dh {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string where(const std::string& source, int line, const std::string& key) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ':' << line;
  if (!key.empty()) os << ": key '" << key << "'";
  return os.str();
}

double to_double(const std::string& v) {
  double out = 0;
  const char* b = v.data();
  const char* e = b + v.size();
  if (!v.empty() && *b == '+') ++b;
  auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc() || res.ptr != e) throw std::invalid_argument("not a number: '" + v + "'");
  return out;
}

int to_int(const std::string& v) {
  double d = to_double(v);
  if (d != static_cast<int>(d)) throw std::invalid_argument("not an integer: '" + v + "'");
  return static_cast<int>(d);
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument("not a boolean: '" + v + "'");
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int l, const std::string& k, const std::string& what)
    : Error(where(source, l, k) + ": " + what), line(l), key(k) {}

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  size_t a = text.find(':');
  size_t b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw std::invalid_argument("grid must look like lo:hi:count");
  g.lo = to_double(trim(text.substr(0, a)));
  g.hi = to_double(trim(text.substr(a + 1, b - a - 1)));
  g.count = to_int(trim(text.substr(b + 1)));
  if (g.count < 1) throw std::invalid_argument("grid count must be >= 1");
  if (g.count > 1 && !(g.hi > g.lo)) throw std::invalid_argument("grid needs hi > lo");
  return g;
}

Tolerances parse_tolerances(const std::string& text) {
  Tolerances t;
  if (text.find('=') == std::string::npos) {
    double v = to_double(trim(text));
    return {v, v, v, v};
  }
  std::istringstream is(text);
  std::string item;
  while (std::getline(is, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("tolerance entry needs key=value: '" + item + "'");
    std::string k = trim(item.substr(0, eq));
    double v = to_double(trim(item.substr(eq + 1)));
    if (k == "rel_err") t.rel_err = v;
    else if (k == "ode") t.ode = v;
    else if (k == "first_order") t.first_order = v;
    else if (k == "norm") t.norm = v;
    else throw std::invalid_argument("unknown tolerance '" + k + "'");
  }
  return t;
}

void RunConfig::set(const std::string& key, const std::string& raw, const std::string& source, int line) {
  std::string v = trim(raw);
  try {
    if (key == "v_x") material.v_x = to_double(v);
    else if (key == "v_y") material.v_y = to_double(v);
    else if (key == "v_t") material.v_t = to_double(v);
    else if (key == "nu") material.nu = to_int(v);
    else if (key == "shape" || key == "case") field.shape = parse_shape(v);
    else if (key == "B0") field.B0 = to_double(v);
    else if (key == "E0") {
      field.E0 = to_double(v);
      drift.reset();
    }
    else if (key == "v_d") drift = to_double(v);
    else if (key == "reversed") field.reversed = to_bool(v);
    else if (key == "alpha") field.alpha = to_double(v);
    else if (key == "ky_grid") ky_grid = parse_grid(v);
    else if (key == "ky") ky = to_double(v);
    else if (key == "n_min") n_min = to_int(v);
    else if (key == "n_max") n_max = to_int(v);
    else if (key == "n") n = to_int(v);
    else if (key == "mu") mu = to_int(v);
    else if (key == "bands") {
      if (v == "both") bands = {1, -1};
      else bands = {to_int(v)};
    } else if (key == "x_grid") x_grid = parse_grid(v);
    else if (key == "fd_N") fd_N = to_int(v);
    else if (key == "format") {
      if (v != "csv" && v != "json") throw std::invalid_argument("format must be csv or json");
      format = v;
    } else if (key == "out") out = v;
    else throw ConfigError(source, line, key, "unknown key");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(source, line, key, e.what());
  }
}

void RunConfig::validate() const {
  auto wrap = [](const char* what, auto&& fn) {
    try {
      fn();
    } catch (const InvalidParams& e) {
      throw ConfigError("config", 0, what, e.what());
    }
  };
  wrap("material", [&] { material.validate(); });
  wrap("field", [&] { field.validate(); });
  beta_nu(material, field);  // CriticalFieldExceeded carries its own message
  if (n < 0) throw ConfigError("config", 0, "n", "must be >= 0");
  if (mu != 1 && mu != -1) throw ConfigError("config", 0, "mu", "must be +1 or -1");
  if (n_min < 0 || n_max < n_min) throw ConfigError("config", 0, "n_min/n_max", "need 0 <= n_min <= n_max");
  for (int b : bands)
    if (b != 1 && b != -1) throw ConfigError("config", 0, "bands", "must be both, 1 or -1");
  if (fd_N < 400) throw ConfigError("config", 0, "fd_N", "must be >= 400");
}

void RunConfig::finalize() {
  if (!drift) return;
  field.E0 = std::abs(*drift) * field.B0;
  field.reversed = *drift < 0;
  drift.reset();
}

RunConfig preset(Shape shape) {
  RunConfig c;
  c.field.shape = shape;
  switch (shape) {
    case Shape::Constant:
      c.material = {0.534, 0.785, -0.345, 1};
      c.field.B0 = 1;
      c.drift = 0.25;
      c.ky_grid = {-5, 5, 101};
      break;
    case Shape::Exponential:
      c.material = {0.86, 0.69, 0.32, 1};
      c.field.B0 = 8;
      c.field.alpha = 1;
      c.drift = 0.1;
      c.ky_grid = {0.1, 10, 100};
      c.ky = 3;
      break;
    case Shape::Hyperbolic:
      c.material = {0.0524, 0.785, -0.345, 1};
      c.field.B0 = 3;
      c.field.alpha = 1;
      c.drift = 0.35;
      c.ky_grid = {-3, 3, 121};
      c.ky = 1;
      break;
  }
  c.finalize();
  return c;
}

RunConfig parse_config(std::istream& in, const std::string& source, RunConfig c) {
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(source, no, "", "expected key = value");
    c.set(trim(line.substr(0, eq)), line.substr(eq + 1), source, no);
  }
  c.finalize();
  return c;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, 0, "", "cannot open config file");
  return parse_config(f, path, std::move(base));
}

}  // namespace dh
