#include "dh/io.hpp"

#include <charconv>
#include <sstream>

#include "json.hpp"

namespace dh {

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void write_footer(std::ostringstream& os, const Footer& footer) {
  for (const auto& [k, v] : footer) os << "# " << k << '=' << v << '\n';
}

nlohmann::json footer_json(const Footer& footer) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : footer) j[k] = v;
  return j;
}

}  // namespace

std::string spectrum_csv(const SpectrumTable& t) {
  std::ostringstream os;
  os << "case,n,mu,k_y,E\n";
  for (const auto& r : t.rows)
    os << shape_name(r.shape) << ',' << r.n << ',' << r.mu << ',' << fmt_double(r.k_y) << ',' << fmt_double(r.E)
       << '\n';
  write_footer(os, {{"omitted", std::to_string(t.omitted)}});
  return os.str();
}

std::string spectrum_json(const SpectrumTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"case", shape_name(r.shape)}, {"n", r.n}, {"mu", r.mu}, {"k_y", r.k_y}, {"E", r.E}});
  nlohmann::json j = {{"rows", rows}, {"omitted", t.omitted}};
  return j.dump(1) + "\n";
}

SpectrumTable parse_spectrum_csv(const std::string& text) {
  SpectrumTable t;
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "case,n,mu,k_y,E") throw InvalidParams("spectrum CSV header mismatch");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find("omitted=");
      if (eq != std::string::npos) t.omitted = std::stoull(line.substr(eq + 8));
      continue;
    }
    std::istringstream ls(line);
    std::string c, n, mu, k, E;
    std::getline(ls, c, ',');
    std::getline(ls, n, ',');
    std::getline(ls, mu, ',');
    std::getline(ls, k, ',');
    std::getline(ls, E, ',');
    SpectrumRow r{parse_shape(c), std::stoi(n), std::stoi(mu), 0, 0};
    std::from_chars(k.data(), k.data() + k.size(), r.k_y);
    std::from_chars(E.data(), E.data() + E.size(), r.E);
    t.rows.push_back(r);
  }
  return t;
}

std::string observables_csv(const std::vector<ObservableSample>& s, const Footer& footer) {
  std::ostringstream os;
  os << "x,rho,J_x,J_y\n";
  for (const auto& p : s)
    os << fmt_double(p.x) << ',' << fmt_double(p.rho) << ',' << fmt_double(p.J_x) << ',' << fmt_double(p.J_y) << '\n';
  write_footer(os, footer);
  return os.str();
}

std::string observables_json(const std::vector<ObservableSample>& s, const Footer& footer) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : s) rows.push_back({{"x", p.x}, {"rho", p.rho}, {"J_x", p.J_x}, {"J_y", p.J_y}});
  return nlohmann::json({{"samples", rows}, {"meta", footer_json(footer)}}).dump(1) + "\n";
}

std::string wavefunction_csv(const std::vector<WavefunctionSample>& s, const Footer& footer) {
  std::ostringstream os;
  os << "x,psi_plus,psi_minus\n";
  for (const auto& p : s) os << fmt_double(p.x) << ',' << fmt_double(p.psi_plus) << ',' << fmt_double(p.psi_minus) << '\n';
  write_footer(os, footer);
  return os.str();
}

std::string wavefunction_json(const std::vector<WavefunctionSample>& s, const Footer& footer) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : s) rows.push_back({{"x", p.x}, {"psi_plus", p.psi_plus}, {"psi_minus", p.psi_minus}});
  return nlohmann::json({{"samples", rows}, {"meta", footer_json(footer)}}).dump(1) + "\n";
}

}  // namespace dh
