#pragma once

#include <map>
#include <string>
#include <vector>

#include "dh/eigenstate.hpp"

namespace dh {

// Shortest representation that round-trips through strtod.
std::string fmt_double(double v);

// CSV header `case,n,mu,k_y,E`; footer comment lines start with '#'.
std::string spectrum_csv(const SpectrumTable& t);
std::string spectrum_json(const SpectrumTable& t);
SpectrumTable parse_spectrum_csv(const std::string& text);

using Footer = std::map<std::string, std::string>;

// Header `x,rho,J_x,J_y`.
std::string observables_csv(const std::vector<ObservableSample>& s, const Footer& footer = {});
std::string observables_json(const std::vector<ObservableSample>& s, const Footer& footer = {});
// Header `x,psi_plus,psi_minus`.
std::string wavefunction_csv(const std::vector<WavefunctionSample>& s, const Footer& footer = {});
std::string wavefunction_json(const std::vector<WavefunctionSample>& s, const Footer& footer = {});

}  // namespace dh
