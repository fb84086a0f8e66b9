#include "epigrow/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "epigrow/errors.hpp"

namespace epigrow {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& section, const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("[" + section + "] " + key + ": not a number: '" + value + "'");
  }
}

}  // namespace

Model load_model(std::istream& in) {
  Model m;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");

    auto num = [&] { return parse_double(section, key, value); };
    bool known = true;
    if (section == "params") {
      if (key == "b") m.params.b = num();
      else if (key == "mu") m.params.mu = num();
      else if (key == "p") m.params.p = num();
      else if (key == "theta") m.params.theta = num();
      else if (key == "delta_K") m.params.delta_K = num();
      else if (key == "delta_H") m.params.delta_H = num();
      else if (key == "delta_E") m.params.delta_E = num();
      else known = false;
    } else if (section == "beta") {
      if (key == "form") m.specs.beta.form = transmission_form_from_string(value);
      else if (key == "beta0") m.specs.beta.beta0 = num();
      else if (key == "beta1") m.specs.beta.beta1 = num();
      else if (key == "eta") m.specs.beta.eta = num();
      else known = false;
    } else if (section == "gamma") {
      if (key == "form") m.specs.gamma.form = recovery_form_from_string(value);
      else if (key == "gamma0") m.specs.gamma.gamma0 = num();
      else if (key == "gamma1") m.specs.gamma.gamma1 = num();
      else if (key == "eta2") m.specs.gamma.eta2 = num();
      else known = false;
    } else if (section == "knowledge") {
      if (key == "a1") m.specs.knowledge.a1 = num();
      else if (key == "a2") m.specs.knowledge.a2 = num();
      else if (key == "a3") m.specs.knowledge.a3 = num();
      else if (key == "a4") m.specs.knowledge.a4 = num();
      else if (key == "a5") m.specs.knowledge.a5 = num();
      else known = false;
    } else if (section == "production") {
      if (key == "psi") m.specs.production.psi = num();
      else if (key == "psi1") m.specs.production.psi1 = num();
      else if (key == "psi2") m.specs.production.psi2 = num();
      else if (key == "psi3") m.specs.production.psi3 = num();
      else if (key == "psi4") m.specs.production.psi4 = num();
      else known = false;
    } else if (section == "utility") {
      if (key == "form") m.specs.utility.form = utility_form_from_string(value);
      else if (key == "sigma") m.specs.utility.sigma = num();
      else known = false;
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown section [" + section + "]");
    }
    if (!known) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "' in [" + section + "]");
    }
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return m;
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return load_model(in);
}

void save_model(const Model& m, std::ostream& out) {
  out.precision(17);
  out << "[params]\n"
      << "b = " << m.params.b << "\n"
      << "mu = " << m.params.mu << "\n"
      << "p = " << m.params.p << "\n"
      << "theta = " << m.params.theta << "\n"
      << "delta_K = " << m.params.delta_K << "\n"
      << "delta_H = " << m.params.delta_H << "\n"
      << "delta_E = " << m.params.delta_E << "\n\n"
      << "[beta]\n"
      << "form = " << to_string(m.specs.beta.form) << "\n"
      << "beta0 = " << m.specs.beta.beta0 << "\n"
      << "beta1 = " << m.specs.beta.beta1 << "\n"
      << "eta = " << m.specs.beta.eta << "\n\n"
      << "[gamma]\n"
      << "form = " << to_string(m.specs.gamma.form) << "\n"
      << "gamma0 = " << m.specs.gamma.gamma0 << "\n"
      << "gamma1 = " << m.specs.gamma.gamma1 << "\n"
      << "eta2 = " << m.specs.gamma.eta2 << "\n\n"
      << "[knowledge]\n"
      << "a1 = " << m.specs.knowledge.a1 << "\n"
      << "a2 = " << m.specs.knowledge.a2 << "\n"
      << "a3 = " << m.specs.knowledge.a3 << "\n"
      << "a4 = " << m.specs.knowledge.a4 << "\n"
      << "a5 = " << m.specs.knowledge.a5 << "\n\n"
      << "[production]\n"
      << "psi = " << m.specs.production.psi << "\n"
      << "psi1 = " << m.specs.production.psi1 << "\n"
      << "psi2 = " << m.specs.production.psi2 << "\n"
      << "psi3 = " << m.specs.production.psi3 << "\n"
      << "psi4 = " << m.specs.production.psi4 << "\n\n"
      << "[utility]\n"
      << "form = " << to_string(m.specs.utility.form) << "\n"
      << "sigma = " << m.specs.utility.sigma << "\n";
}

void save_model_file(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path);
  save_model(m, out);
}

}  // namespace epigrow
