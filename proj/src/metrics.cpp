#include "cra/metrics.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cra {

double maxcutUpperBound(int d) {
  if (d < 1) throw std::invalid_argument("degree must be >= 1");
  constexpr double kParisi = 0.7632;
  const double quarter = static_cast<double>(d) / 4.0;
  return quarter + kParisi * std::sqrt(quarter);
}

std::pair<double, double> misAsymptoticDensity(int d) {
  if (d < 2) throw std::invalid_argument("degree must be >= 2");
  const double logd = std::log(static_cast<double>(d));
  return {2.0 * logd / d, logd / d};
}

std::string dataDir() {
  const char* env = std::getenv("CRA_SOLVE_DATA");
  return env ? std::string(env) : std::string();
}

namespace {

// Best-known cut values for the standard Gset benchmark instances.
const std::unordered_map<std::string, double>& builtinGsetTable() {
  static const std::unordered_map<std::string, double> table = {
      {"G1", 11624},  {"G2", 11620},  {"G3", 11622},  {"G4", 11646},  {"G5", 11631},
      {"G14", 3064},  {"G15", 3050},  {"G16", 3052},  {"G17", 3047},  {"G22", 13359},
      {"G23", 13344}, {"G24", 13337}, {"G25", 13340}, {"G26", 13328}, {"G35", 7687},
      {"G36", 7680},  {"G37", 7691},  {"G38", 7688},  {"G43", 6660},  {"G44", 6650},
      {"G45", 6654},  {"G46", 6649},  {"G47", 6657},  {"G48", 6000},  {"G49", 6000},
      {"G50", 5880},  {"G51", 3848},  {"G52", 3851},  {"G53", 3850},  {"G54", 3852},
      {"G55", 10294}, {"G58", 19293}, {"G60", 14188}, {"G63", 27045}, {"G70", 9595},
  };
  return table;
}

std::unordered_map<std::string, double> loadGsetOverrides() {
  std::unordered_map<std::string, double> out;
  const std::string dir = dataDir();
  if (dir.empty()) return out;
  std::ifstream in(dir + "/gset_best_known.csv");
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    try {
      out[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      // malformed row; skip
    }
  }
  return out;
}

}  // namespace

std::optional<double> gsetBestKnown(const std::string& name) {
  static const auto overrides = loadGsetOverrides();
  if (auto it = overrides.find(name); it != overrides.end()) return it->second;
  const auto& table = builtinGsetTable();
  if (auto it = table.find(name); it != table.end()) return it->second;
  return std::nullopt;
}

std::map<int, double> misTheoryTable() {
  std::map<int, double> out;
  const std::string dir = dataDir();
  if (dir.empty()) return out;
  std::ifstream in(dir + "/mis_rho_theory.csv");
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string dTok, rhoTok;
    if (!std::getline(ls, dTok, ',') || !std::getline(ls, rhoTok)) continue;
    try {
      out[std::stoi(dTok)] = std::stod(rhoTok);
    } catch (const std::exception&) {
    }
  }
  return out;
}

std::optional<double> approximationRatio(double achieved, std::optional<double> reference) {
  if (!reference || *reference == 0.0) return std::nullopt;
  return achieved / *reference;
}

}  // namespace cra
