#pragma once

#include <map>
#include <optional>
#include <string>

namespace cra {

/// Large-N upper bound for the MaxCut cut ratio on d-regular graphs:
/// d/4 + P* sqrt(d/4) with the Parisi constant P* = 0.7632.
double maxcutUpperBound(int d);

/// Large-d asymptotics for independent-set density on d-regular graphs:
/// (rho_max, rho_alg) = (2 ln d / d, ln d / d). Context lines for plots only.
std::pair<double, double> misAsymptoticDensity(int d);

/// Best-known cut values for the benchmarked Gset instances. A
/// `gset_best_known.csv` file ("name,value" rows) in the CRA_SOLVE_DATA
/// directory overrides or extends the built-in table.
std::optional<double> gsetBestKnown(const std::string& name);

/// Optional finite-degree MIS density table from
/// CRA_SOLVE_DATA/mis_rho_theory.csv ("d,rho" rows); empty if absent.
std::map<int, double> misTheoryTable();

/// Directory named by the CRA_SOLVE_DATA environment variable, or empty.
std::string dataDir();

/// achieved / reference. Callers pass the maximization-form quantities
/// (set size, cut value); returns nullopt when the reference is missing or 0.
std::optional<double> approximationRatio(double achieved, std::optional<double> reference);

}  // namespace cra
