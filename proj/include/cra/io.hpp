#pragma once

#include <json.hpp>

#include <string>

#include "cra/parametrization.hpp"
#include "cra/problems.hpp"
#include "cra/solver.hpp"

namespace cra {

using Json = nlohmann::json;

/// Stable 64-bit FNV-1a over a string, hex-encoded; used to fingerprint
/// configurations in benchmark provenance.
std::string fnv1aHex(const std::string& text);

void writeTextFile(const std::string& path, const std::string& content);
std::string readTextFile(const std::string& path);
void writeJsonFile(const std::string& path, const Json& j);
Json readJsonFile(const std::string& path);

/// Fixed-format double for CSV/JSON text that must be byte-reproducible.
std::string formatDouble(double v);

Json dbmToJson(const DbmProblem& pr);
DbmProblem dbmFromJson(const Json& j);

Json solveConfigToJson(const SolveConfig& config);

struct ResultJsonOptions {
  bool includeTimings = false;  // wall time breaks byte-for-byte reruns
  bool includeSolution = true;
};

Json solveResultToJson(const SolveResult& result, const std::string& problemName,
                       const Json& configJson, const Json& instanceJson,
                       const ResultJsonOptions& options = {});

/// Parameter checkpoint: {schema_version, architecture, dims, potts, tensors}.
Json paramsToJson(const Params<double>& params);
Params<double> paramsFromJson(const Json& j);

/// Every run writes its manifest before doing any work.
struct RunManifest {
  std::string commandLine;
  Json config;
  std::vector<std::string> outputs;
  std::string createdUtc;  // filled by writeManifest when empty
};

void writeManifest(const std::string& path, const RunManifest& manifest);

std::string currentUtcTimestamp();
std::string versionString();

}  // namespace cra
