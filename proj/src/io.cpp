#include "cra/io.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace cra {

std::string fnv1aHex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void writeTextFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string readTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void writeJsonFile(const std::string& path, const Json& j) {
  writeTextFile(path, j.dump(2) + "\n");
}

Json readJsonFile(const std::string& path) { return Json::parse(readTextFile(path)); }

std::string formatDouble(double v) {
  char buf[40];
  snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

Json matrixToJson(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrixFromJson(const Json& j) {
  const auto rows = j.size();
  const auto cols = rows == 0 ? 0 : j.at(0).size();
  Eigen::MatrixXd m(rows, cols);
  for (size_t i = 0; i < rows; ++i)
    for (size_t k = 0; k < cols; ++k) m(i, k) = j.at(i).at(k).get<double>();
  return m;
}

Json flatRowMajor(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  return out;
}

}  // namespace

Json dbmToJson(const DbmProblem& pr) {
  Json j;
  j["n1"] = pr.n1();
  j["n2"] = pr.n2();
  j["C"] = flatRowMajor(pr.likelihood);
  j["M"] = flatRowMajor(pr.sameField.cast<double>());
  j["p"] = pr.pFrac;
  j["q"] = pr.qFrac;
  j["lambda"] = {pr.lambda[0], pr.lambda[1], pr.lambda[2], pr.lambda[3]};
  return j;
}

DbmProblem dbmFromJson(const Json& j) {
  DbmProblem pr;
  const int n1 = j.at("n1").get<int>();
  const int n2 = j.at("n2").get<int>();
  const auto& c = j.at("C");
  const auto& m = j.at("M");
  if (static_cast<int>(c.size()) != n1 * n2 || static_cast<int>(m.size()) != n1 * n2)
    throw std::invalid_argument("dbm matrices must have n1*n2 entries");
  pr.likelihood.resize(n1, n2);
  pr.sameField.resize(n1, n2);
  for (int i = 0; i < n1; ++i)
    for (int k = 0; k < n2; ++k) {
      pr.likelihood(i, k) = c.at(i * n2 + k).get<double>();
      pr.sameField(i, k) = static_cast<int>(m.at(i * n2 + k).get<double>());
    }
  pr.pFrac = j.at("p").get<double>();
  pr.qFrac = j.at("q").get<double>();
  const auto& lam = j.at("lambda");
  for (int i = 0; i < 4; ++i) pr.lambda[i] = lam.at(i).get<double>();
  pr.validate();
  return pr;
}

Json solveConfigToJson(const SolveConfig& config) {
  Json j;
  j["parametrization"] = archName(config.arch);
  j["anneal"] = config.schedule.has_value();
  if (config.schedule) {
    j["gamma0"] = config.schedule->gamma0;
    j["rate"] = config.schedule->rate;
    j["alpha"] = config.schedule->alpha;
    if (config.schedule->gammaCap) j["gamma_cap"] = *config.schedule->gammaCap;
  }
  j["tolerance"] = config.stop.tolerance;
  j["patience"] = config.stop.patience;
  j["phi_threshold"] = config.stop.phiThreshold;
  j["max_epochs"] = config.maxEpochs;
  j["seeds"] = config.seeds;
  j["threshold"] = config.threshold;
  if (config.dims) j["dims"] = {config.dims->h0, config.dims->h1, config.dims->h2};
  j["lr"] = config.optimizer.lr;
  j["weight_decay"] = config.optimizer.weightDecay;
  j["beta1"] = config.optimizer.beta1;
  j["beta2"] = config.optimizer.beta2;
  j["eps"] = config.optimizer.eps;
  j["init_scale"] = config.initScale;
  j["trace_every"] = config.traceEvery;
  j["penalty"] = config.penalty == PenaltyKind::entropy ? "entropy" : "polynomial";
  return j;
}

Json solveResultToJson(const SolveResult& result, const std::string& problemName,
                       const Json& configJson, const Json& instanceJson,
                       const ResultJsonOptions& options) {
  Json j;
  j["schema_version"] = 1;
  j["problem"] = problemName;
  j["solver"] = configJson;
  j["instance"] = instanceJson;

  Json best;
  best["cost"] = result.bestCost;
  best["feasible"] = result.feasible;
  best["seed_index"] = result.bestSeedIndex;
  if (result.bestSeedIndex >= 0) {
    const auto& run = result.perSeed[result.bestSeedIndex];
    best["seed"] = run.seed;
    best["objective"] = run.eval.objective;
    best["penalty"] = run.eval.penalty;
    best["violations"] = run.eval.violations;
    if (options.includeSolution) {
      Json x = Json::array();
      for (Eigen::Index i = 0; i < result.bestX.rows(); ++i)
        for (Eigen::Index k = 0; k < result.bestX.cols(); ++k) x.push_back(result.bestX(i, k));
      best["x"] = std::move(x);
      best["x_shape"] = {result.bestX.rows(), result.bestX.cols()};
    }
  }
  j["best"] = std::move(best);

  Json seeds = Json::array();
  for (const auto& run : result.perSeed) {
    Json s;
    s["seed"] = run.seed;
    s["epochs"] = run.epochs;
    s["stop_reason"] = stopReasonName(run.stopReason);
    s["final_discreteness"] = run.finalDiscreteness;
    s["final_loss"] = run.finalLoss;
    s["final_phi"] = run.finalPhi;
    s["cost"] = run.eval.cost;
    s["feasible"] = run.eval.feasible;
    s["violations"] = run.eval.violations;
    s["skipped_steps"] = run.skippedSteps;
    s["cost_trace"] = run.costTrace;
    s["phi_trace"] = run.phiTrace;
    s["gamma_trace"] = run.gammaTrace;
    s["mean_p_trace"] = run.meanPTrace;
    seeds.push_back(std::move(s));
  }
  j["seeds"] = std::move(seeds);

  if (options.includeTimings) j["wall_time_s"] = result.wallTimeSeconds;
  return j;
}

Json paramsToJson(const Params<double>& params) {
  Json j;
  j["schema_version"] = 1;
  j["architecture"] = archName(params.arch);
  j["dims"] = {params.dims.h0, params.dims.h1, params.dims.h2};
  j["potts"] = params.potts;
  Json tensors = Json::array();
  for (const auto& t : params.tensors) {
    Json entry;
    entry["rows"] = t.rows();
    entry["cols"] = t.cols();
    entry["data"] = flatRowMajor(t);
    tensors.push_back(std::move(entry));
  }
  j["tensors"] = std::move(tensors);
  return j;
}

Params<double> paramsFromJson(const Json& j) {
  Params<double> params;
  params.arch = archFromName(j.at("architecture").get<std::string>());
  const auto& dims = j.at("dims");
  params.dims = GnnDims{dims.at(0).get<int>(), dims.at(1).get<int>(), dims.at(2).get<int>()};
  params.potts = j.at("potts").get<bool>();
  for (const auto& entry : j.at("tensors")) {
    const Eigen::Index rows = entry.at("rows").get<Eigen::Index>();
    const Eigen::Index cols = entry.at("cols").get<Eigen::Index>();
    const auto& data = entry.at("data");
    if (static_cast<Eigen::Index>(data.size()) != rows * cols)
      throw std::invalid_argument("tensor payload does not match its shape");
    Eigen::MatrixXd t(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index k = 0; k < cols; ++k) t(i, k) = data.at(i * cols + k).get<double>();
    params.tensors.push_back(std::move(t));
  }
  return params;
}

std::string currentUtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string versionString() { return "0.1.0"; }

void writeManifest(const std::string& path, const RunManifest& manifest) {
  Json j;
  j["schema_version"] = 1;
  j["tool"] = "cra";
  j["version"] = versionString();
  j["command_line"] = manifest.commandLine;
  j["created_utc"] =
      manifest.createdUtc.empty() ? currentUtcTimestamp() : manifest.createdUtc;
  j["config"] = manifest.config;
  j["config_hash"] = fnv1aHex(manifest.config.dump());
  j["outputs"] = manifest.outputs;
  const std::string dir = std::getenv("CRA_SOLVE_DATA") ? std::getenv("CRA_SOLVE_DATA") : "";
  if (!dir.empty()) j["data_dir"] = dir;
  writeJsonFile(path, j);
}

}  // namespace cra
