#pragma once

#include <atomic>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "nst/matrix_io.hpp"
#include "nst/problems.hpp"
#include "nst/rng.hpp"
#include "nst/schedule.hpp"
#include "nst/solvers.hpp"
#include "nst/types.hpp"

namespace nst {

inline constexpr const char* kLibraryVersion = "0.1.0";
inline constexpr const char* kPrngVersion = "philox4x64-10/v1";
inline constexpr int kConfigSchemaVersion = 1;

struct AlgorithmSpec {
  std::string name;  ///< adpt | nst | omp | gomp | iht | htp | ghtp
  std::string label;
  std::optional<Schedule> schedule;  ///< adpt, ghtp
  Index p = 1;                       ///< gomp
  double mu = 1.0;                   ///< iht

  static AlgorithmSpec make(const std::string& name) {
    AlgorithmSpec spec;
    spec.name = name;
    spec.label = name;
    return spec;
  }

  AlgorithmSpec with_schedule(const Schedule& sched) const {
    AlgorithmSpec out = *this;
    out.schedule = sched;
    if (out.label == out.name) out.label = out.name + ":" + sched.to_string();
    return out;
  }
};

enum class MatrixKind { Gaussian, Identity };

struct ExperimentConfig {
  Index m = 100;
  Index n = 200;
  MatrixKind matrix_kind = MatrixKind::Gaussian;
  SignalEnsemble ensemble = SignalEnsemble::Gaussian;
  std::vector<Index> sparsity_grid;
  std::vector<double> noise_sigmas = {0.0};
  std::vector<AlgorithmSpec> algorithms;
  Index trials = 100;
  double success_threshold = 1e-4;
  std::uint64_t base_seed = 0;
  Index max_iters = 30;
  /// absolute solver tolerance is max(eps_rel * ||y||, noise_eps_factor * sigma * sqrt(M))
  double eps_rel = 1e-10;
  double noise_eps_factor = 1.0;
  double time_limit_ms = 30000.0;
  int jobs = 0;  ///< 0 = all hardware threads

  void validate() const {
    if (m < 1 || n < m) throw std::invalid_argument("config: need 1 <= M <= N");
    if (matrix_kind == MatrixKind::Identity && m != n)
      throw std::invalid_argument("config: identity matrix requires M == N");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (success_threshold <= 0)
      throw std::invalid_argument("config: success_threshold must be > 0");
    if (sparsity_grid.empty()) throw std::invalid_argument("config: empty sparsity_grid");
    for (std::size_t i = 0; i < sparsity_grid.size(); ++i) {
      if (sparsity_grid[i] < 1 || sparsity_grid[i] > n)
        throw std::invalid_argument("config: sparsity out of [1, N]");
      if (i > 0 && sparsity_grid[i] <= sparsity_grid[i - 1])
        throw std::invalid_argument("config: sparsity_grid must be strictly increasing");
    }
    if (noise_sigmas.empty()) throw std::invalid_argument("config: empty noise_sigmas");
    for (double s : noise_sigmas)
      if (s < 0) throw std::invalid_argument("config: negative noise sigma");
    if (algorithms.empty()) throw std::invalid_argument("config: no algorithms");
    for (const auto& a : algorithms) {
      if (a.name != "adpt" && a.name != "nst" && a.name != "omp" && a.name != "gomp" &&
          a.name != "iht" && a.name != "htp" && a.name != "ghtp")
        throw std::invalid_argument("config: unknown algorithm '" + a.name + "'");
    }
    if (max_iters < 1) throw std::invalid_argument("config: max_iters must be >= 1");
  }
};

struct TrialRecord {
  std::string algorithm;
  Index s = 0;
  double sigma = 0.0;
  Index trial_index = 0;
  std::uint64_t seed = 0;
  bool success = false;
  double rel_error = 0.0;
  Index iterations = 0;
  double wall_time_ms = 0.0;
  SolveStatus status = SolveStatus::MaxIters;
  double ls_work = 0.0;  ///< sum of |T|^3 over least-squares solves
};

struct SummaryRow {
  std::string algorithm;
  Index s = 0;
  double sigma = 0.0;
  double success_frequency = 0.0;
  double mean_time_ms = 0.0;
  double nmse = 0.0;
  Index trials = 0;
};

// ---------------------------------------------------------------------------
// config <-> JSON

inline void to_json(nlohmann::json& j, const AlgorithmSpec& a) {
  j = nlohmann::json{{"name", a.name}};
  if (a.label != a.name && !(a.schedule && a.label == a.name + ":" + a.schedule->to_string()))
    j["label"] = a.label;
  if (a.schedule) j["schedule"] = a.schedule->to_string();
  if (a.name == "gomp") j["P"] = a.p;
  if (a.name == "iht") j["mu"] = a.mu;
}

inline void from_json(const nlohmann::json& j, AlgorithmSpec& a) {
  a = AlgorithmSpec::make(j.at("name").get<std::string>());
  if (j.contains("schedule")) {
    a.schedule = Schedule::parse(j["schedule"].get<std::string>());
    a.label = a.name + ":" + a.schedule->to_string();
  }
  if (j.contains("P")) a.p = j["P"].get<Index>();
  if (j.contains("mu")) a.mu = j["mu"].get<double>();
  if (j.contains("label")) a.label = j["label"].get<std::string>();
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{
      {"version", kConfigSchemaVersion},
      {"M", c.m},
      {"N", c.n},
      {"matrix", c.matrix_kind == MatrixKind::Identity ? "identity" : "gaussian"},
      {"ensemble", to_string(c.ensemble)},
      {"sparsity_grid", c.sparsity_grid},
      {"noise_sigmas", c.noise_sigmas},
      {"algorithms", c.algorithms},
      {"trials", c.trials},
      {"success_threshold", c.success_threshold},
      {"base_seed", c.base_seed},
      {"max_iters", c.max_iters},
      {"eps_rel", c.eps_rel},
      {"noise_eps_factor", c.noise_eps_factor},
      {"time_limit_ms", c.time_limit_ms},
      {"jobs", c.jobs},
  };
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  c = ExperimentConfig{};
  if (j.contains("version") && j["version"].get<int>() > kConfigSchemaVersion)
    throw std::invalid_argument("config: unsupported schema version");
  c.m = j.at("M").get<Index>();
  c.n = j.at("N").get<Index>();
  if (j.contains("matrix")) {
    const auto kind = j["matrix"].get<std::string>();
    if (kind == "identity")
      c.matrix_kind = MatrixKind::Identity;
    else if (kind == "gaussian")
      c.matrix_kind = MatrixKind::Gaussian;
    else
      throw std::invalid_argument("config: unknown matrix kind '" + kind + "'");
  }
  if (j.contains("ensemble")) c.ensemble = ensemble_from_string(j["ensemble"]);
  c.sparsity_grid = j.at("sparsity_grid").get<std::vector<Index>>();
  if (j.contains("noise_sigmas")) c.noise_sigmas = j["noise_sigmas"].get<std::vector<double>>();
  c.algorithms = j.at("algorithms").get<std::vector<AlgorithmSpec>>();
  if (j.contains("trials")) c.trials = j["trials"].get<Index>();
  if (j.contains("success_threshold")) c.success_threshold = j["success_threshold"].get<double>();
  if (j.contains("base_seed")) c.base_seed = j["base_seed"].get<std::uint64_t>();
  if (j.contains("max_iters")) c.max_iters = j["max_iters"].get<Index>();
  if (j.contains("eps_rel")) c.eps_rel = j["eps_rel"].get<double>();
  if (j.contains("noise_eps_factor")) c.noise_eps_factor = j["noise_eps_factor"].get<double>();
  if (j.contains("time_limit_ms")) c.time_limit_ms = j["time_limit_ms"].get<double>();
  if (j.contains("jobs")) c.jobs = j["jobs"].get<int>();
  c.validate();
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config: " + path);
  nlohmann::json j;
  is >> j;
  return j.get<ExperimentConfig>();
}

// ---------------------------------------------------------------------------
// harness

/// The per-trial instance. The seed depends only on (base_seed, s,
/// sigma_index, trial), never on the algorithm, so every algorithm in a cell
/// sees bit-identical (A, x_true, y).
inline ProblemInstance<double> make_instance(const ExperimentConfig& cfg, Index s,
                                             std::size_t sigma_index, Index trial) {
  const double sigma = cfg.noise_sigmas.at(sigma_index);
  const std::uint64_t seed =
      derive_seed(cfg.base_seed, static_cast<std::uint64_t>(s),
                  static_cast<std::uint64_t>(sigma_index), static_cast<std::uint64_t>(trial));
  if (cfg.matrix_kind == MatrixKind::Identity) {
    ProblemInstance<double> inst;
    inst.a = MatrixXd::Identity(cfg.m, cfg.n);
    inst.x_true = gen_sparse_signal(cfg.n, s, cfg.ensemble, seed);
    inst.y = add_noise(VectorXd(inst.a * inst.x_true), sigma, seed);
    inst.noise_sigma = sigma;
    inst.seed = seed;
    inst.sparsity = s;
    return inst;
  }
  return gaussian_instance(cfg.m, cfg.n, s, cfg.ensemble, sigma, seed);
}

namespace detail {

inline SolveResult<double> run_algorithm(const AlgorithmSpec& spec,
                                         const ProblemInstance<double>& inst,
                                         const SolverConfig& solver_cfg) {
  const auto& a = inst.a;
  const auto& y = inst.y;
  if (spec.name == "adpt")
    return adpt_nst_ht_fb(a, y, spec.schedule.value_or(Schedule::quadratic()), solver_cfg);
  if (spec.name == "nst") return nst_ht_fb(a, y, inst.sparsity, solver_cfg);
  if (spec.name == "omp") return omp(a, y, inst.sparsity, solver_cfg);
  if (spec.name == "gomp") return gomp(a, y, spec.p, inst.sparsity, solver_cfg);
  if (spec.name == "iht") return iht(a, y, inst.sparsity, spec.mu, solver_cfg);
  if (spec.name == "htp") return htp(a, y, inst.sparsity, solver_cfg);
  if (spec.name == "ghtp")
    return ghtp(a, y, solver_cfg, spec.schedule.value_or(Schedule::linear(1)));
  throw std::invalid_argument("unknown algorithm '" + spec.name + "'");
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace detail

/// Runs the full (s, sigma, trial) x algorithm sweep. Trials are independent
/// work items distributed over a worker pool; records land in deterministic
/// slots so the output order does not depend on scheduling. Solver errors are
/// captured in the record status and never abort the sweep.
inline std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n_s = cfg.sparsity_grid.size();
  const std::size_t n_sig = cfg.noise_sigmas.size();
  const std::size_t n_trials = static_cast<std::size_t>(cfg.trials);
  const std::size_t n_alg = cfg.algorithms.size();
  const std::size_t n_items = n_s * n_sig * n_trials;

  std::vector<TrialRecord> records(n_items * n_alg);

  const auto run_item = [&](std::size_t item) {
    const std::size_t trial = item % n_trials;
    const std::size_t cell = item / n_trials;
    const std::size_t sigma_index = cell % n_sig;
    const std::size_t s_index = cell / n_sig;
    const Index s = cfg.sparsity_grid[s_index];
    const double sigma = cfg.noise_sigmas[sigma_index];

    const ProblemInstance<double> inst =
        make_instance(cfg, s, sigma_index, static_cast<Index>(trial));

    SolverConfig solver_cfg;
    solver_cfg.epsilon = std::max(cfg.eps_rel * inst.y.norm(),
                                  cfg.noise_eps_factor * sigma *
                                      std::sqrt(static_cast<double>(cfg.m)));
    solver_cfg.max_iters = cfg.max_iters;
    solver_cfg.time_limit =
        std::chrono::milliseconds(static_cast<long long>(cfg.time_limit_ms));

    for (std::size_t ai = 0; ai < n_alg; ++ai) {
      TrialRecord rec;
      rec.algorithm = cfg.algorithms[ai].label;
      rec.s = s;
      rec.sigma = sigma;
      rec.trial_index = static_cast<Index>(trial);
      rec.seed = inst.seed;

      const auto t0 = std::chrono::steady_clock::now();
      SolveResult<double> res;
      bool errored = false;
      try {
        res = detail::run_algorithm(cfg.algorithms[ai], inst, solver_cfg);
      } catch (const std::exception&) {
        errored = true;
      }
      const auto t1 = std::chrono::steady_clock::now();
      rec.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

      if (errored) {
        rec.status = SolveStatus::SingularGram;
        rec.rel_error = 1.0;
      } else {
        rec.status = res.status;
        rec.iterations = res.iterations;
        rec.rel_error = (res.estimate - inst.x_true).norm() / inst.x_true.norm();
        for (Index sz : res.ls_sizes)
          rec.ls_work += static_cast<double>(sz) * static_cast<double>(sz) *
                         static_cast<double>(sz);
      }
      rec.success = rec.rel_error <= cfg.success_threshold;
      records[item * n_alg + ai] = std::move(rec);
    }
  };

  unsigned jobs = cfg.jobs > 0 ? static_cast<unsigned>(cfg.jobs)
                               : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n_items));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n_items; ++i) run_item(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < n_items; i = next.fetch_add(1))
          run_item(i);
      });
    for (auto& th : pool) th.join();
  }
  return records;
}

/// Mean of squared relative errors over a group of records.
inline double nmse(const std::vector<TrialRecord>& group) {
  if (group.empty()) throw std::invalid_argument("nmse: empty group");
  double acc = 0.0;
  for (const auto& rec : group) acc += rec.rel_error * rec.rel_error;
  return acc / static_cast<double>(group.size());
}

/// One SummaryRow per (algorithm, s, sigma), ordered by that key.
inline std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  std::map<std::tuple<std::string, Index, double>, std::vector<const TrialRecord*>> cells;
  for (const auto& rec : records)
    cells[{rec.algorithm, rec.s, rec.sigma}].push_back(&rec);

  std::vector<SummaryRow> rows;
  rows.reserve(cells.size());
  for (const auto& [key, group] : cells) {
    SummaryRow row;
    row.algorithm = std::get<0>(key);
    row.s = std::get<1>(key);
    row.sigma = std::get<2>(key);
    row.trials = static_cast<Index>(group.size());
    double nmse_acc = 0.0, time_acc = 0.0, succ = 0.0;
    for (const TrialRecord* rec : group) {
      nmse_acc += rec->rel_error * rec->rel_error;
      time_acc += rec->wall_time_ms;
      succ += rec->success ? 1.0 : 0.0;
    }
    row.success_frequency = succ / static_cast<double>(group.size());
    row.mean_time_ms = time_acc / static_cast<double>(group.size());
    row.nmse = nmse_acc / static_cast<double>(group.size());
    rows.push_back(row);
  }
  return rows;
}

inline constexpr const char* kCsvHeader =
    "algorithm,s,sigma,success_freq,mean_time_ms,nmse,trials";

inline void write_csv(const std::vector<SummaryRow>& rows, std::ostream& os) {
  os << kCsvHeader << '\n';
  for (const auto& row : rows) {
    os << row.algorithm << ',' << row.s << ',' << detail::format_real(row.sigma)
       << ',' << detail::format_real(row.success_frequency) << ','
       << detail::format_real(row.mean_time_ms) << ','
       << detail::format_real(row.nmse) << ',' << row.trials << '\n';
  }
}

inline void write_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_csv(rows, os);
  if (!os) throw std::runtime_error("write failed: " + path);
}

inline std::vector<SummaryRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader)
    throw std::runtime_error("csv: missing or unexpected header");
  std::vector<SummaryRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (fields.size() != 7) throw std::runtime_error("csv: bad row '" + line + "'");
    SummaryRow row;
    row.algorithm = fields[0];
    row.s = static_cast<Index>(std::stoll(fields[1]));
    row.sigma = std::stod(fields[2]);
    row.success_frequency = std::stod(fields[3]);
    row.mean_time_ms = std::stod(fields[4]);
    row.nmse = std::stod(fields[5]);
    row.trials = static_cast<Index>(std::stoll(fields[6]));
    rows.push_back(row);
  }
  return rows;
}

inline std::vector<SummaryRow> read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  return read_csv(is);
}

/// Sidecar recording what produced a results file: PRNG version, a stable
/// hash of the canonical config JSON, and the library version.
inline void write_run_manifest(const ExperimentConfig& cfg, const std::string& path) {
  const nlohmann::json cfg_json = cfg;
  const nlohmann::json manifest{
      {"schema_version", kConfigSchemaVersion},
      {"prng", kPrngVersion},
      {"config_hash", detail::fnv1a64(cfg_json.dump())},
      {"library_version", kLibraryVersion},
  };
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << manifest.dump() << '\n';
}

}  // namespace nst
