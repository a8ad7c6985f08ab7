// Command-line front end: instance generation, single solves, benchmark
// sweeps, restricted-isometry reports, convergence certificates and the
// spectral super-resolution pipeline. Exit codes: 0 success, 1 usage error,
// 2 runtime error.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nst/nst.hpp"

namespace {

using nst::Index;

struct GenOptions {
  Index m = 100, n = 200, s = 10;
  std::string ensemble = "gaussian";
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string out = "instance";
};

int run_gen(const GenOptions& opt) {
  const auto inst = nst::gaussian_instance(opt.m, opt.n, opt.s,
                                           nst::ensemble_from_string(opt.ensemble),
                                           opt.sigma, opt.seed);
  nst::save_instance(opt.out, inst, opt.ensemble);
  std::cout << "wrote " << opt.out << ".{A,x,y}.txt and " << opt.out
            << ".manifest.json\n";
  return 0;
}

struct SolveOptions {
  std::string matrix_path, rhs_path, truth_path;
  std::string algo = "adpt";
  std::string schedule = "quad";
  double eps = 1e-10;
  Index max_iters = 100;
  Index s = 0;
  Index p = 2;
  double mu = 1.0;
  bool tail = false;
};

template <class Scalar>
void print_solution(const nst::SolveResult<Scalar>& res, const nst::Matrix<Scalar>& a,
                    const nst::Vector<Scalar>& y,
                    const std::optional<nst::Vector<Scalar>>& truth) {
  std::cout << "status: " << nst::to_string(res.status) << "\n"
            << "iterations: " << res.iterations << "\n"
            << "residual: " << (y - a * res.estimate).norm() << "\n";
  if (res.diverged) std::cout << "diverged: true\n";
  if (truth) {
    const double rel = (res.estimate - *truth).norm() / truth->norm();
    std::cout << "relative-error: " << rel << "\n";
  }
  std::cout << "support:";
  const nst::SupportSet supp = nst::nonzero_support<Scalar>(res.estimate);
  for (Index i : supp) std::cout << ' ' << i;
  std::cout << "\nestimate (index: value):\n";
  for (Index i : supp) std::cout << "  " << i << ": " << res.estimate[i] << "\n";
}

template <class Scalar>
int solve_typed(const SolveOptions& opt, const nst::Matrix<Scalar>& a,
                const nst::Vector<Scalar>& y,
                const std::optional<nst::Vector<Scalar>>& truth) {
  nst::SolverConfig cfg;
  cfg.epsilon = opt.eps;
  cfg.max_iters = opt.max_iters;
  cfg.feedback_via_tail = opt.tail;

  const Index s = opt.s > 0 ? opt.s : std::max<Index>(1, a.rows() / 4);
  nst::SolveResult<Scalar> res;
  if (opt.algo == "adpt")
    res = nst::adpt_nst_ht_fb<Scalar>(a, y, nst::Schedule::parse(opt.schedule), cfg);
  else if (opt.algo == "nst")
    res = nst::nst_ht_fb<Scalar>(a, y, s, cfg);
  else if (opt.algo == "omp")
    res = nst::omp<Scalar>(a, y, s, cfg);
  else if (opt.algo == "gomp")
    res = nst::gomp<Scalar>(a, y, opt.p, std::min<Index>(a.rows() - 1, opt.p * s), cfg);
  else if (opt.algo == "iht")
    res = nst::iht<Scalar>(a, y, s, opt.mu, cfg);
  else if (opt.algo == "htp")
    res = nst::htp<Scalar>(a, y, s, cfg);
  else if (opt.algo == "ghtp")
    res = nst::ghtp<Scalar>(a, y, cfg, nst::Schedule::parse(opt.schedule));
  else
    throw CLI::ValidationError("--algo", "unknown algorithm '" + opt.algo + "'");

  print_solution(res, a, y, truth);
  return res.status == nst::SolveStatus::SingularGram ? 2 : 0;
}

int run_solve(const SolveOptions& opt) {
  const nst::TextMatrix a = nst::read_matrix(opt.matrix_path);
  const nst::TextMatrix y = nst::read_matrix(opt.rhs_path);
  std::optional<nst::TextMatrix> truth;
  if (!opt.truth_path.empty()) truth = nst::read_matrix(opt.truth_path);

  if (a.is_complex || y.is_complex || (truth && truth->is_complex)) {
    std::optional<nst::VectorXcd> t;
    if (truth) t = truth->complex_vector();
    return solve_typed<std::complex<double>>(opt, a.is_complex ? a.cplx
                                                               : a.real.cast<std::complex<double>>(),
                                             y.complex_vector(), t);
  }
  std::optional<nst::VectorXd> t;
  if (truth) t = truth->real_vector();
  return solve_typed<double>(opt, a.real, y.real_vector(), t);
}

struct BenchOptions {
  std::string config_path, out_path = "results.csv";
  int jobs = -1;
  Index trials = -1;
  std::int64_t base_seed = -1;
};

int run_bench(const BenchOptions& opt) {
  nst::ExperimentConfig cfg = nst::load_config(opt.config_path);
  if (opt.jobs >= 0) cfg.jobs = opt.jobs;
  if (opt.trials >= 1) cfg.trials = opt.trials;
  if (opt.base_seed >= 0) cfg.base_seed = static_cast<std::uint64_t>(opt.base_seed);

  const auto records = nst::run_experiment(cfg);
  const auto rows = nst::summarize(records);
  nst::write_csv(rows, opt.out_path);
  nst::write_run_manifest(cfg, opt.out_path + ".manifest.json");
  std::cout << "wrote " << rows.size() << " summary rows to " << opt.out_path << "\n";
  for (const auto& row : rows)
    std::cout << "  " << row.algorithm << " s=" << row.s << " sigma=" << row.sigma
              << " success=" << row.success_frequency << " nmse=" << row.nmse << "\n";
  return 0;
}

struct RipOptions {
  std::string matrix_path;
  Index order = 1;
  std::string which = "delta";
  std::uint64_t mc_trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t budget = 0;
};

template <class Scalar>
nst::RipReport rip_typed(const RipOptions& opt, const nst::Matrix<Scalar>& a) {
  const nst::RipKind kind = nst::rip_kind_from_string(opt.which);
  const std::uint64_t budget = opt.budget > 0 ? opt.budget : nst::default_enum_budget();
  if (opt.mc_trials > 0)
    return nst::mc_lower_bound<Scalar>(a, opt.order, kind, opt.mc_trials, opt.seed);
  return nst::exact_constant<Scalar>(a, opt.order, kind, budget);
}

int run_rip(const RipOptions& opt) {
  const nst::TextMatrix m = nst::read_matrix(opt.matrix_path);
  const nst::RipReport rep = m.is_complex ? rip_typed<std::complex<double>>(opt, m.cplx)
                                          : rip_typed<double>(opt, m.real);
  const std::string id = std::filesystem::path(opt.matrix_path).stem().string();
  std::cout << id << ',' << rep.order << ',' << nst::to_string(rep.which) << ','
            << nst::detail::format_real(rep.value) << ','
            << (rep.method == nst::RipReport::Method::Exact
                    ? std::string("exact")
                    : "mc(" + std::to_string(rep.trials) + "," + std::to_string(rep.seed) + ")")
            << ',' << rep.supports_examined << "\n";
  return 0;
}

struct CertifyOptions {
  std::string matrix_path;
  Index s = 1;
  std::string schedule = "quad";
  Index k_max = 5;
  std::uint64_t budget = 0;
};

int run_certify(const CertifyOptions& opt) {
  const nst::TextMatrix m = nst::read_matrix(opt.matrix_path);
  const std::uint64_t budget = opt.budget > 0 ? opt.budget : nst::default_enum_budget();
  const nst::Schedule sched = nst::Schedule::parse(opt.schedule);
  const auto rows = m.is_complex
                        ? nst::convergence_certificate<std::complex<double>>(
                              m.cplx, opt.s, sched, opt.k_max, budget)
                        : nst::convergence_certificate<double>(m.real, opt.s, sched,
                                                               opt.k_max, budget);
  std::cout << "k,f_k,delta,gamma,theta,rho,c,holds\n";
  for (const auto& row : rows)
    std::cout << row.k << ',' << row.f_k << ',' << nst::detail::format_real(row.delta)
              << ',' << nst::detail::format_real(row.gamma) << ','
              << nst::detail::format_real(row.theta) << ','
              << nst::detail::format_real(row.rho) << ','
              << nst::detail::format_real(row.c) << ',' << (row.holds ? 1 : 0) << "\n";
  return 0;
}

struct SuperresOptions {
  Index j_spikes = 5;
  Index m = 40;
  Index grid = 60;
  std::uint64_t seed = 0;
  std::string schedule = "quad";
  double eps_rel = 1e-10;
  Index max_iters = 50;
  std::string out;
};

int run_superres(const SuperresOptions& opt) {
  const auto inst = nst::superres_instance(opt.j_spikes, opt.m, opt.grid, opt.seed);
  if (!opt.out.empty()) nst::save_instance(opt.out, inst, "superres");

  nst::SolverConfig cfg;
  cfg.epsilon = opt.eps_rel * inst.y.norm();
  cfg.max_iters = opt.max_iters;
  const auto res = nst::adpt_nst_ht_fb<std::complex<double>>(
      inst.a, inst.y, nst::Schedule::parse(opt.schedule), cfg);

  const nst::SupportSet truth = nst::nonzero_support<std::complex<double>>(inst.x_true);
  // spikes carrying actual energy; the feedback pads its support with
  // numerically-zero entries
  std::vector<Index> sig;
  const double bar = 1e-8 * res.estimate.cwiseAbs().maxCoeff();
  for (Index i = 0; i < res.estimate.size(); ++i)
    if (std::abs(res.estimate[i]) > bar) sig.push_back(i);
  const nst::SupportSet found(std::move(sig));
  const double rel = (res.estimate - inst.x_true).norm() / inst.x_true.norm();

  std::cout << "status: " << nst::to_string(res.status) << "\n"
            << "iterations: " << res.iterations << "\n"
            << "locations-exact: " << (found == truth ? "yes" : "no") << "\n"
            << "amplitude-rel-error: " << rel << "\n";
  std::cout << "spikes (grid-index: amplitude):\n";
  for (Index i : found)
    std::cout << "  " << i << ": " << res.estimate[i].real() << std::showpos
              << res.estimate[i].imag() << "i" << std::noshowpos << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse recovery by adaptive null-space tuning with feedback"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate a problem instance");
  cmd_gen->add_option("-M,--M", gen.m, "rows")->check(CLI::PositiveNumber);
  cmd_gen->add_option("-N,--N", gen.n, "columns")->check(CLI::PositiveNumber);
  cmd_gen->add_option("-s,--s", gen.s, "sparsity")->check(CLI::PositiveNumber);
  cmd_gen->add_option("--ensemble", gen.ensemble, "gaussian|bernoulli|linear");
  cmd_gen->add_option("--sigma", gen.sigma, "noise std deviation");
  cmd_gen->add_option("--seed", gen.seed, "instance seed");
  cmd_gen->add_option("--out", gen.out, "output path prefix");

  SolveOptions solve;
  CLI::App* cmd_solve = app.add_subcommand("solve", "solve one instance from files");
  cmd_solve->add_option("--matrix", solve.matrix_path, "matrix file")->required();
  cmd_solve->add_option("--rhs", solve.rhs_path, "data vector file")->required();
  cmd_solve->add_option("--truth", solve.truth_path, "ground-truth vector file");
  cmd_solve->add_option("--algo", solve.algo, "adpt|nst|omp|gomp|iht|htp|ghtp");
  cmd_solve->add_option("--schedule", solve.schedule, "const:s|lin:c|quad|custom:...");
  cmd_solve->add_option("--eps", solve.eps, "absolute residual tolerance");
  cmd_solve->add_option("--max-iters", solve.max_iters, "iteration limit K");
  cmd_solve->add_option("--s", solve.s, "sparsity for nst/omp/iht/htp");
  cmd_solve->add_option("--P", solve.p, "indices per iteration for gomp");
  cmd_solve->add_option("--mu", solve.mu, "step size for iht");
  cmd_solve->add_flag("--tail", solve.tail, "feedback through the literal tail formula");

  BenchOptions bench;
  CLI::App* cmd_bench = app.add_subcommand("bench", "run a benchmark sweep");
  cmd_bench->add_option("--config", bench.config_path, "JSON experiment config")->required();
  cmd_bench->add_option("--out", bench.out_path, "output CSV path");
  cmd_bench->add_option("--jobs", bench.jobs, "worker threads (0 = all cores)");
  cmd_bench->add_option("--trials", bench.trials, "override trials per cell");
  cmd_bench->add_option("--base-seed", bench.base_seed, "override base seed");

  RipOptions rip;
  CLI::App* cmd_rip = app.add_subcommand("rip", "restricted isometry constants");
  cmd_rip->add_option("--matrix", rip.matrix_path, "matrix file")->required();
  cmd_rip->add_option("--order", rip.order, "support size s")->required();
  cmd_rip->add_option("--which", rip.which, "delta|gamma|theta");
  cmd_rip->add_option("--mc", rip.mc_trials, "Monte-Carlo trials (0 = exact)");
  cmd_rip->add_option("--seed", rip.seed, "Monte-Carlo seed");
  cmd_rip->add_option("--budget", rip.budget, "enumeration budget override");

  CertifyOptions certify;
  CLI::App* cmd_certify = app.add_subcommand("certify", "per-iteration convergence certificate");
  cmd_certify->add_option("--matrix", certify.matrix_path, "matrix file")->required();
  cmd_certify->add_option("--s", certify.s, "signal sparsity")->required();
  cmd_certify->add_option("--schedule", certify.schedule, "support-size schedule");
  cmd_certify->add_option("--k-max", certify.k_max, "rows to certify");
  cmd_certify->add_option("--budget", certify.budget, "enumeration budget override");

  SuperresOptions superres;
  CLI::App* cmd_superres = app.add_subcommand("superres", "on-grid spectral super-resolution");
  cmd_superres->add_option("--J", superres.j_spikes, "number of spikes")->check(CLI::PositiveNumber);
  cmd_superres->add_option("-M,--M", superres.m, "number of Fourier samples");
  cmd_superres->add_option("--grid", superres.grid, "grid size over [0,1)");
  cmd_superres->add_option("--seed", superres.seed, "instance seed");
  cmd_superres->add_option("--schedule", superres.schedule, "support-size schedule");
  cmd_superres->add_option("--eps-rel", superres.eps_rel, "relative residual tolerance");
  cmd_superres->add_option("--max-iters", superres.max_iters, "iteration limit K");
  cmd_superres->add_option("--out", superres.out, "also export the instance to this prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (cmd_gen->parsed()) return run_gen(gen);
    if (cmd_solve->parsed()) return run_solve(solve);
    if (cmd_bench->parsed()) return run_bench(bench);
    if (cmd_rip->parsed()) return run_rip(rip);
    if (cmd_certify->parsed()) return run_certify(certify);
    if (cmd_superres->parsed()) return run_superres(superres);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
