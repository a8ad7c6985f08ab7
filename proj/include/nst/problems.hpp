#pragma once

#include <cmath>
#include <string>

#include "nst/matrix_io.hpp"
#include "nst/rng.hpp"
#include "nst/support.hpp"
#include "nst/types.hpp"

#include <nlohmann/json.hpp>

namespace nst {

enum class SignalEnsemble { Gaussian, Bernoulli, Linear };

inline std::string to_string(SignalEnsemble e) {
  switch (e) {
    case SignalEnsemble::Gaussian: return "gaussian";
    case SignalEnsemble::Bernoulli: return "bernoulli";
    case SignalEnsemble::Linear: return "linear";
  }
  return "";
}

inline SignalEnsemble ensemble_from_string(const std::string& s) {
  if (s == "gaussian") return SignalEnsemble::Gaussian;
  if (s == "bernoulli") return SignalEnsemble::Bernoulli;
  if (s == "linear") return SignalEnsemble::Linear;
  throw std::invalid_argument("unknown signal ensemble '" + s + "'");
}

template <class Scalar>
struct ProblemInstance {
  Matrix<Scalar> a;
  Vector<Scalar> x_true;
  Vector<Scalar> y;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
  Index sparsity = 0;
};

// Distinct Philox stream tags keep the matrix, signal and noise draws of one
// seed statistically independent.
namespace rng_stream {
inline constexpr std::uint64_t kMatrix = 1;
inline constexpr std::uint64_t kSignal = 2;
inline constexpr std::uint64_t kNoise = 3;
inline constexpr std::uint64_t kSuperres = 4;
}  // namespace rng_stream

/// M x N matrix with i.i.d. standard normal entries, drawn row by row.
/// No column normalization is applied. Deterministic per seed.
inline MatrixXd gen_gaussian_matrix(Index m, Index n, std::uint64_t seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_gaussian_matrix: bad shape");
  if (m > n) throw std::invalid_argument("gen_gaussian_matrix: requires M <= N");
  Philox rng(seed, rng_stream::kMatrix);
  MatrixXd a(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = rng.next_gaussian();
  return a;
}

/// s-sparse signal on a uniformly random support. Nonzero values follow the
/// ensemble; the Linear profile places (s+1-j)/s on the j-th selected index.
inline VectorXd gen_sparse_signal(Index n, Index s, SignalEnsemble ensemble,
                                  std::uint64_t seed) {
  if (s < 1 || s > n) throw std::invalid_argument("gen_sparse_signal: need 1 <= s <= N");
  Philox rng(seed, rng_stream::kSignal);
  const std::vector<Index> support = rng.sample_subset(n, s);
  VectorXd x = VectorXd::Zero(n);
  for (Index j = 0; j < s; ++j) {
    double v = 0.0;
    switch (ensemble) {
      case SignalEnsemble::Gaussian:
        do {
          v = rng.next_gaussian();
        } while (v == 0.0);
        break;
      case SignalEnsemble::Bernoulli:
        v = rng.next_below(2) == 0 ? 1.0 : -1.0;
        break;
      case SignalEnsemble::Linear:
        v = static_cast<double>(s - j) / static_cast<double>(s);
        break;
    }
    x[support[static_cast<std::size_t>(j)]] = v;
  }
  return x;
}

/// y + e with e i.i.d. N(0, sigma^2). sigma = 0 returns y unchanged, bit-exact.
inline VectorXd add_noise(const VectorXd& y, double sigma, std::uint64_t seed) {
  if (sigma < 0) throw std::invalid_argument("add_noise: sigma must be >= 0");
  if (sigma == 0.0) return y;
  Philox rng(seed, rng_stream::kNoise);
  VectorXd out = y;
  for (Index i = 0; i < out.size(); ++i) out[i] += sigma * rng.next_gaussian();
  return out;
}

/// Complex case: independent real and imaginary parts, each N(0, sigma^2/2),
/// so E|e_i|^2 = sigma^2.
inline VectorXcd add_noise(const VectorXcd& y, double sigma, std::uint64_t seed) {
  if (sigma < 0) throw std::invalid_argument("add_noise: sigma must be >= 0");
  if (sigma == 0.0) return y;
  Philox rng(seed, rng_stream::kNoise);
  const double scale = sigma / std::sqrt(2.0);
  VectorXcd out = y;
  for (Index i = 0; i < out.size(); ++i) {
    const double re = scale * rng.next_gaussian();
    const double im = scale * rng.next_gaussian();
    out[i] += std::complex<double>(re, im);
  }
  return out;
}

/// Fourier sampling operator A_mn = exp(-i 2 pi w_m g_n) on the uniform grid
/// g_n = n / N_grid with integer sample points w_m = m. Every entry has unit
/// modulus; for M = N_grid the rows are the (scaled) DFT basis.
inline MatrixXcd superres_operator(Index m, Index n_grid) {
  if (m < 1 || n_grid < 1) throw std::invalid_argument("superres_operator: bad shape");
  MatrixXcd a(m, n_grid);
  const double step = 2.0 * M_PI / static_cast<double>(n_grid);
  for (Index row = 0; row < m; ++row)
    for (Index col = 0; col < n_grid; ++col) {
      const double phase = -step * static_cast<double>(row) * static_cast<double>(col);
      a(row, col) = std::complex<double>(std::cos(phase), std::sin(phase));
    }
  return a;
}

/// Spike-train instance: J distinct on-grid locations with unit-modulus
/// amplitudes of uniformly random phase, measured by superres_operator.
inline ProblemInstance<std::complex<double>> superres_instance(Index j_spikes, Index m,
                                                               Index n_grid,
                                                               std::uint64_t seed) {
  if (j_spikes < 1 || j_spikes > n_grid)
    throw std::invalid_argument("superres_instance: need 1 <= J <= N_grid");
  Philox rng(seed, rng_stream::kSuperres);
  ProblemInstance<std::complex<double>> inst;
  inst.a = superres_operator(m, n_grid);
  inst.x_true = VectorXcd::Zero(n_grid);
  const std::vector<Index> support = rng.sample_subset(n_grid, j_spikes);
  for (Index idx : support) {
    const double phase = 2.0 * M_PI * rng.next_double();
    inst.x_true[idx] = std::complex<double>(std::cos(phase), std::sin(phase));
  }
  inst.y = inst.a * inst.x_true;
  inst.noise_sigma = 0.0;
  inst.seed = seed;
  inst.sparsity = j_spikes;
  return inst;
}

/// The real Gaussian instance family: fresh A, x and noise per seed.
inline ProblemInstance<double> gaussian_instance(Index m, Index n, Index s,
                                                 SignalEnsemble ensemble, double sigma,
                                                 std::uint64_t seed) {
  ProblemInstance<double> inst;
  inst.a = gen_gaussian_matrix(m, n, seed);
  inst.x_true = gen_sparse_signal(n, s, ensemble, seed);
  inst.y = add_noise(VectorXd(inst.a * inst.x_true), sigma, seed);
  inst.noise_sigma = sigma;
  inst.seed = seed;
  inst.sparsity = s;
  return inst;
}

/// Writes <prefix>.A.txt, <prefix>.x.txt, <prefix>.y.txt and a one-line JSON
/// manifest <prefix>.manifest.json.
template <class Scalar>
void save_instance(const std::string& prefix, const ProblemInstance<Scalar>& inst,
                   const std::string& ensemble_name) {
  write_matrix(prefix + ".A.txt", inst.a);
  write_vector(prefix + ".x.txt", inst.x_true);
  write_vector(prefix + ".y.txt", inst.y);
  nlohmann::json manifest{
      {"seed", inst.seed},
      {"ensemble", ensemble_name},
      {"M", inst.a.rows()},
      {"N", inst.a.cols()},
      {"s", inst.sparsity},
      {"sigma", inst.noise_sigma},
      {"field", is_complex_v<Scalar> ? "complex" : "real"},
      {"prng", "philox4x64-10/v1"},
  };
  if (ensemble_name == "superres") {
    // these generator choices are conventions of this library, recorded so
    // downstream consumers know what the instance encodes
    manifest["sample_points"] = "integer 0..M-1";
    manifest["amplitudes"] = "unit-modulus, uniform phase";
    manifest["grid"] = "on-grid spikes, g_n = n/N";
  }
  std::ofstream os(prefix + ".manifest.json");
  if (!os) throw std::runtime_error("cannot open for writing: " + prefix + ".manifest.json");
  os << manifest.dump() << '\n';
}

}  // namespace nst
