#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "nst/problems.hpp"

using nst::Index;
using nst::MatrixXcd;
using nst::MatrixXd;
using nst::SignalEnsemble;
using nst::VectorXd;

TEST_CASE("gaussian matrix generation is deterministic per seed", "[problems]") {
  const MatrixXd a = nst::gen_gaussian_matrix(20, 40, 7);
  const MatrixXd b = nst::gen_gaussian_matrix(20, 40, 7);
  const MatrixXd c = nst::gen_gaussian_matrix(20, 40, 8);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("gaussian matrix entries have the right sample moments", "[problems]") {
  const MatrixXd a = nst::gen_gaussian_matrix(500, 1000, 1);
  const double mean = a.mean();
  const double var = (a.array() - mean).square().sum() / (500.0 * 1000.0 - 1.0);
  CHECK(mean > -0.01);
  CHECK(mean < 0.01);
  CHECK(var > 0.98);
  CHECK(var < 1.02);
}

TEST_CASE("gaussian matrices have full row rank", "[problems]") {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const MatrixXd a = nst::gen_gaussian_matrix(15, 30, seed);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(a.transpose());
    CHECK(qr.rank() == 15);
  }
}

TEST_CASE("linear ensemble places the fixed profile", "[problems]") {
  const VectorXd x = nst::gen_sparse_signal(20, 4, SignalEnsemble::Linear, 3);
  std::vector<double> nz;
  for (Index i = 0; i < x.size(); ++i)
    if (x[i] != 0.0) nz.push_back(x[i]);
  std::sort(nz.begin(), nz.end(), std::greater<>());
  const std::vector<double> expect{1.0, 0.75, 0.5, 0.25};
  CHECK(nz == expect);
}

TEST_CASE("bernoulli ensemble draws unit magnitudes", "[problems]") {
  const VectorXd x = nst::gen_sparse_signal(64, 24, SignalEnsemble::Bernoulli, 12);
  int plus = 0, minus = 0;
  for (Index i = 0; i < x.size(); ++i) {
    if (x[i] == 1.0) ++plus;
    if (x[i] == -1.0) ++minus;
    CHECK((x[i] == 0.0 || std::abs(x[i]) == 1.0));
  }
  CHECK(plus + minus == 24);
  CHECK(plus > 0);
  CHECK(minus > 0);
}

TEST_CASE("every ensemble hits the requested support size exactly", "[problems]") {
  for (auto ens : {SignalEnsemble::Gaussian, SignalEnsemble::Bernoulli, SignalEnsemble::Linear}) {
    for (std::uint64_t seed : {1, 2, 3, 4}) {
      const VectorXd x = nst::gen_sparse_signal(50, 9, ens, seed);
      Index nnz = 0;
      for (Index i = 0; i < x.size(); ++i) nnz += x[i] != 0.0;
      CHECK(nnz == 9);
    }
  }
}

TEST_CASE("add_noise with sigma zero is bit-exact", "[problems]") {
  nst::Philox rng(5);
  VectorXd y(10);
  for (Index i = 0; i < 10; ++i) y[i] = rng.next_gaussian();
  const VectorXd out = nst::add_noise(y, 0.0, 99);
  CHECK(out == y);
}

TEST_CASE("add_noise is reproducible and has the right energy", "[problems]") {
  const VectorXd y = VectorXd::Zero(500);
  const VectorXd e1 = nst::add_noise(y, 0.05, 21);
  const VectorXd e2 = nst::add_noise(y, 0.05, 21);
  CHECK(e1 == e2);
  const double per_sample = e1.squaredNorm() / 500.0;
  CHECK(per_sample > 0.9 * 0.05 * 0.05);
  CHECK(per_sample < 1.1 * 0.05 * 0.05);
}

TEST_CASE("complex noise splits energy across parts", "[problems]") {
  const nst::VectorXcd y = nst::VectorXcd::Zero(500);
  const nst::VectorXcd e = nst::add_noise(y, 0.1, 4);
  const double per_sample = e.squaredNorm() / 500.0;
  CHECK(per_sample > 0.9 * 0.01);
  CHECK(per_sample < 1.1 * 0.01);
}

TEST_CASE("superres operator rows and moduli", "[problems]") {
  const MatrixXcd a = nst::superres_operator(5, 12);
  for (Index j = 0; j < 12; ++j)
    CHECK(a(0, j) == std::complex<double>(1.0, 0.0));  // w_0 = 0 row
  for (Index i = 0; i < 5; ++i)
    for (Index j = 0; j < 12; ++j)
      CHECK(std::abs(a(i, j)) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("square superres operator is a scaled unitary", "[problems]") {
  const Index n = 16;
  const MatrixXcd a = nst::superres_operator(n, n);
  const MatrixXcd gram = a * a.adjoint() / static_cast<double>(n);
  CHECK((gram - MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("superres instance satisfies its construction identity", "[problems]") {
  const auto inst = nst::superres_instance(5, 40, 60, 11);
  CHECK((inst.a * inst.x_true - inst.y).norm() <= 1e-12 * inst.y.norm());
  Index nnz = 0;
  for (Index i = 0; i < inst.x_true.size(); ++i) {
    if (inst.x_true[i] != std::complex<double>(0.0, 0.0)) {
      ++nnz;
      CHECK(std::abs(inst.x_true[i]) == Catch::Approx(1.0).epsilon(1e-12));
    }
  }
  CHECK(nnz == 5);
}

TEST_CASE("single spike at the origin measures to the all-ones vector", "[problems]") {
  const MatrixXcd a = nst::superres_operator(6, 10);
  nst::VectorXcd x = nst::VectorXcd::Zero(10);
  x[0] = 1.0;
  const nst::VectorXcd y = a * x;
  for (Index i = 0; i < 6; ++i)
    CHECK(std::abs(y[i] - std::complex<double>(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("instances export to text files plus a manifest", "[problems]") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "nst_problems_test";
  fs::create_directories(dir);
  const std::string prefix = (dir / "inst").string();

  const auto inst = nst::gaussian_instance(6, 12, 3, SignalEnsemble::Gaussian, 0.01, 13);
  nst::save_instance(prefix, inst, "gaussian");

  const auto a = nst::read_matrix(prefix + ".A.txt");
  const auto x = nst::read_matrix(prefix + ".x.txt");
  const auto y = nst::read_matrix(prefix + ".y.txt");
  CHECK(a.real == inst.a);
  CHECK(x.real_vector() == inst.x_true);
  CHECK(y.real_vector() == inst.y);

  std::ifstream mf(prefix + ".manifest.json");
  REQUIRE(mf.good());
  nlohmann::json manifest;
  mf >> manifest;
  CHECK(manifest["seed"] == 13);
  CHECK(manifest["ensemble"] == "gaussian");
  CHECK(manifest["M"] == 6);
  CHECK(manifest["N"] == 12);
  CHECK(manifest["sigma"] == 0.01);
  CHECK(manifest["prng"] == "philox4x64-10/v1");

  fs::remove_all(dir);
}
