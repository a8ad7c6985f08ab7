#include <catch2/catch_amalgamated.hpp>

#include "nst/certificate.hpp"
#include "nst/problems.hpp"
#include "nst/solvers.hpp"

using nst::CertificateRow;
using nst::Index;
using nst::MatrixXd;
using nst::Schedule;
using nst::VectorXd;

TEST_CASE("certificate of the identity has zero constants", "[certificate]") {
  const MatrixXd a = MatrixXd::Identity(6, 6);
  const auto rows = nst::convergence_certificate<double>(a, 2, Schedule::constant(2), 3);
  REQUIRE(rows.size() == 3);
  for (const CertificateRow& row : rows) {
    CHECK(row.delta <= 1e-12);
    CHECK(row.gamma <= 1e-12);
    CHECK(row.theta <= 1e-12);
    CHECK(row.rho <= 1e-6);
    CHECK(row.holds);
    CHECK(row.applies);
    // delta = gamma = 0 collapses the noise constant to 1 + sqrt(2)
    CHECK(row.c == Catch::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("certificate orders follow the schedule with f(0) = 0", "[certificate]") {
  const MatrixXd a =
      nst::precondition<double>(nst::gen_gaussian_matrix(7, 8, 10), nst::PreconditionMode::Half);
  const Index s = 1;
  const auto rows = nst::convergence_certificate<double>(a, s, Schedule::constant(1), 2);
  REQUIRE(rows.size() == 2);
  // k = 1: gamma order s + f(0) + f(1) = 2; k = 2: order 3
  const double g2 = nst::exact_constant<double>(a, 2, nst::RipKind::Gamma).value;
  const double g3 = nst::exact_constant<double>(a, 3, nst::RipKind::Gamma).value;
  CHECK(rows[0].gamma == Catch::Approx(g2).epsilon(1e-12));
  CHECK(rows[1].gamma == Catch::Approx(g3).epsilon(1e-12));
  CHECK(rows[0].holds);
  CHECK(rows[1].holds);
}

TEST_CASE("certificate clamps orders at the column count", "[certificate]") {
  const MatrixXd a =
      nst::precondition<double>(nst::gen_gaussian_matrix(5, 6, 3), nst::PreconditionMode::Half);
  // quadratic schedule pushes s + f(k) past N quickly
  const auto rows = nst::convergence_certificate<double>(a, 2, Schedule::quadratic(), 4);
  REQUIRE(rows.size() == 4);
  const double d_full = nst::exact_constant<double>(a, 6, nst::RipKind::Delta).value;
  CHECK(rows[3].delta == Catch::Approx(d_full).epsilon(1e-12));
  CHECK_FALSE(rows[0].applies);  // f(1) = 1 < s = 2
  CHECK(rows[2].applies);
}

TEST_CASE("empirical error ratios stay within the certified contraction factor",
          "[certificate]") {
  // frame whose exact constants satisfy the condition at every row
  const MatrixXd a =
      nst::precondition<double>(nst::gen_gaussian_matrix(7, 8, 10), nst::PreconditionMode::Half);
  const Index s = 1;
  const Schedule sched = Schedule::constant(1);
  const auto rows = nst::convergence_certificate<double>(a, s, sched, 6);
  for (const auto& row : rows) REQUIRE(row.holds);

  nst::Philox rng(500);
  for (int rep = 0; rep < 20; ++rep) {
    VectorXd x = VectorXd::Zero(8);
    x[rng.next_below(8)] = rng.next_gaussian() + (rng.next_below(2) ? 2.0 : -2.0);
    const VectorXd y = a * x;
    nst::SolverConfig cfg;
    cfg.epsilon = 0.0;
    cfg.max_iters = 6;
    cfg.record_history = true;
    const auto res = nst::adpt_nst_ht_fb<double>(a, y, sched, cfg);

    double prev_err = x.norm();  // ||x - u^0||
    for (std::size_t k = 0; k < res.iterate_history.size(); ++k) {
      const double err = (x - res.iterate_history[k]).norm();
      if (prev_err > 1e-12 * x.norm())
        CHECK(err <= rows[k].rho * prev_err + 1e-8);
      prev_err = err;
    }
  }
}

TEST_CASE("certificate validates arguments", "[certificate]") {
  const MatrixXd a = MatrixXd::Identity(4, 4);
  CHECK_THROWS_AS(nst::convergence_certificate<double>(a, 0, Schedule::quadratic(), 3),
                  std::invalid_argument);
  CHECK_THROWS_AS(nst::convergence_certificate<double>(a, 1, Schedule::quadratic(), 0),
                  std::invalid_argument);
}
