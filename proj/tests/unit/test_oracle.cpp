#include <algorithm>

#include "doctest.h"
#include "ersketch/errors.hpp"
#include "ersketch/oracle.hpp"
#include "helpers.hpp"

using namespace ersketch;

TEST_CASE("resistance examples") {
  CHECK(oracle::exact_effective_resistance(test::single_edge(4.0), 0, 1) == doctest::Approx(0.25));
  CHECK(oracle::exact_effective_resistance(test::complete(3), 0, 2) == doctest::Approx(2.0 / 3.0));
  CHECK(oracle::exact_effective_resistance(test::path(3), 0, 2) == doctest::Approx(2.0));
  CHECK(oracle::exact_effective_resistance_solve(test::path(3), 0, 2) == doctest::Approx(2.0));
}

TEST_CASE("pseudoinverse and linear-solve resistances agree") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = test::random_connected(25, 0.15, seed);
    const oracle::ResistanceOracle r(g);
    for (Vertex u = 0; u < 25; u += 2)
      for (Vertex v = u + 1; v < 25; v += 3)
        CHECK(std::abs(r(u, v) - oracle::exact_effective_resistance_solve(g, u, v)) <= 1e-10 * r(u, v));
  }
}

TEST_CASE("Fact 1 floor on random graphs") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = test::random_connected(20, 0.3, 50 + seed);
    const oracle::ResistanceOracle r(g);
    for (Vertex u = 0; u < 20; ++u)
      for (Vertex v = u + 1; v < 20; ++v)
        CHECK(r(u, v) >= 0.5 * (1.0 / g.degree(u) + 1.0 / g.degree(v)) - 1e-12);
  }
}

TEST_CASE("disconnected input is rejected") {
  const std::vector<Edge> two{{0, 1, 1.0}, {2, 3, 1.0}};
  const auto g = build_graph(4, two);
  CHECK_THROWS_AS(oracle::ResistanceOracle{g}, ValidationError);
  CHECK_THROWS_AS(oracle::matrix_tree_log_count(g), ValidationError);
}

TEST_CASE("cap") {
  CHECK_NOTHROW(oracle::check_cap(oracle::kOracleCap));
  CHECK_THROWS_AS(oracle::check_cap(oracle::kOracleCap + 1), CapabilityError);
}

TEST_CASE("exact sigma: coordinates sum to zero, two-vertex closed form") {
  const auto g = test::random_connected(12, 0.3, 2);
  const auto sigma = oracle::exact_sigma_matrix(g, oracle::sigma_truncation_length(g, oracle::exact_nu2(g)));
  for (Eigen::Index u = 0; u < sigma.cols(); ++u) CHECK(std::abs(sigma.col(u).sum()) < 1e-12);

  // Single edge: X^t 1_0 - pi = (1/2) 0^t (1, -1) after the lazy step kills
  // the deviation, so (sigma_0)_0 = 1/2 * 1/2 = 1/4.
  const auto e = test::single_edge();
  const auto s0 = oracle::exact_sigma(e, 0, 60);
  CHECK(s0(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(s0(1) == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("normalized spectra") {
  const auto k5 = oracle::exact_spectrum_normalized(test::complete(5));
  CHECK(std::abs(k5[0]) < 1e-12);
  for (std::size_t i = 1; i < 5; ++i) CHECK(k5[i] == doctest::Approx(1.25));
  const auto e = oracle::exact_spectrum_normalized(test::single_edge());
  CHECK(e[1] == doctest::Approx(2.0));
  const std::vector<Edge> two{{0, 1, 1.0}, {2, 3, 1.0}};
  CHECK(std::abs(oracle::exact_spectrum_normalized(build_graph(4, two))[1]) < 1e-12);
}

TEST_CASE("matrix-tree examples") {
  CHECK(oracle::matrix_tree_log_count(test::complete(3)) == doctest::Approx(std::log(3.0)));
  CHECK(oracle::matrix_tree_log_count(test::complete(4)) == doctest::Approx(std::log(16.0)));
  CHECK(oracle::matrix_tree_log_count(test::cycle(5)) == doctest::Approx(std::log(5.0)));
  const std::vector<Edge> tri{{0, 1, 1.0}, {1, 2, 2.0}, {0, 2, 3.0}};
  CHECK(oracle::matrix_tree_log_count(build_graph(3, tri)) == doctest::Approx(std::log(11.0)));
}

TEST_CASE("cofactor does not depend on the deleted row, and matches the spectrum") {
  const auto g = test::random_connected(18, 0.3, 4, 0.5, 3.0);
  const double a = oracle::matrix_tree_log_count(g, 0);
  CHECK(oracle::matrix_tree_log_count(g, 7) == doctest::Approx(a).epsilon(1e-10));
  CHECK(oracle::matrix_tree_log_count(g, 17) == doctest::Approx(a).epsilon(1e-10));
  CHECK(oracle::log_tree_count_from_spectrum(g) == doctest::Approx(a).epsilon(1e-9));
}

TEST_CASE("walk distributions") {
  const auto g = test::random_connected(15, 0.2, 8);
  const auto d0 = oracle::exact_walk_distribution(g, 3, 0);
  CHECK(d0(3) == 1.0);
  CHECK(d0.sum() == 1.0);
  const auto d = oracle::exact_walk_distribution(g, 3, 17);
  CHECK(d.sum() == doctest::Approx(1.0).epsilon(1e-12));

  const auto k = test::complete(6);
  const auto far = oracle::exact_walk_distribution(k, 0, 200);
  for (Eigen::Index v = 0; v < 6; ++v) CHECK(std::abs(far(v) - 1.0 / 6.0) < 1e-10);
}

TEST_CASE("appendix convergence bound") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto g = test::random_connected(20, 0.2, 30 + seed);
    const double nu2 = oracle::exact_nu2(g);
    const auto pi = stationary_distribution(g);
    const auto deg = g.degrees();
    const double scale = 20.0 * *std::max_element(deg.begin(), deg.end()) /
                         *std::min_element(deg.begin(), deg.end());
    const Eigen::MatrixXd x = oracle::lazy_walk_matrix(g);
    Eigen::Map<const Eigen::VectorXd> p(pi.data(), 20);
    for (Vertex u = 0; u < 20; u += 5) {
      Eigen::VectorXd cur = Eigen::VectorXd::Unit(20, u);
      for (int t = 0; t <= 200; ++t) {
        CHECK((cur - p).lpNorm<1>() <= std::exp(-t * nu2 / 2.0) * scale + 1e-10);
        cur = x * cur;
      }
    }
  }
}

TEST_CASE("dense Schur complement and principal submatrix") {
  const Eigen::MatrixXd lap = oracle::laplacian(test::path(3));
  const Eigen::MatrixXd sc = oracle::dense_schur_complement(lap, VertexSet({0, 2}));
  CHECK(sc(0, 0) == doctest::Approx(0.5));
  CHECK(sc(0, 1) == doctest::Approx(-0.5));
  const Eigen::MatrixXd sub = oracle::principal_submatrix(lap, VertexSet({1, 2}));
  CHECK(sub(0, 0) == 2.0);
  CHECK(sub(1, 1) == 1.0);
  const auto det = oracle::log_abs_det(sub);
  CHECK(det.sign == 1);
  CHECK(det.log_abs == doctest::Approx(0.0));
}
