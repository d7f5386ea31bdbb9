#include <cmath>
#include <random>

#include "doctest.h"
#include "pwsync/error.hpp"
#include "pwsync/min_density.hpp"
#include "pwsync/star_oracle.hpp"

using namespace pwsync;

namespace {

// Closed form of the star function on a bipartition generator.
double phi_on_generator(double a1, double a2, int n1, int n2, int b) {
  const double n = n1 + n2;
  const double eps1 = 1.0 / std::sqrt(n1 + static_cast<double>(n1) * n1 / n2);
  return a1 * 2.0 * n1 * eps1 - a2 * b * eps1 * n / n2;
}

}  // namespace

TEST_CASE("phi basics") {
  const Graph k2(2, {{0, 1}});
  StarFunctionParams p{1.0, 1.0, &k2};
  CHECK(phi(p, Eigen::Vector2d::Zero()) == 0.0);
  for (double a1 : {0.0, 0.5, 2.0})
    for (double a2 : {0.0, 1.0, 3.0}) {
      p.a1 = a1;
      p.a2 = a2;
      CHECK(phi(p, Eigen::Vector2d(1, -1)) == doctest::Approx(2 * a1 - 2 * a2));
    }
  p.a2 = 0.0;
  p.a1 = 1.0;
  CHECK(phi(p, Eigen::Vector2d(3, -3)) == 6.0);
  CHECK_THROWS_AS(phi(p, Eigen::Vector2d(1, 0)), InvalidArgument);
  CHECK_THROWS_AS(phi(p, Eigen::Vector3d(1, -1, 0)), InvalidArgument);
}

TEST_CASE("bipartition generators") {
  const Graph k2(2, {{0, 1}});
  const auto e2 = bipartition_generator(k2, {{0}, {1}});
  CHECK(e2(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(e2(1) == doctest::Approx(-1.0 / std::sqrt(2.0)));

  const Graph path3(3, {{0, 1}, {1, 2}});
  const auto e3 = bipartition_generator(path3, {{0}, {1, 2}});
  CHECK(e3.norm() == doctest::Approx(1.0));
  CHECK(e3(1) == doctest::Approx(-0.5 * e3(0)));
  CHECK(e3(2) == doctest::Approx(-0.5 * e3(0)));

  const Graph ring4 = generate_topology(Topology::ring(), 4);
  const auto e4 = bipartition_generator(ring4, {{0, 1}, {2, 3}});
  CHECK(e4(0) == doctest::Approx(0.5));
  CHECK(e4(1) == doctest::Approx(0.5));
  CHECK(e4(2) == doctest::Approx(-0.5));
  CHECK(e4(3) == doctest::Approx(-0.5));
  CHECK(std::abs(e4.sum()) < kZeroSumTolerance);
}

TEST_CASE("minimum a2 per bipartition") {
  const Graph k2(2, {{0, 1}});
  CHECK(min_a2_for_bipartition(1.0, {{0}, {1}}, k2) == doctest::Approx(1.0));
  const Graph ring4 = generate_topology(Topology::ring(), 4);
  CHECK(min_a2_for_bipartition(1.0, {{0, 1}, {2, 3}}, ring4) == doctest::Approx(1.0));
  const Graph star5 = generate_topology(Topology::star(), 5);
  CHECK(min_a2_for_bipartition(1.0, {{1}, {0, 2, 3, 4}}, star5) == doctest::Approx(1.6));
  CHECK(min_a2_for_bipartition(2.5, {{1}, {0, 2, 3, 4}}, star5) == doctest::Approx(4.0));
}

TEST_CASE("generator value matches the closed form") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = generate_topology(Topology::erdos_renyi(0.5, rng()), 3 + trial % 8);
    for (const auto& b : enumerate_bipartitions(g)) {
      const auto e = bipartition_generator(g, b);
      const int n1 = static_cast<int>(b.cluster1.size());
      const int n2 = static_cast<int>(b.cluster2.size());
      const StarFunctionParams p{1.3, 0.7, &g};
      CHECK(std::abs(phi(p, e) - phi_on_generator(1.3, 0.7, n1, n2, crossing_edges(g, b))) < 1e-12);
    }
  }
}

TEST_CASE("bipartition threshold equals a1 / delta") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    const Graph g = generate_topology(Topology::erdos_renyi(0.4, rng()), 2 + trial % 11);
    const double delta = min_density_exact(g).delta;
    for (double a1 : {1.0, 2.0, 0.25}) CHECK(bipartition_a2_threshold(a1, g) == doctest::Approx(a1 / delta).epsilon(1e-12));
  }
  for (int n = 3; n <= 10; ++n) {
    const Graph ring = generate_topology(Topology::ring(), n);
    CHECK(bipartition_a2_threshold(1.0, ring) == doctest::Approx(1.0 / min_density_closed_form(Topology::ring(), n)));
  }
}

TEST_CASE("global seminegativity at and below the threshold") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const Graph g = generate_topology(Topology::erdos_renyi(0.4, rng()), 4 + trial % 5);
    const double threshold = bipartition_a2_threshold(1.0, g);
    const StarFunctionParams at{1.0, threshold, &g};
    CHECK(check_global_seminegativity(at, 20000, rng()).pass);
    for (const auto& b : enumerate_bipartitions(g)) CHECK(phi(at, bipartition_generator(g, b)) <= kSeminegativityTolerance);
  }
  // below the threshold the sparsest generator itself is a witness
  const Graph path4 = generate_topology(Topology::path(), 4);
  const double threshold = bipartition_a2_threshold(1.0, path4);
  CHECK(threshold == doctest::Approx(2.0));
  const StarFunctionParams below{1.0, 0.9 * threshold, &path4};
  CHECK(phi(below, bipartition_generator(path4, {{0, 1}, {2, 3}})) > 0.0);
  const auto check = check_global_seminegativity(below, 20000, 3);
  CHECK_FALSE(check.pass);
  REQUIRE(check.violation);
  CHECK(check.value > 0.0);
  CHECK(std::abs(check.violation->sum()) < 1e-9);
}

TEST_CASE("tripartition-shaped vectors stay nonpositive at the threshold") {
  std::mt19937_64 rng(13);
  const Graph g = generate_topology(Topology::erdos_renyi(0.35, 3), 9);
  const StarFunctionParams p{1.0, bipartition_a2_threshold(1.0, g), &g};
  std::uniform_int_distribution<int> cluster(0, 2);
  std::normal_distribution<double> level;
  for (int trial = 0; trial < 2000; ++trial) {
    Eigen::Vector3d levels(level(rng), level(rng), level(rng));
    Eigen::VectorXd e(9);
    for (int i = 0; i < 9; ++i) e(i) = levels(cluster(rng));
    e.array() -= e.mean();
    CHECK(phi(p, e) <= kSeminegativityTolerance);
  }
}

TEST_CASE("phi is positively homogeneous") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  const Graph ring = generate_topology(Topology::ring(), 7);
  const StarFunctionParams p{1.2, 0.8, &ring};
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd e(7);
    for (int i = 0; i < 7; ++i) e(i) = g(rng);
    e.array() -= e.mean();
    const double k = std::abs(g(rng)) + 0.1;
    CHECK(phi(p, k * e) == doctest::Approx(k * phi(p, e)).epsilon(1e-12));
  }
}

TEST_CASE("bipartition validation") {
  const Graph path4 = generate_topology(Topology::path(), 4);
  CHECK_NOTHROW(validate_bipartition(path4, {{0, 1}, {2, 3}}));
  CHECK_THROWS_AS(validate_bipartition(path4, {{0, 2}, {1, 3}}), InvalidArgument);
  CHECK_THROWS_AS(validate_bipartition(path4, {{}, {0, 1, 2, 3}}), InvalidArgument);
  CHECK_THROWS_AS(validate_bipartition(path4, {{0, 1}, {1, 2, 3}}), InvalidArgument);
  CHECK_THROWS_AS(validate_bipartition(path4, {{0}, {1, 2}}), InvalidArgument);
  CHECK(crossing_edges(path4, {{0, 1}, {2, 3}}) == 1);
  CHECK(enumerate_bipartitions(path4).size() == 3);
  CHECK(enumerate_bipartitions(generate_topology(Topology::complete(), 4)).size() == 7);
  CHECK_THROWS_AS(enumerate_bipartitions(generate_topology(Topology::ring(), 23)), InvalidArgument);
  const Graph split(4, {{0, 1}, {2, 3}});
  const StarFunctionParams p{1.0, 1.0, &split};
  CHECK_THROWS_AS(check_global_seminegativity(p, 10, 1), GraphError);
}
