#include <doctest.h>

#include <cmath>
#include <vector>

#include "rfsom/forest.hpp"
#include "rfsom/mds.hpp"
#include "rfsom/rng.hpp"
#include "test_helpers.hpp"

using namespace rfsom;
using rfsom::testing::random_dataset;

namespace {

double frobenius(const Matrix& a) {
  double s = 0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

Matrix random_symmetric(Rng& rng, std::size_t n, double scale = 1.0) {
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = scale * rng.uniform(-1, 1);
  return a;
}

}  // namespace

TEST_SUITE_BEGIN("mds");

TEST_CASE("symmetric_eigen on [[2,1],[1,2]] gives eigenvalues {3,1}") {
  Matrix a(2, 2);
  a(0, 0) = 2;
  a(0, 1) = 1;
  a(1, 0) = 1;
  a(1, 1) = 2;
  auto r = symmetric_eigen(a);
  REQUIRE(r.values.size() == 2);
  CHECK(r.values[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.values[1] == doctest::Approx(1.0).epsilon(1e-12));
  // Eigenvector for 3 is (1,1)/sqrt(2) up to sign.
  CHECK(std::abs(r.vectors(0, 0)) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(r.vectors(0, 0) == doctest::Approx(r.vectors(0, 1)).epsilon(1e-10));
}

TEST_CASE("symmetric_eigen: descending order, orthonormal vectors, small residuals") {
  Rng rng(149);
  for (int trial = 0; trial < 20; ++trial) {
    std::size_t n = 2 + rng.below(9);
    Matrix a = random_symmetric(rng, n, 2.0);
    auto r = symmetric_eigen(a);
    REQUIRE(r.values.size() == n);
    for (std::size_t k = 1; k < n; ++k) CHECK(r.values[k] <= r.values[k - 1] + 1e-12);

    double norm = frobenius(a);
    for (std::size_t k = 0; k < n; ++k) {
      // A v = lambda v
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0;
        for (std::size_t j = 0; j < n; ++j) av += a(i, j) * r.vectors(k, j);
        double target = r.values[k] * r.vectors(k, i);
        CHECK(std::abs(av - target) <= std::max(norm, 1.0) * 1e-10);
      }
      for (std::size_t k2 = 0; k2 < n; ++k2) {
        double dot = 0;
        for (std::size_t j = 0; j < n; ++j) dot += r.vectors(k, j) * r.vectors(k2, j);
        CHECK(std::abs(dot - (k == k2 ? 1.0 : 0.0)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("symmetric_eigen rejects non-square and non-symmetric input") {
  Matrix rect(2, 3);
  CHECK_THROWS(symmetric_eigen(rect));
  Matrix asym(2, 2);
  asym(0, 1) = 1.0;
  asym(1, 0) = 2.0;
  CHECK_THROWS(symmetric_eigen(asym));
}

TEST_CASE("classical_mds recovers three collinear points") {
  Matrix d(3, 3);
  d(0, 1) = d(1, 0) = 1;
  d(1, 2) = d(2, 1) = 1;
  d(0, 2) = d(2, 0) = 2;
  auto emb = classical_mds(DistanceMatrix{d});
  REQUIRE(emb.coordinates.rows() == 3);
  // Pairwise embedded distances match the inputs.
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      double dx = emb.coordinates(i, 0) - emb.coordinates(j, 0);
      double dy = emb.coordinates(i, 1) - emb.coordinates(j, 1);
      CHECK(std::sqrt(dx * dx + dy * dy) == doctest::Approx(d(i, j)).epsilon(1e-9));
    }
  // Collinear input: the second axis carries (numerically) nothing.
  CHECK(std::abs(emb.eigenvalues_used[1]) < 1e-9);
  CHECK(emb.negative_mass_fraction < 1e-9);
}

TEST_CASE("classical_mds reconstructs random planar point sets") {
  Rng rng(151);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 3 + rng.below(30);
    Matrix pts(n, 2);
    for (std::size_t i = 0; i < n; ++i) {
      pts(i, 0) = rng.uniform(-5, 5);
      pts(i, 1) = rng.uniform(-5, 5);
    }
    auto d = euclidean_distance_matrix(pts);
    auto emb = classical_mds(d);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, d.values(i, j));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double dx = emb.coordinates(i, 0) - emb.coordinates(j, 0);
        double dy = emb.coordinates(i, 1) - emb.coordinates(j, 1);
        double rec = std::sqrt(dx * dx + dy * dy);
        CHECK(std::abs(rec - d.values(i, j)) <= scale * 1e-6);
      }
  }
}

TEST_CASE("classical_mds centers coordinates and fixes axis signs") {
  Rng rng(157);
  Matrix pts(8, 2);
  for (std::size_t i = 0; i < 8; ++i) {
    pts(i, 0) = rng.uniform(0, 10);
    pts(i, 1) = rng.uniform(0, 10);
  }
  auto emb = classical_mds(euclidean_distance_matrix(pts));
  for (std::size_t axis = 0; axis < 2; ++axis) {
    double mean = 0;
    double largest = 0;
    for (std::size_t i = 0; i < 8; ++i) {
      mean += emb.coordinates(i, axis);
      if (std::abs(emb.coordinates(i, axis)) > std::abs(largest))
        largest = emb.coordinates(i, axis);
    }
    CHECK(std::abs(mean / 8) <= 1e-9);
    CHECK(largest >= 0.0);  // sign convention: dominant entry positive
  }
}

TEST_CASE("non-Euclidean dissimilarities produce negative eigenvalue mass") {
  // Unit-star metric: three leaves pairwise 2 apart, hub 1 from each.
  // The leaves' circumradius (2/sqrt(3) > 1) makes this non-embeddable.
  Matrix d(4, 4);
  for (int leaf = 1; leaf <= 3; ++leaf) d(0, leaf) = d(leaf, 0) = 1.0;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) d(i, j) = 2.0;
  auto emb = classical_mds(DistanceMatrix{Matrix(d)});
  CHECK(emb.negative_mass_fraction > 0.0);
  CHECK(emb.negative_mass_fraction < 1.0);
  // Coordinates stay finite thanks to the clamp.
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t axis = 0; axis < 2; ++axis)
      CHECK(std::isfinite(emb.coordinates(i, axis)));
}

TEST_CASE("classical_mds input validation") {
  Matrix tiny(2, 2);
  CHECK_THROWS(classical_mds(DistanceMatrix{tiny}));
}

TEST_CASE("euclidean_distance_matrix basics") {
  Matrix pts(3, 2);
  pts(0, 0) = 0;
  pts(0, 1) = 0;
  pts(1, 0) = 3;
  pts(1, 1) = 4;
  pts(2, 0) = 0;
  pts(2, 1) = 1;
  auto d = euclidean_distance_matrix(pts);
  CHECK(d.values(0, 1) == doctest::Approx(5.0));
  CHECK(d.values(1, 0) == doctest::Approx(5.0));
  CHECK(d.values(0, 2) == doctest::Approx(1.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(d.values(i, i) == 0.0);
}

TEST_CASE("dissimilarity_from_proximity flips scale and zeroes the diagonal") {
  Rng rng(163);
  Dataset data = random_dataset(rng, 12, 3, 2);
  RandomForest forest = train_forest(data, 8, 1, 3);
  Matrix rows(6, 3);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 3; ++j) rows(i, j) = rng.uniform();
  auto prox = proximity_matrix(forest, rows);
  auto dis = dissimilarity_from_proximity(prox.values);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(dis.values(i, i) == 0.0);
    for (std::size_t j = 0; j < 6; ++j) {
      if (i != j) CHECK(dis.values(i, j) == doctest::Approx(1.0 - prox.values(i, j)));
      CHECK(dis.values(i, j) == dis.values(j, i));
    }
  }
}

TEST_CASE("rf dissimilarities run through classical_mds") {
  Rng rng(167);
  Dataset data = random_dataset(rng, 15, 3, 2);
  RandomForest forest = train_forest(data, 10, 1, 29);
  auto prox = proximity_matrix(forest, data.attributes);
  auto emb = classical_mds(dissimilarity_from_proximity(prox.values));
  CHECK(emb.coordinates.rows() == 15);
  CHECK(emb.negative_mass_fraction >= 0.0);
  for (std::size_t i = 0; i < 15; ++i)
    for (std::size_t axis = 0; axis < 2; ++axis)
      CHECK(std::isfinite(emb.coordinates(i, axis)));
}

TEST_SUITE_END();
