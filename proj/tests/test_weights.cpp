#include <random>

#include "af/weights.hpp"
#include "doctest.h"

using af::Matrix;
using af::Vector;

TEST_CASE("flags computed from the entries") {
  Matrix dense(3, 3);
  dense << 0.5, 0.5, 0.0,
           0.25, 0.5, 0.25,
           0.0, 0.5, 0.5;
  const af::WeightMatrix w = af::WeightMatrix::from_dense(dense);
  CHECK(w.nonnegative());
  CHECK(w.positive_diagonal());
  CHECK(w.symmetric_neighborhoods());
  CHECK(w.row_stochastic());
  CHECK_FALSE(w.uniform_rows());

  Matrix hollow(2, 2);
  hollow << 0.0, 1.0, 1.0, 0.0;
  CHECK_FALSE(af::WeightMatrix::from_dense(hollow).positive_diagonal());

  Matrix negative(2, 2);
  negative << 0.5, -0.5, 0.5, 0.5;
  const af::WeightMatrix neg = af::WeightMatrix::from_dense(negative);
  CHECK_FALSE(neg.nonnegative());

  Matrix lopsided(2, 2);
  lopsided << 1.0, 1.0, 0.0, 1.0;
  CHECK_FALSE(af::WeightMatrix::from_dense(lopsided).symmetric_neighborhoods());
}

TEST_CASE("sparse apply matches dense multiplication") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix dense = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 5; ++k)
      if ((i + k) % 2 == 0) dense(i, k) = dist(rng);
  const af::WeightMatrix w = af::WeightMatrix::from_dense(dense);
  Matrix s(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) s(i, j) = dist(rng);
  CHECK((w.apply(s) - dense * s).cwiseAbs().maxCoeff() < 1e-14);
  Vector p = s.col(0).cwiseAbs();
  CHECK((w.apply(p) - dense * p).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((w.row_sums() - dense.rowwise().sum()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((w.dense() - dense).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("factorization validation") {
  Matrix hat(2, 2);
  hat << 2.0, 1.0, 1.0, 3.0;
  Vector scale(2);
  scale << 2.0, 4.0;
  const af::WeightMatrix w = af::WeightMatrix::from_factorization(scale, hat);
  CHECK(w.factorization() != nullptr);
  CHECK(w.coeff(0, 0) == doctest::Approx(1.0));
  CHECK(w.coeff(1, 0) == doctest::Approx(0.25));

  Matrix asym(2, 2);
  asym << 2.0, 1.0, 0.5, 3.0;
  CHECK_THROWS_AS(af::WeightMatrix::from_factorization(scale, asym), af::Error);

  af::WeightMatrix plain = af::WeightMatrix::from_dense(hat);
  Vector bad(2);
  bad << 1.0, -1.0;
  CHECK_THROWS_AS(plain.attach_factorization(bad, hat), af::Error);
  // mismatch between Omega and Diag(w)^{-1} OmegaHat
  CHECK_THROWS_AS(plain.attach_factorization(scale, hat), af::Error);
}

TEST_CASE("triplet construction rejects malformed input") {
  CHECK_THROWS_AS(af::WeightMatrix::from_triplets(2, {0, 0}, {0, 0}, {1.0, 2.0}),
                  af::Error);
  CHECK_THROWS_AS(af::WeightMatrix::from_triplets(2, {0}, {5}, {1.0}), af::Error);
  CHECK_THROWS_AS(af::WeightMatrix::from_triplets(2, {3}, {0}, {1.0}), af::Error);
}
