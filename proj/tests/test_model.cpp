#include <doctest.h>

#include "koreg/error.hpp"
#include "koreg/model.hpp"
#include "koreg/rng.hpp"

#include <random>

using namespace koreg;

TEST_CASE("standardize: already standardized column is unchanged") {
  Matrix X(2, 1);
  X << 1, -1;
  const auto z = standardize(X);
  CHECK(z.X(0, 0) == doctest::Approx(1.0));
  CHECK(z.X(1, 0) == doctest::Approx(-1.0));
  CHECK(z.means[0] == 0.0);
  CHECK(z.scales[0] == doctest::Approx(1.0));
}

TEST_CASE("standardize: divisor-n scaling") {
  Matrix X(2, 1);
  X << 2, 4;
  const auto z = standardize(X);
  CHECK(z.X(0, 0) == doctest::Approx(-1.0));
  CHECK(z.X(1, 0) == doctest::Approx(1.0));
  CHECK(z.means[0] == doctest::Approx(3.0));
  CHECK(z.scales[0] == doctest::Approx(1.0));
}

TEST_CASE("standardize: constant column names its index") {
  Matrix X(3, 2);
  X << 1, 5, 2, 5, 3, 5;
  CHECK_THROWS_WITH_AS(standardize(X), "constant column 1", InvalidArgument);
}

TEST_CASE("standardize is idempotent and produces mean 0, sd 1") {
  Rng rng(7);
  std::normal_distribution<double> g(3.0, 2.5);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix X(10 + trial, 4);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = g(rng);
    const auto once = standardize(X);
    const auto twice = standardize(once.X);
    CHECK((once.X - twice.X).cwiseAbs().maxCoeff() <= 1e-12);
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      CHECK(std::abs(once.X.col(j).mean()) < 1e-12);
      CHECK(std::sqrt(once.X.col(j).squaredNorm() / X.rows()) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("lambda_grid") {
  SUBCASE("log-equispaced three points") {
    const Vector g = lambda_grid(1.0, 3, 0.01);
    REQUIRE(g.size() == 3);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(g[2] == doctest::Approx(0.01).epsilon(1e-14));
  }
  SUBCASE("endpoints only") {
    const Vector g = lambda_grid(1.0, 2, 0.5);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == doctest::Approx(0.5).epsilon(1e-15));
  }
  SUBCASE("nonpositive lambda_max") { CHECK_THROWS_AS(lambda_grid(0.0, 10, 0.01), InvalidArgument); }
  SUBCASE("bad size and ratio") {
    CHECK_THROWS_AS(lambda_grid(1.0, 1, 0.01), InvalidArgument);
    CHECK_THROWS_AS(lambda_grid(1.0, 5, 1.0), InvalidArgument);
  }
  SUBCASE("constant ratio, strictly decreasing") {
    const Vector g = lambda_grid(3.7, 100, 1e-3);
    const double r = g[1] / g[0];
    for (Eigen::Index i = 1; i < g.size(); ++i) {
      CHECK(g[i] < g[i - 1]);
      CHECK(std::abs(g[i] / g[i - 1] - r) <= 1e-12);
    }
  }
}

TEST_CASE("ModelFamily") {
  CHECK(ModelFamily::linear().num_intercepts() == 1);
  CHECK(ModelFamily::logistic().num_intercepts() == 1);
  CHECK(ModelFamily::cumulative_logit(3).num_intercepts() == 2);
  CHECK(ModelFamily::cumulative_logit(5).num_intercepts() == 4);
  CHECK_THROWS_AS(ModelFamily::cumulative_logit(2), InvalidArgument);
  CHECK(ModelFamily::parse("cumlogit", 4) == ModelFamily::cumulative_logit(4));
  CHECK_THROWS_AS(ModelFamily::parse("poisson"), InvalidArgument);
}

TEST_CASE("Dataset validation") {
  Matrix X(3, 1);
  X << 1, 2, 3;
  SUBCASE("logistic response must be binary") {
    Vector y(3);
    y << 0, 1, 2;
    CHECK_THROWS_AS(Dataset(X, y, ModelFamily::logistic()), InvalidArgument);
  }
  SUBCASE("ordinal levels in range") {
    Vector y(3);
    y << 0, 1, 3;
    CHECK_THROWS_AS(Dataset(X, y, ModelFamily::cumulative_logit(3)), InvalidArgument);
  }
  SUBCASE("empty ordinal level is a warning") {
    Vector y(3);
    y << 0, 0, 2;
    const Dataset d(X, y, ModelFamily::cumulative_logit(3));
    REQUIRE(d.warnings().size() == 1);
    CHECK(d.warnings()[0].find("level 1") != std::string::npos);
  }
  SUBCASE("non-finite entries") {
    Matrix Xbad = X;
    Xbad(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Dataset(Xbad, Vector::Zero(3), ModelFamily::linear()), InvalidArgument);
  }
  SUBCASE("n >= 2") { CHECK_THROWS_AS(Dataset(Matrix::Ones(1, 1), Vector::Zero(1), ModelFamily::linear()), InvalidArgument); }
  SUBCASE("length mismatch") { CHECK_THROWS_AS(Dataset(X, Vector::Zero(2), ModelFamily::linear()), InvalidArgument); }
}
