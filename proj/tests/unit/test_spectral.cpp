#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ultra;

namespace {

DissimilarityMatrix three(double d12, double d13, double d23) {
  Eigen::MatrixXd m(3, 3);
  m << 0, d12, d13, d12, 0, d23, d13, d23, 0;
  return DissimilarityMatrix(m, {"a", "b", "c"});
}

// Closed-form eigenvalues of a symmetric 3x3 matrix, descending.
std::array<double, 3> eigen3(const Eigen::Matrix3d& a) {
  const double p1 = a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2);
  const double q = a.trace() / 3.0;
  const double p2 = (a(0, 0) - q) * (a(0, 0) - q) + (a(1, 1) - q) * (a(1, 1) - q) +
                    (a(2, 2) - q) * (a(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  const Eigen::Matrix3d b = (a - q * Eigen::Matrix3d::Identity()) / p;
  const double r = std::clamp(b.determinant() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  return {e1, 3.0 * q - e1 - e3, e3};
}

double chi2_distance(const Eigen::MatrixXd& f, Index a, Index b) {
  const double total = f.sum();
  double s = 0.0;
  const double ra = f.row(a).sum();
  const double rb = f.row(b).sum();
  for (Index j = 0; j < f.cols(); ++j) {
    const double cj = f.col(j).sum() / total;
    const double diff = f(a, j) / ra - f(b, j) / rb;
    s += diff * diff / cj;
  }
  return std::sqrt(s);
}

Eigen::MatrixXd random_counts(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 9);
  Eigen::MatrixXd f(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) f(i, j) = u(rng);
  }
  // Guarantee no empty margin.
  for (Index i = 0; i < rows; ++i) f(i, i % cols) += 1.0;
  for (Index j = 0; j < cols; ++j) f(j % rows, j) += 1.0;
  return f;
}

}  // namespace

TEST_SUITE_BEGIN("spectral");

TEST_CASE("double centring of collinear points") {
  const Eigen::MatrixXd a = gram_from_distances(three(1, 2, 1));
  Eigen::MatrixXd expected(3, 3);
  expected << 1, 0, -1, 0, 0, 0, -1, 0, 1;
  CHECK((a - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("double centring of zero distances is zero") {
  const Eigen::MatrixXd a = gram_from_distances(DissimilarityMatrix(Eigen::MatrixXd::Zero(3, 3)));
  CHECK(a.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("double centring equals the centred cross-product matrix") {
  const Eigen::MatrixXd x = oracle::uniform_points(5, 2, 11);
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd expected = xc * xc.transpose();
  const Eigen::MatrixXd a = gram_from_distances(DissimilarityMatrix(oracle::naive_distances(x)));
  CHECK((a - expected).cwiseAbs().maxCoeff() < 1e-12 * expected.cwiseAbs().maxCoeff());
}

TEST_CASE("double centring: rows and columns sum to zero") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Index n = 3 + static_cast<Index>(seed % 20);
    const Eigen::MatrixXd a = gram_from_distances(oracle::random_dissimilarity(n, seed));
    const double scale = a.cwiseAbs().maxCoeff();
    CHECK(a.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-9 * scale);
    CHECK(a.colwise().sum().cwiseAbs().maxCoeff() <= 1e-9 * scale);
  }
}

TEST_CASE("non-square or asymmetric distances are rejected") {
  CHECK_THROWS_AS(DissimilarityMatrix(Eigen::MatrixXd::Zero(2, 3)), DimensionError);
  Eigen::MatrixXd m(2, 2);
  m << 0, 1, 2, 0;
  CHECK_THROWS_AS(DissimilarityMatrix{m}, DimensionError);
}

TEST_CASE("pcoa of collinear points") {
  const PcoaResult r = pcoa(three(1, 2, 1));
  REQUIRE(r.coordinates.dimensions() == 1);
  CHECK(r.spectrum.eigenvalues(0) == doctest::Approx(2.0).epsilon(1e-14));
  const auto& x = r.coordinates.coords();
  // Up to sign (-1, 0, 1); the sign rule picks the first of the tied extremes.
  CHECK(std::abs(std::abs(x(0, 0)) - 1.0) < 1e-14);
  CHECK(std::abs(x(1, 0)) < 1e-14);
  CHECK(std::abs(x(2, 0) + x(0, 0)) < 1e-14);
  CHECK(x(0, 0) > 0.0);
  CHECK(r.metricity.coefficient == 1.0);
}

TEST_CASE("pcoa of a triangle-violating triple") {
  const DissimilarityMatrix d = three(1, 5, 1);
  const PcoaResult r = pcoa(d);
  const auto oracle = eigen3(gram_from_distances(d));
  const auto& ev = r.spectrum.eigenvalues;
  for (int k = 0; k < 3; ++k) CHECK(ev(k) == doctest::Approx(oracle[k]).epsilon(1e-12));
  CHECK(ev.minCoeff() < 0.0);

  const double tol = 1e-10 * std::max(std::abs(oracle[0]), std::abs(oracle[2]));
  double pos = 0.0;
  double abs = 0.0;
  for (double l : oracle) {
    if (std::abs(l) <= tol) continue;
    abs += std::abs(l);
    pos += std::max(l, 0.0);
  }
  CHECK(r.metricity.coefficient < 1.0);
  CHECK(r.metricity.coefficient == doctest::Approx(pos / abs).epsilon(1e-12));
  CHECK(metricity_coefficient(r.spectrum) == r.metricity.coefficient);
}

TEST_CASE("pcoa round trip on Euclidean clouds") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index n = 4 + static_cast<Index>((seed * 37) % 97);
    const Index p = 1 + static_cast<Index>(seed % 10);
    const Eigen::MatrixXd x = oracle::uniform_points(n, p, seed + 100);
    const DissimilarityMatrix d(oracle::naive_distances(x));
    const PcoaResult r = pcoa(d);
    CHECK(r.coordinates.dimensions() <= p);
    const Eigen::MatrixXd back = oracle::naive_distances(r.coordinates.coords());
    CHECK((back - d.values()).cwiseAbs().maxCoeff() <= 1e-9 * d.max_value());
    CHECK(r.metricity.coefficient >= 1.0 - 1e-9);
  }
}

TEST_CASE("pcoa keeps labels and rejects a zero spread") {
  const PcoaResult r = pcoa(three(1, 2, 1));
  CHECK(r.coordinates.labels() == Labels{"a", "b", "c"});
  CHECK_THROWS_AS(pcoa(DissimilarityMatrix(Eigen::MatrixXd::Zero(4, 4))), DegenerateInputError);
}

TEST_CASE("metricity coefficient by definition") {
  SpectralResult s;
  s.eigenvalues = Eigen::Vector3d(2, 0, 0);
  CHECK(metricity_coefficient(s) == 1.0);
  s.eigenvalues = Eigen::Vector3d(3, 1, -1);
  CHECK(metricity_coefficient(s) == doctest::Approx(0.8).epsilon(1e-15));
  s.eigenvalues = Eigen::Vector3d(0, 0, 0);
  CHECK_THROWS_AS(metricity_coefficient(s), DegenerateInputError);
}

TEST_CASE("eigenvectors are orthonormal, sorted and sign-normalised") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Index n = 2 + static_cast<Index>(seed * 3);
    const Eigen::MatrixXd a = gram_from_distances(oracle::random_dissimilarity(n, seed + 7));
    const SpectralResult s = symmetric_eigen(a);
    const Eigen::MatrixXd g = s.eigenvectors.transpose() * s.eigenvectors;
    CHECK((g - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-9);
    for (Index k = 1; k < n; ++k) CHECK(s.eigenvalues(k - 1) >= s.eigenvalues(k));
    for (Index c = 0; c < n; ++c) {
      Index arg = 0;
      s.eigenvectors.col(c).cwiseAbs().maxCoeff(&arg);
      CHECK(s.eigenvectors(arg, c) > 0.0);
    }
    const Eigen::MatrixXd rebuilt =
        s.eigenvectors * s.eigenvalues.asDiagonal() * s.eigenvectors.transpose();
    CHECK((rebuilt - a).cwiseAbs().maxCoeff() < 1e-10 * (1.0 + a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("correspondence analysis of an independence table has no axes") {
  const Eigen::Vector3d r(1, 2, 3);
  const Eigen::Vector4d c(4, 1, 2, 5);
  const FrequencyMatrix f(r * c.transpose(), {"r1", "r2", "r3"}, {"c1", "c2", "c3", "c4"});
  const CaResult ca = correspondence_analysis(f);
  CHECK(ca.singular_values.size() == 0);
  CHECK(ca.row_coords.dimensions() == 0);
  CHECK(ca.col_coords.points() == 4);
}

TEST_CASE("correspondence analysis reproduces chi-squared profile distances") {
  Eigen::MatrixXd f(4, 3);
  f << 5, 2, 1, 0, 3, 7, 4, 4, 4, 1, 0, 9;
  const CaResult ca = correspondence_analysis(FrequencyMatrix(f, index_labels(4, "r"), index_labels(3, "c")));
  CHECK(ca.singular_values.size() == 2);
  const Eigen::MatrixXd d = oracle::naive_distances(ca.row_coords.coords());
  for (Index a = 0; a < 4; ++a) {
    for (Index b = a + 1; b < 4; ++b) {
      CHECK(d(a, b) == doctest::Approx(chi2_distance(f, a, b)).epsilon(1e-9));
    }
  }
}

TEST_CASE("correspondence analysis chi-squared isometry on random tables") {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const Index rows = 3 + static_cast<Index>(seed % 7);
    const Index cols = 2 + static_cast<Index>((seed * 5) % 9);
    const Eigen::MatrixXd f = random_counts(rows, cols, seed);
    const CaResult ca =
        correspondence_analysis(FrequencyMatrix(f, index_labels(rows, "r"), index_labels(cols, "c")));
    CHECK(ca.row_masses.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ca.col_masses.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ca.singular_values.size() <= std::min(rows, cols) - 1);
    for (Index k = 1; k < ca.singular_values.size(); ++k) {
      CHECK(ca.singular_values(k - 1) >= ca.singular_values(k));
    }
    const Eigen::MatrixXd d = oracle::naive_distances(ca.row_coords.coords());
    double worst = 0.0;
    for (Index a = 0; a < rows; ++a) {
      for (Index b = a + 1; b < rows; ++b) {
        const double want = chi2_distance(f, a, b);
        if (want > 0.0) worst = std::max(worst, std::abs(d(a, b) - want) / want);
      }
    }
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("correspondence analysis names an empty row or column") {
  Eigen::MatrixXd f(3, 3);
  f << 1, 2, 3, 0, 0, 0, 4, 5, 6;
  try {
    (void)correspondence_analysis(FrequencyMatrix(f, {"x", "empty-row", "z"}, {"a", "b", "c"}));
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("empty-row") != std::string::npos);
  }
  f << 1, 0, 3, 2, 0, 1, 4, 0, 6;
  try {
    (void)correspondence_analysis(FrequencyMatrix(f, {"x", "y", "z"}, {"a", "void", "c"}));
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("void") != std::string::npos);
  }
}

TEST_CASE("full factor space of a 139 x 2000 table and column selection") {
  const CaResult ca = correspondence_analysis(random_mirror(139, 2000, 5));
  CHECK(ca.singular_values.size() == 138);
  CHECK(ca.col_coords.dimensions() == 138);

  Labels pick;
  for (int k = 0; k < 30; ++k) pick.push_back("C" + std::to_string(1 + k * 61));
  const CoordinateMatrix sel = select_columns(ca, pick);
  CHECK(sel.points() == 30);
  CHECK(sel.dimensions() == 138);
  CHECK(sel.labels() == pick);
  CHECK(sel.coords().row(3) == ca.col_coords.coords().row(183));
}

TEST_CASE("column selection: all, duplicates, unknown") {
  Eigen::MatrixXd f(3, 4);
  f << 5, 2, 1, 3, 0, 3, 7, 1, 4, 4, 4, 2;
  const CaResult ca = correspondence_analysis(FrequencyMatrix(f, {"r1", "r2", "r3"}, {"a", "b", "c", "d"}));

  const Labels all = ca.col_coords.labels();
  const CoordinateMatrix same = select_columns(ca, all);
  CHECK(same.coords() == ca.col_coords.coords());
  CHECK(same.labels() == all);

  const Labels dup{"c", "c"};
  const CoordinateMatrix twice = select_columns(ca, dup);
  CHECK(twice.coords().row(0) == twice.coords().row(1));

  const Labels bad{"a", "zebra"};
  try {
    (void)select_columns(ca, bad);
    FAIL("expected a lookup error");
  } catch (const LookupError& e) {
    CHECK(std::string(e.what()).find("zebra") != std::string::npos);
  }
}

TEST_SUITE_END();
