#include "ultra/spectral.hpp"

#include "ultra/errors.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace ultra {

namespace {

// Flip `col` of `m` so that its largest-magnitude entry is positive; returns
// whether a flip happened.
bool normalise_sign(Eigen::MatrixXd& m, Index col) {
  Index arg = 0;
  double best = -1.0;
  for (Index r = 0; r < m.rows(); ++r) {
    const double v = std::abs(m(r, col));
    if (v > best) {
      best = v;
      arg = r;
    }
  }
  if (m.rows() > 0 && m(arg, col) < 0.0) {
    m.col(col) = -m.col(col);
    return true;
  }
  return false;
}

}  // namespace

double eigenvalue_tolerance(const Eigen::VectorXd& eigenvalues) {
  if (eigenvalues.size() == 0) return 0.0;
  return 1e-10 * eigenvalues.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd gram_from_distances(const DissimilarityMatrix& d) {
  const Index n = d.size();
  const Eigen::MatrixXd sq = d.values().cwiseProduct(d.values());
  Eigen::VectorXd mean(n);
  double grand = 0.0;
  for (Index i = 0; i < n; ++i) {
    double s = 0.0;
    for (Index k = 0; k < n; ++k) s += sq(i, k);
    mean(i) = s / static_cast<double>(n);
    grand += s;
  }
  if (n > 0) grand /= static_cast<double>(n) * static_cast<double>(n);

  Eigen::MatrixXd a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = i; k < n; ++k) {
      const double v = -0.5 * (sq(i, k) - mean(i) - mean(k) + grand);
      a(i, k) = v;
      a(k, i) = v;
    }
  }
  return a;
}

SpectralResult symmetric_eigen(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DimensionError("eigendecomposition needs a square matrix");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw DegenerateInputError("eigensolver did not converge");

  const Index n = a.rows();
  SpectralResult out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  for (Index c = 0; c < n; ++c) normalise_sign(out.eigenvectors, c);
  return out;
}

MetricityReport metricity(const SpectralResult& s) {
  const double tol = eigenvalue_tolerance(s.eigenvalues);
  MetricityReport report;
  for (const double lambda : s.eigenvalues) {
    if (std::abs(lambda) <= tol) continue;
    report.total_abs_mass += std::abs(lambda);
    if (lambda > 0.0) report.positive_mass += lambda;
  }
  if (!(report.total_abs_mass > 0.0)) {
    throw DegenerateInputError("metricity is undefined for a zero spectrum");
  }
  report.coefficient = report.positive_mass / report.total_abs_mass;
  return report;
}

double metricity_coefficient(const SpectralResult& s) { return metricity(s).coefficient; }

PcoaResult pcoa(const DissimilarityMatrix& d) {
  SpectralResult spectrum = symmetric_eigen(gram_from_distances(d));
  const double tol = eigenvalue_tolerance(spectrum.eigenvalues);

  Index kept = 0;
  while (kept < spectrum.eigenvalues.size() && spectrum.eigenvalues(kept) > tol) ++kept;
  if (kept == 0) throw DegenerateInputError("no positive eigenvalue: distances carry no spread");

  Eigen::MatrixXd coords = spectrum.eigenvectors.leftCols(kept);
  for (Index c = 0; c < kept; ++c) coords.col(c) *= std::sqrt(spectrum.eigenvalues(c));

  PcoaResult out{CoordinateMatrix(std::move(coords), d.labels()), std::move(spectrum), {}};
  out.metricity = metricity(out.spectrum);
  return out;
}

CaResult correspondence_analysis(const FrequencyMatrix& f) {
  const Eigen::MatrixXd p = f.values() / f.total();
  const Eigen::VectorXd r = p.rowwise().sum();
  const Eigen::VectorXd c = p.colwise().sum().transpose();
  for (Index i = 0; i < r.size(); ++i) {
    if (!(r(i) > 0.0)) {
      throw ValidationError("all-zero row '" + f.row_labels()[static_cast<std::size_t>(i)] + "'");
    }
  }
  for (Index j = 0; j < c.size(); ++j) {
    if (!(c(j) > 0.0)) {
      throw ValidationError("all-zero column '" + f.col_labels()[static_cast<std::size_t>(j)] +
                            "'");
    }
  }

  const Eigen::VectorXd r_isqrt = r.cwiseSqrt().cwiseInverse();
  const Eigen::VectorXd c_isqrt = c.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd s =
      r_isqrt.asDiagonal() * (p - r * c.transpose()) * c_isqrt.asDiagonal();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd u = svd.matrixU();
  Eigen::MatrixXd v = svd.matrixV();
  const Eigen::VectorXd& sigma = svd.singularValues();

  // Singular values of S never exceed 1 (the trivial axis is already
  // removed), so an absolute cutoff is a relative one.
  const Index max_axes = std::min(f.rows(), f.cols()) - 1;
  Index kept = 0;
  while (kept < sigma.size() && kept < max_axes && sigma(kept) > 1e-10) ++kept;

  Eigen::MatrixXd rows(f.rows(), kept);
  Eigen::MatrixXd cols(f.cols(), kept);
  for (Index k = 0; k < kept; ++k) {
    if (normalise_sign(u, k)) v.col(k) = -v.col(k);
    rows.col(k) = r_isqrt.cwiseProduct(u.col(k)) * sigma(k);
    cols.col(k) = c_isqrt.cwiseProduct(v.col(k)) * sigma(k);
  }

  CaResult out;
  out.row_coords = CoordinateMatrix(std::move(rows), f.row_labels());
  out.col_coords = CoordinateMatrix(std::move(cols), f.col_labels());
  out.row_masses = r;
  out.col_masses = c;
  out.singular_values = sigma.head(kept);
  return out;
}

CoordinateMatrix select_columns(const CaResult& ca, std::span<const std::string> labels) {
  const Labels& all = ca.col_coords.labels();
  std::unordered_map<std::string_view, Index> position;
  position.reserve(all.size());
  for (std::size_t j = 0; j < all.size(); ++j) {
    position.emplace(all[j], static_cast<Index>(j));
  }

  const auto& coords = ca.col_coords.coords();
  Eigen::MatrixXd out(static_cast<Index>(labels.size()), coords.cols());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto it = position.find(labels[i]);
    if (it == position.end()) throw LookupError("unknown column label '" + labels[i] + "'");
    out.row(static_cast<Index>(i)) = coords.row(it->second);
  }
  return CoordinateMatrix(std::move(out), Labels(labels.begin(), labels.end()));
}

}  // namespace ultra
