#pragma once

#include "ultra/matrix.hpp"

#include <span>
#include <string>

namespace ultra {

/// Eigenpairs sorted by descending signed eigenvalue. Each column of
/// `eigenvectors` is unit norm and sign-normalised: its largest-magnitude
/// entry (lowest index on ties) is positive.
struct SpectralResult {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
};

struct MetricityReport {
  double positive_mass = 0.0;
  double total_abs_mass = 0.0;
  double coefficient = 0.0;
};

struct PcoaResult {
  CoordinateMatrix coordinates;
  SpectralResult spectrum;
  MetricityReport metricity;
};

struct CaResult {
  CoordinateMatrix row_coords;
  CoordinateMatrix col_coords;
  Eigen::VectorXd row_masses;
  Eigen::VectorXd col_masses;
  Eigen::VectorXd singular_values;  ///< retained axes only, descending
};

/// Eigenvalues with |lambda| <= this are treated as zero.
double eigenvalue_tolerance(const Eigen::VectorXd& eigenvalues);

/// Double-centred matrix of squared distances,
/// a_ik = -1/2 (d2_ik - mean_i - mean_k + grand_mean).
Eigen::MatrixXd gram_from_distances(const DissimilarityMatrix& d);

/// Full eigendecomposition of a symmetric matrix, sorted and sign-normalised.
SpectralResult symmetric_eigen(const Eigen::MatrixXd& a);

/// Principal coordinates: f_i = sqrt(lambda_i) u_i for every eigenvalue
/// above tolerance, with the metricity report of the full signed spectrum.
PcoaResult pcoa(const DissimilarityMatrix& d);

MetricityReport metricity(const SpectralResult& s);

/// Share of the absolute spectral mass carried by nonnegative eigenvalues.
double metricity_coefficient(const SpectralResult& s);

/// Correspondence analysis via the SVD of the standardised residuals
/// S = D_r^-1/2 (P - r c^T) D_c^-1/2. Full-dimensional row and column
/// coordinates reproduce chi-squared profile distances.
CaResult correspondence_analysis(const FrequencyMatrix& f);

/// Full-dimensional column coordinates for `labels`, in request order.
CoordinateMatrix select_columns(const CaResult& ca, std::span<const std::string> labels);

}  // namespace ultra
