#pragma once

// Gaussian-state linear algebra in the (x1, p1, x2, p2, ...) quadrature
// ordering with the vacuum normalized to the identity.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace cvqkd {

inline constexpr double kSymmetryTol = 1e-12;
inline constexpr double kPhysicalTol = 1e-9;
inline constexpr double kPseudoInverseCutoff = 1e-10;

enum class Quadrature { X, P };

/// Real symmetric 2N x 2N covariance matrix of an N-mode Gaussian state.
class CovarianceMatrix {
 public:
  /// Throws DimensionError for odd or non-square input and SymmetryError when
  /// |m(i,j) - m(j,i)| exceeds kSymmetryTol anywhere.
  explicit CovarianceMatrix(Eigen::MatrixXd data);

  static CovarianceMatrix vacuum(int n_modes);
  static CovarianceMatrix thermal(int n_modes, double variance);

  int n_modes() const { return static_cast<int>(data_.rows() / 2); }
  int dim() const { return static_cast<int>(data_.rows()); }
  const Eigen::MatrixXd& data() const { return data_; }
  double operator()(int i, int j) const { return data_(i, j); }

  /// 2x2 block coupling mode_i (rows) and mode_j (columns).
  Eigen::Matrix2d block(int mode_i, int mode_j) const;

  /// Reduced state on `modes`, in the given order.
  CovarianceMatrix reduced(std::span<const int> modes) const;

 private:
  Eigen::MatrixXd data_;
};

/// First moments, same ordering as CovarianceMatrix.
class DisplacementVector {
 public:
  explicit DisplacementVector(Eigen::VectorXd data);
  static DisplacementVector zero(int n_modes);

  int n_modes() const { return static_cast<int>(data_.size() / 2); }
  const Eigen::VectorXd& data() const { return data_; }
  double operator[](int i) const { return data_(i); }

 private:
  Eigen::VectorXd data_;
};

/// Which modes survive a measurement and which are measured. Modes in neither
/// list are traced out. The output of a conditioning call follows `kept`.
struct ModePartition {
  std::vector<int> kept;
  std::vector<int> measured;

  /// Throws DimensionError on out-of-range, duplicate or overlapping indices.
  void validate(int n_modes) const;
};

/// Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int n_modes);

/// Symplectic spectrum, sorted descending, one value per mode.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma);

/// g(x) = (x+1) log2(x+1) - x log2(x), with g(0) = 0.
double g_function(double x);

/// Von Neumann entropy in bits. Throws UnphysicalStateError when a symplectic
/// eigenvalue is below 1 - kPhysicalTol.
double von_neumann_entropy(const CovarianceMatrix& gamma);

/// True iff the smallest symplectic eigenvalue is at least 1 - tol.
bool is_physical(const CovarianceMatrix& gamma, double tol = kPhysicalTol);

/// Covariance of the kept modes after heterodyning the measured ones:
/// gamma_kept - sigma (gamma_meas + I)^-1 sigma^T. Outcome independent.
CovarianceMatrix condition_on_heterodyne(const CovarianceMatrix& gamma,
                                         const ModePartition& partition);

/// Covariance of the kept modes after homodyning `quadrature` on every
/// measured mode: gamma_kept - sigma (X gamma_meas X)^MP sigma^T.
CovarianceMatrix condition_on_homodyne(const CovarianceMatrix& gamma,
                                       const ModePartition& partition,
                                       Quadrature quadrature);

/// Mean of the kept modes given heterodyne readouts on the measured modes.
/// `outcome` holds the two 50:50-split homodyne readings per measured mode,
/// (x_1, p_1, x_2, p_2, ...).
DisplacementVector heterodyne_conditional_mean(const CovarianceMatrix& gamma,
                                               const DisplacementVector& mean,
                                               const ModePartition& partition,
                                               std::span<const double> outcome);

/// Moore-Penrose pseudoinverse; singular values below cutoff * sigma_max are
/// treated as zero.
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m,
                               double relative_cutoff = kPseudoInverseCutoff);

}  // namespace cvqkd
