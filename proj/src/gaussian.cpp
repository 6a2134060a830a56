#include "cvqkd/gaussian.hpp"

#include "cvqkd/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>

namespace cvqkd {
namespace {

// Pair-matching tolerance for the moduli of the +-i*nu eigenvalue pairs.
constexpr double kPairTol = 1e-8;

std::vector<int> quadrature_indices(std::span<const int> modes) {
  std::vector<int> idx;
  idx.reserve(2 * modes.size());
  for (int m : modes) {
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  return idx;
}

Eigen::MatrixXd gather(const Eigen::MatrixXd& m, const std::vector<int>& rows,
                       const std::vector<int>& cols) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(r, c) = m(rows[r], cols[c]);
    }
  }
  return out;
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

struct Blocks {
  Eigen::MatrixXd kept;
  Eigen::MatrixXd measured;
  Eigen::MatrixXd cross;  // kept rows, measured columns
};

Blocks split(const CovarianceMatrix& gamma, const ModePartition& partition) {
  partition.validate(gamma.n_modes());
  if (partition.measured.empty()) {
    throw DimensionError("conditioning needs at least one measured mode");
  }
  if (partition.kept.empty()) {
    throw DimensionError("conditioning needs at least one kept mode");
  }
  const auto k = quadrature_indices(partition.kept);
  const auto m = quadrature_indices(partition.measured);
  return {gather(gamma.data(), k, k), gather(gamma.data(), m, m),
          gather(gamma.data(), k, m)};
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd data) : data_(std::move(data)) {
  if (data_.rows() != data_.cols()) {
    throw DimensionError(fmt::format("covariance matrix must be square, got {}x{}",
                                     data_.rows(), data_.cols()));
  }
  if (data_.rows() == 0 || data_.rows() % 2 != 0) {
    throw DimensionError(
        fmt::format("covariance matrix dimension must be even and positive, got {}",
                    data_.rows()));
  }
  if (!data_.allFinite()) {
    throw DomainError("covariance matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < data_.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < data_.cols(); ++j) {
      if (std::abs(data_(i, j) - data_(j, i)) > kSymmetryTol) {
        throw SymmetryError(fmt::format(
            "covariance matrix not symmetric at ({}, {}): {} vs {}", i, j,
            data_(i, j), data_(j, i)));
      }
    }
  }
}

CovarianceMatrix CovarianceMatrix::vacuum(int n_modes) {
  return thermal(n_modes, 1.0);
}

CovarianceMatrix CovarianceMatrix::thermal(int n_modes, double variance) {
  if (n_modes <= 0) throw DimensionError("n_modes must be positive");
  return CovarianceMatrix(variance * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

Eigen::Matrix2d CovarianceMatrix::block(int mode_i, int mode_j) const {
  if (mode_i < 0 || mode_j < 0 || mode_i >= n_modes() || mode_j >= n_modes()) {
    throw DimensionError(fmt::format("block ({}, {}) out of range for {} modes", mode_i,
                                     mode_j, n_modes()));
  }
  return data_.block<2, 2>(2 * mode_i, 2 * mode_j);
}

CovarianceMatrix CovarianceMatrix::reduced(std::span<const int> modes) const {
  ModePartition p{{modes.begin(), modes.end()}, {}};
  p.validate(n_modes());
  if (modes.empty()) throw DimensionError("reduced state needs at least one mode");
  const auto idx = quadrature_indices(modes);
  return CovarianceMatrix(gather(data_, idx, idx));
}

DisplacementVector::DisplacementVector(Eigen::VectorXd data) : data_(std::move(data)) {
  if (data_.size() == 0 || data_.size() % 2 != 0) {
    throw DimensionError(
        fmt::format("displacement length must be even and positive, got {}", data_.size()));
  }
}

DisplacementVector DisplacementVector::zero(int n_modes) {
  if (n_modes <= 0) throw DimensionError("n_modes must be positive");
  return DisplacementVector(Eigen::VectorXd::Zero(2 * n_modes));
}

void ModePartition::validate(int n_modes) const {
  std::vector<bool> seen(static_cast<std::size_t>(std::max(n_modes, 0)), false);
  auto check = [&](const std::vector<int>& list, const char* what) {
    for (int m : list) {
      if (m < 0 || m >= n_modes) {
        throw DimensionError(
            fmt::format("{} mode index {} out of range [0, {})", what, m, n_modes));
      }
      if (seen[m]) {
        throw DimensionError(fmt::format("mode index {} listed more than once", m));
      }
      seen[m] = true;
    }
  };
  check(kept, "kept");
  check(measured, "measured");
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& gamma) {
  const int n = gamma.n_modes();
  const Eigen::MatrixXd m = symplectic_form(n) * gamma.data();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw InternalError("eigenvalue solver failed on Omega*gamma");
  }
  std::vector<double> moduli;
  moduli.reserve(2 * n);
  for (const auto& ev : solver.eigenvalues()) moduli.push_back(std::abs(ev));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());

  std::vector<double> nu;
  nu.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double a = moduli[2 * k];
    const double b = moduli[2 * k + 1];
    if (std::abs(a - b) > kPairTol * std::max(1.0, a)) {
      throw InternalError(
          fmt::format("unpaired symplectic eigenvalues {} and {} (mode {})", a, b, k));
    }
    nu.push_back(0.5 * (a + b));
  }
  return nu;
}

double g_function(double x) {
  if (std::isnan(x) || x < -1e-12) {
    throw DomainError(fmt::format("g(x) undefined for x = {}", x));
  }
  if (x <= 0.0) return 0.0;
  return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double von_neumann_entropy(const CovarianceMatrix& gamma) {
  double s = 0.0;
  for (double nu : symplectic_eigenvalues(gamma)) {
    if (nu < 1.0 - kPhysicalTol) {
      throw UnphysicalStateError(fmt::format(
          "symplectic eigenvalue {:.12g} < 1 violates the uncertainty relation", nu));
    }
    s += g_function((std::max(nu, 1.0) - 1.0) / 2.0);
  }
  return s;
}

bool is_physical(const CovarianceMatrix& gamma, double tol) {
  const auto nu = symplectic_eigenvalues(gamma);
  return nu.back() >= 1.0 - tol;
}

CovarianceMatrix condition_on_heterodyne(const CovarianceMatrix& gamma,
                                         const ModePartition& partition) {
  const auto b = split(gamma, partition);
  const Eigen::MatrixXd noisy =
      b.measured + Eigen::MatrixXd::Identity(b.measured.rows(), b.measured.cols());
  Eigen::LLT<Eigen::MatrixXd> llt(noisy);
  if (llt.info() != Eigen::Success) {
    throw InternalError("gamma_meas + I is not positive definite");
  }
  const Eigen::MatrixXd gain = llt.solve(b.cross.transpose());
  return CovarianceMatrix(symmetrized(b.kept - b.cross * gain));
}

CovarianceMatrix condition_on_homodyne(const CovarianceMatrix& gamma,
                                       const ModePartition& partition,
                                       Quadrature quadrature) {
  const auto b = split(gamma, partition);
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(b.measured.rows());
  const int offset = quadrature == Quadrature::X ? 0 : 1;
  for (Eigen::Index k = offset; k < mask.size(); k += 2) mask(k) = 1.0;
  const auto proj = mask.asDiagonal();
  const Eigen::MatrixXd projected = proj * b.measured * proj;
  const Eigen::MatrixXd pinv = pseudo_inverse(projected);
  return CovarianceMatrix(symmetrized(b.kept - b.cross * pinv * b.cross.transpose()));
}

DisplacementVector heterodyne_conditional_mean(const CovarianceMatrix& gamma,
                                               const DisplacementVector& mean,
                                               const ModePartition& partition,
                                               std::span<const double> outcome) {
  if (mean.n_modes() != gamma.n_modes()) {
    throw DimensionError("displacement and covariance disagree on the mode count");
  }
  const auto b = split(gamma, partition);
  if (static_cast<Eigen::Index>(outcome.size()) != b.measured.rows()) {
    throw DimensionError(fmt::format("expected {} heterodyne readings, got {}",
                                     b.measured.rows(), outcome.size()));
  }
  const auto k = quadrature_indices(partition.kept);
  const auto m = quadrature_indices(partition.measured);
  Eigen::VectorXd innovation(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    innovation(i) = std::sqrt(2.0) * outcome[i] - mean[m[i]];
  }
  const Eigen::MatrixXd noisy =
      b.measured + Eigen::MatrixXd::Identity(b.measured.rows(), b.measured.cols());
  Eigen::LLT<Eigen::MatrixXd> llt(noisy);
  if (llt.info() != Eigen::Success) {
    throw InternalError("gamma_meas + I is not positive definite");
  }
  Eigen::VectorXd out = b.cross * llt.solve(innovation);
  for (std::size_t i = 0; i < k.size(); ++i) out(i) += mean[k[i]];
  return DisplacementVector(std::move(out));
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& m, double relative_cutoff) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? relative_cutoff * s(0) : 0.0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace cvqkd
