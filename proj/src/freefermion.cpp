#include "fermispec/freefermion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace fermispec {

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2 || m_.rows() % 2 != 0) {
    throw std::invalid_argument(
        "correlation matrix must be square with even dimension");
  }
  if ((m_ + m_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("correlation matrix must be antisymmetric");
  }
}

GroundState ground_state_correlation(const MajoranaHamiltonian& ham) {
  const int n = ham.n_sites();
  const Eigen::MatrixXd& a = ham.couplings();

  // The quadratic form must couple only the first Majorana of one site to
  // the second Majorana of another; the two same-type blocks then vanish
  // and the problem reduces to one N x N coupling block.
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (std::abs(a(2 * i, 2 * j)) > 1e-12 * scale ||
          std::abs(a(2 * i + 1, 2 * j + 1)) > 1e-12 * scale) {
        throw std::invalid_argument(
            "coupling matrix mixes same-type Majorana pairs");
      }
      b(i, j) = a(2 * i, 2 * j + 1);
    }
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("block diagonalization did not converge");
  }
  const Eigen::VectorXd sigma = svd.singularValues();  // descending
  const Eigen::MatrixXd& u = svd.matrixU();
  const Eigen::MatrixXd& v = svd.matrixV();

  // All modes empty minimizes the energy; each sigma_k is a mode energy.
  Eigen::VectorXd signs = Eigen::VectorXd::Ones(n);
  double energy = -0.5 * sigma.sum();

  // A zero mode leaves two degenerate Gaussian states of opposite fermion
  // parity; pick the even-parity one. The parity of the all-empty state is
  // det(U) det(V).
  if (sigma(n - 1) < 1e-12) {
    const double parity = u.determinant() * v.determinant();
    if (parity < 0.0) {
      signs(n - 1) = -1.0;
      energy += sigma(n - 1);
    }
  }

  const Eigen::MatrixXd g = u * signs.asDiagonal() * v.transpose();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m(2 * i, 2 * j + 1) = g(i, j);
      m(2 * j + 1, 2 * i) = -g(i, j);
    }
  }
  return GroundState{CorrelationMatrix(std::move(m)), energy};
}

CorrelationMatrix reduce(const CorrelationMatrix& gamma, SiteRange region) {
  if (region.first < 1 || region.last > gamma.n_sites() ||
      region.first > region.last) {
    throw std::invalid_argument("region must be a nonempty range within the chain");
  }
  std::vector<int> sites;
  sites.reserve(region.last - region.first + 1);
  for (int s = region.first; s <= region.last; ++s) sites.push_back(s);
  return reduce_sites(gamma, sites);
}

CorrelationMatrix reduce_sites(const CorrelationMatrix& gamma,
                               std::span<const int> sites) {
  if (sites.empty()) {
    throw std::invalid_argument("site selection must be nonempty");
  }
  for (size_t k = 0; k < sites.size(); ++k) {
    if (sites[k] < 1 || sites[k] > gamma.n_sites()) {
      throw std::invalid_argument("site " + std::to_string(sites[k]) +
                                  " out of range");
    }
    if (k > 0 && sites[k] <= sites[k - 1]) {
      throw std::invalid_argument("sites must be strictly increasing");
    }
  }
  const int np = static_cast<int>(sites.size());
  std::vector<int> idx;
  idx.reserve(2 * np);
  for (int s : sites) {
    idx.push_back(2 * (s - 1));
    idx.push_back(2 * (s - 1) + 1);
  }
  Eigen::MatrixXd sub(2 * np, 2 * np);
  for (int r = 0; r < 2 * np; ++r) {
    for (int c = 0; c < 2 * np; ++c) {
      sub(r, c) = gamma.m()(idx[r], idx[c]);
    }
  }
  return CorrelationMatrix(std::move(sub));
}

EntanglementSpectrum canonical_form(const CorrelationMatrix& gamma_bar) {
  const int np = gamma_bar.n_sites();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(gamma_bar.m());
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("singular value decomposition did not converge");
  }
  const Eigen::VectorXd sigma = svd.singularValues();  // descending, paired
  std::vector<double> nus;
  nus.reserve(np);
  for (int k = 0; k < np; ++k) {
    const double s0 = sigma(2 * k);
    const double s1 = sigma(2 * k + 1);
    if (std::abs(s0 - s1) > 1e-8) {
      throw std::runtime_error(
          "singular values of the reduced matrix are not paired; "
          "input is not a valid correlation matrix");
    }
    double nu = 0.5 * (s0 + s1);
    if (nu > 1.0 + 1e-8) {
      throw std::runtime_error("mode value exceeds 1 beyond tolerance");
    }
    nus.push_back(std::clamp(nu, 0.0, 1.0));
  }
  std::reverse(nus.begin(), nus.end());  // ascending
  return EntanglementSpectrum{std::move(nus)};
}

}  // namespace fermispec
