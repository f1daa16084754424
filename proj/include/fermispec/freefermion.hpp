#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fermispec/model.hpp"

namespace fermispec {

/// Real antisymmetric matrix M with Gamma = i*M, Gamma_ij = <[g_i, g_j]>/2
/// in the ground state. For a pure Gaussian state M*M = -I.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(Eigen::MatrixXd m);

  int n_sites() const { return static_cast<int>(m_.rows()) / 2; }
  int dim() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& m() const { return m_; }

 private:
  Eigen::MatrixXd m_;
};

/// Contiguous 1-based inclusive site range.
struct SiteRange {
  int first = 1;
  int last = 1;
};

/// Canonical mode values of a reduced correlation matrix, ascending.
/// nu = 1 is a disentangled mode, nu = 0 a maximally entangled one.
struct EntanglementSpectrum {
  std::vector<double> nus;

  int region_size() const { return static_cast<int>(nus.size()); }
};

struct GroundState {
  CorrelationMatrix correlation;
  double energy;
};

/// Ground-state correlation matrix of the quadratic form, plus its energy.
/// Zero modes (energy below 1e-12) are occupied so that the state sits in
/// the even fermion-parity sector.
GroundState ground_state_correlation(const MajoranaHamiltonian& ham);

/// Submatrix keeping the Majorana rows/columns of the given sites.
CorrelationMatrix reduce(const CorrelationMatrix& gamma, SiteRange region);
CorrelationMatrix reduce_sites(const CorrelationMatrix& gamma,
                               std::span<const int> sites);

/// Extracts the nu_k as paired singular values of the reduced matrix.
/// Throws std::runtime_error when the pairing is broken beyond 1e-8.
EntanglementSpectrum canonical_form(const CorrelationMatrix& gamma_bar);

}  // namespace fermispec
