#pragma once

#include <Eigen/Dense>

namespace fermispec {

/// Open-boundary transverse-field Ising chain: N sites, field h >= 0.
struct ChainSpec {
  int n_sites = 1;
  double field = 1.0;
};

/// Throws std::invalid_argument if the chain parameters are unusable.
void validate(const ChainSpec& spec);

/// Quadratic Majorana form H = (i/4) sum_mn A_mn g_m g_n with A real
/// antisymmetric. Site s (0-based) owns Majorana indices 2s and 2s+1;
/// nonzero couplings sit on (2s, 2s+1) [field] and (2s+1, 2s+2) [bond].
class MajoranaHamiltonian {
 public:
  MajoranaHamiltonian(int n_sites, Eigen::MatrixXd couplings);

  int n_sites() const { return n_sites_; }
  int dim() const { return 2 * n_sites_; }
  const Eigen::MatrixXd& couplings() const { return a_; }

 private:
  int n_sites_;
  Eigen::MatrixXd a_;
};

/// Maps a chain spec onto its Majorana coupling matrix.
MajoranaHamiltonian build_majorana_hamiltonian(const ChainSpec& spec);

}  // namespace fermispec
