#include "fermispec/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace fermispec {

void validate(const ChainSpec& spec) {
  if (spec.n_sites < 1) {
    throw std::invalid_argument("n_sites must be at least 1, got " +
                                std::to_string(spec.n_sites));
  }
  if (!std::isfinite(spec.field)) {
    throw std::invalid_argument("field must be finite");
  }
  if (spec.field < 0.0) {
    throw std::invalid_argument("field must be non-negative, got " +
                                std::to_string(spec.field));
  }
}

MajoranaHamiltonian::MajoranaHamiltonian(int n_sites, Eigen::MatrixXd couplings)
    : n_sites_(n_sites), a_(std::move(couplings)) {
  if (n_sites_ < 1) {
    throw std::invalid_argument("n_sites must be at least 1");
  }
  if (a_.rows() != 2 * n_sites_ || a_.cols() != 2 * n_sites_) {
    throw std::invalid_argument("coupling matrix must be 2N x 2N");
  }
  if ((a_ + a_.transpose()).cwiseAbs().maxCoeff() != 0.0) {
    throw std::invalid_argument("coupling matrix must be antisymmetric");
  }
}

MajoranaHamiltonian build_majorana_hamiltonian(const ChainSpec& spec) {
  validate(spec);
  const int n = spec.n_sites;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int s = 0; s < n; ++s) {
    a(2 * s, 2 * s + 1) = 2.0 * spec.field;
    a(2 * s + 1, 2 * s) = -2.0 * spec.field;
  }
  for (int s = 0; s + 1 < n; ++s) {
    a(2 * s + 1, 2 * s + 2) = 2.0;
    a(2 * s + 2, 2 * s + 1) = -2.0;
  }
  return MajoranaHamiltonian(n, std::move(a));
}

}  // namespace fermispec
