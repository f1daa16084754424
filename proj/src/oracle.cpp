#include "fermispec/oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fermispec {

namespace {

// Basis conventions: index b assigns site n (1-based) the value of bit n-1;
// bit 0 is spin up, so sigma^z contributes +1 for a clear bit.

double diagonal_energy(std::uint32_t b, int n, double h) {
  const int down = std::popcount(b);
  return -h * static_cast<double>(n - 2 * down);
}

// Flips the smallest deterministic sign freedom: largest-|amplitude|
// component made positive.
void canonicalize_sign(Eigen::VectorXd& v) {
  int arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0.0) v = -v;
}

DenseGroundState dense_path(const ChainSpec& spec) {
  const int n = spec.n_sites;
  const double h = spec.field;
  const int dim = 1 << n;
  Eigen::MatrixXd ham = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b) {
    ham(b, b) = diagonal_energy(b, n, h);
    for (int s = 0; s + 1 < n; ++s) {
      const std::uint32_t flipped = b ^ (0b11u << s);
      ham(flipped, b) += -1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(ham);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("dense eigensolver failed to converge");
  }
  Eigen::VectorXd psi = solver.eigenvectors().col(0);
  const double energy = solver.eigenvalues()(0);
  if (dim > 1 && solver.eigenvalues()(1) - energy < 1e-12) {
    // Degenerate ground space: keep the even spin-flip-parity combination,
    // i.e. project out the odd-popcount components.
    Eigen::VectorXd even = psi;
    for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b) {
      if (std::popcount(b) % 2 == 1) even(b) = 0.0;
    }
    if (even.norm() < 1e-8) {
      even = solver.eigenvectors().col(1);
      for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(dim); ++b) {
        if (std::popcount(b) % 2 == 1) even(b) = 0.0;
      }
    }
    if (even.norm() < 1e-8) {
      throw std::runtime_error(
          "degenerate ground space has no even-parity member");
    }
    psi = even / even.norm();
  }
  canonicalize_sign(psi);
  return DenseGroundState{n, energy, std::move(psi)};
}

// Lanczos with full reorthogonalization, restricted to the even
// spin-flip-parity sector (the ground sector for h >= 0; bond terms flip
// two bits, so the sector is exactly closed under the Hamiltonian).
DenseGroundState lanczos_path(const ChainSpec& spec) {
  const int n = spec.n_sites;
  const double h = spec.field;
  const std::uint32_t full_dim = 1u << n;

  std::vector<std::uint32_t> states;
  states.reserve(full_dim / 2);
  std::vector<std::int32_t> pos(full_dim, -1);
  for (std::uint32_t b = 0; b < full_dim; ++b) {
    if (std::popcount(b) % 2 == 0) {
      pos[b] = static_cast<std::int32_t>(states.size());
      states.push_back(b);
    }
  }
  const int dim = static_cast<int>(states.size());

  Eigen::VectorXd diag(dim);
  for (int i = 0; i < dim; ++i) diag(i) = diagonal_energy(states[i], n, h);

  const auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    y.noalias() = diag.cwiseProduct(x);
    for (int i = 0; i < dim; ++i) {
      const std::uint32_t b = states[i];
      double acc = 0.0;
      for (int s = 0; s + 1 < n; ++s) {
        acc += x(pos[b ^ (0b11u << s)]);
      }
      y(i) -= acc;
    }
  };

  // Deterministic generic start vector.
  std::mt19937_64 gen(0x5eedf00du);
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) {
    v(i) = static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5;
  }
  v.normalize();

  const int max_iter = std::min(dim, 240);
  Eigen::MatrixXd basis(dim, max_iter);
  std::vector<double> alphas, betas;  // betas[j] couples v_j to v_{j+1}
  basis.col(0) = v;

  const auto ground_of_tridiag = [&](int m, Eigen::VectorXd* ritz) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alphas[i];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = betas[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    if (ritz) *ritz = es.eigenvectors().col(0);
    return es.eigenvalues()(0);
  };

  Eigen::VectorXd w(dim);
  int m = 0;
  for (int j = 0; j < max_iter; ++j) {
    apply(basis.col(j), w);
    if (j > 0) w -= betas[j - 1] * basis.col(j - 1);
    const double alpha = basis.col(j).dot(w);
    alphas.push_back(alpha);
    w -= alpha * basis.col(j);
    // Full reorthogonalization, twice for stability.
    auto active = basis.leftCols(j + 1);
    w -= active * (active.transpose() * w);
    w -= active * (active.transpose() * w);
    m = j + 1;
    const double beta = w.norm();
    if (beta < 1e-13) break;  // invariant subspace captured
    if (j + 1 < max_iter) {
      betas.push_back(beta);
      basis.col(j + 1) = w / beta;
    }
    if (m >= 30 && m % 10 == 0) {
      Eigen::VectorXd s;
      const double theta = ground_of_tridiag(m, &s);
      if (beta * std::abs(s(m - 1)) < 1e-13 * std::max(1.0, std::abs(theta))) {
        break;
      }
    }
  }

  Eigen::VectorXd s;
  const double energy = ground_of_tridiag(m, &s);
  Eigen::VectorXd x = basis.leftCols(m) * s;
  x.normalize();

  apply(x, w);
  const double residual = (w - energy * x).norm();
  if (residual > 1e-9 * std::max(1.0, std::abs(energy))) {
    throw std::runtime_error("iterative eigensolver failed to converge, residual " +
                             std::to_string(residual));
  }

  Eigen::VectorXd amplitudes = Eigen::VectorXd::Zero(full_dim);
  for (int i = 0; i < dim; ++i) amplitudes(states[i]) = x(i);
  canonicalize_sign(amplitudes);
  return DenseGroundState{n, energy, std::move(amplitudes)};
}

}  // namespace

DenseGroundState dense_ground_state(const ChainSpec& spec) {
  validate(spec);
  if (spec.n_sites > 12) {
    throw std::invalid_argument(
        "exact ground state capped at 12 sites, got " +
        std::to_string(spec.n_sites));
  }
  if (spec.n_sites <= 10) return dense_path(spec);
  return lanczos_path(spec);
}

OracleSchmidt oracle_schmidt(const DenseGroundState& state, int cut) {
  const int n = state.n_sites;
  if (cut < 1 || cut >= n) {
    throw std::invalid_argument("cut must lie strictly inside the chain");
  }
  const int rows = 1 << cut;  // low bits = sites 1..cut
  const int cols = 1 << (n - cut);
  Eigen::Map<const Eigen::MatrixXd> reshaped(state.amplitudes.data(), rows,
                                             cols);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(reshaped);
  const Eigen::VectorXd sigma = svd.singularValues();
  OracleSchmidt out;
  out.cut = cut;
  out.values.resize(sigma.size());
  double entropy = 0.0;
  for (int i = 0; i < sigma.size(); ++i) {
    const double lambda = sigma(i) * sigma(i);
    out.values[i] = lambda;
    if (lambda > 0.0) entropy -= lambda * std::log2(lambda);
  }
  out.entropy_bits = entropy;
  return out;
}

double sigma_z_expectation(const DenseGroundState& state, int site) {
  if (site < 1 || site > state.n_sites) {
    throw std::invalid_argument("site out of range");
  }
  const std::uint32_t mask = 1u << (site - 1);
  double acc = 0.0;
  for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(state.amplitudes.size()); ++b) {
    const double p = state.amplitudes(b) * state.amplitudes(b);
    acc += (b & mask) ? -p : p;
  }
  return acc;
}

double parity_expectation(const DenseGroundState& state) {
  double acc = 0.0;
  for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(state.amplitudes.size()); ++b) {
    const double p = state.amplitudes(b) * state.amplitudes(b);
    acc += (std::popcount(b) % 2 == 0) ? p : -p;
  }
  return acc;
}

}  // namespace fermispec
