#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fermispec/model.hpp"

namespace fermispec {

/// Exact ground state in the sigma^z product basis. Basis index b assigns
/// site n (1-based) the value of bit n-1; bit 0 means spin up.
struct DenseGroundState {
  int n_sites = 0;
  double energy = 0.0;
  Eigen::VectorXd amplitudes;
};

struct OracleSchmidt {
  int cut = 1;
  std::vector<double> values;  // descending, sum to 1
  double entropy_bits = 0.0;
};

/// Brute-force ground state, N <= 12. Dense full diagonalization up to
/// N = 10, Lanczos in the even spin-flip-parity sector for N = 11, 12.
/// Near-degenerate ground spaces resolve to the even-parity combination.
DenseGroundState dense_ground_state(const ChainSpec& spec);

/// Schmidt weights across the cut between sites `cut` and `cut`+1.
OracleSchmidt oracle_schmidt(const DenseGroundState& state, int cut);

/// <sigma^z_site> in the state, site 1-based.
double sigma_z_expectation(const DenseGroundState& state, int site);

/// <prod_n sigma^z_n>, the fermion parity of the state.
double parity_expectation(const DenseGroundState& state);

}  // namespace fermispec
