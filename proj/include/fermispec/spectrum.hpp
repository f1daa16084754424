#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fermispec/freefermion.hpp"

namespace fermispec {

/// One eigenvalue of the reduced density matrix: occupation bits n_k over
/// the modes of the spectrum (input order) and the weight
/// lambda = prod_k (1 + (-1)^{n_k} nu_k) / 2.
struct SchmidtTerm {
  std::vector<std::uint8_t> occupation;
  double weight = 0.0;
  double log_weight = 0.0;  // natural log; -inf for exact zeros
};

/// The k largest reduced-density-matrix eigenvalues, descending, by
/// best-first search over occupation patterns. Ties are broken by
/// lexicographic occupation pattern. Returns fewer than k terms only when
/// the pattern space itself is smaller than k.
std::vector<SchmidtTerm> top_k_weights(const EntanglementSpectrum& spec, int k);

/// Binary entropy in bits, H(0) = H(1) = 0.
double binary_entropy_bits(double x);

/// S = sum_k H((1 + nu_k)/2) in bits.
double entropy(const EntanglementSpectrum& spec);

struct Truncation {
  double epsilon = 0.0;
  double overlap = 1.0;
  std::vector<double> renormalized;
};

/// Truncation to the chi_prime largest weights of a descending list:
/// epsilon = 1 - sum_{n<=chi'} lambda_n, overlap = sqrt(1-epsilon),
/// lambda'_n = lambda_n / (1-epsilon).
Truncation truncation(std::span<const double> lambdas_desc, int chi_prime);

/// O_n = sqrt(lambda_n) for the k largest terms.
std::vector<double> overlaps(const EntanglementSpectrum& spec, int k);

/// s_n = -lambda_n log2 lambda_n for the first k terms (0 when lambda = 0).
std::vector<double> entropy_contributions(std::span<const SchmidtTerm> top,
                                          int k);

/// Smallest chi' whose top-chi' entropy contributions reach the full S
/// within delta. Returns the number of enumerated terms if unreachable.
int chi_effective(const EntanglementSpectrum& spec, double delta);

struct SpectrumSummary {
  double entropy_bits = 0.0;
  std::vector<SchmidtTerm> top_terms;
  int chi_eff = 1;
  double epsilon = 0.0;
  std::vector<double> overlaps;
  std::vector<double> entropy_contribs;
};

SpectrumSummary summarize(const EntanglementSpectrum& spec, int k,
                          int chi_prime, double delta);

}  // namespace fermispec
