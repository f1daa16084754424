#pragma once

// Test-side reference pieces: an independent brute-force enumeration of
// occupation-pattern weights and a random mode-value generator. Kept free
// of library internals so disagreements point at the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace refenum {

struct Term {
  std::vector<std::uint8_t> occupation;
  double log_weight = 0.0;
  double weight = 0.0;
};

// All 2^L patterns over the given nu values, sorted by weight descending
// with ties broken by lexicographically ascending occupation. Log-weights
// accumulate over sorted factors so patterns that are analytically equal
// (swaps across duplicated nu values) come out exactly tied.
inline std::vector<Term> brute_force(const std::vector<double>& nus) {
  const int modes = static_cast<int>(nus.size());
  const std::uint64_t total = std::uint64_t{1} << modes;
  std::vector<Term> terms(total);
  std::vector<double> factors(modes);
  for (std::uint64_t bits = 0; bits < total; ++bits) {
    Term& term = terms[bits];
    term.occupation.resize(modes);
    for (int k = 0; k < modes; ++k) {
      const bool flip = (bits >> k) & 1u;
      term.occupation[k] = flip ? 1 : 0;
      factors[k] = flip ? (1.0 - nus[k]) / 2.0 : (1.0 + nus[k]) / 2.0;
    }
    std::sort(factors.begin(), factors.end());
    double acc = 0.0;
    for (double f : factors) acc += std::log(f);
    term.log_weight = acc;
    term.weight = std::exp(acc);
  }
  // -inf log-weights compare equal, so exact zeros fall through to the
  // lexicographic tie break like any other tie.
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    if (a.log_weight != b.log_weight) return a.log_weight > b.log_weight;
    return a.occupation < b.occupation;
  });
  return terms;
}

// Random ascending nu vector mixing generic values with the edge cases:
// exact 0 (maximally entangled mode), exact 1 (disentangled mode), and
// duplicated values (exact weight ties).
inline std::vector<double> random_modes(std::mt19937_64& gen, int max_len) {
  std::uniform_int_distribution<int> len_dist(1, max_len);
  std::uniform_real_distribution<double> value(0.0, 1.0 - 1e-10);
  std::uniform_int_distribution<int> kind(0, 9);
  const int len = len_dist(gen);
  std::vector<double> nus;
  nus.reserve(len);
  for (int i = 0; i < len; ++i) {
    switch (kind(gen)) {
      case 0:
        nus.push_back(0.0);
        break;
      case 1:
        nus.push_back(1.0);
        break;
      case 2:
        if (!nus.empty()) {
          std::uniform_int_distribution<std::size_t> pick(0, nus.size() - 1);
          nus.push_back(nus[pick(gen)]);
          break;
        }
        [[fallthrough]];
      default:
        nus.push_back(value(gen));
        break;
    }
  }
  std::sort(nus.begin(), nus.end());
  return nus;
}

}  // namespace refenum
