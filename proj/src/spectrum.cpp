#include "fermispec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

namespace fermispec {

namespace {

constexpr double kFrozenThreshold = 1.0 - 1e-14;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_spectrum(const EntanglementSpectrum& spec) {
  const auto& nus = spec.nus;
  for (size_t i = 0; i < nus.size(); ++i) {
    if (!(nus[i] >= -1e-12 && nus[i] <= 1.0 + 1e-12)) {
      throw std::invalid_argument("mode values must lie in [0, 1]");
    }
    if (i > 0 && nus[i] < nus[i - 1]) {
      throw std::invalid_argument("mode values must be sorted ascending");
    }
  }
}

struct Node {
  double log_weight;
  std::vector<int> flips;  // flipped mode indices, ascending
};

// Flip-set order matching lexicographic order of the occupation patterns:
// a leading 1 that appears later makes the pattern smaller.
bool flips_pattern_less(const std::vector<int>& a, const std::vector<int>& b) {
  const size_t m = std::min(a.size(), b.size());
  for (size_t i = 0; i < m; ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return a.size() < b.size();
}

struct WorseThan {
  bool operator()(const Node& a, const Node& b) const {
    if (a.log_weight != b.log_weight) return a.log_weight < b.log_weight;
    return flips_pattern_less(b.flips, a.flips);
  }
};

// Streams occupation patterns in weight order (largest first). Each flip of
// mode j multiplies the weight by r_j = (1 - nu_j)/(1 + nu_j); with modes
// sorted by nu ascending the flip costs are non-increasing, so every subset
// of flips has exactly one cheaper parent:
//   {..., j}   ->  {..., j, j+1}      (extend)
//   {..., j}   ->  {..., j-1? , j+1}  (shift: drop j, add j+1)
// which yields each subset once without a visited set. Modes with
// nu > 1 - 1e-14 are frozen at occupation 0; once the unfrozen patterns are
// exhausted, frozen-flip patterns follow in lexicographic order with weight
// reported as exactly zero (each is below 1e-14 of its parent).
//
// The incremental node values only drive the heap; each emitted term's
// weight is recomputed by summing the logs of its per-mode factors in
// sorted order, so patterns related by swapping equal modes tie exactly
// and the lexicographic tie-break is reproducible.
class Enumerator {
 public:
  explicit Enumerator(const EntanglementSpectrum& spec) {
    validate_spectrum(spec);
    const auto& nus = spec.nus;
    modes_ = static_cast<int>(nus.size());
    active_ = 0;
    root_log_ = 0.0;
    costs_.reserve(nus.size());
    log_plus_.reserve(nus.size());
    log_minus_.reserve(nus.size());
    for (double raw : nus) {
      const double nu = std::clamp(raw, 0.0, 1.0);
      // log((1+nu)/2) computed as log1p((nu-1)/2), exact near nu = 1
      root_log_ += std::log1p((nu - 1.0) / 2.0);
      log_plus_.push_back(std::log((1.0 + nu) / 2.0));
      if (nu <= kFrozenThreshold) {
        costs_.push_back(std::log1p(-nu) - std::log1p(nu));
        log_minus_.push_back(std::log((1.0 - nu) / 2.0));
        ++active_;
      } else {
        log_minus_.push_back(kNegInf);
      }
    }
    heap_.push(Node{root_log_, {}});
  }

  std::optional<SchmidtTerm> next() {
    if (!heap_.empty()) {
      Node node = heap_.top();
      heap_.pop();
      expand(node);
      return make_term(node);
    }
    return next_frozen();
  }

 private:
  void expand(const Node& node) {
    if (node.flips.empty()) {
      if (active_ > 0) {
        heap_.push(Node{root_log_ + costs_[0], {0}});
      }
      return;
    }
    const int j = node.flips.back();
    if (j + 1 >= active_) return;
    Node extend{node.log_weight + costs_[j + 1], node.flips};
    extend.flips.push_back(j + 1);
    heap_.push(std::move(extend));
    Node shift{node.log_weight + costs_[j + 1] - costs_[j], node.flips};
    shift.flips.back() = j + 1;
    heap_.push(std::move(shift));
  }

  SchmidtTerm make_term(const Node& node) const {
    SchmidtTerm term;
    term.occupation.assign(modes_, 0);
    for (int j : node.flips) term.occupation[j] = 1;
    std::vector<double> logs(modes_);
    for (int m = 0; m < modes_; ++m) {
      logs[m] = term.occupation[m] ? log_minus_[m] : log_plus_[m];
    }
    std::sort(logs.begin(), logs.end());
    double total = 0.0;
    for (double value : logs) total += value;
    term.log_weight = total;
    term.weight = std::exp(total);
    return term;
  }

  std::optional<SchmidtTerm> next_frozen() {
    const int frozen = modes_ - active_;
    if (frozen == 0) return std::nullopt;
    const std::uint64_t block_cap =
        frozen >= 63 ? std::numeric_limits<std::uint64_t>::max()
                     : ((std::uint64_t{1} << frozen) - 1);
    const std::uint64_t active_cap =
        active_ >= 63 ? std::numeric_limits<std::uint64_t>::max()
                      : (std::uint64_t{1} << active_);
    ++frozen_part_;
    if (frozen_part_ > block_cap) {
      frozen_part_ = 1;
      ++active_part_;
    }
    if (active_part_ >= active_cap) return std::nullopt;
    SchmidtTerm term;
    term.occupation.assign(modes_, 0);
    for (int t = 0; t < active_ && t < 63; ++t) {
      if (active_part_ >> t & 1) term.occupation[active_ - 1 - t] = 1;
    }
    for (int t = 0; t < frozen && t < 63; ++t) {
      if (frozen_part_ >> t & 1) term.occupation[modes_ - 1 - t] = 1;
    }
    term.weight = 0.0;
    term.log_weight = kNegInf;
    return term;
  }

  int modes_ = 0;
  int active_ = 0;
  double root_log_ = 0.0;
  std::vector<double> costs_;
  std::vector<double> log_plus_;
  std::vector<double> log_minus_;
  std::priority_queue<Node, std::vector<Node>, WorseThan> heap_;
  std::uint64_t active_part_ = 0;
  std::uint64_t frozen_part_ = 0;  // pre-increment: first emitted value is 1
};

bool term_before(const SchmidtTerm& a, const SchmidtTerm& b) {
  if (a.log_weight != b.log_weight) return a.log_weight > b.log_weight;
  return std::lexicographical_compare(a.occupation.begin(), a.occupation.end(),
                                      b.occupation.begin(), b.occupation.end());
}

}  // namespace

std::vector<SchmidtTerm> top_k_weights(const EntanglementSpectrum& spec, int k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  Enumerator enumerator(spec);
  std::vector<SchmidtTerm> terms;
  terms.reserve(k);
  for (int i = 0; i < k; ++i) {
    auto term = enumerator.next();
    if (!term) break;
    terms.push_back(std::move(*term));
  }
  std::stable_sort(terms.begin(), terms.end(), term_before);
  return terms;
}

double binary_entropy_bits(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double entropy(const EntanglementSpectrum& spec) {
  validate_spectrum(spec);
  double total = 0.0;
  for (double raw : spec.nus) {
    const double nu = std::clamp(raw, 0.0, 1.0);
    total += binary_entropy_bits(0.5 * (1.0 + nu));
  }
  return total;
}

Truncation truncation(std::span<const double> lambdas_desc, int chi_prime) {
  if (chi_prime < 1) throw std::invalid_argument("chi_prime must be positive");
  double total = 0.0;
  for (size_t i = 0; i < lambdas_desc.size(); ++i) {
    if (lambdas_desc[i] < -1e-12 ||
        (i > 0 && lambdas_desc[i] > lambdas_desc[i - 1] + 1e-12)) {
      throw std::invalid_argument("weights must be non-negative and descending");
    }
    total += lambdas_desc[i];
  }
  const int kept = std::min<int>(chi_prime, static_cast<int>(lambdas_desc.size()));
  if (chi_prime > static_cast<int>(lambdas_desc.size()) &&
      1.0 - total > 1e-15) {
    throw std::invalid_argument(
        "chi_prime exceeds the available terms and the tail is not negligible");
  }
  double sum_kept = 0.0;
  for (int i = 0; i < kept; ++i) sum_kept += lambdas_desc[i];
  Truncation out;
  out.epsilon = std::clamp(1.0 - sum_kept, 0.0, 1.0);
  if (1.0 - out.epsilon <= 0.0) {
    throw std::runtime_error("truncation keeps zero total weight");
  }
  out.overlap = std::sqrt(1.0 - out.epsilon);
  out.renormalized.reserve(kept);
  for (int i = 0; i < kept; ++i) {
    out.renormalized.push_back(lambdas_desc[i] / (1.0 - out.epsilon));
  }
  return out;
}

std::vector<double> overlaps(const EntanglementSpectrum& spec, int k) {
  const auto terms = top_k_weights(spec, k);
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto& term : terms) out.push_back(std::sqrt(term.weight));
  return out;
}

std::vector<double> entropy_contributions(std::span<const SchmidtTerm> top,
                                          int k) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  const size_t count = std::min<size_t>(k, top.size());
  std::vector<double> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    const double w = top[i].weight;
    out.push_back(w > 0.0 ? -w * std::log2(w) : 0.0);
  }
  return out;
}

int chi_effective(const EntanglementSpectrum& spec, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const double full = entropy(spec);
  Enumerator enumerator(spec);
  constexpr int kMaxTerms = 1 << 14;
  double acc = 0.0;
  int count = 0;
  while (count < kMaxTerms) {
    auto term = enumerator.next();
    if (!term) break;
    ++count;
    if (term->weight > 0.0) acc -= term->weight * std::log2(term->weight);
    if (full - acc < delta) return count;
  }
  return count;
}

SpectrumSummary summarize(const EntanglementSpectrum& spec, int k,
                          int chi_prime, double delta) {
  SpectrumSummary summary;
  summary.entropy_bits = entropy(spec);
  summary.top_terms = top_k_weights(spec, k);
  summary.chi_eff = chi_effective(spec, delta);
  std::vector<double> weights;
  weights.reserve(summary.top_terms.size());
  for (const auto& term : summary.top_terms) weights.push_back(term.weight);
  summary.epsilon = truncation(weights, chi_prime).epsilon;
  summary.overlaps.reserve(summary.top_terms.size());
  for (double w : weights) summary.overlaps.push_back(std::sqrt(w));
  summary.entropy_contribs =
      entropy_contributions(summary.top_terms, k);
  return summary;
}

}  // namespace fermispec
