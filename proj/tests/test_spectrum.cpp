#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include <fermispec/freefermion.hpp>
#include <fermispec/model.hpp>
#include <fermispec/oracle.hpp>
#include <fermispec/spectrum.hpp>

#include "support.hpp"

using namespace fermispec;

namespace {

EntanglementSpectrum half_modes(int n, double h) {
  const auto gs = ground_state_correlation(build_majorana_hamiltonian({n, h}));
  return canonical_form(reduce(gs.correlation, {1, n / 2}));
}

}  // namespace

TEST_CASE("disentangled modes give a single unit weight") {
  const auto terms = top_k_weights(EntanglementSpectrum{{1.0, 1.0}}, 4);
  REQUIRE(terms.size() == 4);
  CHECK(terms[0].weight == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(terms[0].occupation == std::vector<std::uint8_t>{0, 0});
  // The flipped patterns carry exactly zero weight and sort lexicographically.
  CHECK(terms[1].occupation == std::vector<std::uint8_t>{0, 1});
  CHECK(terms[2].occupation == std::vector<std::uint8_t>{1, 0});
  CHECK(terms[3].occupation == std::vector<std::uint8_t>{1, 1});
  for (int i = 1; i < 4; ++i) {
    CHECK(terms[i].weight == 0.0);
    CHECK(std::isinf(terms[i].log_weight));
    CHECK(terms[i].log_weight < 0.0);
  }
}

TEST_CASE("a partly mixed mode splits into its two occupations") {
  const auto terms = top_k_weights(EntanglementSpectrum{{0.6}}, 2);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].weight == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(terms[0].occupation == std::vector<std::uint8_t>{0});
  CHECK(terms[1].weight == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(terms[1].occupation == std::vector<std::uint8_t>{1});
}

TEST_CASE("a maximally entangled mode gives the two-term cat spectrum") {
  // The pattern space has only 2 elements, so asking for 3 returns 2.
  const auto terms = top_k_weights(EntanglementSpectrum{{0.0}}, 3);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(terms[1].weight == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(terms[0].weight == terms[1].weight);
  CHECK(terms[0].occupation == std::vector<std::uint8_t>{0});
  CHECK(terms[1].occupation == std::vector<std::uint8_t>{1});
}

TEST_CASE("mode input is validated") {
  CHECK_THROWS_AS(top_k_weights(EntanglementSpectrum{{0.5}}, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(top_k_weights(EntanglementSpectrum{{0.5}}, -3),
                  std::invalid_argument);
  CHECK_THROWS_AS(top_k_weights(EntanglementSpectrum{{0.7, 0.2}}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(top_k_weights(EntanglementSpectrum{{-0.1}}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(top_k_weights(EntanglementSpectrum{{1.2}}, 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(entropy(EntanglementSpectrum{{0.7, 0.2}}),
                  std::invalid_argument);
}

TEST_CASE("modes within 1e-14 of one are frozen at zero flip weight") {
  const auto terms =
      top_k_weights(EntanglementSpectrum{{0.5, 1.0 - 1e-15}}, 4);
  REQUIRE(terms.size() == 4);
  CHECK(terms[0].weight == doctest::Approx(0.75).epsilon(1e-13));
  CHECK(terms[0].occupation == std::vector<std::uint8_t>{0, 0});
  CHECK(terms[1].weight == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(terms[1].occupation == std::vector<std::uint8_t>{1, 0});
  CHECK(terms[2].occupation == std::vector<std::uint8_t>{0, 1});
  CHECK(terms[2].weight == 0.0);
  CHECK(terms[3].occupation == std::vector<std::uint8_t>{1, 1});
  CHECK(terms[3].weight == 0.0);
}

TEST_CASE("swapping equal modes ties exactly and breaks lexicographically") {
  const auto terms = top_k_weights(EntanglementSpectrum{{0.5, 0.5}}, 4);
  REQUIRE(terms.size() == 4);
  CHECK(terms[0].weight == doctest::Approx(0.5625).epsilon(1e-14));
  CHECK(terms[0].occupation == std::vector<std::uint8_t>{0, 0});
  CHECK(terms[1].weight == doctest::Approx(0.1875).epsilon(1e-14));
  CHECK(terms[1].occupation == std::vector<std::uint8_t>{0, 1});
  CHECK(terms[2].occupation == std::vector<std::uint8_t>{1, 0});
  CHECK(terms[1].weight == terms[2].weight);
  CHECK(terms[3].weight == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(terms[3].occupation == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("pattern stream matches brute-force enumeration") {
  std::mt19937_64 gen(20260819);
  for (int trial = 0; trial < 30; ++trial) {
    const auto nus = refenum::random_modes(gen, 12);
    const auto ref = refenum::brute_force(nus);
    const auto got = top_k_weights(EntanglementSpectrum{nus},
                                   static_cast<int>(ref.size()));
    REQUIRE(got.size() == ref.size());
    for (size_t i = 0; i < ref.size(); ++i) {
      CHECK(got[i].occupation == ref[i].occupation);
      CHECK(std::abs(got[i].weight - ref[i].weight) <= 1e-12);
      // Each reported weight matches a direct product over its occupation.
      double direct = 1.0;
      for (size_t k = 0; k < nus.size(); ++k) {
        direct *= got[i].occupation[k] ? (1.0 - nus[k]) / 2.0
                                       : (1.0 + nus[k]) / 2.0;
      }
      if (direct == 0.0) {
        CHECK(got[i].weight == 0.0);
      } else {
        CHECK(std::abs(got[i].weight - direct) <= 1e-12 * direct);
      }
    }
  }
}

TEST_CASE("top weights capture all but a vanishing tail") {
  const auto terms = top_k_weights(half_modes(50, 1.0), 64);
  double sum = 0.0;
  for (const auto& term : terms) {
    sum += term.weight;
    CHECK(term.weight >= 0.0);
  }
  CHECK(std::abs(1.0 - sum) < 1e-10);
  for (size_t i = 1; i < terms.size(); ++i) {
    CHECK(terms[i].weight <= terms[i - 1].weight);
  }
}

TEST_CASE("mode entropy equals the entropy of the enumerated weights") {
  struct Case {
    int n;
    double h;
  };
  for (const auto& c : {Case{16, 1.0}, Case{24, 0.7}}) {
    const auto spec = half_modes(c.n, c.h);
    REQUIRE(spec.region_size() <= 12);
    const auto all =
        top_k_weights(spec, 1 << spec.region_size());
    double s_terms = 0.0;
    for (const auto& term : all) {
      if (term.weight > 0.0) s_terms -= term.weight * std::log2(term.weight);
    }
    CHECK(std::abs(entropy(spec) - s_terms) < 1e-10);
  }
}

TEST_CASE("weak-field weights come in near-degenerate pairs") {
  const auto terms = top_k_weights(half_modes(50, 0.5), 2);
  REQUIRE(terms.size() == 2);
  CHECK(std::abs(terms[0].weight - terms[1].weight) < 1e-6);
}

TEST_CASE("entropy counts one bit per maximally entangled mode") {
  CHECK(entropy(EntanglementSpectrum{{1.0, 1.0, 1.0}}) == 0.0);
  CHECK(entropy(EntanglementSpectrum{{0.0}}) == doctest::Approx(1.0).epsilon(1e-15));
  const auto state = dense_ground_state({8, 1.0});
  const auto schmidt = oracle_schmidt(state, 4);
  CHECK(std::abs(entropy(half_modes(8, 1.0)) - schmidt.entropy_bits) < 1e-10);
}

TEST_CASE("binary entropy hits its endpoints and symmetry") {
  CHECK(binary_entropy_bits(0.0) == 0.0);
  CHECK(binary_entropy_bits(1.0) == 0.0);
  CHECK(binary_entropy_bits(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy_bits(0.1) ==
        doctest::Approx(binary_entropy_bits(0.9)).epsilon(1e-13));
}

TEST_CASE("keeping the whole spectrum truncates nothing") {
  const std::vector<double> lambdas{1.0};
  const auto t = truncation(lambdas, 1);
  CHECK(t.epsilon == 0.0);
  CHECK(t.overlap == 1.0);
  REQUIRE(t.renormalized.size() == 1);
  CHECK(t.renormalized[0] == 1.0);
  // Asking for more states than exist is fine when nothing is left behind.
  const auto wide = truncation(lambdas, 5);
  CHECK(wide.epsilon == 0.0);
  REQUIRE(wide.renormalized.size() == 1);
}

TEST_CASE("halving a cat state costs sqrt(1/2) in overlap") {
  const std::vector<double> lambdas{0.5, 0.5};
  const auto t = truncation(lambdas, 1);
  CHECK(t.epsilon == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(t.overlap == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  REQUIRE(t.renormalized.size() == 1);
  CHECK(t.renormalized[0] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("four states carry the half-chain of a 200-site critical chain") {
  const auto terms = top_k_weights(half_modes(200, 1.0), 16);
  std::vector<double> weights;
  for (const auto& term : terms) weights.push_back(term.weight);
  const auto t = truncation(weights, 4);
  CHECK(t.epsilon > 3.1e-4);
  CHECK(t.epsilon < 1.24e-3);
  CHECK(1.0 - t.overlap > 3.1e-4);
  CHECK(1.0 - t.overlap < 1.24e-3);
}

TEST_CASE("truncation validates its inputs") {
  const std::vector<double> ok{0.6, 0.4};
  CHECK_THROWS_AS(truncation(ok, 0), std::invalid_argument);
  CHECK_THROWS_AS(truncation(ok, -1), std::invalid_argument);
  const std::vector<double> ascending{0.3, 0.5};
  CHECK_THROWS_AS(truncation(ascending, 2), std::invalid_argument);
  const std::vector<double> negative{-0.1};
  CHECK_THROWS_AS(truncation(negative, 1), std::invalid_argument);
  const std::vector<double> with_tail{0.6, 0.3};
  CHECK_THROWS_AS(truncation(with_tail, 5), std::invalid_argument);
  const std::vector<double> zero{0.0};
  CHECK_THROWS_AS(truncation(zero, 1), std::runtime_error);
}

TEST_CASE("overlaps are square roots of the kept weights") {
  const auto product = overlaps(EntanglementSpectrum{{1.0, 1.0}}, 3);
  REQUIRE(product.size() == 3);
  CHECK(product[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(product[1] == 0.0);
  CHECK(product[2] == 0.0);
  const auto cat = overlaps(EntanglementSpectrum{{0.0}}, 2);
  REQUIRE(cat.size() == 2);
  CHECK(cat[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(cat[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  const auto spec = half_modes(12, 1.0);
  const auto terms = top_k_weights(spec, 8);
  const auto o = overlaps(spec, 8);
  REQUIRE(o.size() == terms.size());
  for (size_t i = 0; i < o.size(); ++i) {
    CHECK(o[i] == std::sqrt(terms[i].weight));
  }
}

TEST_CASE("entropy contributions weigh each kept state") {
  const auto unit = top_k_weights(EntanglementSpectrum{{1.0}}, 1);
  const auto s_unit = entropy_contributions(unit, 1);
  REQUIRE(s_unit.size() == 1);
  CHECK(s_unit[0] == 0.0);
  const auto cat = top_k_weights(EntanglementSpectrum{{0.0}}, 2);
  const auto s_cat = entropy_contributions(cat, 2);
  REQUIRE(s_cat.size() == 2);
  CHECK(s_cat[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s_cat[1] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(entropy_contributions(cat, -1), std::invalid_argument);
  CHECK(entropy_contributions(cat, 0).empty());
  CHECK(entropy_contributions(cat, 10).size() == 2);
}

TEST_CASE("the third state only matters near the critical field") {
  auto s3 = [](double h) {
    const auto top = top_k_weights(half_modes(100, h), 4);
    return entropy_contributions(top, 3)[2];
  };
  CHECK(s3(1.0) > 0.05);
  CHECK(s3(0.5) < 0.005);
  CHECK(s3(2.0) < 5e-4);
}

TEST_CASE("a product state needs a single Schmidt term") {
  CHECK(chi_effective(EntanglementSpectrum{{1.0, 1.0, 1.0, 1.0}}, 1e-4) == 1);
}

TEST_CASE("chi_effective rejects a degenerate tolerance") {
  const EntanglementSpectrum spec{{0.5}};
  CHECK_THROWS_AS(chi_effective(spec, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(chi_effective(spec, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(chi_effective(spec, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(chi_effective(spec, 1.5), std::invalid_argument);
}

TEST_CASE("chi_effective matches a direct count on the exact spectrum") {
  const auto spec = half_modes(8, 1.0);
  const int chi = chi_effective(spec, 1e-12);
  // Independent count from the dense spectrum of the same cut.
  const auto schmidt = oracle_schmidt(dense_ground_state({8, 1.0}), 4);
  double acc = 0.0;
  int direct = 0;
  for (double w : schmidt.values) {
    ++direct;
    if (w > 0.0) acc -= w * std::log2(w);
    if (schmidt.entropy_bits - acc < 1e-12) break;
  }
  CHECK(chi == direct);
}

TEST_CASE("summarize composes the individual quantities") {
  const auto spec = half_modes(20, 1.0);
  const auto summary = summarize(spec, 16, 4, 1e-4);
  CHECK(summary.entropy_bits == entropy(spec));
  const auto terms = top_k_weights(spec, 16);
  REQUIRE(summary.top_terms.size() == terms.size());
  for (size_t i = 0; i < terms.size(); ++i) {
    CHECK(summary.top_terms[i].weight == terms[i].weight);
    CHECK(summary.top_terms[i].occupation == terms[i].occupation);
  }
  CHECK(summary.chi_eff == chi_effective(spec, 1e-4));
  std::vector<double> weights;
  for (const auto& term : terms) weights.push_back(term.weight);
  CHECK(summary.epsilon == truncation(weights, 4).epsilon);
  REQUIRE(summary.overlaps.size() == terms.size());
  REQUIRE(summary.entropy_contribs.size() == terms.size());
  for (size_t i = 0; i < terms.size(); ++i) {
    CHECK(summary.overlaps[i] == std::sqrt(terms[i].weight));
  }
}
