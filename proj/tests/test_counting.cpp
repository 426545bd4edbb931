#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "hdrelay/capacity.hpp"
#include "hdrelay/counting.hpp"

using namespace hdrelay;

namespace {

// Brute-force oracle: words of length n over {0..q-1, quiet} with exactly
// n_i transmit slots, all of them inside a fixed downstream listen window of
// size n - n_next.
long long count_constrained_words(int n, int ni, int n_next, int q) {
  const int window = n - n_next;
  long long total = 0;
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    if (__builtin_popcountll(mask) != ni) continue;
    if (n_next > 0 && (mask >> window) != 0) continue;
    long long values = 1;
    for (int j = 0; j < ni; ++j) values *= q;
    total += values;
  }
  return total;
}

}  // namespace

TEST_CASE("binomial coefficients are exact") {
  CHECK(binomial(6, 2) == 15);
  CHECK(binomial(0, 0) == 1);
  CHECK(binomial(5, 0) == 1);
  CHECK(binomial(5, 5) == 1);
  CHECK(binomial(5, 6) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(52, 5) == 2598960);
  // Pascal's identity holds for values far beyond 64 bits.
  CHECK(binomial(200, 100) == binomial(199, 99) + binomial(199, 100));
}

TEST_CASE("integer powers and big logs") {
  CHECK(int_pow(3, 4) == 81);
  CHECK(int_pow(7, 0) == 1);
  CHECK(log2_big(BigInt(1024)) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(log2_big(BigInt(3)) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  const BigInt huge = int_pow(2, 4096);
  CHECK(log2_big(huge) == doctest::Approx(4096.0).epsilon(1e-9));
}

TEST_CASE("budget vectors enforce the adjacent-slot constraint") {
  const BudgetVector bv(4, {1, 2});
  CHECK(bv.n() == 4);
  CHECK(bv.m() == 3);
  CHECK(bv.budget(1) == 1);
  CHECK(bv.budget(2) == 2);
  CHECK(bv.budget(3) == 0);  // the sink never transmits
  CHECK_THROWS_AS(BudgetVector(4, {3, 2}), std::invalid_argument);
  CHECK_THROWS_AS(BudgetVector(4, {-1}), std::invalid_argument);
  CHECK_THROWS_AS(BudgetVector(4, {4}), std::invalid_argument);
}

TEST_CASE("relay sequence counts match brute enumeration") {
  CHECK(sequences_available(1, BudgetVector(4, {1}), 2) == 8);
  CHECK(sequences_available(1, BudgetVector(6, {2}), 2) == 60);
  CHECK(sequences_available(1, BudgetVector(4, {1, 2}), 2) == 4);
  CHECK(sequences_available(2, BudgetVector(4, {1, 2}), 2) == 24);
  for (int n = 3; n <= 6; ++n) {
    for (int n1 = 0; n1 <= 2; ++n1) {
      for (int n2 = 0; n2 + n1 <= n && n2 <= 2; ++n2) {
        for (int q = 1; q <= 2; ++q) {
          const BudgetVector bv(n, {n1, n2});
          CHECK(sequences_available(1, bv, q) ==
                count_constrained_words(n, n1, n2, q));
          CHECK(sequences_available(2, bv, q) ==
                count_constrained_words(n, n2, 0, q));
        }
      }
    }
  }
}

TEST_CASE("the source is free over node 1's listen slots") {
  CHECK(source_sequences(BudgetVector(4, {1}), 2) == 27);
  CHECK(source_sequences(BudgetVector(4, {1, 2}), 2) == 27);
  CHECK(source_sequences(BudgetVector(6, {2}), 1) == 16);
}

TEST_CASE("the primary message set is the tightest bottleneck") {
  CHECK(max_w0(BudgetVector(4, {1}), 2) == 8);
  CHECK(max_w0(BudgetVector(4, {1, 2}), 2) == 4);  // min over 27, 4, 24
  CHECK(max_w0(BudgetVector(6, {2}), 2) == 60);
  // No relays: every source word is available.
  CHECK(max_w0(BudgetVector(4, {}), 2) == 81);
}

TEST_CASE("relay sources split their sequences with upstream traffic") {
  const BudgetVector bv(4, {1, 2});
  // 24 sequences shared with 4 upstream messages leaves 6, capped at q^2.
  MessageSetSizes prior;
  prior.sizes = {BigInt(4)};
  CHECK(max_w_relay(2, prior, bv, 2) == 4);
  // An idle upstream leaves every sequence and no pattern cap.
  MessageSetSizes idle;
  idle.sizes = {BigInt(1)};
  CHECK(max_w_relay(1, idle, BudgetVector(6, {2}), 2) == 60);
  // Upstream beyond the sequence budget starves the relay.
  MessageSetSizes heavy;
  heavy.sizes = {BigInt(100)};
  CHECK(max_w_relay(2, heavy, bv, 2) == 0);
}

TEST_CASE("pattern entropy approaches the binary entropy of the fraction") {
  CHECK(binom_entropy_limit(4, 1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(binom_entropy_limit(10, 0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(binom_entropy_limit(1024, 512) == doctest::Approx(1.0).epsilon(1e-2));
  CHECK(binom_entropy_limit(1 << 14, 1 << 13) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("asymptotic counting bounds equal the hop entropies") {
  for (const auto& p : {std::vector<double>{0.7, 0.8, 1.0},
                        std::vector<double>{0.55, 0.6, 1.0},
                        std::vector<double>{0.9, 0.35, 1.0}}) {
    for (int q = 1; q <= 3; ++q) {
      const ListenProfile profile(p, q);
      const AsymptoticBounds bounds = asymptotic_rate_bounds(profile);
      const std::vector<double> hops = link_entropies(profile);
      REQUIRE(bounds.link.size() == hops.size());
      for (std::size_t i = 0; i < hops.size(); ++i) {
        CHECK(bounds.link[i] == doctest::Approx(hops[i]).epsilon(1e-12));
      }
      CHECK(bounds.r0_bound ==
            doctest::Approx(*std::min_element(hops.begin(), hops.end()))
                .epsilon(1e-12));
      CHECK(sum_rate_bound(bounds, 0) == doctest::Approx(bounds.r0_bound));
      CHECK(sum_rate_bound(bounds, profile.m() - 1) ==
            doctest::Approx(bounds.link.back()).epsilon(1e-12));
    }
  }
}

TEST_CASE("finite counting rates never exceed capacity") {
  for (int q = 1; q <= 2; ++q) {
    const double cap2 = solve_capacity(2, q).value;
    for (int n = 4; n <= 24; n += 4) {
      const BudgetVector bv = search_optimal_budgets(n, 2, q);
      const double rate = log2_big(max_w0(bv, q)) / n;
      CHECK(rate <= cap2 + 1e-12);
    }
    const double cap3 = solve_capacity(3, q).value;
    const BudgetVector bv3 = search_optimal_budgets(12, 3, q);
    CHECK(log2_big(max_w0(bv3, q)) / 12 <= cap3 + 1e-12);
  }
}

TEST_CASE("optimal budgets improve under block doubling") {
  // Concatenating two optimal blocks is a candidate for the doubled length,
  // so the optimal rate cannot drop.
  for (int q = 1; q <= 2; ++q) {
    double last = 0.0;
    for (int n = 8; n <= 128; n *= 2) {
      const BudgetVector bv = search_optimal_budgets(n, 2, q);
      const double rate = log2_big(max_w0(bv, q)) / n;
      CHECK(rate >= last - 1e-12);
      last = rate;
    }
  }
}

TEST_CASE("rounded budgets from a profile stay feasible and near-optimal") {
  const CapacityResult r = solve_capacity(2, 2);
  const ListenProfile profile(r.profile, 2);
  const BudgetVector bv = budgets_from_profile(profile, 4096);
  CHECK(bv.budget(1) == 1153);
  const double rate = log2_big(max_w0(bv, 2)) / 4096;
  CHECK(rate > 1.12);
  CHECK(rate <= r.value);

  // Repair keeps adjacent budgets feasible even for aggressive profiles.
  const ListenProfile tight({0.5, 0.5, 1.0}, 2);
  const BudgetVector repaired = budgets_from_profile(tight, 5);
  for (int i = 1; i < repaired.m(); ++i) {
    CHECK(repaired.budget(i) + repaired.budget(i + 1) <= repaired.n());
  }
}

TEST_CASE("exhaustive budget search beats the rounded profile") {
  const CapacityResult r = solve_capacity(2, 2);
  const ListenProfile profile(r.profile, 2);
  for (int n = 8; n <= 64; n *= 2) {
    const BudgetVector rounded = budgets_from_profile(profile, n);
    const BudgetVector best = search_optimal_budgets(n, 2, 2);
    CHECK(max_w0(best, 2) >= max_w0(rounded, 2));
  }
}
