#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hdrelay/capacity.hpp"
#include "hdrelay/entropy.hpp"

using namespace hdrelay;

namespace {

// Frozen reference values: per-length capacities for binary and ternary
// alphabets, their common limits, and the time-sharing baseline.
const std::map<int, double> kCapacityQ1 = {
    {2, 0.7729}, {3, 0.7324}, {4, 0.7173}, {5, 0.7099},
    {11, 0.6981}, {21, 0.6954}, {41, 0.6946}, {101, 0.6943}};
const std::map<int, double> kCapacityQ2 = {
    {2, 1.1389}, {3, 1.0665}, {4, 1.0400}, {5, 1.0271},
    {11, 1.0066}, {21, 1.0020}, {41, 1.0006}, {101, 1.0001}};

}  // namespace

TEST_CASE("listen profiles validate their shape") {
  const ListenProfile p({0.7, 0.8, 1.0}, 2);
  CHECK(p.m() == 3);
  CHECK(p.p(1) == doctest::Approx(0.7));
  CHECK(p.pbar(1) == doctest::Approx(0.3));
  CHECK(p.p(3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(ListenProfile({0.7, 0.9}, 2), std::invalid_argument);  // p_m != 1
  CHECK_THROWS_AS(ListenProfile({0.3, 0.5, 1.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(ListenProfile({1.2, 1.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(ListenProfile({}, 2), std::invalid_argument);
}

TEST_CASE("hop entropies take their closed forms") {
  CHECK(h_first_hop(1.0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h_first_hop(0.5, 3) == doctest::Approx(1.0).epsilon(1e-12));
  // A fully listening downstream node sees the upstream on-off process.
  CHECK(h_hop(0.5, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(h_hop(1.0, 1.0, 2) == doctest::Approx(0.0).epsilon(1e-12));
  // One third transmit time maximises the q = 2 hop at log2 3.
  CHECK(h_hop(1.0 / 3.0, 1.0, 2) == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

  const ListenProfile profile({0.7, 0.8, 1.0}, 2);
  const std::vector<double> hops = link_entropies(profile);
  REQUIRE(hops.size() == 3);
  CHECK(hops[0] == doctest::Approx(h_first_hop(0.7, 2)).epsilon(1e-12));
  CHECK(hops[1] == doctest::Approx(h_hop(0.7, 0.8, 2)).epsilon(1e-12));
  CHECK(hops[2] == doctest::Approx(h_hop(0.8, 1.0, 2)).epsilon(1e-12));
}

TEST_CASE("pair tables are valid distributions with the right marginals") {
  const ListenProfile profile({0.7, 0.8, 1.0}, 2);
  for (int i = 1; i <= 3; ++i) {
    const PairPmf pmf = pair_pmf(profile, i);
    CHECK_NOTHROW(pmf.check_valid());
    double total = 0.0;
    for (int a = 0; a <= 2; ++a) {
      for (int b = 0; b <= 2; ++b) total += pmf.at(a, b);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // The self side is quiet exactly its listen fraction of the time.
    CHECK(pmf.self_marginal(2) == doctest::Approx(profile.p(i)).epsilon(1e-12));
  }
  // Consecutive tables share the middle node's marginal.
  const PairPmf a = pair_pmf(profile, 1);
  const PairPmf b = pair_pmf(profile, 2);
  for (int s = 0; s <= 2; ++s) {
    CHECK(a.self_marginal(s) == doctest::Approx(b.upstream_marginal(s)).epsilon(1e-12));
  }
}

TEST_CASE("pair-table entropies reproduce the closed-form hops") {
  for (const auto& values : {std::vector<double>{0.6, 0.7, 1.0},
                             std::vector<double>{0.75, 0.5, 1.0},
                             std::vector<double>{0.7185, 1.0}}) {
    for (int q = 1; q <= 3; ++q) {
      const ListenProfile profile(values, q);
      const std::vector<double> hops = link_entropies(profile);
      for (int i = 1; i <= profile.m(); ++i) {
        const PairPmf pmf = pair_pmf(profile, i);
        CHECK(pmf.conditional_entropy() ==
              doctest::Approx(hops[static_cast<std::size_t>(i - 1)]).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("both chain constructions assemble the same joint") {
  const ListenProfile profile({0.7, 0.75, 1.0}, 2);
  const StructuredJoint fwd = StructuredJoint::source_chain(profile);
  const StructuredJoint bwd = StructuredJoint::sink_chain(profile);
  CHECK_NOTHROW(fwd.check_pair_marginals(profile));
  CHECK_NOTHROW(bwd.check_pair_marginals(profile));

  std::map<std::vector<int>, double> fwd_map;
  for (const auto& atom : fwd.atoms()) fwd_map[atom.x] += atom.prob;
  double checked = 0.0;
  for (const auto& atom : bwd.atoms()) {
    if (atom.prob < 1e-15) continue;
    const auto it = fwd_map.find(atom.x);
    REQUIRE(it != fwd_map.end());
    CHECK(it->second == doctest::Approx(atom.prob).epsilon(1e-10));
    checked += atom.prob;
  }
  CHECK(checked == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reference capacities are reproduced to four decimals") {
  for (const auto& [m, expected] : kCapacityQ1) {
    CHECK(solve_capacity(m, 1).value == doctest::Approx(expected).epsilon(2e-4));
  }
  for (const auto& [m, expected] : kCapacityQ2) {
    CHECK(solve_capacity(m, 2).value == doctest::Approx(expected).epsilon(2e-4));
  }
}

TEST_CASE("the solver equalises the hops at the capacity") {
  for (int q = 1; q <= 2; ++q) {
    for (int m = 2; m <= 6; ++m) {
      const CapacityResult r = solve_capacity(m, q, 1e-10);
      CHECK(r.residual <= 1e-9);
      const ListenProfile profile(r.profile, q);
      const std::vector<double> hops = link_entropies(profile);
      // Every hop carries at least the capacity; the bottleneck is tight.
      for (const double h : hops) CHECK(h >= r.value - 1e-8);
      CHECK(*std::min_element(hops.begin(), hops.end()) ==
            doctest::Approx(r.value).epsilon(1e-7));
      // The first hop is tight by construction.
      CHECK(hops.front() == doctest::Approx(r.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("one hop reaches the full alphabet rate") {
  CHECK(solve_capacity(1, 1).value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(solve_capacity(1, 3).value == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("capacity decreases with length towards the limit") {
  for (int q = 1; q <= 2; ++q) {
    const double limit = capacity_infinite(q);
    double last = std::log2(q + 1.0) + 1;
    for (const int m : {2, 3, 4, 5, 11, 21, 41, 101}) {
      const double c = solve_capacity(m, q).value;
      CHECK(c < last + 1e-12);
      CHECK(c > limit - 1e-9);
      last = c;
    }
    CHECK(last - limit <= 2e-4);
  }
}

TEST_CASE("single-relay fixed points match the solver") {
  const CapacityResult q2 = capacity_single_relay(2);
  CHECK(q2.value == doctest::Approx(1.1389).epsilon(1e-4));
  CHECK(q2.profile.front() == doctest::Approx(0.7185).epsilon(1e-3));
  CHECK(q2.value == doctest::Approx(solve_capacity(2, 2).value).epsilon(1e-9));

  const CapacityResult q1 = capacity_single_relay(1);
  CHECK(q1.value == doctest::Approx(0.7729).epsilon(1e-4));
  // For the binary alphabet the capacity equals the listen fraction.
  CHECK(q1.profile.front() == doctest::Approx(q1.value).epsilon(1e-9));

  const CapacityResult ns = capacity_single_relay(2, true);
  CHECK(ns.value == doctest::Approx(0.8295).epsilon(1e-3));
  CHECK(ns.value < q2.value);
  CHECK_THROWS_AS(capacity_single_relay(1, true), std::invalid_argument);
}

TEST_CASE("infinite-length closed forms") {
  CHECK(capacity_infinite(1) == doctest::Approx(0.6942).epsilon(1e-4));
  CHECK(std::abs(capacity_infinite(2) - 1.0) <= 1e-12);
  CHECK(optimal_listen_fraction_infinite(2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(duty_cycle_infinite(2) == doctest::Approx(100.0 / 3.0).epsilon(1e-9));
  CHECK(time_sharing_rate(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(time_sharing_rate(2) == doctest::Approx(0.7925).epsilon(1e-4));
  // Time sharing is strictly worse than the true limit.
  for (int q = 1; q <= 10; ++q) CHECK(time_sharing_rate(q) < capacity_infinite(q));
}

TEST_CASE("no single listen fraction beats the solved two-hop capacity") {
  const double cap = solve_capacity(2, 2).value;
  double best = 0.0;
  for (int i = 0; i <= 40000; ++i) {
    const double p1 = 0.5 + 0.5 * i / 40000.0;
    best = std::max(best, std::min(h_first_hop(p1, 2), h_hop(p1, 1.0, 2)));
  }
  CHECK(best <= cap + 1e-6);
  CHECK(best == doctest::Approx(cap).epsilon(1e-5));
}

TEST_CASE("cut-set bound equals the achieved capacity") {
  for (int q = 1; q <= 2; ++q) {
    for (int m = 2; m <= 4; ++m) {
      const CapacityResult r = solve_capacity(m, q, 1e-10);
      const ListenProfile profile(r.profile, q);
      const StructuredJoint joint = StructuredJoint::sink_chain(profile);
      const CutsetReport report = cutset_min_entropy(joint, 0);
      CHECK(report.min_entropy == doctest::Approx(r.value).epsilon(1e-6));
      CHECK(report.chain_cuts_dominate);
      CHECK(report.cuts.size() == (1u << (m - 1)));
    }
  }
}

TEST_CASE("a silent source drives the cut-set bound to zero") {
  const ListenProfile profile({1.0, 1.0}, 2);
  const StructuredJoint joint = StructuredJoint::sink_chain(profile);
  const CutsetReport report = cutset_min_entropy(joint, 0);
  CHECK(report.min_entropy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("limit behaviour holds along the length sweep") {
  const AppendixReport report = appendix_checks(100);
  CHECK(report.monotone_in_m);
  CHECK(report.profile_converges);
  CHECK(report.inequality_holds);
  CHECK(report.approaches_limit);
  CHECK(report.last_profile_gap < 1e-3);
  CHECK(report.last_limit_gap <= 2e-4);
}

TEST_CASE("results serialize to JSON") {
  const CapacityResult r = solve_capacity(3, 2);
  nlohmann::json j;
  to_json(j, r);
  CHECK(j.at("value").get<double>() == doctest::Approx(r.value));
  CHECK(j.at("q").get<int>() == 2);
  CHECK(j.at("profile").size() == 3);
}
