// Acceptance gate: one line per criterion, PASS or FAIL, exit code equal to
// the number of failed criteria.  Tolerances are pinned here on purpose.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "hdrelay/apps.hpp"
#include "hdrelay/capacity.hpp"
#include "hdrelay/codec.hpp"
#include "hdrelay/counting.hpp"
#include "hdrelay/region.hpp"

using namespace hdrelay;

namespace {

int failures = 0;

void criterion(int index, const std::string& label, const std::function<bool()>& check) {
  bool ok = false;
  std::string detail;
  try {
    ok = check();
  } catch (const std::exception& e) {
    detail = std::string(" (") + e.what() + ")";
  }
  std::printf("%s  criterion %2d: %s%s\n", ok ? "PASS" : "FAIL", index,
              label.c_str(), detail.c_str());
  if (!ok) ++failures;
}

bool near(double value, double expected, double tol) {
  return std::abs(value - expected) <= tol;
}

}  // namespace

int main() {
  criterion(1, "reference capacity table, 16 values within 1e-3, under 10 s", [] {
    const std::map<int, double> q1 = {{2, 0.7729}, {3, 0.7324}, {4, 0.7173},
                                      {5, 0.7099}, {11, 0.6981}, {21, 0.6954},
                                      {41, 0.6946}, {101, 0.6943}};
    const std::map<int, double> q2 = {{2, 1.1389}, {3, 1.0665}, {4, 1.0400},
                                      {5, 1.0271}, {11, 1.0066}, {21, 1.0020},
                                      {41, 1.0006}, {101, 1.0001}};
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    for (const auto& [m, expected] : q1) {
      ok = ok && near(solve_capacity(m, 1).value, expected, 1e-3);
    }
    for (const auto& [m, expected] : q2) {
      ok = ok && near(solve_capacity(m, 2).value, expected, 1e-3);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return ok && seconds < 10.0;
  });

  criterion(2, "single-relay fixed points and the no-silence variant", [] {
    const CapacityResult c2 = capacity_single_relay(2);
    const CapacityResult c1 = capacity_single_relay(1);
    const CapacityResult ns = capacity_single_relay(2, true);
    return near(c2.value, 1.1389, 1e-4) && near(c2.profile.front(), 0.7185, 1e-3) &&
           near(c1.value, 0.7729, 1e-4) && near(c1.profile.front(), 0.7729, 1e-3) &&
           near(ns.value, 0.8295, 1e-3);
  });

  criterion(3, "closed-form limits, duty cycle, and time sharing", [] {
    const double golden = std::log2((1.0 + std::sqrt(5.0)) / 2.0);
    return near(capacity_infinite(1), golden, 1e-12) &&
           near(capacity_infinite(1), 0.6942, 1e-4) &&
           std::abs(capacity_infinite(2) - 1.0) <= 1e-12 &&
           near(duty_cycle_infinite(2), 100.0 / 3.0, 1e-6) &&
           near(time_sharing_rate(1), 0.5, 1e-12) &&
           near(time_sharing_rate(2), 0.7925, 1e-4);
  });

  criterion(4, "monotone convergence to the infinite-length limit", [] {
    bool ok = true;
    for (int q = 1; q <= 2; ++q) {
      const double limit = capacity_infinite(q);
      double last = 1e9;
      for (const int m : {2, 3, 4, 5, 11, 21, 41, 101}) {
        const double c = solve_capacity(m, q).value;
        ok = ok && c <= last + 1e-12 && c >= limit - 1e-9;
        last = c;
      }
      ok = ok && std::abs(last - limit) <= 2e-4;
    }
    return ok;
  });

  criterion(5, "exhaustive cut-set enumeration equals the solved capacity", [] {
    bool ok = true;
    for (int q = 1; q <= 2; ++q) {
      for (int m = 2; m <= 4; ++m) {
        const CapacityResult r = solve_capacity(m, q, 1e-10);
        const ListenProfile profile(r.profile, q);
        const CutsetReport report =
            cutset_min_entropy(StructuredJoint::sink_chain(profile), 0);
        ok = ok && near(report.min_entropy, r.value, 1e-6) && report.chain_cuts_dominate;
      }
    }
    return ok;
  });

  criterion(6, "two-source threshold, boundary endpoints, hull membership", [] {
    const TwoSourceThreshold t = two_source_achievable_threshold();
    bool ok = near(t.p1, 0.6091, 1e-3) && near(t.r0_min, 0.9654, 1e-3) &&
              near(t.r1_max, 0.3909, 1e-3);
    const RegionCurves curves = two_source_region_curves(0.01);
    ok = ok && near(curves.cutset.front().r0, 0.0, 1e-3) &&
         near(curves.cutset.front().r1, std::log2(3.0), 1e-3) &&
         near(curves.achievable.back().r0, 1.1389, 1e-3) &&
         near(curves.achievable.back().r1, 0.0, 1e-3);
    // A point on the hull chord belongs to the timing region.
    const CascadeSpec spec{2, 2, {0, 1}};
    const ListenProfile profile({0.7, 1.0}, 2);
    const RateVector mid{{t.r0_min / 2.0, (std::log2(3.0) + t.r1_max) / 2.0}};
    ok = ok && membership(spec, profile, mid, RegionKind::TimingRegion, 1e-9);
    return ok;
  });

  criterion(7, "zero-error codes: reference transcript and exhaustive sweeps", [] {
    const SingleRelayCode code = build_single_relay_code(4, 1, 2);
    const PipelineResult run = run_pipeline(code, {1, 2, 4, 7}, 4, true);
    const char* expected[8] = {"001N", "NNNN", "N010", "1NNN",
                               "1N00", "N0NN", "11N1", "NN0N"};
    bool ok = run.transcript.size() == 8;
    for (int i = 0; ok && i < 8; ++i) {
      ok = run.transcript[static_cast<std::size_t>(i)].word == expected[i];
    }
    ok = ok && run.decoded[1] == std::vector<long long>{1} &&
         run.decoded[2] == std::vector<long long>{2} &&
         run.decoded[3] == std::vector<long long>{4};
    // The pipeline itself throws on any collision or decode mismatch.
    for (int q = 1; ok && q <= 2; ++q) {
      for (int n = 2; ok && n <= 6; ++n) {
        for (int n1 = 1; ok && n1 < n; ++n1) {
          ok = verify_single_relay_exhaustive(n, n1, q, 4) > 0;
        }
      }
    }
    ok = ok && verify_two_source_exhaustive(5, 3) == 4096;
    return ok;
  });

  criterion(8, "finite counting rate near the single-relay capacity", [] {
    const int n1 = static_cast<int>(std::lround(0.2815 * 4096));
    const double rate = counting_rate(4096, n1, 2);
    return rate >= 1.12 && rate <= 1.1389;
  });

  criterion(9, "butterfly schedule and tree multicast reference values", [] {
    const ButterflyReport report = butterfly_report();
    bool ok = report.pairs_checked == 4 && report.pairs_decoded == 4 &&
              near(report.nc_rate, 2.0 / 3.0, 1e-9) &&
              near(report.timing_rate, 0.7729, 1e-4);
    const TreeCapacityReport tree = tree_multicast_capacity(builtin_multicast_tree());
    ok = ok && near(tree.capacity.value, 0.7324, 1e-3);
    return ok;
  });

  criterion(10, "limit inequality and deep-profile convergence", [] {
    const AppendixReport report = appendix_checks(100);
    return report.inequality_holds && report.profile_converges &&
           report.last_profile_gap < 1e-3;
  });

  std::printf("%d of 10 criteria passed\n", 10 - failures);
  return failures;
}
