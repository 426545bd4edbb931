#pragma once

// Exact codebook counting for the half-duplex cascade: how many distinct
// per-block transmit sequences every node can generate, the resulting
// message-set sizes, and the large-n limits that connect the counts to the
// per-hop entropies.

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

#include "hdrelay/capacity.hpp"

namespace hdrelay {

using BigInt = boost::multiprecision::cpp_int;

BigInt binomial(int n, int k);       // exact C(n, k); 0 outside 0 <= k <= n
BigInt int_pow(int base, int exp);   // base^exp for exp >= 0
double log2_big(const BigInt& v);    // log2 of a positive big integer

// Per-block transmit budgets (n_1, ..., n_{m-1}) of the relays in an m-hop
// cascade with block length n.  The sink's budget n_m is fixed to 0.  A
// relay may only transmit while its downstream neighbour listens, hence
// n_i + n_{i+1} <= n.
class BudgetVector {
 public:
  BudgetVector(int n, std::vector<int> budgets);

  int n() const { return n_; }
  int m() const { return static_cast<int>(budgets_.size()) + 1; }
  int budget(int i) const;  // n_i for 1 <= i <= m; budget(m) == 0
  const std::vector<int>& budgets() const { return budgets_; }

 private:
  int n_;
  std::vector<int> budgets_;
};

// Message-set sizes already committed upstream of a relay source, in source
// order (|W_0|, |W_1|, ...).
struct MessageSetSizes {
  std::vector<BigInt> sizes;
};

// Distinct per-block sequences relay i can generate: q^{n_i} patterns-times-
// values, with the n_i transmit slots placed among the n - n_{i+1} slots in
// which the downstream node listens.
BigInt sequences_available(int relay, const BudgetVector& bv, int q);

// The source is unconstrained over node 1's listen slots: (q+1)^(n - n_1).
BigInt source_sequences(const BudgetVector& bv, int q);

// Largest message set of the primary source: the source's own sequence count
// or the tightest relay bottleneck, whichever is smaller.
BigInt max_w0(const BudgetVector& bv, int q);

// Largest message set of relay source v given the upstream sizes: relay
// sequences downstream of v are shared between forwarded and own traffic
// (floor-divide by the upstream product), and whenever upstream traffic is
// live (product > 1) the relay may not modulate its slot pattern, capping
// the count at q^{n_v}.
BigInt max_w_relay(int v, const MessageSetSizes& prior, const BudgetVector& bv, int q);

// log2(C(n, k)) / n; approaches the binary entropy of k/n for large n.
double binom_entropy_limit(int n, int k);

struct AsymptoticBounds {
  // Element i-1 bounds the rate across the hop into node i.
  std::vector<double> link;
  // Bound on the primary source's rate: the minimum over all hops.
  double r0_bound = 0.0;
};

// Large-n limits of the counting bounds at a listen profile, computed from
// the slot-fraction algebra directly; must agree with the conditional
// entropies of the capacity module.
AsymptoticBounds asymptotic_rate_bounds(const ListenProfile& profile);

// Sum-rate bound for a source at node v: the minimum over the hops that
// carry its traffic (links into nodes v+1..m).
double sum_rate_bound(const AsymptoticBounds& bounds, int v);

// Integer budgets nearest to a continuous profile: n_i = round(n * (1-p_i)),
// repaired pairwise so that n_i + n_{i+1} <= n.
BudgetVector budgets_from_profile(const ListenProfile& profile, int n);

// Exhaustive search for the budget vector maximizing max_w0.  Ties prefer
// the smaller n_1.  Cost grows as n^(m-1); guarded by a combination cap.
BudgetVector search_optimal_budgets(int n, int m, int q);

}  // namespace hdrelay
