#pragma once

// Capacity of the noiseless half-duplex cascade with a single source.
//
// The rate across each hop is limited by the conditional entropy of what the
// downstream node hears given its own transmit/listen behaviour.  Optimal
// input distributions are parameterised by the listen fractions p_i of the
// relays, and the capacity solver finds the listen profile that equalises all
// hop entropies.

#include <vector>

#include "json.hpp"

namespace hdrelay {

// Listen fractions p_1..p_m of nodes 1..m.  The sink always listens, so
// p_m = 1.  Adjacent fractions satisfy p_i + p_{i+1} >= 1: a relay can only
// forward during slots in which its downstream neighbour listens.
class ListenProfile {
 public:
  ListenProfile(std::vector<double> listen, int q);

  int q() const { return q_; }
  int m() const { return static_cast<int>(p_.size()); }
  double p(int i) const;  // 1-based node index; p(m) == 1
  double pbar(int i) const { return 1.0 - p(i); }
  const std::vector<double>& values() const { return p_; }

 private:
  std::vector<double> p_;
  int q_;
};

// Entropy of what node 1 hears given its own behaviour: the source may use
// all q+1 symbols during node 1's listen slots.
double h_first_hop(double p1, int q);

// Entropy of what node i+1 hears given its own behaviour, when node i
// transmits a fraction 1-p of the time and node i+1 listens a fraction
// p_next of the time (p_next >= 1-p).
double h_hop(double p, double p_next, int q);

// All m per-hop entropies for a profile: element i-1 bounds the rate across
// the hop from node i-1 to node i.
std::vector<double> link_entropies(const ListenProfile& profile);

// Joint distribution of one adjacent transmit pair (X_{i-1}, X_i) under the
// entropy-maximising input family.  Symbol codes 0..q-1 are transmit values,
// code q is Quiet.
class PairPmf {
 public:
  PairPmf(int q, int index, std::vector<double> probs);

  int q() const { return q_; }
  int index() const { return index_; }
  double at(int upstream, int self) const;
  double upstream_marginal(int symbol) const;
  double self_marginal(int symbol) const;

  // H(Y_i | X_i) by exhaustive summation over the (q+1)^2 table and the
  // channel map; deliberately independent of the closed forms above.
  double conditional_entropy() const;

  void check_valid(double tol = 1e-12) const;

 private:
  int q_;
  int index_;
  std::vector<double> probs_;  // (q+1) x (q+1), row-major, row = upstream
};

PairPmf pair_pmf(const ListenProfile& profile, int i);

// Full joint of (X_0, ..., X_m) assembled from the adjacent-pair tables as a
// Markov chain.  Both construction directions must give the same joint.
class StructuredJoint {
 public:
  struct Atom {
    std::vector<int> x;  // symbol codes for nodes 0..m, code q = Quiet
    double prob;
  };

  static StructuredJoint sink_chain(const ListenProfile& profile);
  static StructuredJoint source_chain(const ListenProfile& profile);

  int m() const { return m_; }
  int q() const { return q_; }
  const std::vector<Atom>& atoms() const { return atoms_; }

  void check_pair_marginals(const ListenProfile& profile, double tol = 1e-9) const;

 private:
  int m_ = 0;
  int q_ = 0;
  std::vector<Atom> atoms_;
};

struct CutsetCut {
  std::vector<int> members;  // transmit-side conditioning nodes
  double entropy;
};

struct CutsetReport {
  double min_entropy = 0.0;
  std::vector<int> argmin;
  std::vector<CutsetCut> cuts;
  bool chain_cuts_dominate = false;
};

// Exhaustively evaluates H(Y_S, Y_m | X_S) over all S inside {v+1..m-1} and
// reports the minimum.  Every cut must be dominated by the chain cut that
// starts at its smallest member.
CutsetReport cutset_min_entropy(const StructuredJoint& joint, int source_node);

struct CapacityResult {
  double value = 0.0;
  int q = 0;
  std::vector<double> profile;  // p_1..p_m
  double residual = 0.0;
  int iterations = 0;
};

void to_json(nlohmann::json& j, const CapacityResult& r);

// Capacity of the cascade with m hops (m-1 relays): bisection on the
// candidate rate C.  For each candidate, p_1 = C / log2(q+1) and each later
// listen fraction is the smallest value that lets its hop carry C; the sign
// of the final-hop surplus drives the bisection.
CapacityResult solve_capacity(int m, int q, double tol = 1e-9);

// Single-relay capacity as a direct fixed point: listen fraction p with
// p * log2(q+1) equal to the relay's output entropy.  With
// no_silence_detection the source may not stay quiet while the relay
// listens, which shrinks the first hop to p * log2 q (needs q >= 2).
CapacityResult capacity_single_relay(int q, bool no_silence_detection = false);

// Limits for infinitely long cascades.
double capacity_infinite(int q);
double optimal_listen_fraction_infinite(int q);
double duty_cycle_infinite(int q);  // percent of time a deep relay transmits
double time_sharing_rate(int q);    // naive alternate-slots baseline

struct AppendixReport {
  std::vector<int> sweep;
  bool monotone_in_m = false;
  bool profile_converges = false;
  bool inequality_holds = false;
  bool approaches_limit = false;
  double last_profile_gap = 0.0;
  double last_limit_gap = 0.0;
};

// Numeric checks of the limit behaviour: capacity non-increasing in the
// cascade length, deep-relay listen fractions converging, the closed-form
// limit being met, and the duty-cycle inequality holding for q = 1..q_max.
AppendixReport appendix_checks(int q_max);

}  // namespace hdrelay
