#include "hdrelay/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "hdrelay/entropy.hpp"

namespace hdrelay {

namespace {

constexpr double kProfileSlack = 1e-9;

void check_q(int q) {
  if (q < 1) throw std::invalid_argument("alphabet size must be at least 1");
}

}  // namespace

ListenProfile::ListenProfile(std::vector<double> listen, int q)
    : p_(std::move(listen)), q_(q) {
  check_q(q);
  if (p_.empty()) throw std::invalid_argument("ListenProfile: empty profile");
  for (double& v : p_) {
    if (v < -kProfileSlack || v > 1.0 + kProfileSlack) {
      throw std::invalid_argument("ListenProfile: fraction outside [0,1]: " +
                                  std::to_string(v));
    }
    v = std::clamp(v, 0.0, 1.0);
  }
  if (std::abs(p_.back() - 1.0) > kProfileSlack) {
    throw std::invalid_argument("ListenProfile: the sink must always listen (p_m = 1)");
  }
  p_.back() = 1.0;
  for (size_t i = 0; i + 1 < p_.size(); ++i) {
    if (p_[i] + p_[i + 1] < 1.0 - kProfileSlack) {
      throw std::invalid_argument(
          "ListenProfile: p_" + std::to_string(i + 1) + " + p_" + std::to_string(i + 2) +
          " must be at least 1");
    }
  }
}

double ListenProfile::p(int i) const {
  if (i < 1 || i > m()) throw std::out_of_range("ListenProfile::p: index out of range");
  return p_[static_cast<size_t>(i - 1)];
}

double h_first_hop(double p1, int q) {
  check_q(q);
  if (p1 < -kProfileSlack || p1 > 1.0 + kProfileSlack) {
    throw std::invalid_argument("h_first_hop: fraction outside [0,1]");
  }
  return std::clamp(p1, 0.0, 1.0) * log2_alphabet(q);
}

double h_hop(double p, double p_next, int q) {
  check_q(q);
  const double a = std::clamp(1.0 - p, 0.0, 1.0);  // upstream transmit fraction
  const double pn = std::clamp(p_next, 0.0, 1.0);
  if (pn < a - 1e-12) {
    throw std::invalid_argument("h_hop: downstream must listen at least a fraction " +
                                std::to_string(a));
  }
  if (a <= 0.0) return 0.0;
  const double ratio = std::min(a / pn, 1.0);
  return a * std::log2(static_cast<double>(q)) + pn * binary_entropy(ratio);
}

std::vector<double> link_entropies(const ListenProfile& profile) {
  std::vector<double> h;
  h.reserve(static_cast<size_t>(profile.m()));
  h.push_back(h_first_hop(profile.p(1), profile.q()));
  for (int i = 1; i < profile.m(); ++i) {
    h.push_back(h_hop(profile.p(i), profile.p(i + 1), profile.q()));
  }
  return h;
}

PairPmf::PairPmf(int q, int index, std::vector<double> probs)
    : q_(q), index_(index), probs_(std::move(probs)) {
  check_q(q);
  const size_t want = static_cast<size_t>(q + 1) * static_cast<size_t>(q + 1);
  if (probs_.size() != want) throw std::invalid_argument("PairPmf: wrong table size");
}

double PairPmf::at(int upstream, int self) const {
  if (upstream < 0 || upstream > q_ || self < 0 || self > q_) {
    throw std::out_of_range("PairPmf::at: symbol code out of range");
  }
  return probs_[static_cast<size_t>(upstream) * static_cast<size_t>(q_ + 1) +
                static_cast<size_t>(self)];
}

double PairPmf::upstream_marginal(int symbol) const {
  double s = 0.0;
  for (int e = 0; e <= q_; ++e) s += at(symbol, e);
  return s;
}

double PairPmf::self_marginal(int symbol) const {
  double s = 0.0;
  for (int u = 0; u <= q_; ++u) s += at(u, symbol);
  return s;
}

double PairPmf::conditional_entropy() const {
  // Push (X_{i-1}, X_i) through the channel map and sum -p log p terms for
  // the joint (Y_i, X_i) and the marginal X_i.
  const int a = q_ + 1;
  std::vector<double> joint(static_cast<size_t>(a) * static_cast<size_t>(a), 0.0);
  std::vector<double> self(static_cast<size_t>(a), 0.0);
  for (int u = 0; u < a; ++u) {
    for (int s = 0; s < a; ++s) {
      const double pr = at(u, s);
      if (pr <= 0.0) continue;
      const int y = (s == q_) ? u : s;
      joint[static_cast<size_t>(y) * static_cast<size_t>(a) + static_cast<size_t>(s)] += pr;
      self[static_cast<size_t>(s)] += pr;
    }
  }
  double h = 0.0;
  for (double pr : joint) h -= xlog2(pr);
  for (double pr : self) h += xlog2(pr);
  return h;
}

void PairPmf::check_valid(double tol) const {
  double total = 0.0;
  for (double pr : probs_) {
    if (pr < -tol) throw std::logic_error("PairPmf: negative probability");
    total += pr;
  }
  if (std::abs(total - 1.0) > tol * 10 + 1e-12) {
    throw std::logic_error("PairPmf: probabilities sum to " + std::to_string(total));
  }
}

PairPmf pair_pmf(const ListenProfile& profile, int i) {
  if (i < 1 || i > profile.m()) {
    throw std::invalid_argument("pair_pmf: pair index outside 1..m");
  }
  const int q = profile.q();
  const int a = q + 1;
  std::vector<double> t(static_cast<size_t>(a) * static_cast<size_t>(a), 0.0);
  auto cell = [&](int up, int self) -> double& {
    return t[static_cast<size_t>(up) * static_cast<size_t>(a) + static_cast<size_t>(self)];
  };
  if (i == 1) {
    // The source splits its quiet-slot mass uniformly over all q+1 symbols
    // and its talk-slot mass uniformly over the q transmit values.
    const double p1 = profile.p(1);
    for (int k = 0; k < q; ++k) cell(k, q) = p1 / a;
    for (int l = 0; l < q; ++l) cell(q, l) = (1.0 - p1) / q;
    cell(q, q) = p1 / a;
  } else {
    const double prev = profile.p(i - 1);
    const double cur = profile.p(i);
    for (int k = 0; k < q; ++k) cell(k, q) = (1.0 - prev) / q;
    for (int l = 0; l < q; ++l) cell(q, l) = (1.0 - cur) / q;
    double both_quiet = cur - (1.0 - prev);
    if (both_quiet < -kProfileSlack) {
      throw std::invalid_argument("pair_pmf: adjacent listen fractions below 1");
    }
    cell(q, q) = std::max(both_quiet, 0.0);
  }
  PairPmf pmf(q, i, std::move(t));
  pmf.check_valid(1e-12);
  return pmf;
}

StructuredJoint StructuredJoint::sink_chain(const ListenProfile& profile) {
  StructuredJoint j;
  j.m_ = profile.m();
  j.q_ = profile.q();

  const int m = j.m_;
  const int q = j.q_;
  std::vector<PairPmf> tables;
  for (int i = 1; i <= m; ++i) tables.push_back(pair_pmf(profile, i));

  j.atoms_.push_back({{q}, 1.0});
  for (int i = m; i >= 1; --i) {
    const PairPmf& t = tables[static_cast<size_t>(i - 1)];
    std::vector<Atom> next;
    for (const Atom& a : j.atoms_) {
      const int self = a.x.front();
      const double denom = t.self_marginal(self);
      if (denom <= 0.0) continue;
      for (int up = 0; up <= q; ++up) {
        const double pr = t.at(up, self);
        if (pr <= 0.0) continue;
        Atom ext;
        ext.x.reserve(a.x.size() + 1);
        ext.x.push_back(up);
        ext.x.insert(ext.x.end(), a.x.begin(), a.x.end());
        ext.prob = a.prob * pr / denom;
        if (ext.prob > 0.0) next.push_back(std::move(ext));
      }
    }
    j.atoms_ = std::move(next);
  }
  return j;
}

StructuredJoint StructuredJoint::source_chain(const ListenProfile& profile) {
  StructuredJoint j;
  j.m_ = profile.m();
  j.q_ = profile.q();

  const int m = j.m_;
  const int q = j.q_;
  std::vector<PairPmf> tables;
  for (int i = 1; i <= m; ++i) tables.push_back(pair_pmf(profile, i));

  for (int u = 0; u <= q; ++u) {
    const double pr = tables.front().upstream_marginal(u);
    if (pr > 0.0) j.atoms_.push_back({{u}, pr});
  }
  for (int i = 1; i <= m; ++i) {
    const PairPmf& t = tables[static_cast<size_t>(i - 1)];
    std::vector<Atom> next;
    for (const Atom& a : j.atoms_) {
      const int up = a.x.back();
      const double denom = t.upstream_marginal(up);
      if (denom <= 0.0) continue;
      for (int self = 0; self <= q; ++self) {
        const double pr = t.at(up, self);
        if (pr <= 0.0) continue;
        Atom ext = a;
        ext.x.push_back(self);
        ext.prob = a.prob * pr / denom;
        if (ext.prob > 0.0) next.push_back(std::move(ext));
      }
    }
    j.atoms_ = std::move(next);
  }
  return j;
}

void StructuredJoint::check_pair_marginals(const ListenProfile& profile, double tol) const {
  if (profile.m() != m_ || profile.q() != q_) {
    throw std::invalid_argument("check_pair_marginals: profile shape mismatch");
  }
  const int a = q_ + 1;
  for (int i = 1; i <= m_; ++i) {
    const PairPmf want = pair_pmf(profile, i);
    std::vector<double> got(static_cast<size_t>(a) * static_cast<size_t>(a), 0.0);
    for (const Atom& atom : atoms_) {
      const int up = atom.x[static_cast<size_t>(i - 1)];
      const int self = atom.x[static_cast<size_t>(i)];
      got[static_cast<size_t>(up) * static_cast<size_t>(a) + static_cast<size_t>(self)] +=
          atom.prob;
    }
    for (int u = 0; u < a; ++u) {
      for (int s = 0; s < a; ++s) {
        const double diff = std::abs(
            got[static_cast<size_t>(u) * static_cast<size_t>(a) + static_cast<size_t>(s)] -
            want.at(u, s));
        if (diff > tol) {
          throw std::logic_error("StructuredJoint: pair marginal " + std::to_string(i) +
                                 " deviates by " + std::to_string(diff));
        }
      }
    }
  }
}

namespace {

double map_entropy(const std::map<std::string, double>& dist) {
  double h = 0.0;
  for (const auto& [key, pr] : dist) {
    (void)key;
    h -= xlog2(pr);
  }
  return h;
}

}  // namespace

CutsetReport cutset_min_entropy(const StructuredJoint& joint, int source_node) {
  const int m = joint.m();
  const int q = joint.q();
  if (source_node < 0 || source_node > m - 1) {
    throw std::invalid_argument("cutset_min_entropy: source node outside 0..m-1");
  }
  const int free_count = m - 1 - source_node;  // candidate cut members v+1..m-1
  if (free_count > 20) throw std::invalid_argument("cutset_min_entropy: cascade too long");

  CutsetReport report;
  report.min_entropy = 0.0;
  report.chain_cuts_dominate = true;

  std::vector<double> chain_value(static_cast<size_t>(m), 0.0);  // by smallest member
  bool first = true;

  for (int mask = 0; mask < (1 << free_count); ++mask) {
    std::vector<int> members;
    for (int j = 0; j < free_count; ++j) {
      if (mask & (1 << j)) members.push_back(source_node + 1 + j);
    }

    std::map<std::string, double> cond;  // X_S
    std::map<std::string, double> full;  // (Y_S, Y_m, X_S)
    for (const auto& atom : joint.atoms()) {
      std::string kb;
      std::string ka;
      for (int v : members) {
        kb.push_back(static_cast<char>(atom.x[static_cast<size_t>(v)]));
      }
      for (int v : members) {
        const int self = atom.x[static_cast<size_t>(v)];
        const int up = atom.x[static_cast<size_t>(v - 1)];
        ka.push_back(static_cast<char>(self == q ? up : self));
      }
      ka.push_back(static_cast<char>(atom.x[static_cast<size_t>(m - 1)]));  // Y_m
      ka += kb;
      cond[kb] += atom.prob;
      full[ka] += atom.prob;
    }
    const double value = map_entropy(full) - map_entropy(cond);
    report.cuts.push_back({members, value});

    if (members.empty()) {
      // Treated as the trivial cut: the sink's reception alone.
    } else {
      const bool is_chain = (members.back() == m - 1) &&
                            (static_cast<int>(members.size()) == m - members.front());
      if (is_chain) chain_value[static_cast<size_t>(members.front())] = value;
    }
    if (first || value < report.min_entropy) {
      report.min_entropy = value;
      report.argmin = members;
      first = false;
    }
  }

  for (const auto& cut : report.cuts) {
    if (cut.members.empty()) continue;
    const double chain = chain_value[static_cast<size_t>(cut.members.front())];
    if (cut.entropy < chain - 1e-9) report.chain_cuts_dominate = false;
  }
  return report;
}

void to_json(nlohmann::json& j, const CapacityResult& r) {
  j = nlohmann::json{{"value", r.value},
                     {"q", r.q},
                     {"profile", r.profile},
                     {"residual", r.residual},
                     {"iterations", r.iterations}};
}

namespace {

// Smallest p_next in [1-p, 1] with h_hop(p, p_next, q) = target; the hop
// entropy is strictly increasing in p_next.
double hop_root(double p, double target, int q) {
  double lo = std::clamp(1.0 - p, 0.0, 1.0);
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (h_hop(p, mid, q) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ChainEval {
  bool feasible = false;
  double residual = 0.0;  // final-hop entropy minus the candidate rate
  std::vector<double> p;  // p_1..p_{m-1}
};

// Builds the minimal listen profile whose first m-1 hops all carry at least
// C, hop by hop.  Infeasible when some hop cannot reach C even with a fully
// listening downstream node.
ChainEval eval_chain(int m, int q, double C) {
  ChainEval e;
  const double logq = std::log2(static_cast<double>(q));
  const double L = log2_alphabet(q);
  e.p.resize(static_cast<size_t>(m - 1));
  double p1 = C / L;
  if (p1 > 1.0 + 1e-12) return e;
  e.p[0] = std::min(p1, 1.0);
  for (int i = 2; i <= m - 1; ++i) {
    const double prev = e.p[static_cast<size_t>(i - 2)];
    const double a = std::clamp(1.0 - prev, 0.0, 1.0);
    const double hmin = a * logq;
    const double hmax = a * logq + binary_entropy(a);
    double next;
    if (C <= hmin + 1e-13) {
      next = a;
    } else if (C > hmax + 1e-12) {
      return e;  // hop i cannot carry C
    } else {
      next = hop_root(prev, C, q);
    }
    e.p[static_cast<size_t>(i - 1)] = next;
  }
  const double a_last = std::clamp(1.0 - e.p[static_cast<size_t>(m - 2)], 0.0, 1.0);
  e.residual = a_last * logq + binary_entropy(a_last) - C;
  e.feasible = true;
  return e;
}

}  // namespace

CapacityResult solve_capacity(int m, int q, double tol) {
  if (m < 1) throw std::invalid_argument("solve_capacity: need m >= 1");
  check_q(q);
  if (tol <= 0.0) throw std::invalid_argument("solve_capacity: tolerance must be positive");
  const double L = log2_alphabet(q);

  CapacityResult result;
  result.q = q;
  if (m == 1) {
    result.value = L;
    result.profile = {1.0};
    return result;
  }

  ChainEval lo_eval = eval_chain(m, q, 0.0);
  if (!lo_eval.feasible || lo_eval.residual < -1e-12) {
    throw std::logic_error("solve_capacity: lower bracket failed");
  }
  {
    const ChainEval top = eval_chain(m, q, L);
    if (top.feasible && top.residual > 1e-12) {
      throw std::logic_error("solve_capacity: upper bracket failed");
    }
  }

  double lo = 0.0;
  double hi = L;
  int iters = 0;
  while (iters < 300) {
    const bool width_ok = (hi - lo) <= tol;
    const bool residual_ok = lo_eval.residual <= tol;
    if (width_ok && residual_ok) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // double precision exhausted
    const ChainEval e = eval_chain(m, q, mid);
    if (e.feasible && e.residual >= 0.0) {
      lo = mid;
      lo_eval = e;
    } else {
      hi = mid;
    }
    ++iters;
  }
  if (lo_eval.residual > 10.0 * tol) {
    throw std::runtime_error("solve_capacity: bisection did not converge (residual " +
                             std::to_string(lo_eval.residual) + ")");
  }

  result.value = lo;
  result.residual = lo_eval.residual;
  result.iterations = iters;
  result.profile = lo_eval.p;
  result.profile.push_back(1.0);
  return result;
}

CapacityResult capacity_single_relay(int q, bool no_silence_detection) {
  check_q(q);
  if (no_silence_detection && q < 2) {
    throw std::invalid_argument(
        "capacity_single_relay: the always-transmit source variant needs q >= 2");
  }
  const double first = no_silence_detection ? std::log2(static_cast<double>(q))
                                            : log2_alphabet(q);
  const double logq = std::log2(static_cast<double>(q));
  auto f = [&](double p) {
    return p * first - (binary_entropy(p) + (1.0 - p) * logq);
  };
  double lo = 0.5;
  double hi = 1.0;
  if (f(lo) >= 0.0 || f(hi) <= 0.0) {
    throw std::logic_error("capacity_single_relay: bracket failed");
  }
  int iters = 0;
  while (hi - lo > 1e-13 && iters < 200) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iters;
  }
  const double p = 0.5 * (lo + hi);
  CapacityResult result;
  result.q = q;
  result.value = p * first;
  result.profile = {p, 1.0};
  result.residual = std::abs(f(p));
  result.iterations = iters;
  return result;
}

double capacity_infinite(int q) {
  check_q(q);
  return std::log2(0.5 * (1.0 + std::sqrt(4.0 * q + 1.0)));
}

double optimal_listen_fraction_infinite(int q) {
  check_q(q);
  return 0.5 * (1.0 + 1.0 / std::sqrt(4.0 * q + 1.0));
}

double duty_cycle_infinite(int q) {
  return 100.0 * (1.0 - optimal_listen_fraction_infinite(q));
}

double time_sharing_rate(int q) {
  return 0.5 * log2_alphabet(q);
}

AppendixReport appendix_checks(int q_max) {
  if (q_max < 1) throw std::invalid_argument("appendix_checks: q_max must be at least 1");

  AppendixReport report;
  report.sweep = {2, 3, 4, 5, 11, 21, 41, 101};

  report.inequality_holds = true;
  for (int q = 1; q <= q_max; ++q) {
    const double lhs = optimal_listen_fraction_infinite(q) * log2_alphabet(q);
    const double rhs = capacity_infinite(q);
    if (lhs < rhs - 1e-12) report.inequality_holds = false;
  }

  report.monotone_in_m = true;
  report.profile_converges = true;
  report.approaches_limit = true;
  for (int q : {1, 2}) {
    double prev_cap = log2_alphabet(q) + 1.0;
    double prev_gap = 2.0;
    for (size_t k = 0; k < report.sweep.size(); ++k) {
      const int m = report.sweep[k];
      const CapacityResult a = solve_capacity(m, q);
      const CapacityResult b = solve_capacity(m + 1, q);
      if (a.value > prev_cap + 1e-9) report.monotone_in_m = false;
      prev_cap = a.value;
      // Listen fraction of the deepest relay for consecutive cascade lengths.
      const double gap = std::abs(a.profile[static_cast<size_t>(m - 2)] -
                                  b.profile[static_cast<size_t>(m - 1)]);
      if (gap > prev_gap + 1e-9) report.profile_converges = false;
      prev_gap = gap;
      if (k + 1 == report.sweep.size()) {
        report.last_profile_gap = std::max(report.last_profile_gap, gap);
        if (gap > 1e-3) report.profile_converges = false;
        const double limit_gap = std::abs(a.value - capacity_infinite(q));
        report.last_limit_gap = std::max(report.last_limit_gap, limit_gap);
        if (limit_gap > 1e-3) report.approaches_limit = false;
      }
    }
  }
  return report;
}

}  // namespace hdrelay
