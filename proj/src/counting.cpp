#include "hdrelay/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "hdrelay/entropy.hpp"

namespace hdrelay {

BigInt binomial(int n, int k) {
  if (n < 0) throw std::invalid_argument("binomial: negative n");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (int j = 1; j <= k; ++j) {
    result *= (n - k + j);
    result /= j;  // exact: prefix products are binomials
  }
  return result;
}

BigInt int_pow(int base, int exp) {
  if (exp < 0) throw std::invalid_argument("int_pow: negative exponent");
  if (base < 0) throw std::invalid_argument("int_pow: negative base");
  BigInt result = 1;
  BigInt b = base;
  while (exp > 0) {
    if (exp & 1) result *= b;
    b *= b;
    exp >>= 1;
  }
  return result;
}

double log2_big(const BigInt& v) {
  if (v <= 0) throw std::invalid_argument("log2_big: argument must be positive");
  const auto bits = boost::multiprecision::msb(v);  // floor(log2 v)
  if (bits < 52) return std::log2(v.convert_to<double>());
  // Keep the top 53 bits for the mantissa; the rest only shifts the exponent.
  const unsigned shift = static_cast<unsigned>(bits - 52);
  const BigInt top = v >> shift;
  return std::log2(top.convert_to<double>()) + static_cast<double>(shift);
}

BudgetVector::BudgetVector(int n, std::vector<int> budgets)
    : n_(n), budgets_(std::move(budgets)) {
  if (n_ < 1) throw std::invalid_argument("BudgetVector: block length must be >= 1");
  for (size_t i = 0; i < budgets_.size(); ++i) {
    const int cur = budgets_[i];
    if (cur < 0 || cur >= n_) {
      throw std::invalid_argument("BudgetVector: budget " + std::to_string(i + 1) +
                                  " outside [0, n)");
    }
    const int next = (i + 1 < budgets_.size()) ? budgets_[i + 1] : 0;
    if (cur + next > n_) {
      throw std::invalid_argument(
          "BudgetVector: budgets " + std::to_string(i + 1) + " and " +
          std::to_string(i + 2) + " exceed the block length together");
    }
  }
}

int BudgetVector::budget(int i) const {
  if (i < 1 || i > m()) throw std::out_of_range("BudgetVector::budget: index out of range");
  if (i == m()) return 0;
  return budgets_[static_cast<size_t>(i - 1)];
}

BigInt sequences_available(int relay, const BudgetVector& bv, int q) {
  if (q < 1) throw std::invalid_argument("sequences_available: q must be >= 1");
  if (relay < 1 || relay > bv.m() - 1) {
    throw std::invalid_argument("sequences_available: relay index outside 1..m-1");
  }
  const int ni = bv.budget(relay);
  const int ni_next = bv.budget(relay + 1);
  return int_pow(q, ni) * binomial(bv.n() - ni_next, ni);
}

BigInt source_sequences(const BudgetVector& bv, int q) {
  if (q < 1) throw std::invalid_argument("source_sequences: q must be >= 1");
  const int n1 = (bv.m() >= 2) ? bv.budget(1) : 0;
  return int_pow(q + 1, bv.n() - n1);
}

BigInt max_w0(const BudgetVector& bv, int q) {
  BigInt best = source_sequences(bv, q);
  for (int i = 1; i <= bv.m() - 1; ++i) {
    best = std::min(best, sequences_available(i, bv, q));
  }
  return best;
}

BigInt max_w_relay(int v, const MessageSetSizes& prior, const BudgetVector& bv, int q) {
  if (v < 1 || v > bv.m() - 1) {
    throw std::invalid_argument("max_w_relay: relay source outside 1..m-1");
  }
  BigInt upstream = 1;
  for (const BigInt& s : prior.sizes) {
    if (s < 1) throw std::invalid_argument("max_w_relay: upstream size below 1");
    upstream *= s;
  }
  BigInt least = sequences_available(v, bv, q);
  for (int i = v + 1; i <= bv.m() - 1; ++i) {
    least = std::min(least, sequences_available(i, bv, q));
  }
  BigInt value = least / upstream;  // floor division
  if (upstream > 1) {
    // Upstream traffic fixes the slot pattern; only the q-ary values remain.
    value = std::min(value, int_pow(q, bv.budget(v)));
  }
  return value;
}

double binom_entropy_limit(int n, int k) {
  if (n < 1 || k < 0 || k > n) {
    throw std::invalid_argument("binom_entropy_limit: need 0 <= k <= n, n >= 1");
  }
  if (k == 0 || k == n) return 0.0;
  return log2_big(binomial(n, k)) / static_cast<double>(n);
}

AsymptoticBounds asymptotic_rate_bounds(const ListenProfile& profile) {
  const int m = profile.m();
  const int q = profile.q();
  AsymptoticBounds out;
  out.link.reserve(static_cast<size_t>(m));
  out.link.push_back(profile.p(1) * log2_alphabet(q));
  const double logq = std::log2(static_cast<double>(q));
  for (int i = 1; i <= m - 1; ++i) {
    const double a = profile.pbar(i);        // transmit fraction of node i
    const double pn = profile.p(i + 1);      // listen fraction downstream
    if (pn < a - 1e-12) {
      throw std::invalid_argument("asymptotic_rate_bounds: p_" + std::to_string(i + 1) +
                                  " below the upstream transmit fraction");
    }
    // a*log2 q + pn*H2(a/pn), expanded into plain x*log2(x) terms so the
    // route stays independent of the entropy helpers' closed form.
    const double rest = std::max(pn - a, 0.0);
    out.link.push_back(a * logq - xlog2(a) - xlog2(rest) + xlog2(pn));
  }
  out.r0_bound = *std::min_element(out.link.begin(), out.link.end());
  return out;
}

double sum_rate_bound(const AsymptoticBounds& bounds, int v) {
  const int m = static_cast<int>(bounds.link.size());
  if (v < 0 || v > m - 1) {
    throw std::invalid_argument("sum_rate_bound: source node outside 0..m-1");
  }
  double best = bounds.link[static_cast<size_t>(v)];
  for (int i = v + 1; i < m; ++i) best = std::min(best, bounds.link[static_cast<size_t>(i)]);
  return best;
}

BudgetVector budgets_from_profile(const ListenProfile& profile, int n) {
  if (n < 1) throw std::invalid_argument("budgets_from_profile: block length must be >= 1");
  const int m = profile.m();
  std::vector<int> budgets(static_cast<size_t>(m - 1), 0);
  for (int i = 1; i <= m - 1; ++i) {
    const int b = static_cast<int>(std::lround(profile.pbar(i) * n));
    budgets[static_cast<size_t>(i - 1)] = std::clamp(b, 0, n - 1);
  }
  // Repair adjacent oversubscription by shrinking the larger budget.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < m - 1; ++i) {
      const int next = (i + 1 < m - 1) ? budgets[static_cast<size_t>(i + 1)] : 0;
      if (budgets[static_cast<size_t>(i)] + next > n) {
        if (budgets[static_cast<size_t>(i)] >= next) {
          budgets[static_cast<size_t>(i)] = n - next;
        } else {
          budgets[static_cast<size_t>(i + 1)] = n - budgets[static_cast<size_t>(i)];
        }
        changed = true;
      }
    }
  }
  return BudgetVector(n, std::move(budgets));
}

BudgetVector search_optimal_budgets(int n, int m, int q) {
  if (n < 1 || m < 1 || q < 1) {
    throw std::invalid_argument("search_optimal_budgets: need n, m, q >= 1");
  }
  if (m == 1) return BudgetVector(n, {});

  if (m == 2) {
    // Single relay: walk n_1 upward, updating C(n, n_1) incrementally.
    BigInt patterns = 1;  // C(n, 0)
    BigInt power = 1;     // q^0
    BigInt source = int_pow(q + 1, n);
    BigInt best = -1;
    int best_n1 = 0;
    for (int n1 = 0; n1 < n; ++n1) {
      if (n1 > 0) {
        patterns *= (n - n1 + 1);
        patterns /= n1;
        power *= q;
        source /= (q + 1);
      }
      const BigInt relay = power * patterns;
      const BigInt w0 = std::min(source, relay);
      if (w0 > best) {
        best = w0;
        best_n1 = n1;
      }
    }
    return BudgetVector(n, {best_n1});
  }

  double combos = 1.0;
  for (int i = 0; i < m - 1; ++i) combos *= n;
  if (combos > 2e6) {
    throw std::invalid_argument("search_optimal_budgets: search space too large");
  }

  std::vector<int> cur(static_cast<size_t>(m - 1), 0);
  std::vector<int> best_budgets;
  BigInt best = -1;
  while (true) {
    bool valid = true;
    for (size_t i = 0; i + 1 < cur.size() && valid; ++i) {
      if (cur[i] + cur[i + 1] > n) valid = false;
    }
    if (valid) {
      BudgetVector bv(n, cur);
      const BigInt w0 = max_w0(bv, q);
      if (w0 > best) {
        best = w0;
        best_budgets = cur;
      }
    }
    size_t pos = 0;
    while (pos < cur.size() && cur[pos] == n - 1) {
      cur[pos] = 0;
      ++pos;
    }
    if (pos == cur.size()) break;
    ++cur[pos];
  }
  return BudgetVector(n, std::move(best_budgets));
}

}  // namespace hdrelay
