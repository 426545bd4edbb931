#include "hdrelay/region.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "hdrelay/entropy.hpp"

namespace hdrelay {

namespace {

void check_rates(const RateVector& rv) {
  for (double r : rv.rates) {
    if (r < 0.0 || !std::isfinite(r)) {
      throw std::invalid_argument("RateVector: rates must be finite and non-negative");
    }
  }
}

double single_relay_capacity_q2() {
  static const double value = capacity_single_relay(2).value;
  return value;
}

// Upper edge of the convex hull of the achievable part: the chord from the
// isolated point to the threshold point, then the boundary arc.
double timing_hull_bound(double r0) {
  const TwoSourceThreshold th = two_source_achievable_threshold(2);
  if (r0 <= th.r0_min) {
    const double slope = (th.r1_max - log2_alphabet(2)) / th.r0_min;
    return log2_alphabet(2) + slope * r0;
  }
  return two_source_cutset_boundary(r0, 2);
}

bool is_two_source_single_relay(const CascadeSpec& spec) {
  return spec.m == 2 && spec.q == 2 && spec.sources == std::vector<int>{0, 1};
}

}  // namespace

bool membership(const CascadeSpec& spec, const ListenProfile& profile,
                const RateVector& rv, RegionKind kind, double tol) {
  spec.validate();
  check_rates(rv);
  if (static_cast<int>(rv.rates.size()) != static_cast<int>(spec.sources.size())) {
    throw std::invalid_argument("membership: one rate per source required");
  }
  if (profile.m() != spec.m || profile.q() != spec.q) {
    throw std::invalid_argument("membership: profile does not match the cascade");
  }

  if (kind == RegionKind::TimingRegion) {
    if (!is_two_source_single_relay(spec)) {
      throw std::invalid_argument(
          "membership: the timing region is only available for the two-source "
          "single-relay instance with a binary alphabet");
    }
    const double r0 = rv.rates[0];
    const double r1 = rv.rates[1];
    if (r0 > single_relay_capacity_q2() + tol) return false;
    return r1 <= timing_hull_bound(r0) + tol;
  }

  const std::vector<double> h = link_entropies(profile);
  const double logq = std::log2(static_cast<double>(spec.q));
  double prefix = 0.0;
  for (size_t a = 0; a < spec.sources.size(); ++a) {
    const int v = spec.sources[a];
    prefix += rv.rates[a];
    double bottleneck = h[static_cast<size_t>(v)];
    for (int i = v + 1; i < spec.m; ++i) {
      bottleneck = std::min(bottleneck, h[static_cast<size_t>(i)]);
    }
    if (prefix > bottleneck + tol) return false;
    if (kind == RegionKind::AchievablePart && a > 0) {
      // Upstream rates are exact user inputs; live traffic pins the relay
      // source's slot pattern and caps it at its transmit-value rate.
      const double upstream = prefix - rv.rates[a];
      if (upstream > 0.0 && rv.rates[a] > profile.pbar(v) * logq + tol) return false;
    }
  }
  return true;
}

double two_source_cutset_boundary(double r0, int q) {
  if (q != 2) {
    throw std::invalid_argument(
        "two_source_cutset_boundary: explicit formulas cover the binary "
        "alphabet only; use the sampler for other alphabets");
  }
  const double cap = single_relay_capacity_q2();
  if (r0 < -1e-12 || r0 > cap + 1e-9) {
    throw std::invalid_argument("two_source_cutset_boundary: rate outside [0, " +
                                std::to_string(cap) + "]");
  }
  r0 = std::clamp(r0, 0.0, cap);
  const double l3 = log2_alphabet(2);
  if (r0 <= l3 / 3.0) return l3 - r0;
  const double p = r0 / l3;
  return binary_entropy(p) + (1.0 - p) - r0;
}

TwoSourceThreshold two_source_achievable_threshold(int q) {
  if (q != 2) {
    throw std::invalid_argument(
        "two_source_achievable_threshold: only the binary alphabet instance "
        "has the explicit threshold");
  }
  const double l3 = log2_alphabet(2);
  // p * log2 3 grows linearly, the binary entropy falls past 1/2; the single
  // crossing in [1/2, 1] balances the first hop with the capped sum rate.
  auto f = [&](double p) { return p * l3 - binary_entropy(p); };
  double lo = 0.5;
  double hi = 1.0;
  if (f(lo) >= 0.0 || f(hi) <= 0.0) {
    throw std::logic_error("two_source_achievable_threshold: bracket failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  TwoSourceThreshold th;
  th.p1 = 0.5 * (lo + hi);
  th.r0_min = th.p1 * l3;
  th.r1_max = 1.0 - th.p1;
  return th;
}

RegionCurves two_source_region_curves(double step) {
  if (!(step > 0.0) || step > 0.1) {
    throw std::invalid_argument("two_source_region_curves: step must be in (0, 0.1]");
  }
  const double cap = single_relay_capacity_q2();
  const double l3 = log2_alphabet(2);
  const TwoSourceThreshold th = two_source_achievable_threshold(2);

  RegionCurves out;
  out.star = {0.0, l3};
  out.circle = {th.r0_min, th.r1_max};

  auto sample_arc = [&](std::vector<RegionPoint>& dst, double from, double to) {
    for (double r0 = from; r0 < to; r0 += step) {
      dst.push_back({r0, two_source_cutset_boundary(r0, 2)});
    }
    dst.push_back({to, two_source_cutset_boundary(to, 2)});
  };

  sample_arc(out.cutset, 0.0, cap);

  out.achievable.push_back(out.star);  // isolated point, not connected
  sample_arc(out.achievable, th.r0_min, cap);

  const double slope = (th.r1_max - l3) / th.r0_min;
  for (double r0 = 0.0; r0 < th.r0_min; r0 += step) {
    out.timing.push_back({r0, l3 + slope * r0});
  }
  sample_arc(out.timing, th.r0_min, cap);
  return out;
}

std::vector<ListenProfile> make_profile_grid(int m, int q, int steps) {
  if (m < 1 || q < 1 || steps < 1) {
    throw std::invalid_argument("make_profile_grid: need m, q, steps >= 1");
  }
  double count = 1.0;
  for (int i = 0; i < m - 1; ++i) count *= (steps + 1);
  if (count > 2e6) throw std::invalid_argument("make_profile_grid: lattice too large");

  std::vector<ListenProfile> grid;
  std::vector<int> idx(static_cast<size_t>(m - 1), 0);
  while (true) {
    std::vector<double> p;
    p.reserve(static_cast<size_t>(m));
    bool valid = true;
    for (int i = 0; i < m - 1; ++i) {
      p.push_back(static_cast<double>(idx[static_cast<size_t>(i)]) / steps);
    }
    p.push_back(1.0);
    for (int i = 0; i + 1 < m && valid; ++i) {
      if (p[static_cast<size_t>(i)] + p[static_cast<size_t>(i + 1)] < 1.0 - 1e-12) {
        valid = false;
      }
    }
    if (valid) grid.emplace_back(std::move(p), q);

    size_t pos = 0;
    while (pos < idx.size() && idx[pos] == steps) {
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
    ++idx[pos];
  }
  return grid;
}

namespace {

// Solves the k x k system by Gaussian elimination with partial pivoting;
// false when near-singular.
bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double>& x) {
  const size_t k = b.size();
  for (size_t col = 0; col < k; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (size_t r = 0; r < k; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] / a[col][col];
      for (size_t c = col; c < k; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  x.assign(k, 0.0);
  for (size_t i = 0; i < k; ++i) x[i] = b[i] / a[i][i];
  return true;
}

struct HalfSpace {
  std::vector<double> coeff;  // coeff . x <= bound
  double bound;
};

void collect_vertices(const std::vector<HalfSpace>& rows, size_t dim,
                      std::vector<std::vector<double>>& out) {
  if (dim == 0) {
    out.push_back({});
    return;
  }
  std::vector<size_t> pick(dim, 0);
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    std::vector<std::vector<double>> a;
    std::vector<double> b;
    for (size_t j : pick) {
      a.push_back(rows[j].coeff);
      b.push_back(rows[j].bound);
    }
    std::vector<double> x;
    if (solve_dense(std::move(a), std::move(b), x)) {
      bool feasible = true;
      for (const HalfSpace& h : rows) {
        double lhs = 0.0;
        for (size_t c = 0; c < dim; ++c) lhs += h.coeff[c] * x[c];
        if (lhs > h.bound + 1e-9) {
          feasible = false;
          break;
        }
      }
      if (feasible) out.push_back(std::move(x));
    }
    // next dim-combination of row indices
    size_t i = dim;
    while (i > 0) {
      --i;
      if (pick[i] + (dim - i) < rows.size()) {
        ++pick[i];
        for (size_t j = i + 1; j < dim; ++j) pick[j] = pick[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

}  // namespace

std::vector<RateVector> general_region_sample(const CascadeSpec& spec,
                                              const std::vector<ListenProfile>& grid) {
  spec.validate();
  const size_t s = spec.sources.size();
  if (s > 3) {
    throw std::invalid_argument("general_region_sample: at most three sources");
  }
  if (grid.size() > 200000) {
    throw std::invalid_argument("general_region_sample: profile grid too large");
  }
  const double logq = std::log2(static_cast<double>(spec.q));

  std::vector<std::vector<double>> candidates;
  for (const ListenProfile& profile : grid) {
    if (profile.m() != spec.m || profile.q() != spec.q) {
      throw std::invalid_argument("general_region_sample: profile shape mismatch");
    }
    const std::vector<double> h = link_entropies(profile);
    std::vector<double> bottleneck(s, 0.0);
    std::vector<double> cap(s, 0.0);
    for (size_t a = 0; a < s; ++a) {
      const int v = spec.sources[a];
      double b = h[static_cast<size_t>(v)];
      for (int i = v + 1; i < spec.m; ++i) b = std::min(b, h[static_cast<size_t>(i)]);
      bottleneck[a] = b;
      // Only relay sources have a listen fraction and hence a pattern cap.
      cap[a] = a == 0 ? 0.0 : profile.pbar(v) * logq;
    }

    // Each relay source independently either carries no upstream traffic
    // (all upstream rates pinned to zero) or accepts the pattern cap.
    const size_t branch_count = size_t{1} << (s - 1);
    for (size_t mask = 0; mask < branch_count; ++mask) {
      std::vector<bool> zeroed(s, false);
      for (size_t a = 1; a < s; ++a) {
        if (!(mask & (size_t{1} << (a - 1)))) {
          for (size_t k = 0; k < a; ++k) zeroed[k] = true;
        }
      }
      std::vector<size_t> free_vars;
      for (size_t a = 0; a < s; ++a) {
        if (!zeroed[a]) free_vars.push_back(a);
      }
      const size_t dim = free_vars.size();

      std::vector<HalfSpace> rows;
      for (size_t a = 0; a < s; ++a) {
        HalfSpace hs;
        hs.coeff.assign(dim, 0.0);
        for (size_t c = 0; c < dim; ++c) {
          if (free_vars[c] <= a) hs.coeff[c] = 1.0;
        }
        hs.bound = bottleneck[a];
        rows.push_back(std::move(hs));
      }
      for (size_t c = 0; c < dim; ++c) {
        HalfSpace hs;
        hs.coeff.assign(dim, 0.0);
        hs.coeff[c] = -1.0;
        hs.bound = 0.0;
        rows.push_back(std::move(hs));
      }
      for (size_t a = 1; a < s; ++a) {
        if (zeroed[a] || !(mask & (size_t{1} << (a - 1)))) continue;
        // Cap branch applies to relay sources chosen to accept it.
        for (size_t c = 0; c < dim; ++c) {
          if (free_vars[c] == a) {
            HalfSpace hs;
            hs.coeff.assign(dim, 0.0);
            hs.coeff[c] = 1.0;
            hs.bound = cap[a];
            rows.push_back(std::move(hs));
          }
        }
      }

      std::vector<std::vector<double>> verts;
      collect_vertices(rows, dim, verts);
      for (const std::vector<double>& v : verts) {
        std::vector<double> full(s, 0.0);
        for (size_t c = 0; c < dim; ++c) {
          full[free_vars[c]] = std::max(v[c], 0.0);
        }
        candidates.push_back(std::move(full));
      }
    }
  }

  // Pareto filter: descending total rate, so accepted points can only be
  // dominated by earlier (larger-sum) ones.
  std::sort(candidates.begin(), candidates.end(),
            [](const std::vector<double>& a, const std::vector<double>& b) {
              const double sa = std::accumulate(a.begin(), a.end(), 0.0);
              const double sb = std::accumulate(b.begin(), b.end(), 0.0);
              return sa > sb;
            });
  std::vector<RateVector> frontier;
  for (const std::vector<double>& c : candidates) {
    bool dominated = false;
    for (const RateVector& f : frontier) {
      bool all_ge = true;
      double gain = 0.0;
      for (size_t k = 0; k < s; ++k) {
        if (f.rates[k] < c[k] - 1e-9) {
          all_ge = false;
          break;
        }
        gain += f.rates[k] - c[k];
      }
      if (all_ge && gain > -1e-9) {
        dominated = true;
        break;
      }
    }
    if (!dominated) frontier.push_back(RateVector{c});
  }
  return frontier;
}

}  // namespace hdrelay
