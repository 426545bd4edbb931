#pragma once

// Multi-source rate regions of the half-duplex cascade: membership tests for
// the outer (cut-set) bound and the achievable part, the explicit two-source
// boundary for the binary alphabet, and a grid sampler for the general case.

#include <vector>

#include "hdrelay/capacity.hpp"
#include "hdrelay/core.hpp"

namespace hdrelay {

// Rates in bits per use, one entry per source in source order.
struct RateVector {
  std::vector<double> rates;
};

// CutSet: the outer bound (sum-rate constraints only).  AchievablePart: adds
// the coding constraint that a relay source with live upstream traffic may
// only modulate its transmit values, not its slot pattern.  TimingRegion:
// the convex hull of the achievable part (explicit two-source instance).
enum class RegionKind { CutSet, AchievablePart, TimingRegion };

// Does the rate vector satisfy the region's constraints at this profile?
// TimingRegion ignores the profile (the hull is profile-free) and is only
// available for the two-source single-relay instance with q = 2.
bool membership(const CascadeSpec& spec, const ListenProfile& profile,
                const RateVector& rv, RegionKind kind, double tol = 1e-9);

// Boundary of the two-source outer bound for q = 2: the relay-optimal line
// log2 3 - R_0 up to the kink at (1/3)log2 3, then the source-optimal curve.
double two_source_cutset_boundary(double r0, int q = 2);

struct TwoSourceThreshold {
  double p1;      // listen fraction where the relay cap meets the sum rate
  double r0_min;  // smallest source rate on the achievable boundary arc
  double r1_max;  // relay rate at that point (= 1 - p1 for q = 2)
};

// Solves the crossing of the linear first-hop entropy with the concave
// capped sum rate; the achievable boundary arc starts at this point.
TwoSourceThreshold two_source_achievable_threshold(int q = 2);

struct RegionPoint {
  double r0 = 0.0;
  double r1 = 0.0;
};

struct RegionCurves {
  std::vector<RegionPoint> cutset;      // full outer boundary
  std::vector<RegionPoint> achievable;  // isolated point plus boundary arc
  std::vector<RegionPoint> timing;      // hull segment plus boundary arc
  RegionPoint star;                     // (0, log2 3)
  RegionPoint circle;                   // threshold point
};

// Sampled boundary polylines of the three two-source regions (q = 2).
RegionCurves two_source_region_curves(double step);

// All listen profiles on a uniform lattice with the given number of steps
// per coordinate (sink fixed to 1); throws when the lattice is too large.
std::vector<ListenProfile> make_profile_grid(int m, int q, int steps);

// Sweeps the profiles, enumerates the vertices of each profile's rate
// polytope, and returns the Pareto-maximal rate vectors.  At most three
// sources.
std::vector<RateVector> general_region_sample(const CascadeSpec& spec,
                                              const std::vector<ListenProfile>& grid);

}  // namespace hdrelay
