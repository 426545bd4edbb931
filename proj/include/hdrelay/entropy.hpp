#pragma once

// Small numeric helpers shared by the capacity and counting code.

namespace hdrelay {

// x * log2(x), continuously extended with 0 at x = 0.
double xlog2(double x);

// Binary entropy -x log2 x - (1-x) log2 (1-x).  Arguments may stray up to
// 1e-15 outside [0, 1] (they get clamped); anything further is rejected.
double binary_entropy(double x);

// log2(q + 1): one channel use carries a symbol from an alphabet of q
// transmit values plus quiet.
double log2_alphabet(int q);

}  // namespace hdrelay
