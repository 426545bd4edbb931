#pragma once

// Applications and command back ends: multicast over rooted relay trees,
// the butterfly network-coding comparison, and the machine-readable command
// implementations behind the CLI front end.

#include <array>
#include <string>
#include <vector>

#include "hdrelay/capacity.hpp"
#include "hdrelay/codec.hpp"
#include "json.hpp"

namespace hdrelay {

// Rooted tree of half-duplex relays: edges point from parent to child, the
// root is the multicast source, leaves are the receivers.
struct TreeSpec {
  std::vector<std::pair<int, int>> edges;
  int q = 1;

  // Exactly one node of in-degree zero, every other node in-degree one,
  // all nodes reachable from the root.
  void validate() const;
  int root() const;
  int depth() const;  // edge count of the longest root-to-leaf path
};

void to_json(nlohmann::json& j, const TreeSpec& tree);
void from_json(const nlohmann::json& j, TreeSpec& tree);

// Ten-node example: three relays under the root, one of them feeding a
// second relay level, so the deepest leaves sit three hops down.
TreeSpec builtin_multicast_tree();

struct TreeCapacityReport {
  int depth = 0;
  int q = 0;
  CapacityResult capacity;
};

// Multicast capacity of the tree: every root-to-leaf path is a cascade, the
// longest one is the bottleneck.
TreeCapacityReport tree_multicast_capacity(const TreeSpec& tree, double tol = 1e-9);

struct ButterflyReport {
  double nc_rate = 0.0;      // three-slot network-coding schedule
  double timing_rate = 0.0;  // time-shared single-relay timing code
  int pairs_checked = 0;
  int pairs_decoded = 0;
  std::string note;
};

// Simulates the three-slot schedule (u1; u2; u1 xor u2) on the butterfly
// topology under the erase-on-double-reception collision model and checks
// that both sinks recover both bits for all four bit pairs.
ButterflyReport butterfly_report();

// Command plumbing shared by the CLI binary and the tests.
struct RunConfig {
  std::string command;
  std::vector<int> m_list = {2, 3, 4, 5, 11, 21, 41, 101};
  std::vector<int> q_list = {1, 2};
  double tol = 1e-9;
  double step = 0.01;
  int blocks = 4;
  unsigned long long seed = 1;
  std::string code = "single_relay";  // single_relay | two_source
  int n = 4;
  int n1 = 1;
  int q = 2;
  bool exhaustive = false;
  std::vector<long long> messages;  // explicit single-relay messages
  std::string format = "csv";       // csv | json
  std::string out;                  // empty writes to stdout

  void validate() const;
};

void to_json(nlohmann::json& j, const RunConfig& cfg);
void from_json(const nlohmann::json& j, RunConfig& cfg);

struct CommandResult {
  int exit_code = 0;
  std::string output;
};

CommandResult cmd_capacity(const RunConfig& cfg);
CommandResult cmd_region(const RunConfig& cfg);
CommandResult cmd_tree(const TreeSpec& tree, const RunConfig& cfg);
CommandResult cmd_butterfly(const RunConfig& cfg);
CommandResult cmd_simulate(const RunConfig& cfg);

}  // namespace hdrelay
