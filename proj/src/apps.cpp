#include "hdrelay/apps.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hdrelay/region.hpp"

namespace hdrelay {

void TreeSpec::validate() const {
  if (q < 1) throw std::invalid_argument("alphabet size must be positive");
  if (edges.empty()) throw std::invalid_argument("tree needs at least one edge");
  std::set<int> nodes;
  std::map<int, int> in_degree;
  for (const auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("tree edge may not be a self loop");
    nodes.insert(a);
    nodes.insert(b);
    ++in_degree[b];
  }
  int root_node = -1;
  for (const int v : nodes) {
    const auto it = in_degree.find(v);
    if (it == in_degree.end()) {
      if (root_node != -1) throw std::invalid_argument("tree has more than one root");
      root_node = v;
    } else if (it->second != 1) {
      throw std::invalid_argument("tree node has more than one parent");
    }
  }
  if (root_node == -1) throw std::invalid_argument("tree has no root");
  // In-degrees alone admit a disjoint cycle; reachability from the root
  // rules it out.
  std::map<int, std::vector<int>> children;
  for (const auto& [a, b] : edges) children[a].push_back(b);
  std::set<int> reached = {root_node};
  std::vector<int> frontier = {root_node};
  while (!frontier.empty()) {
    const int v = frontier.back();
    frontier.pop_back();
    for (const int c : children[v]) {
      if (reached.insert(c).second) frontier.push_back(c);
    }
  }
  if (reached.size() != nodes.size()) throw std::invalid_argument("tree is not connected");
}

int TreeSpec::root() const {
  std::set<int> nodes;
  std::set<int> with_parent;
  for (const auto& [a, b] : edges) {
    nodes.insert(a);
    nodes.insert(b);
    with_parent.insert(b);
  }
  for (const int v : nodes) {
    if (!with_parent.count(v)) return v;
  }
  throw std::invalid_argument("tree has no root");
}

int TreeSpec::depth() const {
  validate();
  std::map<int, std::vector<int>> children;
  for (const auto& [a, b] : edges) children[a].push_back(b);
  int deepest = 0;
  std::vector<std::pair<int, int>> frontier = {{root(), 0}};
  while (!frontier.empty()) {
    const auto [v, d] = frontier.back();
    frontier.pop_back();
    deepest = std::max(deepest, d);
    for (const int c : children[v]) frontier.push_back({c, d + 1});
  }
  return deepest;
}

void to_json(nlohmann::json& j, const TreeSpec& tree) {
  j = nlohmann::json{{"edges", tree.edges}, {"q", tree.q}};
}

void from_json(const nlohmann::json& j, TreeSpec& tree) {
  tree.edges = j.at("edges").get<std::vector<std::pair<int, int>>>();
  tree.q = j.value("q", 1);
}

TreeSpec builtin_multicast_tree() {
  TreeSpec tree;
  tree.edges = {{1, 9},  {9, 2},   {9, 3},  {1, 10}, {10, 4}, {10, 11},
                {11, 7}, {11, 8}, {1, 12}, {12, 5}, {12, 6}};
  tree.q = 1;
  return tree;
}

TreeCapacityReport tree_multicast_capacity(const TreeSpec& tree, double tol) {
  tree.validate();
  TreeCapacityReport report;
  report.depth = tree.depth();
  report.q = tree.q;
  report.capacity = solve_capacity(report.depth, tree.q, tol);
  return report;
}

namespace {

// Butterfly topology: sources 1 and 2, relay 3, sinks 4 and 5.  A node
// hears a slot only when exactly one of its in-neighbours transmits.
constexpr std::array<std::pair<int, int>, 6> kButterflyEdges = {
    {{1, 3}, {1, 4}, {2, 3}, {2, 5}, {3, 4}, {3, 5}}};

// Transmissions of one slot as (node, bit); returns per-node received bit
// or -1 for nothing heard or an erasure.
std::array<int, 6> butterfly_slot(const std::vector<std::pair<int, int>>& sends) {
  std::array<int, 6> heard;
  heard.fill(-1);
  std::array<int, 6> incoming;
  incoming.fill(0);
  for (int v = 1; v <= 5; ++v) {
    for (const auto& [from, bit] : sends) {
      bool sender_is_neighbour = false;
      for (const auto& [a, b] : kButterflyEdges) {
        if (a == from && b == v) sender_is_neighbour = true;
      }
      bool v_transmits = false;
      for (const auto& [from2, bit2] : sends) {
        if (from2 == v) v_transmits = true;
      }
      if (sender_is_neighbour && !v_transmits) {
        ++incoming[v];
        heard[v] = bit;
      }
    }
    if (incoming[v] != 1) heard[v] = -1;
  }
  return heard;
}

}  // namespace

ButterflyReport butterfly_report() {
  ButterflyReport report;
  report.nc_rate = 2.0 / 3.0;
  report.timing_rate = capacity_single_relay(1).value;
  report.note =
      "direct links 1-4 and 2-5 are not needed for the timing rate; "
      "the true multicast capacity exceeds both reported rates";
  for (int u1 = 0; u1 < 2; ++u1) {
    for (int u2 = 0; u2 < 2; ++u2) {
      ++report.pairs_checked;
      const auto slot1 = butterfly_slot({{1, u1}});
      const auto slot2 = butterfly_slot({{2, u2}});
      const int relay_first = slot1[3];
      const int relay_second = slot2[3];
      if (relay_first < 0 || relay_second < 0) continue;
      const auto slot3 = butterfly_slot({{3, relay_first ^ relay_second}});
      const int sink4_direct = slot1[4];
      const int sink4_coded = slot3[4];
      const int sink5_direct = slot2[5];
      const int sink5_coded = slot3[5];
      if (sink4_direct < 0 || sink4_coded < 0 || sink5_direct < 0 || sink5_coded < 0) {
        continue;
      }
      const bool sink4_ok = sink4_direct == u1 && (sink4_direct ^ sink4_coded) == u2;
      const bool sink5_ok = sink5_direct == u2 && (sink5_direct ^ sink5_coded) == u1;
      if (sink4_ok && sink5_ok) ++report.pairs_decoded;
    }
  }
  return report;
}

void RunConfig::validate() const {
  static const std::set<std::string> kCommands = {"capacity", "region", "tree",
                                                 "butterfly", "simulate"};
  if (!kCommands.count(command)) throw std::invalid_argument("unknown command");
  if (format != "csv" && format != "json") throw std::invalid_argument("unknown format");
  if (tol <= 0.0) throw std::invalid_argument("tolerance must be positive");
  if (command == "simulate" && code != "single_relay" && code != "two_source") {
    throw std::invalid_argument("unknown code name");
  }
}

void to_json(nlohmann::json& j, const RunConfig& cfg) {
  j = nlohmann::json{{"command", cfg.command}, {"m", cfg.m_list},
                     {"q", cfg.q_list},        {"tol", cfg.tol},
                     {"step", cfg.step},       {"blocks", cfg.blocks},
                     {"seed", cfg.seed},       {"code", cfg.code},
                     {"n", cfg.n},             {"n1", cfg.n1},
                     {"code_q", cfg.q},        {"exhaustive", cfg.exhaustive},
                     {"messages", cfg.messages},
                     {"format", cfg.format},   {"out", cfg.out}};
}

void from_json(const nlohmann::json& j, RunConfig& cfg) {
  cfg.command = j.value("command", cfg.command);
  cfg.m_list = j.value("m", cfg.m_list);
  cfg.q_list = j.value("q", cfg.q_list);
  cfg.tol = j.value("tol", cfg.tol);
  cfg.step = j.value("step", cfg.step);
  cfg.blocks = j.value("blocks", cfg.blocks);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.code = j.value("code", cfg.code);
  cfg.n = j.value("n", cfg.n);
  cfg.n1 = j.value("n1", cfg.n1);
  cfg.q = j.value("code_q", cfg.q);
  cfg.exhaustive = j.value("exhaustive", cfg.exhaustive);
  cfg.messages = j.value("messages", cfg.messages);
  cfg.format = j.value("format", cfg.format);
  cfg.out = j.value("out", cfg.out);
}

namespace {

std::string fixed4(double v) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(4);
  out << v;
  return out.str();
}

}  // namespace

CommandResult cmd_capacity(const RunConfig& cfg) {
  struct Row {
    int m;
    int q;
    double capacity;
    double time_sharing;
    double limit;
  };
  std::vector<Row> rows;
  for (const int q : cfg.q_list) {
    for (const int m : cfg.m_list) {
      const CapacityResult r = solve_capacity(m, q, cfg.tol);
      rows.push_back({m, q, r.value, time_sharing_rate(q), capacity_infinite(q)});
    }
  }
  CommandResult result;
  if (cfg.format == "json") {
    nlohmann::json j = nlohmann::json::array();
    for (const Row& r : rows) {
      j.push_back({{"m", r.m},
                   {"q", r.q},
                   {"capacity", r.capacity},
                   {"time_sharing", r.time_sharing},
                   {"limit", r.limit}});
    }
    result.output = j.dump(2) + "\n";
  } else {
    std::string out = "m,q,capacity,time_sharing,limit\n";
    for (const Row& r : rows) {
      out += std::to_string(r.m) + "," + std::to_string(r.q) + "," +
             fixed4(r.capacity) + "," + fixed4(r.time_sharing) + "," +
             fixed4(r.limit) + "\n";
    }
    result.output = out;
  }
  return result;
}

CommandResult cmd_region(const RunConfig& cfg) {
  const RegionCurves curves = two_source_region_curves(cfg.step);
  CommandResult result;
  const auto emit_point = [](const char* tag, const RegionPoint& p) {
    return std::string(tag) + "," + fixed4(p.r0) + "," + fixed4(p.r1) + "\n";
  };
  if (cfg.format == "json") {
    nlohmann::json j;
    const auto dump_curve = [](const std::vector<RegionPoint>& pts) {
      nlohmann::json arr = nlohmann::json::array();
      for (const RegionPoint& p : pts) arr.push_back({{"R0", p.r0}, {"R1", p.r1}});
      return arr;
    };
    j["cutset"] = dump_curve(curves.cutset);
    j["achievable"] = dump_curve(curves.achievable);
    j["timing"] = dump_curve(curves.timing);
    j["star"] = {{"R0", curves.star.r0}, {"R1", curves.star.r1}};
    j["circle"] = {{"R0", curves.circle.r0}, {"R1", curves.circle.r1}};
    result.output = j.dump(2) + "\n";
  } else {
    std::string out = "dataset,R0,R1\n";
    for (const RegionPoint& p : curves.cutset) out += emit_point("cutset", p);
    for (const RegionPoint& p : curves.achievable) out += emit_point("achievable", p);
    for (const RegionPoint& p : curves.timing) out += emit_point("timing", p);
    out += emit_point("star", curves.star);
    out += emit_point("circle", curves.circle);
    result.output = out;
  }
  return result;
}

CommandResult cmd_tree(const TreeSpec& tree, const RunConfig& cfg) {
  const TreeCapacityReport report = tree_multicast_capacity(tree, cfg.tol);
  CommandResult result;
  if (cfg.format == "json") {
    nlohmann::json j = {{"depth", report.depth},
                        {"q", report.q},
                        {"capacity", report.capacity.value}};
    result.output = j.dump(2) + "\n";
  } else {
    result.output = "depth,q,capacity\n" + std::to_string(report.depth) + "," +
                    std::to_string(report.q) + "," + fixed4(report.capacity.value) +
                    "\n";
  }
  return result;
}

CommandResult cmd_butterfly(const RunConfig& cfg) {
  const ButterflyReport report = butterfly_report();
  CommandResult result;
  result.exit_code = report.pairs_decoded == report.pairs_checked ? 0 : 1;
  if (cfg.format == "json") {
    nlohmann::json j = {{"nc_rate", report.nc_rate},
                        {"timing_rate", report.timing_rate},
                        {"pairs_checked", report.pairs_checked},
                        {"pairs_decoded", report.pairs_decoded},
                        {"note", report.note}};
    result.output = j.dump(2) + "\n";
  } else {
    result.output = "metric,value\n";
    result.output += "nc_rate," + fixed4(report.nc_rate) + "\n";
    result.output += "timing_rate," + fixed4(report.timing_rate) + "\n";
    result.output += "pairs_checked," + std::to_string(report.pairs_checked) + "\n";
    result.output += "pairs_decoded," + std::to_string(report.pairs_decoded) + "\n";
    result.output += "note," + report.note + "\n";
  }
  return result;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  CommandResult result;
  if (cfg.code == "single_relay") {
    const SingleRelayCode code = build_single_relay_code(cfg.n, cfg.n1, cfg.q);
    if (cfg.exhaustive) {
      const long long count =
          verify_single_relay_exhaustive(cfg.n, cfg.n1, cfg.q, cfg.blocks);
      result.output = nlohmann::json{{"sequences", count}, {"errors", 0}}.dump() + "\n";
      return result;
    }
    std::vector<long long> messages = cfg.messages;
    if (static_cast<int>(messages.size()) < cfg.blocks) {
      std::mt19937_64 rng(cfg.seed);
      while (static_cast<int>(messages.size()) < cfg.blocks) {
        messages.push_back(static_cast<long long>(rng() % code.size_ll()));
      }
    }
    const PipelineResult run = run_pipeline(code, messages, cfg.blocks, true);
    result.output = transcript_jsonl(run);
  } else {
    const TwoSourceCode code = build_two_source_code();
    if (cfg.exhaustive) {
      const int prefix = std::min(cfg.blocks, 3);
      const long long count = verify_two_source_exhaustive(cfg.blocks, prefix);
      result.output = nlohmann::json{{"sequences", count}, {"errors", 0}}.dump() + "\n";
      return result;
    }
    std::mt19937_64 rng(cfg.seed);
    std::vector<int> w0;
    std::vector<int> w1;
    for (int b = 0; b < cfg.blocks; ++b) {
      w0.push_back(static_cast<int>(rng() % TwoSourceCode::kMessages));
      w1.push_back(static_cast<int>(rng() % TwoSourceCode::kMessages));
    }
    const PipelineResult run = run_pipeline(code, w0, w1, cfg.blocks, true);
    result.output = transcript_jsonl(run);
  }
  return result;
}

}  // namespace hdrelay
