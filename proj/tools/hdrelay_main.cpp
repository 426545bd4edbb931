// Command-line front end: capacity tables, two-source region curves, tree
// multicast capacity, the butterfly comparison, and pipeline simulation.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdrelay/apps.hpp"
#include "json.hpp"

namespace {

using hdrelay::RunConfig;
using hdrelay::TreeSpec;

int write_output(const hdrelay::CommandResult& result, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << result.output;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << nlohmann::json{{"error", "cannot open output file"}}.dump() << "\n";
      return 1;
    }
    out << result.output;
  }
  return result.exit_code;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"half-duplex relay cascade toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration file");

  // Holders for explicitly passed flags; merged over the config file below.
  std::vector<int> m_list;
  std::vector<int> q_list;
  double tol = 0.0;
  double step = 0.0;
  int blocks = 0;
  unsigned long long seed = 0;
  std::string code;
  int n = 0;
  int n1 = 0;
  int alphabet = 0;
  std::vector<long long> messages;
  bool exhaustive = false;
  std::string format;
  std::string out_path;
  std::string tree_path;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "output format: csv or json");
    sub->add_option("--out", out_path, "output file (stdout when absent)");
    sub->add_option("--tol", tol, "solver tolerance");
  };

  CLI::App* cap = app.add_subcommand("capacity", "capacity table over cascade lengths");
  cap->add_option("--m", m_list, "cascade lengths (hops)")->delimiter(',');
  cap->add_option("--q", q_list, "alphabet sizes")->delimiter(',');
  add_common(cap);

  CLI::App* reg = app.add_subcommand("region", "two-source rate region curves");
  reg->add_option("--step", step, "boundary sampling step");
  add_common(reg);

  CLI::App* tree = app.add_subcommand("tree", "multicast capacity of a relay tree");
  tree->add_option("--tree", tree_path, "JSON tree description (builtin when absent)");
  add_common(tree);

  CLI::App* butterfly = app.add_subcommand("butterfly", "network coding comparison");
  add_common(butterfly);

  CLI::App* sim = app.add_subcommand("simulate", "run a timing code pipeline");
  sim->add_option("--code", code, "single_relay or two_source");
  sim->add_option("--n", n, "block length");
  sim->add_option("--n1", n1, "relay transmit budget");
  sim->add_option("--q", alphabet, "alphabet size");
  sim->add_option("--blocks", blocks, "number of blocks");
  sim->add_option("--seed", seed, "message draw seed");
  sim->add_option("--messages", messages, "explicit message list")->delimiter(',');
  sim->add_flag("--exhaustive", exhaustive, "sweep all message sequences");
  add_common(sim);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg;
    nlohmann::json config_doc;
    if (!config_path.empty()) {
      config_doc = load_json_file(config_path);
      hdrelay::from_json(config_doc, cfg);
    }

    CLI::App* sub = nullptr;
    for (CLI::App* s : {cap, reg, tree, butterfly, sim}) {
      if (s->parsed()) sub = s;
    }
    if (sub != nullptr) cfg.command = sub->get_name();
    if (cfg.command.empty()) {
      std::cerr << nlohmann::json{{"error", "no command given"}}.dump() << "\n";
      return 1;
    }
    if (sub != nullptr) {
      const auto passed = [&](const char* name) {
        const CLI::Option* opt = sub->get_option_no_throw(name);
        return opt != nullptr && opt->count() > 0;
      };
      if (passed("--m")) cfg.m_list = m_list;
      if (passed("--q") && sub == cap) cfg.q_list = q_list;
      if (passed("--q") && sub == sim) cfg.q = alphabet;
      if (passed("--tol")) cfg.tol = tol;
      if (passed("--step")) cfg.step = step;
      if (passed("--blocks")) cfg.blocks = blocks;
      if (passed("--seed")) cfg.seed = seed;
      if (passed("--code")) cfg.code = code;
      if (passed("--n")) cfg.n = n;
      if (passed("--n1")) cfg.n1 = n1;
      if (passed("--messages")) cfg.messages = messages;
      if (passed("--exhaustive")) cfg.exhaustive = exhaustive;
      if (passed("--format")) cfg.format = format;
      if (passed("--out")) cfg.out = out_path;
    }
    cfg.validate();

    if (cfg.command == "capacity") return write_output(hdrelay::cmd_capacity(cfg), cfg.out);
    if (cfg.command == "region") return write_output(hdrelay::cmd_region(cfg), cfg.out);
    if (cfg.command == "tree") {
      TreeSpec spec = hdrelay::builtin_multicast_tree();
      if (!tree_path.empty()) {
        hdrelay::from_json(load_json_file(tree_path), spec);
      } else if (config_doc.contains("tree")) {
        hdrelay::from_json(config_doc.at("tree"), spec);
      }
      return write_output(hdrelay::cmd_tree(spec, cfg), cfg.out);
    }
    if (cfg.command == "butterfly") return write_output(hdrelay::cmd_butterfly(cfg), cfg.out);
    return write_output(hdrelay::cmd_simulate(cfg), cfg.out);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", e.what()}}.dump() << "\n";
    return 1;
  }
}
