#pragma once

// Deterministic channel model of a half-duplex relay cascade.
//
// Nodes 0..m sit on a path.  In every time slot each node either transmits a
// symbol from {0, ..., q-1} or stays quiet and listens.  A node that listens
// hears its upstream neighbour's symbol; a node that transmits hears only
// itself.  The sink (node m) always listens.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace hdrelay {

// One channel use of one node: a transmit symbol or Quiet.
class Symbol {
 public:
  constexpr Symbol() = default;

  static constexpr Symbol quiet() { return Symbol(); }
  static Symbol transmit(int value);

  bool is_quiet() const { return value_ < 0; }
  bool is_transmit() const { return value_ >= 0; }
  int value() const;  // transmit symbols only

  friend bool operator==(Symbol a, Symbol b) { return a.value_ == b.value_; }
  friend bool operator!=(Symbol a, Symbol b) { return a.value_ != b.value_; }

 private:
  int value_ = -1;
};

// Immutable block of symbols sent by one node.  Symbol values are validated
// against the alphabet size at construction; q itself lives on CascadeSpec.
class Word {
 public:
  Word(std::vector<Symbol> symbols, int q);

  // Text form over {'0'..'9', 'N'}; only available for q <= 10.
  static Word parse(const std::string& text, int q);
  static Word all_quiet(int length, int q);

  int size() const { return static_cast<int>(symbols_.size()); }
  int q() const { return q_; }
  Symbol at(int t) const;
  Symbol operator[](int t) const { return at(t); }
  const std::vector<Symbol>& symbols() const { return symbols_; }

  int transmit_count() const;
  std::vector<int> transmit_slots() const;
  std::string to_string() const;  // q <= 10 only

  friend bool operator==(const Word& a, const Word& b) {
    return a.symbols_ == b.symbols_;
  }
  friend bool operator!=(const Word& a, const Word& b) { return !(a == b); }

 private:
  std::vector<Symbol> symbols_;
  int q_;
};

// Topology of one cascade: nodes 0..m, alphabet size q, and the nodes that
// inject their own messages.  Node 0 is always a source; node m is the sink.
struct CascadeSpec {
  int m = 0;
  int q = 0;
  std::vector<int> sources;

  void validate() const;
  bool is_source(int v) const;
  // Position of source v in the sorted source list.
  int alpha(int v) const;
  int relay_count() const { return m - 1; }
};

void to_json(nlohmann::json& j, const CascadeSpec& spec);
void from_json(const nlohmann::json& j, CascadeSpec& spec);

void to_json(nlohmann::json& j, const Word& w);
Word word_from_json(const nlohmann::json& j, int q);

// What one node hears in one slot given its upstream neighbour's symbol and
// its own.  Transmitting nodes hear themselves.
Symbol channel_output(Symbol upstream, Symbol self);

// Received words of nodes 1..m (result[i-1] is what node i hears) given the
// transmitted words of nodes 0..m-1.  The sink transmits nothing.
std::vector<Word> simulate_cascade(const CascadeSpec& spec,
                                   const std::vector<Word>& inputs);

// True when no two adjacent nodes transmit in the same slot.
bool is_collision_free(const std::vector<Word>& inputs);

}  // namespace hdrelay
