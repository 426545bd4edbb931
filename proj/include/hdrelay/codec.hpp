#pragma once

// Constructive zero-error timing codes: a general single-relay code that
// encodes messages in the placement and values of the relay's transmit
// slots, the fixed three-node two-source instance, and a block-pipelined
// simulator with exhaustive decodability checks.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hdrelay/core.hpp"
#include "hdrelay/counting.hpp"

namespace hdrelay {

// Colored per-node codeword table.  Words are grouped by context: the state
// a node must already know (from its decode history) before picking the
// word for the current message.
struct Codebook {
  int node = 0;
  int n = 0;
  int q = 0;
  std::vector<std::string> context_labels;       // one per context
  std::vector<std::vector<Word>> words;          // [context][message]
  std::vector<std::vector<std::string>> colors;  // [context][message]
};

std::string codebook_table_text(const Codebook& cb);

// Single-relay timing code for block length n and relay transmit budget n1.
// The relay represents a message by which n1 slots it transmits in (pattern)
// and what it transmits there (values); the source hides the next message in
// the slots where the relay listens.
class SingleRelayCode {
 public:
  SingleRelayCode(int n, int n1, int q);

  int n() const { return n_; }
  int n1() const { return n1_; }
  int q() const { return q_; }
  const BigInt& size() const { return size_; }
  long long size_ll() const { return size_ll_; }
  int payload_len() const { return n_ - n1_; }
  int payload_radix() const { return payload_radix_; }
  long long pattern_count() const { return pattern_count_; }
  long long value_count() const { return value_count_; }

  Word warmup_word() const;                 // all quiet; used in block 1
  Word relay_word(long long w) const;       // pattern + values for message w
  long long decode_relay_word(const Word& word) const;

  // Ascending listen slots of a relay word; the payload occupies the first
  // payload_len() of them.
  std::vector<int> listen_slots(const Word& relay_word) const;
  Word source_word(const Word& relay_current, long long w) const;
  long long decode_payload(const Word& heard, const Word& relay_own) const;

  Codebook relay_codebook() const;
  Codebook source_codebook() const;

 private:
  int n_;
  int n1_;
  int q_;
  BigInt size_;
  long long size_ll_;
  long long pattern_count_;
  long long value_count_;
  int payload_radix_;
};

SingleRelayCode build_single_relay_code(int n, int n1, int q);

// The fixed two-source instance: nodes 0..3, binary alphabet, block length
// 4, relay budgets (1, 2), message sets of size 4 for both sources.  The
// relay source (node 2) encodes the forwarded message in its slot pattern
// and its own message in the transmitted bits.
class TwoSourceCode {
 public:
  static constexpr int kBlock = 4;
  static constexpr int kQ = 2;
  static constexpr int kMessages = 4;

  Word warmup_word() const;
  Word node2_word(int w0, int w1) const;
  std::pair<int, int> decode_node2_word(const Word& word) const;

  // First two slots in which node 2 listens during the current block; the
  // warm-up blocks listen everywhere.
  std::array<int, 2> node2_listen_pair(int w0_ctx, bool warmup) const;
  std::array<int, 2> first_two_listen(const Word& word) const;

  Word node1_word(int w0, std::array<int, 2> slots) const;
  Word node0_word(int w0, std::array<int, 2> slots) const;
  int decode_pair(Symbol first, Symbol second) const;

  Codebook node0_codebook() const;
  Codebook node1_codebook() const;
  Codebook node2_codebook() const;
};

TwoSourceCode build_two_source_code();

struct TranscriptEntry {
  int block = 0;
  int node = 0;
  std::string word;
};

struct PipelineResult {
  int blocks = 0;
  std::vector<TranscriptEntry> transcript;         // filled on request
  std::vector<std::vector<long long>> decoded;     // [block][stream], -1 = none
};

// One JSON object per line: the transmitted words, then per block the sink's
// decode vector.
std::string transcript_jsonl(const PipelineResult& result);

// Block-pipelined simulation with honest causality: every node derives its
// word for block b only from its own messages and its decode history.
// Throws on a collision or any decode mismatch.
PipelineResult run_pipeline(const SingleRelayCode& code,
                            const std::vector<long long>& messages, int blocks,
                            bool want_transcript = false);
PipelineResult run_pipeline(const TwoSourceCode& code, const std::vector<int>& w0,
                            const std::vector<int>& w1, int blocks,
                            bool want_transcript = false);

// Sweeps every message sequence of the given length through the pipeline
// (table-driven fast path) and checks all decodes; returns the number of
// sequences.  Also proves collision-freedom over all reachable adjacent
// word pairs.
long long verify_single_relay_exhaustive(int n, int n1, int q, int blocks);

// Exhausts the first `exhaustive_prefix` blocks over all message pairs of
// both sources (the remaining blocks send zeros); returns the sequence count.
long long verify_two_source_exhaustive(int blocks, int exhaustive_prefix);

// (1/n) log2 of the single-relay codebook size, exact big-integer route.
double counting_rate(int n, int n1, int q);

}  // namespace hdrelay
