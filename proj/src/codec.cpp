#include "hdrelay/codec.hpp"

#include <algorithm>
#include <climits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace hdrelay {

namespace {

long long binom_ll(int n, int k) {
  const BigInt b = binomial(n, k);
  if (b > LLONG_MAX / 4) throw std::invalid_argument("binomial too large to materialize");
  return b.convert_to<long long>();
}

long long to_ll_checked(const BigInt& v, const char* what) {
  if (v > LLONG_MAX / 4) throw std::invalid_argument(std::string(what) + " too large to materialize");
  return v.convert_to<long long>();
}

}  // namespace

SingleRelayCode::SingleRelayCode(int n, int n1, int q) : n_(n), n1_(n1), q_(q) {
  if (n < 2 || n > 62) throw std::invalid_argument("block length out of range");
  if (n1 < 1 || n1 >= n) throw std::invalid_argument("relay budget must satisfy 1 <= n1 < n");
  if (q < 1) throw std::invalid_argument("alphabet size must be positive");
  pattern_count_ = to_ll_checked(binomial(n, n1), "pattern count");
  value_count_ = to_ll_checked(int_pow(q, n1), "value count");
  const BigInt relay_total = BigInt(pattern_count_) * value_count_;
  const BigInt source_total = int_pow(q + 1, n - n1);
  size_ = relay_total < source_total ? relay_total : source_total;
  size_ll_ = to_ll_checked(size_, "message set");
  const int len = n_ - n1_;
  const BigInt with_active = int_pow(q_, len);
  payload_radix_ = (with_active >= size_) ? q_ : q_ + 1;
  if (int_pow(payload_radix_, len) < size_) {
    throw std::logic_error("payload radix cannot address the message set");
  }
}

Word SingleRelayCode::warmup_word() const { return Word::all_quiet(n_, q_); }

Word SingleRelayCode::relay_word(long long w) const {
  if (w < 0 || w >= size_ll_) throw std::invalid_argument("message out of range");
  long long rank = w / value_count_;
  long long val = w % value_count_;
  std::vector<int> slots;
  slots.reserve(n1_);
  int k = n1_;
  for (int pos = 0; pos < n_ && k > 0; ++pos) {
    const long long c = binom_ll(n_ - 1 - pos, k - 1);
    if (rank < c) {
      slots.push_back(pos);
      --k;
    } else {
      rank -= c;
    }
  }
  std::vector<Symbol> symbols(n_, Symbol::quiet());
  for (int j = n1_ - 1; j >= 0; --j) {
    symbols[slots[j]] = Symbol::transmit(static_cast<int>(val % q_));
    val /= q_;
  }
  return Word(std::move(symbols), q_);
}

long long SingleRelayCode::decode_relay_word(const Word& word) const {
  if (word.size() != n_) throw std::invalid_argument("word length mismatch");
  const std::vector<int> slots = word.transmit_slots();
  if (static_cast<int>(slots.size()) != n1_) {
    throw std::runtime_error("relay word has the wrong transmit count");
  }
  long long rank = 0;
  int start = 0;
  for (int j = 0; j < n1_; ++j) {
    for (int t = start; t < slots[j]; ++t) rank += binom_ll(n_ - 1 - t, n1_ - 1 - j);
    start = slots[j] + 1;
  }
  long long val = 0;
  for (const int s : slots) val = val * q_ + word.at(s).value();
  const long long w = rank * value_count_ + val;
  if (w >= size_ll_) throw std::runtime_error("relay word outside the message range");
  return w;
}

std::vector<int> SingleRelayCode::listen_slots(const Word& relay_word) const {
  if (relay_word.size() != n_) throw std::invalid_argument("word length mismatch");
  std::vector<int> slots;
  slots.reserve(n_);
  for (int t = 0; t < n_; ++t) {
    if (relay_word.at(t).is_quiet()) slots.push_back(t);
  }
  return slots;
}

Word SingleRelayCode::source_word(const Word& relay_current, long long w) const {
  if (w < 0 || w >= size_ll_) throw std::invalid_argument("message out of range");
  const std::vector<int> listen = listen_slots(relay_current);
  const int len = payload_len();
  if (static_cast<int>(listen.size()) < len) {
    throw std::runtime_error("relay word does not leave enough listen slots");
  }
  std::vector<Symbol> symbols(n_, Symbol::quiet());
  long long rest = w;
  for (int j = len - 1; j >= 0; --j) {
    const int digit = static_cast<int>(rest % payload_radix_);
    rest /= payload_radix_;
    if (digit < q_) symbols[listen[j]] = Symbol::transmit(digit);
  }
  return Word(std::move(symbols), q_);
}

long long SingleRelayCode::decode_payload(const Word& heard, const Word& relay_own) const {
  if (heard.size() != n_) throw std::invalid_argument("word length mismatch");
  const std::vector<int> listen = listen_slots(relay_own);
  const int len = payload_len();
  if (static_cast<int>(listen.size()) < len) {
    throw std::runtime_error("relay word does not leave enough listen slots");
  }
  long long value = 0;
  for (int j = 0; j < len; ++j) {
    const Symbol s = heard.at(listen[j]);
    int digit;
    if (s.is_quiet()) {
      if (payload_radix_ == q_) throw std::runtime_error("payload slot unexpectedly quiet");
      digit = q_;
    } else {
      digit = s.value();
    }
    value = value * payload_radix_ + digit;
  }
  if (value >= size_ll_) throw std::runtime_error("payload outside the message range");
  return value;
}

Codebook SingleRelayCode::relay_codebook() const {
  if (size_ll_ > 10000) throw std::invalid_argument("codebook too large to materialize");
  Codebook cb;
  cb.node = 1;
  cb.n = n_;
  cb.q = q_;
  cb.context_labels = {"steady"};
  cb.words.resize(1);
  cb.colors.resize(1);
  for (long long w = 0; w < size_ll_; ++w) {
    cb.words[0].push_back(relay_word(w));
    cb.colors[0].push_back("p" + std::to_string(w / value_count_));
  }
  return cb;
}

Codebook SingleRelayCode::source_codebook() const {
  if (size_ll_ > 1000) throw std::invalid_argument("codebook too large to materialize");
  Codebook cb;
  cb.node = 0;
  cb.n = n_;
  cb.q = q_;
  std::vector<Word> contexts;
  contexts.push_back(warmup_word());
  cb.context_labels.push_back("after warmup");
  for (long long w = 0; w < size_ll_; ++w) {
    contexts.push_back(relay_word(w));
    cb.context_labels.push_back("after relay word " + std::to_string(w));
  }
  for (std::size_t c = 0; c < contexts.size(); ++c) {
    std::vector<Word> row;
    std::vector<std::string> color_row;
    for (long long w = 0; w < size_ll_; ++w) {
      row.push_back(source_word(contexts[c], w));
      color_row.push_back("c" + std::to_string(c));
    }
    cb.words.push_back(std::move(row));
    cb.colors.push_back(std::move(color_row));
  }
  return cb;
}

SingleRelayCode build_single_relay_code(int n, int n1, int q) {
  return SingleRelayCode(n, n1, q);
}

namespace {

// Transmit slots of node 2 per forwarded message, and the complementary
// first-two listen slots.  The pattern alone identifies the forwarded
// message; the transmitted bits carry node 2's own message.
constexpr std::array<std::array<int, 2>, 4> kNode2Transmit = {
    {{1, 3}, {0, 2}, {1, 2}, {0, 3}}};
constexpr std::array<std::array<int, 2>, 4> kNode2Listen = {
    {{0, 2}, {1, 3}, {0, 3}, {1, 2}}};

}  // namespace

Word TwoSourceCode::warmup_word() const { return Word::all_quiet(kBlock, kQ); }

Word TwoSourceCode::node2_word(int w0, int w1) const {
  if (w0 < 0 || w0 >= kMessages || w1 < 0 || w1 >= kMessages) {
    throw std::invalid_argument("message out of range");
  }
  std::vector<Symbol> symbols(kBlock, Symbol::quiet());
  symbols[kNode2Transmit[w0][0]] = Symbol::transmit((w1 >> 1) & 1);
  symbols[kNode2Transmit[w0][1]] = Symbol::transmit(w1 & 1);
  return Word(std::move(symbols), kQ);
}

std::pair<int, int> TwoSourceCode::decode_node2_word(const Word& word) const {
  if (word.size() != kBlock) throw std::invalid_argument("word length mismatch");
  const std::vector<int> slots = word.transmit_slots();
  if (slots.size() != 2) throw std::runtime_error("forwarding word has the wrong transmit count");
  for (int w0 = 0; w0 < kMessages; ++w0) {
    if (slots[0] == kNode2Transmit[w0][0] && slots[1] == kNode2Transmit[w0][1]) {
      const int w1 = (word.at(slots[0]).value() << 1) | word.at(slots[1]).value();
      return {w0, w1};
    }
  }
  throw std::runtime_error("forwarding word matches no slot pattern");
}

std::array<int, 2> TwoSourceCode::node2_listen_pair(int w0_ctx, bool warmup) const {
  if (warmup) return {0, 1};
  if (w0_ctx < 0 || w0_ctx >= kMessages) throw std::invalid_argument("message out of range");
  return kNode2Listen[w0_ctx];
}

std::array<int, 2> TwoSourceCode::first_two_listen(const Word& word) const {
  std::array<int, 2> slots = {-1, -1};
  int found = 0;
  for (int t = 0; t < word.size() && found < 2; ++t) {
    if (word.at(t).is_quiet()) slots[found++] = t;
  }
  if (found < 2) throw std::runtime_error("word leaves fewer than two listen slots");
  return slots;
}

namespace {

// A message in {0..3} maps to one transmission in a two-slot window: the
// chosen slot is the high bit, the transmitted bit the low bit.
void apply_pair(std::vector<Symbol>& symbols, std::array<int, 2> slots, int msg) {
  symbols[slots[msg >> 1]] = Symbol::transmit(msg & 1);
}

}  // namespace

Word TwoSourceCode::node1_word(int w0, std::array<int, 2> slots) const {
  if (w0 < 0 || w0 >= kMessages) throw std::invalid_argument("message out of range");
  std::vector<Symbol> symbols(kBlock, Symbol::quiet());
  apply_pair(symbols, slots, w0);
  return Word(std::move(symbols), kQ);
}

Word TwoSourceCode::node0_word(int w0, std::array<int, 2> slots) const {
  if (w0 < 0 || w0 >= kMessages) throw std::invalid_argument("message out of range");
  std::vector<Symbol> symbols(kBlock, Symbol::quiet());
  apply_pair(symbols, slots, w0);
  return Word(std::move(symbols), kQ);
}

int TwoSourceCode::decode_pair(Symbol first, Symbol second) const {
  if (first.is_transmit() && second.is_quiet()) return first.value();
  if (first.is_quiet() && second.is_transmit()) return 2 + second.value();
  throw std::runtime_error("pair slots carry no unique transmission");
}

Codebook TwoSourceCode::node2_codebook() const {
  Codebook cb;
  cb.node = 2;
  cb.n = kBlock;
  cb.q = kQ;
  cb.context_labels = {"steady"};
  cb.words.resize(1);
  cb.colors.resize(1);
  for (int w0 = 0; w0 < kMessages; ++w0) {
    for (int w1 = 0; w1 < kMessages; ++w1) {
      cb.words[0].push_back(node2_word(w0, w1));
      cb.colors[0].push_back(std::string(1, static_cast<char>('a' + w0)));
    }
  }
  return cb;
}

Codebook TwoSourceCode::node1_codebook() const {
  Codebook cb;
  cb.node = 1;
  cb.n = kBlock;
  cb.q = kQ;
  std::vector<std::array<int, 2>> contexts;
  contexts.push_back(node2_listen_pair(0, true));
  cb.context_labels.push_back("warmup listen 0,1");
  for (int c = 0; c < kMessages; ++c) {
    contexts.push_back(node2_listen_pair(c, false));
    cb.context_labels.push_back(std::string("downstream ") +
                                static_cast<char>('a' + c) + " listen " +
                                std::to_string(kNode2Listen[c][0]) + "," +
                                std::to_string(kNode2Listen[c][1]));
  }
  for (const auto& slots : contexts) {
    std::vector<Word> row;
    std::vector<std::string> color_row;
    for (int w0 = 0; w0 < kMessages; ++w0) {
      const Word word = node1_word(w0, slots);
      const int transmit_slot = word.transmit_slots().front();
      const char color = transmit_slot == 0 ? 'e' : transmit_slot == 1 ? 'f' : 'g';
      row.push_back(word);
      color_row.push_back(std::string(1, color));
    }
    cb.words.push_back(std::move(row));
    cb.colors.push_back(std::move(color_row));
  }
  return cb;
}

Codebook TwoSourceCode::node0_codebook() const {
  Codebook cb;
  cb.node = 0;
  cb.n = kBlock;
  cb.q = kQ;
  const std::array<std::array<int, 2>, 3> contexts = {{{1, 2}, {0, 2}, {0, 1}}};
  const std::array<char, 3> labels = {'e', 'f', 'g'};
  for (int c = 0; c < 3; ++c) {
    cb.context_labels.push_back(std::string("upstream ") + labels[c] + " slots " +
                                std::to_string(contexts[c][0]) + "," +
                                std::to_string(contexts[c][1]));
    std::vector<Word> row;
    std::vector<std::string> color_row;
    for (int w0 = 0; w0 < kMessages; ++w0) {
      row.push_back(node0_word(w0, contexts[c]));
      color_row.push_back(std::string(1, labels[c]));
    }
    cb.words.push_back(std::move(row));
    cb.colors.push_back(std::move(color_row));
  }
  return cb;
}

TwoSourceCode build_two_source_code() { return TwoSourceCode(); }

std::string codebook_table_text(const Codebook& cb) {
  std::ostringstream out;
  out << "node " << cb.node << " codebook (n=" << cb.n << ", q=" << cb.q << ")\n";
  for (std::size_t c = 0; c < cb.words.size(); ++c) {
    out << "context " << cb.context_labels[c] << ":\n";
    for (std::size_t w = 0; w < cb.words[c].size(); ++w) {
      out << "  w=" << w << "  " << cb.words[c][w].to_string() << "  ["
          << cb.colors[c][w] << "]\n";
    }
  }
  return out.str();
}

std::string transcript_jsonl(const PipelineResult& result) {
  std::string out;
  for (const TranscriptEntry& e : result.transcript) {
    nlohmann::json j;
    j["block"] = e.block;
    j["node"] = e.node;
    j["word"] = e.word;
    out += j.dump();
    out += '\n';
  }
  for (int b = 0; b < result.blocks; ++b) {
    nlohmann::json j;
    j["block"] = b + 1;
    j["decoded"] = result.decoded[b];
    out += j.dump();
    out += '\n';
  }
  return out;
}

PipelineResult run_pipeline(const SingleRelayCode& code,
                            const std::vector<long long>& messages, int blocks,
                            bool want_transcript) {
  if (blocks < 1) throw std::invalid_argument("need at least one block");
  if (static_cast<int>(messages.size()) < blocks) {
    throw std::invalid_argument("not enough messages for the requested blocks");
  }
  for (int b = 0; b < blocks; ++b) {
    if (messages[b] < 0 || messages[b] >= code.size_ll()) {
      throw std::invalid_argument("message out of range");
    }
  }
  const CascadeSpec spec{2, code.q(), {0}};
  PipelineResult result;
  result.blocks = blocks;
  result.decoded.assign(blocks, {-1});

  Word relay_current = code.warmup_word();
  for (int b = 1; b <= blocks; ++b) {
    const Word x0 = code.source_word(relay_current, messages[b - 1]);
    const Word x1 = relay_current;
    const std::vector<Word> inputs = {x0, x1};
    if (!is_collision_free(inputs)) throw std::runtime_error("collision in pipeline");
    const std::vector<Word> received = simulate_cascade(spec, inputs);
    if (want_transcript) {
      result.transcript.push_back({b, 0, x0.to_string()});
      result.transcript.push_back({b, 1, x1.to_string()});
    }
    const long long relay_decoded = code.decode_payload(received[0], relay_current);
    if (relay_decoded != messages[b - 1]) {
      throw std::runtime_error("relay decode mismatch");
    }
    if (b >= 2) {
      const long long sink_decoded = code.decode_relay_word(received[1]);
      if (sink_decoded != messages[b - 2]) {
        throw std::runtime_error("sink decode mismatch");
      }
      result.decoded[b - 1] = {sink_decoded};
    }
    relay_current = code.relay_word(relay_decoded);
  }
  return result;
}

PipelineResult run_pipeline(const TwoSourceCode& code, const std::vector<int>& w0,
                            const std::vector<int>& w1, int blocks,
                            bool want_transcript) {
  if (blocks < 1) throw std::invalid_argument("need at least one block");
  if (static_cast<int>(w0.size()) < blocks || static_cast<int>(w1.size()) < blocks) {
    throw std::invalid_argument("not enough messages for the requested blocks");
  }
  for (int b = 0; b < blocks; ++b) {
    if (w0[b] < 0 || w0[b] >= TwoSourceCode::kMessages || w1[b] < 0 ||
        w1[b] >= TwoSourceCode::kMessages) {
      throw std::invalid_argument("message out of range");
    }
  }
  const CascadeSpec spec{3, TwoSourceCode::kQ, {0, 2}};
  PipelineResult result;
  result.blocks = blocks;
  result.decoded.assign(blocks, {-1, -1});

  // Decode histories indexed by the original block of the message (1-based).
  std::vector<int> known1(blocks + 1, -1);  // node 1's copy of w0(b)
  std::vector<int> known2(blocks + 1, -1);  // node 2's copy of w0(b)

  for (int b = 1; b <= blocks; ++b) {
    // Node 2 forwards w0(b-2) with its own w1(b-2); warm-up blocks are quiet.
    Word x2 = code.warmup_word();
    if (b >= 3) x2 = code.node2_word(known2[b - 2], w1[b - 3]);
    const std::array<int, 2> t2 =
        b <= 2 ? code.node2_listen_pair(0, true)
               : code.node2_listen_pair(known2[b - 2], false);

    // Node 1 forwards w0(b-1) into node 2's listen window, deriving that
    // window from its own decode history.
    Word x1 = code.warmup_word();
    if (b >= 2) {
      const std::array<int, 2> t1 =
          b <= 2 ? code.node2_listen_pair(0, true)
                 : code.node2_listen_pair(known1[b - 2], false);
      x1 = code.node1_word(known1[b - 1], t1);
    }

    // Node 0 sends w0(b) into node 1's listen window, which it reconstructs
    // from the messages it sent itself.
    Word x1_predicted = code.warmup_word();
    if (b >= 2) {
      const std::array<int, 2> tp =
          b <= 2 ? code.node2_listen_pair(0, true)
                 : code.node2_listen_pair(w0[b - 3], false);
      x1_predicted = code.node1_word(w0[b - 2], tp);
    }
    const std::array<int, 2> u = code.first_two_listen(x1_predicted);
    const Word x0 = code.node0_word(w0[b - 1], u);

    const std::vector<Word> inputs = {x0, x1, x2};
    if (!is_collision_free(inputs)) throw std::runtime_error("collision in pipeline");
    const std::vector<Word> received = simulate_cascade(spec, inputs);
    if (want_transcript) {
      result.transcript.push_back({b, 0, x0.to_string()});
      result.transcript.push_back({b, 1, x1.to_string()});
      result.transcript.push_back({b, 2, x2.to_string()});
    }

    const std::array<int, 2> own_listen = code.first_two_listen(x1);
    const int dec1 = code.decode_pair(received[0].at(own_listen[0]),
                                      received[0].at(own_listen[1]));
    if (dec1 != w0[b - 1]) throw std::runtime_error("node 1 decode mismatch");
    known1[b] = dec1;

    if (b >= 2) {
      const int dec2 = code.decode_pair(received[1].at(t2[0]), received[1].at(t2[1]));
      if (dec2 != w0[b - 2]) throw std::runtime_error("node 2 decode mismatch");
      known2[b - 1] = dec2;
    }

    if (b >= 3) {
      const auto [d0, d1] = code.decode_node2_word(received[2]);
      if (d0 != w0[b - 3] || d1 != w1[b - 3]) {
        throw std::runtime_error("sink decode mismatch");
      }
      result.decoded[b - 1] = {d0, d1};
    }
  }
  return result;
}

long long verify_single_relay_exhaustive(int n, int n1, int q, int blocks) {
  if (blocks < 1 || blocks > 8) throw std::invalid_argument("block count out of range");
  const SingleRelayCode code = build_single_relay_code(n, n1, q);
  const long long w_count = code.size_ll();
  if (w_count > 4096) throw std::invalid_argument("message set too large for the sweep");
  double total = 1.0;
  for (int b = 0; b < blocks; ++b) total *= static_cast<double>(w_count);
  if (total > 2.5e8) throw std::invalid_argument("sequence space too large for the sweep");

  const CascadeSpec spec{2, q, {0}};

  // Materialize every relay word, prove the word map is injective, and prove
  // the sink decoder inverts it.
  std::vector<Word> relay_words;
  relay_words.reserve(w_count + 1);
  relay_words.push_back(code.warmup_word());
  std::unordered_map<std::string, long long> seen;
  for (long long w = 0; w < w_count; ++w) {
    const Word word = code.relay_word(w);
    if (!seen.emplace(word.to_string(), w).second) {
      throw std::runtime_error("two messages share a relay word");
    }
    if (code.decode_relay_word(word) != w) {
      throw std::runtime_error("sink decode does not invert the relay word map");
    }
    relay_words.push_back(word);
  }

  // Every adjacent word pair reachable in any pipeline run is one
  // (context, message) combination: prove all of them collision free and
  // relay-decodable.  Induction over blocks then covers every sequence.
  for (long long ctx = 0; ctx <= w_count; ++ctx) {
    const Word& relay = relay_words[ctx];
    for (long long w = 0; w < w_count; ++w) {
      const Word x0 = code.source_word(relay, w);
      const std::vector<Word> inputs = {x0, relay};
      if (!is_collision_free(inputs)) throw std::runtime_error("collision in codebook");
      const std::vector<Word> received = simulate_cascade(spec, inputs);
      if (code.decode_payload(received[0], relay) != w) {
        throw std::runtime_error("relay decode mismatch in codebook sweep");
      }
      if (received[1] != relay) {
        throw std::runtime_error("sink does not hear the relay word verbatim");
      }
    }
  }

  // Walk every message sequence through the verified transition table.
  long long count = 0;
  std::vector<long long> msg(blocks, 0);
  while (true) {
    long long ctx = 0;  // warmup
    for (int b = 1; b <= blocks; ++b) {
      if (b >= 2) {
        // Sink decodes the word the relay is sending now: block b-1's message.
        if (ctx - 1 != msg[b - 2]) throw std::runtime_error("sink decode mismatch");
      }
      ctx = msg[b - 1] + 1;
    }
    ++count;
    int pos = blocks - 1;
    while (pos >= 0 && msg[pos] == w_count - 1) msg[pos--] = 0;
    if (pos < 0) break;
    ++msg[pos];
  }
  return count;
}

long long verify_two_source_exhaustive(int blocks, int exhaustive_prefix) {
  if (blocks < 1 || blocks > 8) throw std::invalid_argument("block count out of range");
  if (exhaustive_prefix < 1 || exhaustive_prefix > blocks) {
    throw std::invalid_argument("prefix out of range");
  }
  const TwoSourceCode code = build_two_source_code();
  long long total = 1;
  for (int b = 0; b < exhaustive_prefix; ++b) total *= 16;
  if (total > 1000000) throw std::invalid_argument("sequence space too large for the sweep");

  std::vector<int> w0(blocks, 0);
  std::vector<int> w1(blocks, 0);
  for (long long seq = 0; seq < total; ++seq) {
    long long rest = seq;
    for (int b = 0; b < exhaustive_prefix; ++b) {
      w0[b] = static_cast<int>(rest % 4);
      rest /= 4;
      w1[b] = static_cast<int>(rest % 4);
      rest /= 4;
    }
    run_pipeline(code, w0, w1, blocks, false);
  }
  return total;
}

double counting_rate(int n, int n1, int q) {
  if (n1 < 1 || n1 >= n) throw std::invalid_argument("relay budget must satisfy 1 <= n1 < n");
  const BudgetVector bv(n, {n1});
  return log2_big(max_w0(bv, q)) / n;
}

}  // namespace hdrelay
