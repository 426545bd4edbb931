#include "hdrelay/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace hdrelay {

Symbol Symbol::transmit(int value) {
  if (value < 0) {
    throw std::invalid_argument("Symbol::transmit: negative symbol value");
  }
  Symbol s;
  s.value_ = value;
  return s;
}

int Symbol::value() const {
  if (value_ < 0) throw std::logic_error("Symbol::value called on Quiet");
  return value_;
}

namespace {
void check_alphabet(int q) {
  if (q < 1) throw std::invalid_argument("Word: alphabet size must be at least 1");
}
}  // namespace

Word::Word(std::vector<Symbol> symbols, int q) : symbols_(std::move(symbols)), q_(q) {
  check_alphabet(q);
  for (const Symbol& s : symbols_) {
    if (s.is_transmit() && s.value() >= q) {
      throw std::invalid_argument("Word: symbol value " + std::to_string(s.value()) +
                                  " outside alphabet of size " + std::to_string(q));
    }
  }
}

Word Word::parse(const std::string& text, int q) {
  check_alphabet(q);
  if (q > 10) throw std::invalid_argument("Word::parse: text form needs q <= 10");
  std::vector<Symbol> symbols;
  symbols.reserve(text.size());
  for (char c : text) {
    if (c == 'N') {
      symbols.push_back(Symbol::quiet());
    } else if (c >= '0' && c <= '9') {
      symbols.push_back(Symbol::transmit(c - '0'));
    } else {
      throw std::invalid_argument(std::string("Word::parse: bad character '") + c + "'");
    }
  }
  return Word(std::move(symbols), q);
}

Word Word::all_quiet(int length, int q) {
  if (length < 0) throw std::invalid_argument("Word::all_quiet: negative length");
  return Word(std::vector<Symbol>(static_cast<size_t>(length)), q);
}

Symbol Word::at(int t) const {
  if (t < 0 || t >= size()) throw std::out_of_range("Word::at: slot out of range");
  return symbols_[static_cast<size_t>(t)];
}

int Word::transmit_count() const {
  return static_cast<int>(std::count_if(symbols_.begin(), symbols_.end(),
                                        [](Symbol s) { return s.is_transmit(); }));
}

std::vector<int> Word::transmit_slots() const {
  std::vector<int> slots;
  for (int t = 0; t < size(); ++t) {
    if (symbols_[static_cast<size_t>(t)].is_transmit()) slots.push_back(t);
  }
  return slots;
}

std::string Word::to_string() const {
  if (q_ > 10) throw std::logic_error("Word::to_string: text form needs q <= 10");
  std::string out;
  out.reserve(symbols_.size());
  for (Symbol s : symbols_) {
    out.push_back(s.is_quiet() ? 'N' : static_cast<char>('0' + s.value()));
  }
  return out;
}

void CascadeSpec::validate() const {
  if (m < 1) throw std::invalid_argument("CascadeSpec: need at least one hop (m >= 1)");
  if (q < 1) throw std::invalid_argument("CascadeSpec: alphabet size must be at least 1");
  if (sources.empty() || sources.front() != 0) {
    throw std::invalid_argument("CascadeSpec: node 0 must be the first source");
  }
  for (size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] < 0 || sources[i] > m - 1) {
      throw std::invalid_argument("CascadeSpec: source outside nodes 0..m-1");
    }
    if (i > 0 && sources[i] <= sources[i - 1]) {
      throw std::invalid_argument("CascadeSpec: sources must be strictly increasing");
    }
  }
}

bool CascadeSpec::is_source(int v) const {
  return std::find(sources.begin(), sources.end(), v) != sources.end();
}

int CascadeSpec::alpha(int v) const {
  auto it = std::find(sources.begin(), sources.end(), v);
  if (it == sources.end()) {
    throw std::invalid_argument("CascadeSpec::alpha: node " + std::to_string(v) +
                                " is not a source");
  }
  return static_cast<int>(it - sources.begin());
}

void to_json(nlohmann::json& j, const CascadeSpec& spec) {
  j = nlohmann::json{{"m", spec.m}, {"q", spec.q}, {"sources", spec.sources}};
}

void from_json(const nlohmann::json& j, CascadeSpec& spec) {
  j.at("m").get_to(spec.m);
  j.at("q").get_to(spec.q);
  j.at("sources").get_to(spec.sources);
  spec.validate();
}

void to_json(nlohmann::json& j, const Word& w) {
  if (w.q() <= 10) {
    j = w.to_string();
    return;
  }
  std::vector<int> vals;
  vals.reserve(static_cast<size_t>(w.size()));
  for (Symbol s : w.symbols()) vals.push_back(s.is_quiet() ? -1 : s.value());
  j = vals;
}

Word word_from_json(const nlohmann::json& j, int q) {
  if (j.is_string()) return Word::parse(j.get<std::string>(), q);
  if (!j.is_array()) throw std::invalid_argument("word_from_json: expected string or array");
  std::vector<Symbol> symbols;
  for (const auto& v : j) {
    int x = v.get<int>();
    symbols.push_back(x < 0 ? Symbol::quiet() : Symbol::transmit(x));
  }
  return Word(std::move(symbols), q);
}

Symbol channel_output(Symbol upstream, Symbol self) {
  return self.is_transmit() ? self : upstream;
}

std::vector<Word> simulate_cascade(const CascadeSpec& spec,
                                   const std::vector<Word>& inputs) {
  spec.validate();
  if (static_cast<int>(inputs.size()) != spec.m) {
    throw std::invalid_argument("simulate_cascade: need one word per node 0..m-1");
  }
  const int n = inputs.empty() ? 0 : inputs.front().size();
  for (const Word& w : inputs) {
    if (w.size() != n) throw std::invalid_argument("simulate_cascade: unequal word lengths");
    if (w.q() != spec.q) throw std::invalid_argument("simulate_cascade: word alphabet mismatch");
  }

  std::vector<Word> received;
  received.reserve(static_cast<size_t>(spec.m));
  for (int i = 1; i <= spec.m; ++i) {
    std::vector<Symbol> heard(static_cast<size_t>(n));
    for (int t = 0; t < n; ++t) {
      const Symbol up = inputs[static_cast<size_t>(i - 1)][t];
      const Symbol self = (i < spec.m) ? inputs[static_cast<size_t>(i)][t] : Symbol::quiet();
      heard[static_cast<size_t>(t)] = channel_output(up, self);
    }
    received.emplace_back(std::move(heard), spec.q);
  }
  return received;
}

bool is_collision_free(const std::vector<Word>& inputs) {
  for (size_t i = 0; i + 1 < inputs.size(); ++i) {
    const Word& a = inputs[i];
    const Word& b = inputs[i + 1];
    const int n = std::min(a.size(), b.size());
    for (int t = 0; t < n; ++t) {
      if (a[t].is_transmit() && b[t].is_transmit()) return false;
    }
  }
  return true;
}

}  // namespace hdrelay
