#pragma once

// Partial deterministic automata over tuple-digit alphabets.
//
// Each track reads digits 0..radix-1. A symbol is the mixed-radix index of a
// digit tuple with the first track most significant, so symbol order is the
// lexicographic order on tuples.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dtnum {

using Symbol = std::uint32_t;
using Word = std::vector<Symbol>;
using Digits = std::vector<unsigned>;

struct Alphabet {
  std::vector<unsigned> radix;
  // Per track, the digit printed as '#', or -1.
  std::vector<int> pad_mark;

  Alphabet() = default;
  explicit Alphabet(std::vector<unsigned> radices);
  static Alphabet uniform(unsigned radix, std::size_t arity) { return Alphabet(std::vector<unsigned>(arity, radix)); }

  std::size_t arity() const noexcept { return radix.size(); }
  std::size_t size() const;

  Symbol encode(const Digits& digits) const;
  Digits decode(Symbol s) const;
  // "110" for small radices, "1,1,10" otherwise; '#' for pad marks.
  std::string label(Symbol s) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;
};

// Tuple alphabet whose tracks are those of the parts, in order.
Alphabet concat(const std::vector<Alphabet>& parts);

class Dfa {
 public:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  Dfa() = default;
  explicit Dfa(Alphabet alphabet, std::size_t states = 0);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t size() const noexcept { return accepting_.size(); }
  std::size_t symbols() const noexcept { return symbols_; }

  std::size_t add_state(bool accepting = false);
  void set_transition(std::size_t from, Symbol s, std::size_t to);
  std::size_t next(std::size_t from, Symbol s) const { return table_[from * symbols_ + s]; }

  std::size_t initial() const noexcept { return initial_; }
  void set_initial(std::size_t q) { initial_ = q; }
  bool accepting(std::size_t q) const { return accepting_[q] != 0; }
  void set_accepting(std::size_t q, bool value) { accepting_[q] = value; }

  bool has_outputs() const noexcept { return !outputs_.empty(); }
  int output(std::size_t q) const { return outputs_.at(q); }
  void set_output(std::size_t q, int letter);
  void clear_outputs() { outputs_.clear(); }

  std::size_t transition_count() const;
  // State reached from `from` along w, or kNone.
  std::size_t run(const Word& w, std::size_t from) const;
  std::size_t run(const Word& w) const { return run(w, initial_); }

 private:
  Alphabet alphabet_;
  std::size_t symbols_ = 0;
  std::size_t initial_ = 0;
  std::vector<std::size_t> table_;
  std::vector<char> accepting_;
  std::vector<int> outputs_;
};

bool accepts(const Dfa& d, const Word& w);

// Keeps states both reachable and co-reachable. An empty language yields a
// single non-accepting initial state.
Dfa trim(const Dfa& d);

// Minimal partial automaton for the same language (and outputs), with states
// numbered in BFS order.
Dfa minimize(const Dfa& d);

// Renumbers reachable states in BFS order from the initial state, exploring
// symbols in increasing order.
Dfa canonical(const Dfa& d);

// Structural equality of the canonical forms.
bool isomorphic(const Dfa& a, const Dfa& b);

// Language (and output) equality over the same alphabet.
bool equivalent(const Dfa& a, const Dfa& b);

// Synchronous product; state (q_1, ..., q_n) has index with q_1 most
// significant. Accepts iff every component accepts its track projection.
Dfa product(const std::vector<Dfa>& parts);

// The (n+1)-th accepted word in radix order. Throws Error when the language
// has at most n words.
Word radix_enumerate(const Dfa& d, std::size_t n);

// Zips per-track digit strings into a word, left-padding shorter tracks with
// pad_digit.
Word pack_tracks(const Alphabet& alphabet, std::vector<Digits> tracks, unsigned pad_digit = 0);
std::vector<Digits> unpack_tracks(const Alphabet& alphabet, const Word& w);

// Digit strings: one character per digit ("2001"), or comma separated
// ("12,0,3") when some digit exceeds 9.
Digits parse_digits(const std::string& text);
std::string format_digits(const Digits& digits);

}  // namespace dtnum
