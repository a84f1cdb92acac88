#pragma once

// Sequence automata: partial DFAs whose transitions carry linear recurrence
// sequences. Reading u from q accumulates
//   pi(q, ua) = shift(pi(q, u)) + pi(delta(q, u), a),   pi(q, eps) = 0.
// All weights share one annihilator, so each is stored as its initial vector.

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "dtnum/automaton.hpp"
#include "dtnum/polyseq.hpp"

namespace dtnum {

class SeqAutomaton {
 public:
  SeqAutomaton() = default;
  SeqAutomaton(Alphabet alphabet, IntPolynomial annihilator, std::size_t states = 0);

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const IntPolynomial& annihilator() const noexcept { return annihilator_; }
  std::size_t order() const noexcept { return static_cast<std::size_t>(annihilator_.degree()); }
  std::size_t size() const noexcept { return accepting_.size(); }
  std::size_t symbols() const noexcept { return symbols_; }

  std::size_t add_state(std::string name = {}, bool accepting = false);
  const std::string& name(std::size_t q) const { return names_.at(q); }

  std::size_t initial() const noexcept { return initial_; }
  void set_initial(std::size_t q) { initial_ = q; }
  bool accepting(std::size_t q) const { return accepting_.at(q) != 0; }
  void set_accepting(std::size_t q, bool value) { accepting_.at(q) = value; }

  // The weight's annihilator must divide the shared one.
  void set_transition(std::size_t from, Symbol s, std::size_t to, const LinRecSeq& weight);
  void set_transition(std::size_t from, Symbol s, std::size_t to, std::vector<Integer> weight_initial);
  std::size_t next(std::size_t from, Symbol s) const { return delta_[from * symbols_ + s]; }
  // Initial vector of the weight; throws when the transition is undefined.
  const std::vector<Integer>& weight_vector(std::size_t from, Symbol s) const;
  LinRecSeq weight(std::size_t from, Symbol s) const { return LinRecSeq(annihilator_, weight_vector(from, s)); }

  // Same automaton with every weight re-expressed under a multiple of the
  // shared annihilator.
  SeqAutomaton rebased(const IntPolynomial& multiple) const;

  // The automaton without its weights.
  Dfa underlying() const;

 private:
  Alphabet alphabet_;
  IntPolynomial annihilator_;
  std::size_t symbols_ = 0;
  std::size_t initial_ = 0;
  std::vector<std::size_t> delta_;
  std::vector<std::vector<Integer>> weights_;
  std::vector<char> accepting_;
  std::vector<std::string> names_;
};

// Throws Error naming the position of the first undefined transition.
LinRecSeq pi_word(const SeqAutomaton& a, std::size_t q, const Word& u);

// Product automaton weighted by sum_i coefficient_i * pi_i, after unifying
// the annihilators through their lcm. Tracks are concatenated in order and
// product states are numbered with the first part most significant.
SeqAutomaton linear_combination(const std::vector<std::pair<Integer, SeqAutomaton>>& parts);

struct PadClosure {
  SeqAutomaton automaton;
  Symbol pad = 0;
  bool added = false;
};

// Ensures a zero-weight self-loop at the initial state usable as leading
// padding: the all-zero symbol when it already loops with weight 0,
// otherwise a fresh digit '#' (the old radix) on every track.
PadClosure pad_closure(const SeqAutomaton& a);

struct FlattenStats {
  std::size_t explored = 0;
  std::size_t pruned = 0;
  std::size_t peak_frontier = 0;
  // States before trimming and after.
  std::size_t untrimmed = 0;
  std::size_t trimmed = 0;
};

inline constexpr std::size_t kDefaultStateCap = 2'000'000;

// Bounded flattening: BFS over (state, weight vector) from (initial, 0), with
// the companion step s' = A s + pi(q, d). Vectors with some |s_i| > bounds[i]
// are dropped (bounds[0] is widened by |target|). A state accepts when its
// base state does and s_0 == target. The result is trimmed. Throws
// BoundExplosion once more than state_cap states have been explored.
Dfa flatten(const SeqAutomaton& a, const std::vector<Integer>& bounds, const Integer& target = 0,
            std::size_t state_cap = kDefaultStateCap, FlattenStats* stats = nullptr);

// Direct membership in L_target, without flattening.
bool l0_member(const SeqAutomaton& a, const Word& u, const Integer& target = 0);

// Exhaustive comparison of d against l0_member on all words up to max_length,
// explored as a product of configurations. Returns a shortest word on which
// they disagree.
std::optional<Word> validate_flattening(const SeqAutomaton& a, const Dfa& d, const Integer& target,
                                        std::size_t max_length);

// Text format:
//   annihilator: c0 c1 ... 1
//   states: a b
//   initial: a
//   accepting: a b
//   trans: a 1 b 1,2        (source, digit[,digit...], target, weight initial vector)
//   radix: 3               (optional, one radix per track)
// '#' starts a comment. Without a radix line each track's radix is one more
// than the largest digit it uses.
SeqAutomaton parse_seqauto(std::istream& in);
SeqAutomaton parse_seqauto(const std::string& text);
std::string write_seqauto(const SeqAutomaton& a);

}  // namespace dtnum
