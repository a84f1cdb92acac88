#pragma once

// Shared fixtures and brute-force helpers for the test binaries.

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dtnum/automaton.hpp"
#include "dtnum/dtns.hpp"
#include "dtnum/polyseq.hpp"
#include "dtnum/seqauto.hpp"

namespace testing {

using namespace dtnum;

inline std::string fixture_path(const std::string& name) { return std::string(DTNUM_FIXTURES) + "/" + name; }
inline std::string golden_path(const std::string& name) { return std::string(DTNUM_GOLDEN) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SeqAutomaton load_seqauto(const std::string& name) { return parse_seqauto(read_file(fixture_path(name))); }

inline DtnsSystem system_of(const std::string& subst, char start = 'a') {
  return build_system(parse_substitution(subst, start));
}

inline const char* kPsi = "a->abb;b->a";
inline const char* kTau = "a->abc;b->bc;c->ab";
inline const char* kFibonacci = "a->ab;b->a";
inline const char* kThueMorse = "a->ab;b->ba";

// One-state base-k sequence automaton: digit d weighs d * (k^n).
inline SeqAutomaton base_k(unsigned k) {
  SeqAutomaton a(Alphabet(std::vector<unsigned>{k}), IntPolynomial{-static_cast<long>(k), 1});
  a.add_state("q", true);
  for (unsigned d = 0; d < k; ++d) a.set_transition(0, d, 0, std::vector<Integer>{Integer(d)});
  return a;
}

inline Word word(const std::string& digits) {
  Word w;
  for (unsigned d : parse_digits(digits)) w.push_back(d);
  return w;
}

inline std::string text(const Word& w) {
  std::string out;
  for (auto s : w) out += std::to_string(s);
  return out;
}

// |phi^n(w)| by literal string expansion.
inline std::size_t expanded_length(const Substitution& s, std::string w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    std::string next;
    for (char c : w) next += s.image(c);
    w = std::move(next);
  }
  return w.size();
}

// Random partial automaton over a single track.
inline Dfa random_dfa(std::mt19937& rng, std::size_t states, unsigned radix, double density = 0.7) {
  Dfa d(Alphabet(std::vector<unsigned>{radix}), states);
  std::uniform_real_distribution<double> coin(0, 1);
  std::uniform_int_distribution<std::size_t> pick(0, states - 1);
  for (std::size_t q = 0; q < states; ++q) {
    d.set_accepting(q, coin(rng) < 0.4);
    for (Symbol s = 0; s < radix; ++s)
      if (coin(rng) < density) d.set_transition(q, s, pick(rng));
  }
  d.set_initial(0);
  return d;
}

inline Word random_word(std::mt19937& rng, std::size_t symbols, std::size_t max_length) {
  std::uniform_int_distribution<std::size_t> len(0, max_length);
  std::uniform_int_distribution<Symbol> sym(0, static_cast<Symbol>(symbols - 1));
  Word w(len(rng));
  for (auto& s : w) s = sym(rng);
  return w;
}

// Every word of the given length over `symbols` symbols, in lexicographic order.
inline std::vector<Word> all_words(std::size_t symbols, std::size_t length) {
  std::vector<Word> out;
  Word w(length, 0);
  while (true) {
    out.push_back(w);
    std::size_t pos = length;
    while (pos > 0 && w[pos - 1] + 1 == symbols) w[--pos] = 0;
    if (pos == 0) break;
    ++w[pos - 1];
  }
  return out;
}

}  // namespace testing
