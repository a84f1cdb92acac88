#pragma once

// Dumont-Thomas numeration systems of substitution fixpoints.
//
// For a substitution phi prolongable at a, position n of phi^omega(a) is
// addressed by the path of the addressing automaton (states = letters,
// delta(b, i) = phi(b)_i) whose digits, read as weights
// pi(b, i) = (|phi^n(phi(b)_0 ... phi(b)_{i-1})|)_n, sum to n.

#include <cstddef>
#include <string>
#include <vector>

#include "dtnum/automaton.hpp"
#include "dtnum/polyseq.hpp"
#include "dtnum/seqauto.hpp"

namespace dtnum {

struct Substitution {
  // Letters in increasing order.
  std::string alphabet;
  // images[i] is the image of alphabet[i].
  std::vector<std::string> images;
  char start = 'a';

  std::size_t index(char letter) const;
  const std::string& image(char letter) const { return images[index(letter)]; }
  // Largest image length.
  unsigned radix() const;
  // "a->abb;b->a"
  std::string to_string() const;
};

// Parses "a->abb;b->a". Letters are [a-z0-9].
Substitution parse_substitution(const std::string& text, char start);

std::string fixpoint_prefix(const Substitution& s, std::size_t n);

// M[x][y] = number of occurrences of letter x in phi(y).
std::vector<std::vector<Integer>> incidence_matrix(const Substitution& s);
IntPolynomial characteristic_polynomial(const std::vector<std::vector<Integer>>& matrix);

struct DtnsSystem {
  Substitution substitution;
  // States are the letters in alphabet order; output = letter index; all
  // states accepting; initial = start letter.
  Dfa addressing;
  // Characteristic polynomial of the incidence matrix.
  IntPolynomial incidence_polynomial;
  // lcm of the minimal annihilators of all transition weights.
  IntPolynomial recurrence;
  // The addressing automaton weighted by pi, weights expressed under the
  // recurrence polynomial.
  SeqAutomaton weighted;
  // The same weights under the incidence polynomial.
  SeqAutomaton weighted_incidence;

  // lengths(k)[x] = |phi^k(x)|.
  std::vector<Integer> lengths(std::size_t k) const;
};

DtnsSystem build_system(const Substitution& s);
inline IntPolynomial recurrence_polynomial(const DtnsSystem& sys) { return sys.recurrence; }

// Greedy representation; rep(0) = "0".
Digits rep(const DtnsSystem& sys, const Integer& n);
// Throws Error for words rejected by the numeration language.
Integer val(const DtnsSystem& sys, const Digits& w);
char letter_at(const DtnsSystem& sys, const Integer& n);

// Leading-zero-free addressing words, plus the word "0". The empty word is
// excluded. Outputs carry the reached letter.
Dfa numeration_language(const DtnsSystem& sys);

}  // namespace dtnum
