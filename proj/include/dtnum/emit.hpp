#pragma once

// DOT and Walnut serialization. States are numbered in breadth-first
// discovery order from the initial state, so the initial state is 0 and the
// output only depends on the language structure of the input.

#include <string>

#include "dtnum/automaton.hpp"
#include "dtnum/dtns.hpp"
#include "dtnum/seqauto.hpp"

namespace dtnum {

// Node labels are output letters when `letters` is given and the automaton
// carries outputs.
std::string emit_dot(const Dfa& d, const std::string& letters = {});
// Edge labels "digit: v0,v1" give the initial vector of each weight.
std::string emit_dot(const SeqAutomaton& a);

// Walnut automaton file: one {d0,...} block per track, then per state
// "<id> <accepting>" (or "<id> <output>" when word is set) followed by
// "<digits> -> <dest>" lines.
std::string emit_walnut_automaton(const Dfa& d, bool word = false);

// Reader for the files written above.
Dfa parse_walnut_automaton(const std::string& text, bool word = false);

struct WalnutBundle {
  std::string name;
  std::string recognizer;      // msd_<name>.txt
  std::string addition;        // msd_<name>_addition.txt
  std::string word_automaton;  // <NAME>.txt
  std::string check_script;    // <name>_check.txt
  std::string readme;          // README.txt

  // Writes every file into dir (created when missing).
  void write(const std::string& dir) const;
};

// Lowercase alphanumeric, starting with a letter.
bool valid_walnut_name(const std::string& name);

WalnutBundle emit_walnut(const DtnsSystem& sys, const Dfa& addition, const std::string& name);

// The five validity predicates of an addition automaton.
std::string emit_check_script(const std::string& name);

}  // namespace dtnum
