#pragma once

// Brute-force validation of numeration and relation automata, and the
// survey over short substitutions.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dtnum/automaton.hpp"
#include "dtnum/dtns.hpp"
#include "dtnum/polyseq.hpp"
#include "dtnum/seqauto.hpp"

namespace dtnum {

// rep/val view of a numeration system. For a sequence automaton the
// representations are its accepted leading-zero-free words (plus "0") in
// radix order, and val is the first term of the accumulated weight.
class Numeration {
 public:
  static Numeration of(const DtnsSystem& sys);
  static Numeration of(const SeqAutomaton& a);

  // Representation of n; cached for sequence automata.
  Digits rep(std::size_t n) const;
  Integer val(const Digits& w) const;
  // The automaton whose weights define val, used for padding checks.
  const SeqAutomaton& weighted() const { return weighted_; }

 private:
  SeqAutomaton weighted_;
  std::optional<DtnsSystem> system_;
  Dfa language_;
  mutable std::vector<Digits> cache_;
  mutable std::size_t cached_length_ = 0;
};

struct Report {
  bool ok = true;
  std::size_t checked = 0;
  std::string failure;
};

// val(rep(k)) = k and rep strictly increasing in radix order for k < n.
Report check_numeration(const Numeration& num, std::size_t n);

// For all x, y < n the padded triple (rep x, rep y, rep(x + y)) is accepted,
// and for `negatives` random z != x + y below 3n it is rejected.
Report check_addition(const Dfa& addition, const Numeration& num, std::size_t n, std::size_t negatives = 16,
                      std::uint32_t seed = 0x5eed);

struct SurveyClass {
  std::size_t letters = 2;
  std::size_t max_total = 9;
};

struct SurveyConfig {
  std::vector<SurveyClass> classes = {{2, 9}, {3, 7}};
  unsigned jobs = 1;
  // Attempt an addition automaton for every item: pisot mode when the
  // recurrence allows it, manual bound otherwise.
  bool addition = false;
  Integer manual_bound = 64;
  std::size_t state_cap = 200'000;
  std::size_t check_n = 40;
};

struct SurveyItem {
  Substitution substitution;
  IntPolynomial recurrence;
  bool ultimately_pisot = false;
  // Filled when addition was attempted: "ok", "explosion", "invalid", "error".
  std::string addition_status;
  std::size_t trimmed_states = 0;
  std::size_t minimal_states = 0;
};

struct SurveyReport {
  std::string convention;
  std::vector<SurveyItem> items;
  std::size_t total() const { return items.size(); }
  std::size_t ultimately_pisot() const;
  std::size_t addable() const;
};

extern const char* const kSurveyConvention;

// Canonical substitutions within the limits, in a fixed order.
std::vector<Substitution> enumerate_substitutions(const SurveyClass& limits);
SurveyReport survey(const SurveyConfig& config);
void write_survey_csv(std::ostream& out, const SurveyReport& report);

}  // namespace dtnum
