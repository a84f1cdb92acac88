// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "dtnum/dtns.hpp"
#include "dtnum/error.hpp"
#include "dtnum/oracle.hpp"
#include "dtnum/pisot.hpp"
#include "dtnum/relations.hpp"
#include "dtnum/seqauto.hpp"

using namespace dtnum;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

SeqAutomaton load(const std::string& file) {
  std::ifstream in(std::string(DTNUM_FIXTURES) + "/" + file);
  if (!in) throw Error("missing fixture " + file);
  return parse_seqauto(in);
}

DtnsSystem sys(const char* text) { return build_system(parse_substitution(text, 'a')); }

Verdict address_table() {
  const char* addresses[] = {"0",    "1",    "2",    "10",   "20",   "100",  "101",  "102",  "200",  "201", "202",
                             "1000", "1001", "1002", "1010", "1020", "2000", "2001", "2002", "2010", "2020"};
  const std::string letters = "abbaaabbabbabbaaabbaa";
  auto psi = sys("a->abb;b->a");
  for (std::size_t k = 0; k <= 20; ++k) {
    if (format_digits(rep(psi, k)) != addresses[k]) return {false, "rep(" + std::to_string(k) + ") = " + format_digits(rep(psi, k))};
    if (letter_at(psi, k) != letters[k]) return {false, "letter_at(" + std::to_string(k) + ")"};
  }
  return {true, "21 addresses and letters"};
}

Verdict zeckendorf_flattening() {
  RelationResult r = addition_automaton(load("zeckendorf.seqauto"));
  std::string detail = "trimmed flattening has " + std::to_string(r.trimmed_states) + " states (expected 15), minimal " +
                       std::to_string(r.automaton.size());
  return {r.trimmed_states == 15, detail};
}

Verdict recurrences() {
  struct Case {
    const char* subst;
    IntPolynomial expected;
  };
  for (const Case& c : {Case{"a->ab;b->ba", {-2, 1}}, Case{"a->abc;b->cc;c->aab", {-2, -2, 1}},
                        Case{"a->abb;b->a", {-2, -1, 1}}}) {
    auto got = sys(c.subst).recurrence;
    if (got != c.expected) return {false, std::string(c.subst) + " gave " + got.to_string()};
  }
  return {true, "X - 2, X^2 - 2X - 2, X^2 - X - 2"};
}

Verdict addition_oracle() {
  std::vector<std::pair<std::string, std::function<std::pair<Dfa, Numeration>()>>> systems = {
      {"base 2", [] { auto s = sys("a->aa"); return std::pair{addition_automaton(s).automaton, Numeration::of(s)}; }},
      {"base 3", [] { auto s = sys("a->aaa"); return std::pair{addition_automaton(s).automaton, Numeration::of(s)}; }},
      {"Zeckendorf",
       [] { auto z = load("zeckendorf.seqauto"); return std::pair{addition_automaton(z).automaton, Numeration::of(z)}; }},
      {"tau", [] { auto s = sys("a->abc;b->bc;c->ab"); return std::pair{addition_automaton(s).automaton, Numeration::of(s)}; }}};
  std::size_t checked = 0;
  for (auto& [name, make] : systems) {
    auto [add, num] = make();
    Report r = check_addition(add, num, 300);
    if (!r.ok) return {false, name + ": " + r.failure};
    checked += r.checked;
  }
  return {true, std::to_string(checked) + " triples over 4 systems"};
}

Verdict val_rep() {
  std::vector<std::pair<std::string, Numeration>> systems = {{"psi", Numeration::of(sys("a->abb;b->a"))},
                                                             {"tau", Numeration::of(sys("a->abc;b->bc;c->ab"))},
                                                             {"Zeckendorf", Numeration::of(load("zeckendorf.seqauto"))},
                                                             {"base 2", Numeration::of(sys("a->aa"))}};
  for (auto& [name, num] : systems) {
    Report r = check_numeration(num, 10000);
    if (!r.ok) return {false, name + ": " + r.failure};
  }
  return {true, "k < 10000 on 4 systems"};
}

Verdict pisot_suite() {
  struct Case {
    IntPolynomial p;
    bool expected;
  };
  const Case cases[] = {{{-1, -1, 1}, true},  {{-2, 1}, true},       {{-3, 1}, true},  {{-7, 1}, true},
                        {{1, -1, -2, 1}, true}, {{-2, -2, 1}, true}, {{0, -2, 1}, true}, {{-2, -1, 1}, false},
                        {{2, -3, 1}, false},  {{1, 0, 1}, false}};
  for (const Case& c : cases)
    if (is_ultimately_pisot(c.p).has_value() != c.expected) return {false, c.p.to_string()};
  auto shifted = is_ultimately_pisot(IntPolynomial{0, -2, 1});
  if (shifted->k != 1) return {false, "X^2 - 2X should have k = 1"};
  return {true, "10 polynomials classified"};
}

Verdict survey_counts() {
  SurveyConfig c;
  SurveyReport r = survey(c);
  std::string detail = std::to_string(r.total()) + " substitutions, " + std::to_string(r.ultimately_pisot()) +
                       " ultimately Pisot; convention: " + r.convention;
  return {r.total() == 4931 && r.ultimately_pisot() == 2353, detail};
}

Verdict property_suites() {
  std::istringstream binaries(DTNUM_PROPERTY_BINARIES);
  std::string bin;
  std::size_t ran = 0;
  while (std::getline(binaries, bin, ':')) {
    std::string cmd = "\"" + bin + "\" -tc=\"properties*\" -m > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, bin};
    ++ran;
  }
  return {true, std::to_string(ran) + " property suites"};
}

Verdict degenerate_fixture() {
  SeqAutomaton reduced = reduce_annihilator(load("pairsum.seqauto"));
  try {
    relation_bounds(reduced, BoundSpec{});
    return {false, "pisot mode accepted the degenerate recurrence"};
  } catch (const NotPisotError&) {
  }
  std::size_t exploded = 0, refuted = 0;
  for (long b : {4L, 16L, 64L, 256L, 1024L}) {
    auto bounds = relation_bounds(reduced, BoundSpec{BoundMode::manual, b});
    try {
      Dfa f = flatten(reduced, bounds, 0, 5000);
      if (!validate_flattening(reduced, f, 0, 24)) return {false, "bound " + std::to_string(b) + " passed validation"};
      ++refuted;
    } catch (const BoundExplosion&) {
      ++exploded;
    }
  }
  return {true, std::to_string(exploded) + " bound explosions, " + std::to_string(refuted) + " refuted by the oracle"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Verdict (*)()>> criteria = {
      {"psi address table", address_table},
      {"Zeckendorf trimmed flattening size", zeckendorf_flattening},
      {"recurrence polynomials", recurrences},
      {"addition oracle, N = 300", addition_oracle},
      {"val(rep(k)) = k", val_rep},
      {"Pisot classification", pisot_suite},
      {"survey counts", survey_counts},
      {"property suites", property_suites},
      {"degenerate automaton fails loudly", degenerate_fixture}};
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !v.pass;
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << secs;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  " << index << ". " << name << ": " << v.detail << " [" << time.str()
              << " s]" << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
