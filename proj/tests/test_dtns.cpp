#include <map>

#include "doctest.h"
#include "dtnum/error.hpp"
#include "support.hpp"

using namespace testing;

namespace {

// Oracle for val: sum over prefixes of |phi^k(prefix of the image)|.
Integer val_oracle(const Substitution& s, const Digits& w) {
  Integer n = 0;
  char q = s.start;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const std::string& img = s.image(q);
    n += Integer(static_cast<unsigned long>(expanded_length(s, img.substr(0, w[i]), w.size() - 1 - i)));
    q = img[w[i]];
  }
  return n;
}

}  // namespace

TEST_CASE("parse_substitution") {
  auto s = parse_substitution("b->a;a->abb", 'a');
  CHECK(s.alphabet == "ab");
  CHECK(s.image('a') == "abb");
  CHECK(s.image('b') == "a");
  CHECK(s.radix() == 3);
  CHECK(s.to_string() == "a->abb;b->a");
  CHECK(parse_substitution(" a -> ab ; b -> a ", 'a').to_string() == "a->ab;b->a");

  CHECK_THROWS_AS(parse_substitution("a-ab;b->a", 'a'), ParseError);
  CHECK_THROWS_WITH_AS(parse_substitution("a->ab;b->", 'a'), doctest::Contains("erasing"), ParseError);
  CHECK_THROWS_WITH_AS(parse_substitution("a->ac;b->a", 'a'), doctest::Contains("unknown letter"), ParseError);
  CHECK_THROWS_WITH_AS(parse_substitution("a->ba;b->a", 'a'), doctest::Contains("not prolongable"), ParseError);
  CHECK_THROWS_WITH_AS(parse_substitution("a->a;b->ab", 'a'), doctest::Contains("not prolongable"), ParseError);
}

TEST_CASE("fixpoint_prefix") {
  CHECK(fixpoint_prefix(parse_substitution(kPsi, 'a'), 17) == "abbaaabbabbabbaaa");
  CHECK(fixpoint_prefix(parse_substitution(kTau, 'a'), 11) == "abcbcabbcab");
  CHECK(fixpoint_prefix(parse_substitution(kThueMorse, 'a'), 8) == "abbabaab");
  CHECK(fixpoint_prefix(parse_substitution(kThueMorse, 'b'), 4) == "baab");
}

TEST_CASE("addressing automaton and weights") {
  for (const char* text : {kPsi, kTau, kFibonacci, kThueMorse, "a->abc;b->cc;c->aab"}) {
    CAPTURE(text);
    auto sys = system_of(text);
    const auto& s = sys.substitution;
    CHECK(sys.addressing.size() == s.alphabet.size());
    CHECK(sys.addressing.initial() == s.index(s.start));
    for (std::size_t q = 0; q < s.alphabet.size(); ++q) {
      CHECK(sys.addressing.accepting(q));
      CHECK(sys.addressing.output(q) == static_cast<int>(q));
      const std::string& img = s.images[q];
      for (Symbol i = 0; i < sys.addressing.symbols(); ++i) {
        if (i >= img.size()) {
          CHECK(sys.addressing.next(q, i) == Dfa::kNone);
          continue;
        }
        CHECK(sys.addressing.next(q, i) == s.index(img[i]));
        auto w = sys.weighted.weight(q, i);
        auto wi = sys.weighted_incidence.weight(q, i);
        for (std::size_t n = 0; n < 8; ++n) {
          Integer expected(static_cast<unsigned long>(expanded_length(s, img.substr(0, i), n)));
          CHECK(w.term(n) == expected);
          CHECK(wi.term(n) == expected);
        }
      }
    }
    auto len = sys.lengths(5);
    for (std::size_t x = 0; x < s.alphabet.size(); ++x)
      CHECK(len[x] == Integer(static_cast<unsigned long>(expanded_length(s, std::string(1, s.alphabet[x]), 5))));
  }
}

TEST_CASE("recurrence polynomials") {
  auto tm = system_of(kThueMorse);
  CHECK(tm.recurrence == IntPolynomial{-2, 1});
  CHECK(tm.incidence_polynomial == IntPolynomial{0, -2, 1});

  auto odd = system_of("a->abc;b->cc;c->aab");
  CHECK(odd.incidence_polynomial == IntPolynomial{-2, -4, -1, 1});
  CHECK(odd.recurrence == IntPolynomial{-2, -2, 1});

  CHECK(system_of(kPsi).recurrence == IntPolynomial{-2, -1, 1});
  CHECK(system_of(kTau).recurrence == IntPolynomial{1, -1, -2, 1});
  CHECK(system_of(kTau).incidence_polynomial == IntPolynomial{1, -1, -2, 1});
  CHECK(system_of(kFibonacci).recurrence == IntPolynomial{-1, -1, 1});

  // The recurrence is the smallest polynomial annihilating every weight.
  for (const char* text : {kPsi, kTau, kThueMorse, "a->abc;b->cc;c->aab"}) {
    auto sys = system_of(text);
    const auto& a = sys.weighted;
    for (std::size_t q = 0; q < a.size(); ++q)
      for (Symbol i = 0; i < a.symbols(); ++i)
        if (a.next(q, i) != Dfa::kNone) CHECK(LinRecSeq(a.annihilator(), a.weight_vector(q, i)).annihilator() == sys.recurrence);
  }
}

TEST_CASE("characteristic_polynomial") {
  std::vector<std::vector<Integer>> m = {{2, 1}, {1, 1}};
  CHECK(characteristic_polynomial(m) == IntPolynomial{1, -3, 1});
  std::vector<std::vector<Integer>> id = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  CHECK(characteristic_polynomial(id) == IntPolynomial{-1, 3, -3, 1});
}

TEST_CASE("address table") {
  auto sys = system_of(kPsi);
  const std::vector<std::pair<std::string, char>> table = {
      {"0", 'a'},    {"1", 'b'},    {"2", 'b'},    {"10", 'a'},   {"20", 'a'},   {"100", 'a'},  {"101", 'b'},
      {"102", 'b'},  {"200", 'a'},  {"201", 'b'},  {"202", 'b'},  {"1000", 'a'}, {"1001", 'b'}, {"1002", 'b'},
      {"1010", 'a'}, {"1020", 'a'}, {"2000", 'a'}, {"2001", 'b'}, {"2002", 'b'}, {"2010", 'a'}, {"2020", 'a'}};
  std::string prefix = fixpoint_prefix(sys.substitution, table.size());
  for (std::size_t n = 0; n < table.size(); ++n) {
    CAPTURE(n);
    CHECK(format_digits(rep(sys, n)) == table[n].first);
    CHECK(val(sys, parse_digits(table[n].first)) == n);
    CHECK(letter_at(sys, n) == table[n].second);
    CHECK(prefix[n] == table[n].second);
  }
  CHECK_THROWS_AS(val(sys, parse_digits("012")), Error);
  CHECK_THROWS_AS(val(sys, parse_digits("12")), Error);
  CHECK_THROWS_AS(rep(sys, -1), Error);
}

TEST_CASE("numeration language") {
  auto sys = system_of(kPsi);
  Dfa lang = numeration_language(sys);
  CHECK(accepts(lang, word("0")));
  CHECK(accepts(lang, word("2001")));
  CHECK_FALSE(accepts(lang, {}));
  CHECK_FALSE(accepts(lang, word("00")));
  CHECK_FALSE(accepts(lang, word("02")));
  CHECK_FALSE(accepts(lang, word("12")));
}

TEST_CASE("properties: rep, val and letters agree with brute force") {
  for (const char* text : {kPsi, kTau, kFibonacci, kThueMorse, "a->abc;b->cc;c->aab", "a->aab;b->ba"}) {
    CAPTURE(text);
    auto sys = system_of(text);
    const std::size_t count = 600;
    std::string prefix = fixpoint_prefix(sys.substitution, count);
    Dfa lang = numeration_language(sys);
    for (std::size_t n = 0; n < count; ++n) {
      Digits r = rep(sys, n);
      CHECK(val(sys, r) == n);
      CHECK(val_oracle(sys.substitution, r) == n);
      CHECK(letter_at(sys, n) == prefix[n]);
      Word e = radix_enumerate(lang, n);
      CHECK(Digits(e.begin(), e.end()) == r);
      if (n > 0) CHECK(r.front() != 0);
    }
  }
}

TEST_CASE("properties: val of every accepted word") {
  auto sys = system_of(kTau);
  Dfa lang = numeration_language(sys);
  std::map<Integer, std::string> seen;
  for (std::size_t len = 1; len <= 6; ++len)
    for (const auto& w : all_words(lang.symbols(), len)) {
      if (!accepts(lang, w)) continue;
      Digits d(w.begin(), w.end());
      Integer v = val(sys, d);
      CHECK(val_oracle(sys.substitution, d) == v);
      CHECK(seen.emplace(v, text(w)).second);
      CHECK(rep(sys, v) == d);
    }
}
