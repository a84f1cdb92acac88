#include <array>
#include <cstdlib>
#include <map>
#include <set>

#include "doctest.h"
#include "dtnum/error.hpp"
#include "dtnum/pisot.hpp"
#include "support.hpp"

using namespace testing;

namespace {

SeqAutomaton zzz() {
  auto z = load_seqauto("zeckendorf.seqauto");
  return linear_combination({{1, z}, {1, z}, {-1, z}});
}

// Pisot bounds for a scalar automaton over the Fibonacci reference (1, 2).
std::vector<Integer> fibonacci_bounds(long coeff_bound) {
  auto up = *is_ultimately_pisot(IntPolynomial{-1, -1, 1});
  return flattening_bounds(up, LinRecSeq(up.full(), {1, 2}), coeff_bound).coordinate_bounds;
}

// Oracle: trimmed flattening of Zeckendorf x + y - z built directly from
// the digit rule (no factor 11) and the Fibonacci values 1, 2, 3, 5, ...
std::size_t zeckendorf_flattening_oracle(long bound) {
  using Node = std::array<long, 5>;  // last digit per track, then s0, s1
  std::set<Node> seen{{0, 0, 0, 0, 0}};
  std::map<Node, std::vector<Node>> succ;
  std::vector<Node> frontier{{0, 0, 0, 0, 0}};
  while (!frontier.empty()) {
    std::vector<Node> next;
    for (const Node& n : frontier)
      for (int bits = 0; bits < 8; ++bits) {
        long d[3] = {bits >> 2 & 1, bits >> 1 & 1, bits & 1};
        bool ok = true;
        for (int i = 0; i < 3; ++i) ok = ok && !(n[i] == 1 && d[i] == 1);
        if (!ok) continue;
        long c = d[0] + d[1] - d[2];
        Node m{d[0], d[1], d[2], n[4] + c, n[3] + n[4] + 2 * c};
        if (std::abs(m[3]) > bound || std::abs(m[4]) > bound) continue;
        succ[n].push_back(m);
        if (seen.insert(m).second) next.push_back(m);
      }
    frontier = std::move(next);
  }
  std::set<Node> live;
  for (const Node& n : seen)
    if (n[3] == 0) live.insert(n);
  for (bool grew = true; grew;) {
    grew = false;
    for (const Node& n : seen)
      if (!live.count(n))
        for (const Node& m : succ[n])
          if (live.count(m)) {
            live.insert(n);
            grew = true;
            break;
          }
  }
  return live.size();
}

// Random sequence automaton over one track.
SeqAutomaton random_seqauto(std::mt19937& rng, const IntPolynomial& ann) {
  std::uniform_int_distribution<int> states(2, 4), small(-3, 3);
  std::uniform_real_distribution<double> coin(0, 1);
  const std::size_t n = static_cast<std::size_t>(states(rng));
  SeqAutomaton a(Alphabet(std::vector<unsigned>{3}), ann);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t q = 0; q < n; ++q) a.add_state({}, coin(rng) < 0.5);
  for (std::size_t q = 0; q < n; ++q)
    for (Symbol s = 0; s < 3; ++s) {
      if (coin(rng) < 0.2) continue;
      std::vector<Integer> w;
      for (int i = 0; i < ann.degree(); ++i) w.emplace_back(small(rng));
      a.set_transition(q, s, pick(rng), w);
    }
  return a;
}

// Follows u as long as transitions exist.
Word defined_prefix(const SeqAutomaton& a, std::size_t q, const Word& u) {
  Word out;
  for (Symbol s : u) {
    std::size_t t = a.next(q, s);
    if (t == Dfa::kNone) break;
    out.push_back(s);
    q = t;
  }
  return out;
}

}  // namespace

TEST_CASE("pi_word") {
  auto psi = system_of(kPsi);
  const auto& a = psi.weighted;
  CHECK(pi_word(a, a.initial(), {}).is_zero());
  CHECK(pi_word(a, a.initial(), word("2001")).term(0) == 17);
  CHECK(pi_word(a, a.initial(), word("10")).term(0) == 3);
  CHECK_THROWS_WITH_AS(pi_word(a, a.initial(), word("12")), doctest::Contains("position 1"), Error);
}

TEST_CASE("linear_combination") {
  auto z = load_seqauto("zeckendorf.seqauto");
  auto single = linear_combination({{1, z}});
  CHECK(single.size() == z.size());
  for (std::size_t q = 0; q < z.size(); ++q)
    for (Symbol s = 0; s < z.symbols(); ++s) {
      CHECK(single.next(q, s) == z.next(q, s));
      if (z.next(q, s) != Dfa::kNone) CHECK(single.weight_vector(q, s) == z.weight_vector(q, s));
    }

  auto zero = linear_combination({{0, z}});
  for (std::size_t q = 0; q < z.size(); ++q)
    for (Symbol s = 0; s < z.symbols(); ++s)
      if (zero.next(q, s) != Dfa::kNone) CHECK(LinRecSeq(zero.annihilator(), zero.weight_vector(q, s)).is_zero());

  // Every edge of the Zeckendorf addition automaton, as drawn: (source,
  // label, target, coefficient of F).
  const std::vector<std::tuple<std::string, std::string, std::string, int>> figure = {
      {"aaa", "000", "aaa", 0},  {"aaa", "111", "bbb", 1},  {"aaa", "011", "abb", 0},  {"aaa", "100", "baa", 1},
      {"aaa", "001", "aab", -1}, {"aaa", "010", "aba", 1},  {"aaa", "101", "bab", 0},  {"aaa", "110", "bba", 2},
      {"aab", "000", "aaa", 0},  {"aab", "110", "bba", 2},  {"aab", "010", "aba", 1},  {"aab", "100", "baa", 1},
      {"aba", "000", "aaa", 0},  {"aba", "101", "bab", 0},  {"aba", "001", "aab", -1}, {"aba", "100", "baa", 1},
      {"abb", "000", "aaa", 0},  {"abb", "100", "baa", 1},  {"baa", "011", "abb", 0},  {"baa", "000", "aaa", 0},
      {"baa", "010", "aba", 1},  {"baa", "001", "aab", -1}, {"bab", "000", "aaa", 0},  {"bab", "010", "aba", 1},
      {"bba", "001", "aab", -1}, {"bba", "000", "aaa", 0},  {"bbb", "000", "aaa", 0}};
  auto sum = zzz();
  CHECK(sum.size() == 8);
  std::map<std::string, std::size_t> by_name;
  for (std::size_t q = 0; q < sum.size(); ++q) by_name[sum.name(q)] = q;
  CHECK(sum.name(sum.initial()) == "aaa");
  std::size_t edges = 0;
  for (std::size_t q = 0; q < sum.size(); ++q)
    for (Symbol s = 0; s < sum.symbols(); ++s) edges += sum.next(q, s) != Dfa::kNone;
  CHECK(edges == figure.size());
  for (const auto& [from, label, to, c] : figure) {
    CAPTURE(from);
    CAPTURE(label);
    std::size_t q = by_name.at(from);
    Symbol s = sum.alphabet().encode(parse_digits(label));
    REQUIRE(sum.next(q, s) != Dfa::kNone);
    CHECK(sum.name(sum.next(q, s)) == to);
    CHECK(sum.weight_vector(q, s) == std::vector<Integer>{c, 2 * c});
  }
}

TEST_CASE("linear_combination unifies annihilators") {
  auto b2 = base_k(2), b3 = base_k(3);
  auto mix = linear_combination({{1, b2}, {-1, b3}});
  CHECK(mix.annihilator() == IntPolynomial{6, -5, 1});
  Word w = pack_tracks(mix.alphabet(), {{1, 0, 1}, {1, 2}});
  CHECK(pi_word(mix, mix.initial(), w).term(0) == 5 - 5);
  CHECK(l0_member(mix, w));
}

TEST_CASE("pad_closure") {
  auto psi = system_of(kPsi);
  auto p = pad_closure(psi.weighted);
  CHECK_FALSE(p.added);
  CHECK(p.pad == 0);

  auto z = load_seqauto("zeckendorf.seqauto");
  auto pz = pad_closure(z);
  CHECK_FALSE(pz.added);
  CHECK(pz.pad == 0);

  // Initial 0-transition leaves the initial state.
  SeqAutomaton s(Alphabet(std::vector<unsigned>{2}), IntPolynomial{-2, 1});
  s.add_state("p", true);
  s.add_state("r", true);
  s.set_transition(0, 0, 1, std::vector<Integer>{0});
  s.set_transition(0, 1, 0, std::vector<Integer>{1});
  s.set_transition(1, 0, 1, std::vector<Integer>{0});
  auto ps = pad_closure(s);
  CHECK(ps.added);
  CHECK(ps.automaton.alphabet().radix == std::vector<unsigned>{3});
  CHECK(ps.automaton.alphabet().label(ps.pad) == "#");
  CHECK(ps.automaton.next(0, ps.pad) == 0);
  CHECK(pi_word(ps.automaton, 0, Word{ps.pad, ps.pad, 1, 0}).term(0) == 2);
  // Old symbols keep their meaning.
  for (const auto& u : all_words(2, 5)) CHECK(l0_member(ps.automaton, u, 3) == l0_member(s, u, 3));
}

TEST_CASE("flatten") {
  SUBCASE("Zeckendorf addition") {
    const std::size_t expected = zeckendorf_flattening_oracle(40);
    CHECK(expected == zeckendorf_flattening_oracle(80));
    FlattenStats stats;
    Dfa f = flatten(zzz(), fibonacci_bounds(2), 0, kDefaultStateCap, &stats);
    CHECK(f.size() == expected);
    CHECK(stats.trimmed == expected);
    CHECK(stats.untrimmed >= 15);
    CHECK(stats.explored == stats.untrimmed);
    CHECK_FALSE(validate_flattening(zzz(), f, 0, 10).has_value());
  }
  SUBCASE("Zeckendorf alone accepts exactly 0*") {
    auto z = load_seqauto("zeckendorf.seqauto");
    Dfa f = flatten(z, fibonacci_bounds(1), 0);
    for (std::size_t len = 0; len <= 8; ++len)
      for (const auto& u : all_words(2, len)) {
        bool zeros = std::all_of(u.begin(), u.end(), [](Symbol s) { return s == 0; });
        CHECK(accepts(f, u) == zeros);
        CHECK(l0_member(z, u) == zeros);
      }
  }
  SUBCASE("zero bounds keep only all-zero vectors") {
    auto sum = zzz();
    Dfa f = flatten(sum, {0, 0}, 0);
    for (std::size_t len = 0; len <= 5; ++len)
      for (const auto& u : all_words(sum.symbols(), len)) {
        bool all_zero = true;
        std::size_t q = sum.initial();
        LinRecSeq acc = LinRecSeq::zero(sum.annihilator());
        for (Symbol s : u) {
          if (q == Dfa::kNone || sum.next(q, s) == Dfa::kNone) {
            all_zero = false;
            break;
          }
          acc = acc.shift() + sum.weight(q, s);
          q = sum.next(q, s);
          all_zero = all_zero && acc.is_zero();
        }
        CHECK(accepts(f, u) == (all_zero && q != Dfa::kNone && sum.accepting(q)));
      }
  }
  SUBCASE("nonzero target") {
    auto z = load_seqauto("zeckendorf.seqauto");
    Dfa f = flatten(z, fibonacci_bounds(1), 4);
    CHECK(accepts(f, word("101")));
    CHECK(accepts(f, word("0101")));
    CHECK_FALSE(accepts(f, word("100")));
    CHECK_FALSE(validate_flattening(z, f, 4, 10).has_value());
  }
  SUBCASE("state cap") {
    CHECK_THROWS_AS(flatten(zzz(), fibonacci_bounds(2), 0, 5), BoundExplosion);
    try {
      flatten(zzz(), fibonacci_bounds(2), 0, 5);
    } catch (const BoundExplosion& e) {
      CHECK(e.cap() == 5);
      CHECK(std::string(e.what()).find("bound explosion") != std::string::npos);
    }
  }
  SUBCASE("too small bounds are caught by validation") {
    Dfa f = flatten(zzz(), {1, 1}, 0);
    auto bad = validate_flattening(zzz(), f, 0, 10);
    REQUIRE(bad.has_value());
    CHECK(l0_member(zzz(), *bad) != accepts(f, *bad));
  }
}

TEST_CASE("l0_member") {
  auto z = load_seqauto("zeckendorf.seqauto");
  CHECK(l0_member(z, {}));
  auto sum = zzz();
  const auto& al = sum.alphabet();
  // 1 + 1 = 2: ("01", "01", "10")
  CHECK(l0_member(sum, pack_tracks(al, {{0, 1}, {0, 1}, {1, 0}})));
  // 1 + 1 = 3: ("01", "01", "100")
  CHECK_FALSE(l0_member(sum, pack_tracks(al, {{1}, {1}, {1, 0, 0}})));
}

TEST_CASE("properties: decomposition law") {
  std::mt19937 rng(5);
  const std::vector<IntPolynomial> anns = {IntPolynomial{-1, -1, 1}, IntPolynomial{-2, 1},
                                           IntPolynomial{1, -1, -2, 1}, IntPolynomial{0, -2, 1}};
  for (int trial = 0; trial < 60; ++trial) {
    const auto& ann = anns[static_cast<std::size_t>(trial) % anns.size()];
    auto a = random_seqauto(rng, ann);
    for (int i = 0; i < 20; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, a.size() - 1);
      std::size_t q = pick(rng);
      Word uv = defined_prefix(a, q, random_word(rng, 3, 10));
      std::uniform_int_distribution<std::size_t> cut(0, uv.size());
      std::size_t k = cut(rng);
      Word u(uv.begin(), uv.begin() + static_cast<long>(k)), v(uv.begin() + static_cast<long>(k), uv.end());
      std::size_t mid = a.underlying().run(u, q);
      auto lhs = pi_word(a, q, uv);
      auto rhs = pi_word(a, q, u).shift(v.size()) + pi_word(a, mid, v);
      const std::size_t m = a.order();
      CHECK(lhs.terms(2 * m) == rhs.terms(2 * m));
    }
  }
}

TEST_CASE("properties: linear-combination law") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto a = random_seqauto(rng, IntPolynomial{-1, -1, 1});
    auto b = random_seqauto(rng, IntPolynomial{-2, 1});
    std::uniform_int_distribution<int> coeff(-3, 3);
    Integer ca = coeff(rng), cb = coeff(rng);
    auto c = linear_combination({{ca, a}, {cb, b}});
    for (int i = 0; i < 30; ++i) {
      Word wa = defined_prefix(a, a.initial(), random_word(rng, 3, 8));
      Word wb = defined_prefix(b, b.initial(), random_word(rng, 3, 8));
      std::size_t len = std::min(wa.size(), wb.size());
      wa.resize(len);
      wb.resize(len);
      Word w = pack_tracks(c.alphabet(), {Digits(wa.begin(), wa.end()), Digits(wb.begin(), wb.end())});
      Integer expected = ca * pi_word(a, a.initial(), wa).term(0) + cb * pi_word(b, b.initial(), wb).term(0);
      CHECK(pi_word(c, c.initial(), w).term(0) == expected);
    }
  }
}

TEST_CASE("properties: bound insensitivity") {
  auto sum = zzz();
  auto bounds = fibonacci_bounds(2);
  std::vector<Integer> doubled;
  for (const auto& b : bounds) doubled.push_back(2 * b);
  CHECK(isomorphic(minimize(flatten(sum, bounds, 0)), minimize(flatten(sum, doubled, 0))));
  auto b2 = linear_combination({{1, base_k(2)}, {1, base_k(2)}, {-1, base_k(2)}});
  CHECK(isomorphic(minimize(flatten(b2, {4}, 0)), minimize(flatten(b2, {8}, 0))));
}

TEST_CASE("text format") {
  auto z = load_seqauto("zeckendorf.seqauto");
  CHECK(z.size() == 2);
  CHECK(z.annihilator() == IntPolynomial{-1, -1, 1});
  CHECK(z.alphabet().radix == std::vector<unsigned>{2});
  CHECK(z.weight_vector(0, 1) == std::vector<Integer>{1, 2});
  auto again = parse_seqauto(write_seqauto(z));
  CHECK(write_seqauto(again) == write_seqauto(z));

  auto pairsum = load_seqauto("pairsum.seqauto");
  CHECK(pairsum.size() == 8);
  CHECK(pairsum.alphabet().radix == std::vector<unsigned>{4});

  CHECK_THROWS_AS(parse_seqauto("states: a\ninitial: a\n"), ParseError);
  CHECK_THROWS_AS(parse_seqauto("annihilator: -1 2\nstates: a\ninitial: a\n"), ParseError);
  CHECK_THROWS_WITH_AS(parse_seqauto("annihilator: -2 1\nstates: a\ninitial: a\ntrans: a 0 b 0\n"),
                       doctest::Contains("unknown state"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_seqauto("annihilator: -2 1\nstates: a\ninitial: a\ntrans: a 0 a 0\ntrans: a 0 a 1\n"),
      doctest::Contains("nondeterministic"), ParseError);
  CHECK_THROWS_AS(parse_seqauto("annihilator: -2 1\nstates: a\ninitial: a\ntrans: a 0 a 0,1\n"), ParseError);
}

TEST_CASE("properties: flattening agrees with l0_member") {
  std::mt19937 rng(11);
  auto sum = zzz();
  Dfa f = flatten(sum, fibonacci_bounds(2), 0);
  for (std::size_t len = 0; len <= 5; ++len)
    for (const auto& u : all_words(sum.symbols(), len)) CHECK(accepts(f, u) == l0_member(sum, u));
  auto b2 = linear_combination({{1, base_k(2)}, {1, base_k(2)}, {-1, base_k(2)}});
  Dfa g = flatten(b2, {4}, 0);
  std::size_t hits = 0;
  for (int k = 0; k < 20000; ++k) {
    Word u = random_word(rng, 8, 10);
    const bool in = l0_member(sum, u);
    hits += in;
    CHECK(accepts(f, u) == in);
    CHECK(accepts(g, u) == l0_member(b2, u));
  }
  CHECK(hits > 0);
}
