#include <map>

#include "doctest.h"
#include "dtnum/error.hpp"
#include "dtnum/relations.hpp"
#include "support.hpp"

using namespace testing;

namespace {

// Oracle numeration: the accepted leading-zero-free words of a single-track
// sequence automaton ordered by value, found by exhaustive enumeration.
struct BruteNumeration {
  std::map<Integer, Digits> rep;

  BruteNumeration(const SeqAutomaton& a, std::size_t max_length) {
    for (std::size_t len = 1; len <= max_length; ++len)
      for (const auto& w : all_words(a.symbols(), len)) {
        if (len > 1 && w.front() == 0) continue;
        std::size_t q = a.underlying().run(w, a.initial());
        if (q == Dfa::kNone || !a.accepting(q)) continue;
        rep.emplace(pi_word(a, a.initial(), w).term(0), Digits(w.begin(), w.end()));
      }
  }
};

Word tuple(const Alphabet& al, std::vector<Digits> tracks) { return pack_tracks(al, std::move(tracks)); }

// Checks x + y = z exactly on all x, y < n using the brute-force numeration.
void check_addition_against(const Dfa& add, const BruteNumeration& num, long n) {
  for (long x = 0; x < n; ++x)
    for (long y = 0; y < n; ++y) {
      CAPTURE(x);
      CAPTURE(y);
      const auto& rx = num.rep.at(x);
      const auto& ry = num.rep.at(y);
      CHECK(accepts(add, tuple(add.alphabet(), {rx, ry, num.rep.at(x + y)})));
      CHECK_FALSE(accepts(add, tuple(add.alphabet(), {rx, ry, num.rep.at(x + y + 1)})));
      if (x + y > 0) CHECK_FALSE(accepts(add, tuple(add.alphabet(), {rx, ry, num.rep.at(x + y - 1)})));
    }
}

}  // namespace

TEST_CASE("reduce_annihilator") {
  auto psi = system_of(kPsi);
  auto blown = psi.weighted.rebased(psi.recurrence * IntPolynomial{-3, 1});
  CHECK(blown.annihilator().degree() == 3);
  auto reduced = reduce_annihilator(blown);
  CHECK(reduced.annihilator() == psi.recurrence);
  for (std::size_t q = 0; q < reduced.size(); ++q)
    for (Symbol s = 0; s < reduced.symbols(); ++s)
      if (reduced.next(q, s) != Dfa::kNone)
        CHECK(reduced.weight(q, s).terms(12) == psi.weighted.weight(q, s).terms(12));
}

TEST_CASE("coefficient_bound") {
  auto z = load_seqauto("zeckendorf.seqauto");
  auto cz = coefficient_bound(z);
  CHECK(cz.reference.initial() == std::vector<Integer>{1, 2});
  CHECK(cz.bound == 1);
  CHECK(cz.digit_span == 1);

  auto zzz = reduce_annihilator(linear_combination({{1, z}, {1, z}, {-1, z}}));
  CHECK(coefficient_bound(zzz).bound == 2);

  // Brute-force check of the general decomposition on tau.
  auto tau = system_of(kTau);
  auto ct = coefficient_bound(tau.weighted);
  const std::size_t m = tau.weighted.order();
  CHECK(ct.reference.initial().back() == 1);
  for (std::size_t q = 0; q < tau.weighted.size(); ++q)
    for (Symbol s = 0; s < tau.weighted.symbols(); ++s) {
      if (tau.weighted.next(q, s) == Dfa::kNone) continue;
      auto w = tau.weighted.weight(q, s).terms(12);
      // Search integer coordinates within the bound.
      bool found = false;
      std::vector<long> c(m, -ct.bound.get_si());
      while (!found) {
        bool match = true;
        for (std::size_t n = 0; n < 12 && match; ++n) {
          Integer sum = 0;
          for (std::size_t i = 0; i < m; ++i) sum += c[i] * ct.reference.term(n + i);
          match = sum == w[n];
        }
        found = match;
        std::size_t i = 0;
        while (i < m && c[i] == ct.bound.get_si()) c[i++] = -ct.bound.get_si();
        if (i == m) break;
        ++c[i];
      }
      CHECK(found);
    }
}

TEST_CASE("addition: Zeckendorf") {
  auto z = load_seqauto("zeckendorf.seqauto");
  auto r = addition_automaton(z);
  REQUIRE(r.certificate.has_value());
  CHECK(r.stats.trimmed == r.trimmed_states);
  CHECK_FALSE(validate_flattening(r.combined, r.automaton, 0, 9).has_value());
  check_addition_against(r.automaton, BruteNumeration(z, 10), 25);
  CHECK(r.automaton.size() <= r.trimmed_states);
  // Golden size of the minimal Zeckendorf adder, also pinned by msd_fib_addition.txt.
  CHECK(r.automaton.size() == 16);

  // The same system obtained from its substitution.
  auto fib = addition_automaton(system_of(kFibonacci));
  CHECK(isomorphic(fib.automaton, r.automaton));
  CHECK(fib.trimmed_states == r.trimmed_states);
}

TEST_CASE("addition: base 2") {
  auto r = addition_automaton(base_k(2));
  const auto& al = r.automaton.alphabet();
  CHECK(accepts(r.automaton, tuple(al, {{0, 1}, {0, 1}, {1, 0}})));
  CHECK_FALSE(accepts(r.automaton, tuple(al, {{0, 1}, {0, 1}, {1, 1}})));
  // The usual carry automaton.
  CHECK(r.automaton.size() == 2);
  check_addition_against(r.automaton, BruteNumeration(base_k(2), 8), 60);
}

TEST_CASE("addition: tau") {
  auto tau = system_of(kTau);
  auto r = addition_automaton(tau);
  CHECK(r.coefficients.digit_span >= 1);
  check_addition_against(r.automaton, BruteNumeration(tau.weighted, 7), 40);
}

TEST_CASE("addition: refusal outside the Pisot case") {
  auto psi = system_of(kPsi);
  CHECK_THROWS_WITH_AS(addition_automaton(psi), doctest::Contains("X^2 - X - 2"), NotPisotError);
  BoundSpec manual{BoundMode::manual, 0};
  CHECK_THROWS_AS(addition_automaton(psi, manual), Error);
}

TEST_CASE("addition: manual bound on a Pisot system") {
  auto z = load_seqauto("zeckendorf.seqauto");
  auto pisot = addition_automaton(z);
  BoundSpec manual{BoundMode::manual, 8};
  auto r = addition_automaton(z, manual);
  CHECK(r.bounds.size() == 2);
  CHECK(r.bounds[1] >= r.bounds[0]);
  CHECK(isomorphic(r.automaton, pisot.automaton));
}

TEST_CASE("linear constraints") {
  auto b2 = base_k(2);
  auto eq = linear_constraint_automaton(b2, ConstraintSpec{{1, -1}, 0}).automaton;
  BruteNumeration num(b2, 8);
  for (long x = 0; x <= 100; ++x) {
    CHECK(accepts(eq, tuple(eq.alphabet(), {num.rep.at(x), num.rep.at(x)})));
    CHECK_FALSE(accepts(eq, tuple(eq.alphabet(), {num.rep.at(x), num.rep.at(x + 1)})));
  }

  auto z = load_seqauto("zeckendorf.seqauto");
  auto same = linear_constraint_automaton(z, ConstraintSpec{{1, 1, -1}, 0});
  CHECK(isomorphic(same.automaton, addition_automaton(z).automaton));

  auto diff2 = linear_constraint_automaton(z, ConstraintSpec{{1, -1}, 2}).automaton;
  CHECK(accepts(diff2, tuple(diff2.alphabet(), {{1, 0, 1}, {0, 1, 0}})));
  CHECK_FALSE(accepts(diff2, tuple(diff2.alphabet(), {{1, 0, 1}, {1, 0, 0}})));
  BruteNumeration zn(z, 9);
  for (long x = 0; x < 30; ++x)
    for (long y = 0; y < 30; ++y)
      CHECK(accepts(diff2, tuple(diff2.alphabet(), {zn.rep.at(x), zn.rep.at(y)})) == (x - y == 2));

  // 2x = y + 1 over base 3.
  auto b3 = base_k(3);
  auto odd = linear_constraint_automaton(b3, ConstraintSpec{{2, -1}, -1}).automaton;
  BruteNumeration n3(b3, 6);
  for (long x = 0; x < 40; ++x)
    for (long y = 0; y < 80; ++y)
      CHECK(accepts(odd, tuple(odd.alphabet(), {n3.rep.at(x), n3.rep.at(y)})) == (2 * x == y - 1));

  CHECK_THROWS_AS(linear_constraint_automaton(b2, ConstraintSpec{{0, 0}, 0}), Error);
  CHECK_THROWS_AS(linear_constraint_automaton(b2, ConstraintSpec{{}, 0}), Error);
}

TEST_CASE("radix order") {
  for (const char* text : {kPsi, kTau, kThueMorse}) {
    CAPTURE(text);
    auto sys = system_of(text);
    Dfa le = radix_order_automaton(sys);
    CHECK(accepts(le, tuple(le.alphabet(), {rep(sys, 3), rep(sys, 5)})));
    CHECK_FALSE(accepts(le, tuple(le.alphabet(), {rep(sys, 5), rep(sys, 3)})));
    for (long x = 0; x < 50; ++x)
      for (long y = 0; y < 50; ++y) CHECK(accepts(le, tuple(le.alphabet(), {rep(sys, x), rep(sys, y)})) == (x <= y));
  }
  auto z = load_seqauto("zeckendorf.seqauto");
  Dfa le = radix_order_automaton(z);
  BruteNumeration zn(z, 9);
  auto eq = linear_constraint_automaton(z, ConstraintSpec{{1, -1}, 0}).automaton;
  for (long x = 0; x < 40; ++x)
    for (long y = 0; y < 40; ++y) {
      Word w = tuple(le.alphabet(), {zn.rep.at(x), zn.rep.at(y)});
      Word v = tuple(le.alphabet(), {zn.rep.at(y), zn.rep.at(x)});
      CHECK(accepts(le, w) == (x <= y));
      CHECK((accepts(le, w) && accepts(le, v)) == accepts(eq, w));
    }
}

TEST_CASE("properties: zero-padding invariance") {
  auto z = load_seqauto("zeckendorf.seqauto");
  auto tau = system_of(kTau);
  std::mt19937 rng(17);
  for (const Dfa& d : {addition_automaton(z).automaton, addition_automaton(tau).automaton}) {
    std::size_t accepted = 0;
    for (int i = 0; i < 1000; ++i) {
      Word w = random_word(rng, d.symbols(), 10);
      // Bias half the samples towards accepted words by walking the automaton.
      if (i % 2 == 0) {
        w.clear();
        std::size_t q = d.initial();
        std::uniform_int_distribution<Symbol> sym(0, static_cast<Symbol>(d.symbols() - 1));
        for (int step = 0; step < 12; ++step) {
          std::vector<Symbol> live;
          for (Symbol s = 0; s < d.symbols(); ++s)
            if (d.next(q, s) != Dfa::kNone) live.push_back(s);
          if (live.empty()) break;
          Symbol s = live[sym(rng) % live.size()];
          w.push_back(s);
          q = d.next(q, s);
        }
      }
      Word padded = w;
      padded.insert(padded.begin(), 0);
      bool a = accepts(d, w);
      accepted += a;
      CHECK(a == accepts(d, padded));
    }
    CHECK(accepted > 0);
  }
}

TEST_CASE("degenerate automaton fails loudly") {
  auto pairsum = load_seqauto("pairsum.seqauto");
  auto reduced = reduce_annihilator(pairsum);
  for (long b : {4L, 16L, 64L, 256L}) {
    CAPTURE(b);
    std::vector<Integer> bounds = relation_bounds(reduced, BoundSpec{BoundMode::manual, b});
    Dfa f;
    try {
      f = flatten(reduced, bounds, 0, 5000);
    } catch (const BoundExplosion&) {
      continue;
    }
    CHECK(validate_flattening(reduced, f, 0, 24).has_value());
  }
  // Pisot mode refuses the degenerate recurrence.
  CHECK_THROWS_AS(relation_bounds(reduced, BoundSpec{}), NotPisotError);
}
