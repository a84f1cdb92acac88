#include "dtnum/relations.hpp"

#include <algorithm>

#include "dtnum/error.hpp"

namespace dtnum {

SeqAutomaton reduce_annihilator(const SeqAutomaton& a) {
  IntPolynomial r = IntPolynomial::one();
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Symbol s = 0; s < a.symbols(); ++s)
      if (a.next(q, s) != Dfa::kNone) r = poly_lcm(r, minimal_annihilator(a.weight(q, s)));
  if (r == a.annihilator()) return a;

  SeqAutomaton out(a.alphabet(), r);
  for (std::size_t q = 0; q < a.size(); ++q) out.add_state(a.name(q), a.accepting(q));
  out.set_initial(a.initial());
  const auto m = static_cast<std::size_t>(r.degree());
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Symbol s = 0; s < a.symbols(); ++s)
      if (a.next(q, s) != Dfa::kNone) out.set_transition(q, s, a.next(q, s), a.weight(q, s).terms(m));
  return out;
}

namespace {

Integer content(const std::vector<Integer>& v) {
  Integer g = 0;
  for (const auto& x : v) g = gcd(g, Integer(abs(x)));
  return g;
}

// c with v = c * r, when it exists and is an integer.
std::optional<Integer> integer_multiple(const std::vector<Integer>& v, const std::vector<Integer>& r) {
  std::size_t pivot = 0;
  while (pivot < r.size() && r[pivot] == 0) ++pivot;
  if (pivot == r.size() || v[pivot] % r[pivot] != 0) return std::nullopt;
  Integer c = v[pivot] / r[pivot];
  for (std::size_t i = 0; i < r.size(); ++i)
    if (v[i] != c * r[i]) return std::nullopt;
  return c;
}

std::optional<CoefficientBound> scalar_bound(const SeqAutomaton& a) {
  std::vector<const std::vector<Integer>*> weights;
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Symbol s = 0; s < a.symbols(); ++s)
      if (a.next(q, s) != Dfa::kNone) {
        const auto& w = a.weight_vector(q, s);
        if (content(w) != 0) weights.push_back(&w);
      }
  if (weights.empty()) return std::nullopt;

  std::vector<Integer> r = *weights.front();
  const Integer g = content(r);
  for (auto& x : r) x /= g;
  LinRecSeq reference(a.annihilator(), r);
  if (minimal_annihilator(reference) != a.annihilator()) return std::nullopt;

  Integer bound = 0;
  for (const auto* w : weights) {
    auto c = integer_multiple(*w, r);
    if (!c) return std::nullopt;
    bound = std::max(bound, Integer(abs(*c)));
  }
  return CoefficientBound{reference, bound, 1};
}

Rational rational_pow(const Rational& x, std::size_t e) {
  Rational out = 1;
  for (std::size_t i = 0; i < e; ++i) out *= x;
  return out;
}

// Upper bound on the largest root modulus, when the roots can be isolated.
std::optional<Rational> dominant_root_upper(const IntPolynomial& p) {
  const IntPolynomial rest = strip_shift_factor(p).rest;
  if (rest.degree() < 1) return std::nullopt;
  if (poly_gcd(rest, rest.derivative()).degree() > 0) return std::nullopt;
  try {
    auto roots = isolate_roots(rest);
    Rational hi = 0;
    for (const auto& r : roots) hi = std::max(hi, r.disk.abs_upper(kStartPrecisionBits));
    return hi;
  } catch (const Error&) {
    return std::nullopt;
  }
}

}  // namespace

CoefficientBound coefficient_bound(const SeqAutomaton& a) {
  if (auto scalar = scalar_bound(a)) return *scalar;

  const LinRecSeq reference = LinRecSeq::impulse(a.annihilator());
  Rational c = 0;
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Symbol s = 0; s < a.symbols(); ++s)
      if (a.next(q, s) != Dfa::kNone)
        for (const auto& x : hankel_coordinates(a.weight(q, s), reference)) c = std::max(c, Rational(abs(x)));
  return CoefficientBound{reference, ceil(c), a.order()};
}

std::vector<Integer> relation_bounds(const SeqAutomaton& a, const BoundSpec& mode,
                                     std::optional<PisotCertificate>* certificate) {
  const std::size_t m = a.order();
  if (mode.mode == BoundMode::manual) {
    if (mode.manual_bound <= 0) throw Error("manual bound must be positive");
    std::vector<Integer> bounds;
    auto theta = dominant_root_upper(a.annihilator());
    for (std::size_t i = 0; i < m; ++i)
      bounds.push_back(theta ? ceil(Rational(mode.manual_bound) * rational_pow(std::max(*theta, Rational(1)), i))
                             : mode.manual_bound);
    return bounds;
  }

  if (m == 0) return {};
  auto up = is_ultimately_pisot(a.annihilator());
  if (!up) throw NotPisotError("recurrence polynomial " + a.annihilator().to_string() + " is not ultimately Pisot");
  const CoefficientBound cb = coefficient_bound(a);
  PisotCertificate cert = flattening_bounds(*up, cb.reference, cb.bound, cb.digit_span);
  auto bounds = cert.coordinate_bounds;
  if (certificate) *certificate = std::move(cert);
  return bounds;
}

RelationResult linear_constraint_automaton(const SeqAutomaton& base, const ConstraintSpec& spec,
                                           const BoundSpec& mode) {
  if (spec.coefficients.empty()) throw Error("linear constraint needs at least one coefficient");
  if (std::all_of(spec.coefficients.begin(), spec.coefficients.end(), [](const Integer& c) { return c == 0; }))
    throw Error("linear constraint coefficients are all zero");

  const SeqAutomaton padded = pad_closure(reduce_annihilator(base)).automaton;
  std::vector<std::pair<Integer, SeqAutomaton>> parts;
  for (const auto& c : spec.coefficients) parts.emplace_back(c, padded);

  RelationResult out;
  out.combined = reduce_annihilator(linear_combination(parts));
  out.bounds = relation_bounds(out.combined, mode, &out.certificate);
  if (out.combined.order() > 0) out.coefficients = coefficient_bound(out.combined);
  Dfa flat = flatten(out.combined, out.bounds, spec.rhs, mode.state_cap, &out.stats);
  out.trimmed_states = out.stats.trimmed;
  out.automaton = minimize(flat);
  return out;
}

RelationResult linear_constraint_automaton(const DtnsSystem& sys, const ConstraintSpec& spec, const BoundSpec& mode) {
  return linear_constraint_automaton(sys.weighted, spec, mode);
}

RelationResult addition_automaton(const SeqAutomaton& base, const BoundSpec& mode) {
  return linear_constraint_automaton(base, ConstraintSpec{{1, 1, -1}, 0}, mode);
}

RelationResult addition_automaton(const DtnsSystem& sys, const BoundSpec& mode) {
  return addition_automaton(sys.weighted, mode);
}

Dfa radix_order_automaton(const SeqAutomaton& base) {
  if (base.alphabet().arity() != 1) throw Error("radix order needs a single-track numeration automaton");
  const PadClosure pc = pad_closure(base);
  const Dfa track = pc.automaton.underlying();
  const Alphabet& one = track.alphabet();
  const Alphabet pair = concat({one, one});
  const std::size_t n = track.size();

  // Comparison so far: 0 equal, 1 less, 2 greater.
  auto rank = [&](Symbol s) { return pc.added && s == pc.pad ? -1L : static_cast<long>(s); };
  Dfa out(pair, n * n * 3);
  auto id = [&](std::size_t p, std::size_t q, std::size_t cmp) { return (p * n + q) * 3 + cmp; };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t cmp = 0; cmp < 3; ++cmp) {
        const std::size_t from = id(p, q, cmp);
        out.set_accepting(from, track.accepting(p) && track.accepting(q) && cmp != 2);
        for (Symbol x = 0; x < one.size(); ++x)
          for (Symbol y = 0; y < one.size(); ++y) {
            const std::size_t tp = track.next(p, x), tq = track.next(q, y);
            if (tp == Dfa::kNone || tq == Dfa::kNone) continue;
            std::size_t next = cmp;
            if (cmp == 0 && rank(x) != rank(y)) next = rank(x) < rank(y) ? 1 : 2;
            out.set_transition(from, pair.encode({x, y}), id(tp, tq, next));
          }
      }
  out.set_initial(id(track.initial(), track.initial(), 0));
  return minimize(out);
}

Dfa radix_order_automaton(const DtnsSystem& sys) { return radix_order_automaton(sys.weighted); }

}  // namespace dtnum
