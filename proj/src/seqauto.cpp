#include "dtnum/seqauto.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

#include "dtnum/error.hpp"

namespace dtnum {

SeqAutomaton::SeqAutomaton(Alphabet alphabet, IntPolynomial annihilator, std::size_t states)
    : alphabet_(std::move(alphabet)), annihilator_(std::move(annihilator)), symbols_(alphabet_.size()) {
  if (!annihilator_.is_monic()) throw Error("sequence automaton annihilator must be monic: " + annihilator_.to_string());
  for (std::size_t i = 0; i < states; ++i) add_state();
}

std::size_t SeqAutomaton::add_state(std::string name, bool accepting) {
  if (name.empty()) name = "q" + std::to_string(size());
  names_.push_back(std::move(name));
  accepting_.push_back(accepting);
  delta_.resize(delta_.size() + symbols_, Dfa::kNone);
  weights_.resize(weights_.size() + symbols_);
  return size() - 1;
}

void SeqAutomaton::set_transition(std::size_t from, Symbol s, std::size_t to, const LinRecSeq& weight) {
  if (weight.annihilator() == annihilator_) {
    set_transition(from, s, to, weight.initial());
    return;
  }
  if (!divides(weight.annihilator(), annihilator_))
    throw Error("weight annihilator " + weight.annihilator().to_string() + " does not divide " +
                annihilator_.to_string());
  set_transition(from, s, to, weight.rebased(annihilator_).initial());
}

void SeqAutomaton::set_transition(std::size_t from, Symbol s, std::size_t to, std::vector<Integer> weight_initial) {
  if (from >= size() || to >= size() || s >= symbols_) throw Error("transition out of range");
  if (weight_initial.size() != order())
    throw Error("weight has " + std::to_string(weight_initial.size()) + " initial terms, annihilator needs " +
                std::to_string(order()));
  delta_[from * symbols_ + s] = to;
  weights_[from * symbols_ + s] = std::move(weight_initial);
}

const std::vector<Integer>& SeqAutomaton::weight_vector(std::size_t from, Symbol s) const {
  if (next(from, s) == Dfa::kNone)
    throw Error("no transition from state " + name(from) + " on " + alphabet_.label(s));
  return weights_[from * symbols_ + s];
}

SeqAutomaton SeqAutomaton::rebased(const IntPolynomial& multiple) const {
  if (multiple == annihilator_) return *this;
  SeqAutomaton out(alphabet_, multiple);
  for (std::size_t q = 0; q < size(); ++q) out.add_state(names_[q], accepting(q));
  out.set_initial(initial_);
  for (std::size_t q = 0; q < size(); ++q)
    for (Symbol s = 0; s < symbols_; ++s)
      if (next(q, s) != Dfa::kNone) out.set_transition(q, s, next(q, s), weight(q, s).rebased(multiple));
  return out;
}

Dfa SeqAutomaton::underlying() const {
  Dfa d(alphabet_, size());
  for (std::size_t q = 0; q < size(); ++q) {
    d.set_accepting(q, accepting(q));
    for (Symbol s = 0; s < symbols_; ++s) d.set_transition(q, s, next(q, s));
  }
  d.set_initial(initial_);
  return d;
}

LinRecSeq pi_word(const SeqAutomaton& a, std::size_t q, const Word& u) {
  LinRecSeq acc = LinRecSeq::zero(a.annihilator());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] >= a.symbols()) throw Error("symbol at position " + std::to_string(i) + " outside the alphabet");
    std::size_t t = a.next(q, u[i]);
    if (t == Dfa::kNone)
      throw Error("undefined transition at position " + std::to_string(i) + " (state " + a.name(q) + ", symbol " +
                  a.alphabet().label(u[i]) + ")");
    acc = acc.shift() + a.weight(q, u[i]);
    q = t;
  }
  return acc;
}

SeqAutomaton linear_combination(const std::vector<std::pair<Integer, SeqAutomaton>>& parts) {
  if (parts.empty()) throw Error("linear combination of no automata");
  IntPolynomial ann = IntPolynomial::one();
  for (const auto& [c, a] : parts) ann = poly_lcm(ann, a.annihilator());
  std::vector<SeqAutomaton> base;
  std::vector<Alphabet> alphabets;
  bool long_names = false;
  for (const auto& [c, a] : parts) {
    base.push_back(a.rebased(ann));
    alphabets.push_back(a.alphabet());
    for (std::size_t q = 0; q < a.size(); ++q) long_names = long_names || a.name(q).size() > 1;
  }
  SeqAutomaton out(concat(alphabets), ann);
  const std::size_t m = out.order();

  std::size_t total = 1;
  for (const auto& a : base) total *= a.size();
  std::vector<std::size_t> state(base.size()), sub(base.size());
  auto decode_state = [&](std::size_t index) {
    for (std::size_t i = base.size(); i-- > 0;) {
      state[i] = index % base[i].size();
      index /= base[i].size();
    }
  };
  for (std::size_t index = 0; index < total; ++index) {
    decode_state(index);
    std::string name;
    bool acc = true;
    for (std::size_t i = 0; i < base.size(); ++i) {
      if (long_names && i > 0) name += ',';
      name += base[i].name(state[i]);
      acc = acc && base[i].accepting(state[i]);
    }
    out.add_state(long_names ? "(" + name + ")" : name, acc);
  }
  for (std::size_t index = 0; index < total; ++index) {
    decode_state(index);
    for (Symbol s = 0; s < out.symbols(); ++s) {
      std::size_t rest = s;
      for (std::size_t i = base.size(); i-- > 0;) {
        sub[i] = rest % base[i].symbols();
        rest /= base[i].symbols();
      }
      std::size_t to = 0;
      bool defined = true;
      std::vector<Integer> w(m, 0);
      for (std::size_t i = 0; i < base.size() && defined; ++i) {
        std::size_t t = base[i].next(state[i], static_cast<Symbol>(sub[i]));
        if (t == Dfa::kNone) {
          defined = false;
          break;
        }
        to = to * base[i].size() + t;
        const auto& wi = base[i].weight_vector(state[i], static_cast<Symbol>(sub[i]));
        for (std::size_t j = 0; j < m; ++j) w[j] += parts[i].first * wi[j];
      }
      if (defined) out.set_transition(index, s, to, std::move(w));
    }
  }
  std::size_t init = 0;
  for (const auto& a : base) init = init * a.size() + a.initial();
  out.set_initial(init);
  return out;
}

PadClosure pad_closure(const SeqAutomaton& a) {
  const std::size_t q0 = a.initial();
  if (a.next(q0, 0) == q0) {
    const auto& w = a.weight_vector(q0, 0);
    if (std::all_of(w.begin(), w.end(), [](const Integer& x) { return x == 0; })) return PadClosure{a, 0, false};
  }
  Alphabet wide = a.alphabet();
  for (std::size_t t = 0; t < wide.arity(); ++t) {
    wide.pad_mark[t] = static_cast<int>(wide.radix[t]);
    wide.radix[t] += 1;
  }
  SeqAutomaton out(wide, a.annihilator());
  for (std::size_t q = 0; q < a.size(); ++q) out.add_state(a.name(q), a.accepting(q));
  out.set_initial(q0);
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Symbol s = 0; s < a.symbols(); ++s)
      if (a.next(q, s) != Dfa::kNone)
        out.set_transition(q, wide.encode(a.alphabet().decode(s)), a.next(q, s), a.weight_vector(q, s));
  Digits pad_digits(wide.arity());
  for (std::size_t t = 0; t < wide.arity(); ++t) pad_digits[t] = static_cast<unsigned>(wide.pad_mark[t]);
  const Symbol pad = wide.encode(pad_digits);
  out.set_transition(q0, pad, q0, std::vector<Integer>(a.order(), 0));
  return PadClosure{std::move(out), pad, true};
}

// --- flattening -------------------------------------------------------------

namespace {

using i128 = __int128;
constexpr std::int64_t kMachineLimit = std::int64_t{1} << 62;

std::int64_t to_machine(const Integer& v, const char* what) {
  if (abs(v) >= kMachineLimit) throw Error(std::string(what) + " too large for machine arithmetic: " + v.get_str());
  return v.get_si();
}

struct VectorHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto x : v) h ^= std::hash<std::int64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Machine copy of the automaton's weights and recurrence.
struct MachineAutomaton {
  std::size_t m = 0;
  std::vector<std::int64_t> alpha;  // s_{n+m} = sum alpha_i s_{n+i}
  std::vector<std::vector<std::int64_t>> weights;

  explicit MachineAutomaton(const SeqAutomaton& a) : m(a.order()), alpha(m) {
    for (std::size_t i = 0; i < m; ++i) alpha[i] = -to_machine(a.annihilator()[i], "annihilator coefficient");
    weights.resize(a.size() * a.symbols());
    for (std::size_t q = 0; q < a.size(); ++q)
      for (Symbol s = 0; s < a.symbols(); ++s)
        if (a.next(q, s) != Dfa::kNone) {
          auto& w = weights[q * a.symbols() + s];
          for (const auto& v : a.weight_vector(q, s)) w.push_back(to_machine(v, "weight"));
        }
  }

  // s' = A s + w in 128-bit arithmetic.
  void step(const std::int64_t* s, const std::vector<std::int64_t>& w, i128* out) const {
    if (m == 0) return;
    i128 last = 0;
    for (std::size_t i = 0; i < m; ++i) last += static_cast<i128>(alpha[i]) * s[i];
    for (std::size_t i = 0; i + 1 < m; ++i) out[i] = static_cast<i128>(s[i + 1]) + w[i];
    out[m - 1] = last + w[m - 1];
  }
};

}  // namespace

Dfa flatten(const SeqAutomaton& a, const std::vector<Integer>& bounds, const Integer& target, std::size_t state_cap,
            FlattenStats* stats) {
  const std::size_t m = a.order();
  if (bounds.size() != m)
    throw Error("flatten: " + std::to_string(bounds.size()) + " bounds given for order " + std::to_string(m));
  const MachineAutomaton mach(a);
  std::vector<i128> limit(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (bounds[i] < 0) throw Error("flatten: negative bound");
    Integer b = bounds[i] + (i == 0 ? Integer(abs(target)) : Integer(0));
    limit[i] = to_machine(b, "flattening bound");
  }
  const std::int64_t goal = to_machine(target, "target");

  FlattenStats local;
  // key = (base state, s_0, ..., s_{m-1})
  std::vector<std::vector<std::int64_t>> keys;
  std::unordered_map<std::vector<std::int64_t>, std::size_t, VectorHash> index;
  std::vector<std::vector<std::pair<Symbol, std::size_t>>> edges;
  std::vector<std::int64_t> start(m + 1, 0);
  start[0] = static_cast<std::int64_t>(a.initial());
  keys.push_back(start);
  index.emplace(start, 0);
  edges.emplace_back();

  std::vector<i128> next(m);
  std::vector<std::int64_t> key(m + 1);
  for (std::size_t head = 0; head < keys.size(); ++head) {
    local.peak_frontier = std::max(local.peak_frontier, keys.size() - head);
    const std::size_t q = static_cast<std::size_t>(keys[head][0]);
    for (Symbol s = 0; s < a.symbols(); ++s) {
      const std::size_t t = a.next(q, s);
      if (t == Dfa::kNone) continue;
      mach.step(keys[head].data() + 1, mach.weights[q * a.symbols() + s], next.data());
      bool inside = true;
      for (std::size_t i = 0; i < m && inside; ++i) inside = next[i] <= limit[i] && next[i] >= -limit[i];
      if (!inside) {
        ++local.pruned;
        continue;
      }
      key[0] = static_cast<std::int64_t>(t);
      for (std::size_t i = 0; i < m; ++i) key[i + 1] = static_cast<std::int64_t>(next[i]);
      auto [it, fresh] = index.emplace(key, keys.size());
      if (fresh) {
        if (keys.size() >= state_cap) {
          if (stats) *stats = local;
          throw BoundExplosion(state_cap);
        }
        keys.push_back(key);
        edges.emplace_back();
      }
      edges[head].emplace_back(s, it->second);
    }
  }
  local.explored = keys.size();

  Dfa d(a.alphabet(), keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const std::int64_t s0 = m == 0 ? 0 : keys[i][1];
    d.set_accepting(i, a.accepting(static_cast<std::size_t>(keys[i][0])) && s0 == goal);
    for (auto [s, to] : edges[i]) d.set_transition(i, s, to);
  }
  d.set_initial(0);
  Dfa out = trim(d);
  local.untrimmed = keys.size();
  local.trimmed = out.size();
  if (stats) *stats = local;
  return out;
}

bool l0_member(const SeqAutomaton& a, const Word& u, const Integer& target) {
  std::size_t q = a.initial();
  for (Symbol s : u) {
    if (s >= a.symbols()) return false;
    q = a.next(q, s);
    if (q == Dfa::kNone) return false;
  }
  if (!a.accepting(q)) return false;
  return pi_word(a, a.initial(), u).term(0) == target;
}

std::optional<Word> validate_flattening(const SeqAutomaton& a, const Dfa& d, const Integer& target,
                                        std::size_t max_length) {
  if (!(a.alphabet() == d.alphabet()) && a.symbols() != d.symbols())
    throw Error("validate_flattening: alphabets differ");
  const std::size_t m = a.order();
  const MachineAutomaton mach(a);
  const std::int64_t goal = to_machine(target, "target");
  constexpr std::int64_t kGone = -1;

  // config = (base state or -1, dfa state or -1, vector)
  struct Node {
    std::vector<std::int64_t> key;
    std::size_t parent;
    Symbol symbol;
    std::size_t depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::vector<std::int64_t>, std::size_t, VectorHash> seen;
  std::vector<std::int64_t> start(m + 2, 0);
  start[0] = static_cast<std::int64_t>(a.initial());
  start[1] = d.size() ? static_cast<std::int64_t>(d.initial()) : kGone;
  nodes.push_back({start, Dfa::kNone, 0, 0});
  seen.emplace(start, 0);

  auto word_of = [&](std::size_t i) {
    Word w;
    for (; nodes[i].parent != Dfa::kNone; i = nodes[i].parent) w.push_back(nodes[i].symbol);
    std::reverse(w.begin(), w.end());
    return w;
  };

  std::vector<i128> next(m);
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    const auto key = nodes[head].key;
    const bool base_live = key[0] != kGone;
    const bool in_l0 = base_live && a.accepting(static_cast<std::size_t>(key[0])) && (m == 0 ? 0 : key[2]) == goal;
    const bool in_d = key[1] != kGone && d.accepting(static_cast<std::size_t>(key[1]));
    if (in_l0 != in_d) return word_of(head);
    if (nodes[head].depth == max_length) continue;
    for (Symbol s = 0; s < a.symbols(); ++s) {
      std::vector<std::int64_t> child(m + 2, 0);
      child[0] = kGone;
      if (base_live) {
        const std::size_t q = static_cast<std::size_t>(key[0]);
        const std::size_t t = a.next(q, s);
        if (t != Dfa::kNone) {
          child[0] = static_cast<std::int64_t>(t);
          mach.step(key.data() + 2, mach.weights[q * a.symbols() + s], next.data());
          for (std::size_t i = 0; i < m; ++i) {
            if (next[i] >= kMachineLimit || next[i] <= -kMachineLimit)
              throw Error("validate_flattening: vector overflow at depth " + std::to_string(nodes[head].depth + 1));
            child[i + 2] = static_cast<std::int64_t>(next[i]);
          }
        }
      }
      child[1] = key[1] == kGone ? kGone : static_cast<std::int64_t>(d.next(static_cast<std::size_t>(key[1]), s));
      if (child[1] == static_cast<std::int64_t>(Dfa::kNone)) child[1] = kGone;
      if (child[0] == kGone && child[1] == kGone) continue;
      auto [it, fresh] = seen.emplace(child, nodes.size());
      if (fresh) nodes.push_back({child, head, s, nodes[head].depth + 1});
    }
  }
  return std::nullopt;
}

// --- text format ------------------------------------------------------------

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = text.find(sep, start);
    out.push_back(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
    if (end == std::string::npos) return out;
    start = end + 1;
  }
}

Integer parse_integer(const std::string& token, std::size_t line) {
  Integer v;
  if (token.empty() || v.set_str(token, 10) != 0)
    throw ParseError("line " + std::to_string(line) + ": expected an integer, got '" + token + "'");
  return v;
}

}  // namespace

SeqAutomaton parse_seqauto(std::istream& in) {
  struct Trans {
    std::string from, to;
    Digits digits;
    std::vector<Integer> weight;
    std::size_t line;
  };
  std::optional<IntPolynomial> ann;
  std::vector<std::string> states, accepting;
  std::optional<std::vector<unsigned>> radix;
  std::string initial;
  std::vector<Trans> trans;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<std::string> rest;
    for (std::string tok; ls >> tok;) rest.push_back(tok);
    auto where = [&] { return "line " + std::to_string(line_no) + ": "; };
    if (key == "annihilator:") {
      std::vector<Integer> c;
      for (const auto& t : rest) c.push_back(parse_integer(t, line_no));
      IntPolynomial p(c);
      if (!p.is_monic()) throw ParseError(where() + "annihilator must be monic (constant term first)");
      ann = p;
    } else if (key == "states:") {
      states = rest;
    } else if (key == "initial:") {
      if (rest.size() != 1) throw ParseError(where() + "expected one initial state");
      initial = rest[0];
    } else if (key == "accepting:") {
      accepting = rest;
    } else if (key == "radix:") {
      std::vector<unsigned> r;
      for (const auto& t : rest) r.push_back(static_cast<unsigned>(parse_integer(t, line_no).get_ui()));
      radix = r;
    } else if (key == "trans:") {
      if (rest.size() != 4) throw ParseError(where() + "expected 'trans: <src> <digits> <dst> <v0,...>'");
      Trans t{rest[0], rest[2], {}, {}, line_no};
      for (const auto& d : split(rest[1], ',')) {
        Integer v = parse_integer(d, line_no);
        if (v < 0) throw ParseError(where() + "digits must be natural numbers");
        t.digits.push_back(static_cast<unsigned>(v.get_ui()));
      }
      for (const auto& v : split(rest[3], ',')) t.weight.push_back(parse_integer(v, line_no));
      trans.push_back(std::move(t));
    } else {
      throw ParseError(where() + "unknown key '" + key + "'");
    }
  }
  if (!ann) throw ParseError("missing 'annihilator:' line");
  if (states.empty()) throw ParseError("missing 'states:' line");
  if (initial.empty()) throw ParseError("missing 'initial:' line");

  std::map<std::string, std::size_t> id;
  for (const auto& s : states)
    if (!id.emplace(s, id.size()).second) throw ParseError("duplicate state '" + s + "'");
  auto lookup = [&](const std::string& s, std::size_t line) {
    auto it = id.find(s);
    if (it == id.end()) throw ParseError("line " + std::to_string(line) + ": unknown state '" + s + "'");
    return it->second;
  };

  std::vector<unsigned> r;
  if (radix) {
    r = *radix;
  } else {
    if (trans.empty()) throw ParseError("no transitions and no 'radix:' line");
    r.assign(trans[0].digits.size(), 1);
    for (const auto& t : trans) {
      if (t.digits.size() != r.size())
        throw ParseError("line " + std::to_string(t.line) + ": inconsistent number of tracks");
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::max(r[i], t.digits[i] + 1);
    }
  }
  SeqAutomaton a(Alphabet(r), *ann);
  for (const auto& s : states) a.add_state(s);
  a.set_initial(lookup(initial, 0));
  for (const auto& s : accepting) a.set_accepting(lookup(s, 0), true);
  for (const auto& t : trans) {
    Symbol sym;
    try {
      sym = a.alphabet().encode(t.digits);
    } catch (const Error& e) {
      throw ParseError("line " + std::to_string(t.line) + ": " + e.what());
    }
    const std::size_t from = lookup(t.from, t.line);
    if (a.next(from, sym) != Dfa::kNone)
      throw ParseError("line " + std::to_string(t.line) + ": duplicate transition (nondeterministic)");
    if (t.weight.size() != a.order())
      throw ParseError("line " + std::to_string(t.line) + ": weight needs " + std::to_string(a.order()) +
                       " initial terms");
    a.set_transition(from, sym, lookup(t.to, t.line), t.weight);
  }
  return a;
}

SeqAutomaton parse_seqauto(const std::string& text) {
  std::istringstream in(text);
  return parse_seqauto(in);
}

std::string write_seqauto(const SeqAutomaton& a) {
  std::ostringstream out;
  out << "annihilator: " << a.annihilator().to_coefficient_string() << '\n';
  out << "radix:";
  for (unsigned r : a.alphabet().radix) out << ' ' << r;
  out << "\nstates:";
  for (std::size_t q = 0; q < a.size(); ++q) out << ' ' << a.name(q);
  out << "\ninitial: " << a.name(a.initial()) << "\naccepting:";
  for (std::size_t q = 0; q < a.size(); ++q)
    if (a.accepting(q)) out << ' ' << a.name(q);
  out << '\n';
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Symbol s = 0; s < a.symbols(); ++s) {
      if (a.next(q, s) == Dfa::kNone) continue;
      Digits d = a.alphabet().decode(s);
      out << "trans: " << a.name(q) << ' ';
      for (std::size_t i = 0; i < d.size(); ++i) out << (i ? "," : "") << d[i];
      out << ' ' << a.name(a.next(q, s)) << ' ';
      const auto& w = a.weight_vector(q, s);
      for (std::size_t i = 0; i < w.size(); ++i) out << (i ? "," : "") << w[i].get_str();
      out << '\n';
    }
  return out.str();
}

}  // namespace dtnum
