#include "dtnum/automaton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include <gmpxx.h>

#include "dtnum/error.hpp"

namespace dtnum {

Alphabet::Alphabet(std::vector<unsigned> radices) : radix(std::move(radices)), pad_mark(radix.size(), -1) {
  for (unsigned r : radix)
    if (r == 0) throw Error("alphabet track with no digits");
}

std::size_t Alphabet::size() const {
  std::size_t n = 1;
  for (unsigned r : radix) n *= r;
  return n;
}

Symbol Alphabet::encode(const Digits& digits) const {
  if (digits.size() != radix.size())
    throw Error("symbol has " + std::to_string(digits.size()) + " digits, alphabet has " +
                std::to_string(radix.size()) + " tracks");
  std::size_t s = 0;
  for (std::size_t t = 0; t < radix.size(); ++t) {
    if (digits[t] >= radix[t])
      throw Error("digit " + std::to_string(digits[t]) + " outside track " + std::to_string(t) + " of radix " +
                  std::to_string(radix[t]));
    s = s * radix[t] + digits[t];
  }
  return static_cast<Symbol>(s);
}

Digits Alphabet::decode(Symbol s) const {
  Digits out(radix.size());
  std::size_t v = s;
  for (std::size_t t = radix.size(); t-- > 0;) {
    out[t] = static_cast<unsigned>(v % radix[t]);
    v /= radix[t];
  }
  return out;
}

std::string Alphabet::label(Symbol s) const {
  const Digits d = decode(s);
  const bool wide = std::any_of(radix.begin(), radix.end(), [](unsigned r) { return r > 10; });
  std::string out;
  for (std::size_t t = 0; t < d.size(); ++t) {
    if (wide && t > 0) out += ',';
    if (pad_mark[t] >= 0 && d[t] == static_cast<unsigned>(pad_mark[t]))
      out += '#';
    else
      out += std::to_string(d[t]);
  }
  return out;
}

Alphabet concat(const std::vector<Alphabet>& parts) {
  Alphabet out;
  for (const auto& a : parts) {
    out.radix.insert(out.radix.end(), a.radix.begin(), a.radix.end());
    out.pad_mark.insert(out.pad_mark.end(), a.pad_mark.begin(), a.pad_mark.end());
  }
  return out;
}

// --- Dfa ----------------------------------------------------------------

Dfa::Dfa(Alphabet alphabet, std::size_t states) : alphabet_(std::move(alphabet)), symbols_(alphabet_.size()) {
  for (std::size_t i = 0; i < states; ++i) add_state();
}

std::size_t Dfa::add_state(bool accepting) {
  accepting_.push_back(accepting);
  table_.resize(table_.size() + symbols_, kNone);
  if (!outputs_.empty()) outputs_.push_back(0);
  return accepting_.size() - 1;
}

void Dfa::set_transition(std::size_t from, Symbol s, std::size_t to) {
  if (from >= size() || (to != kNone && to >= size()) || s >= symbols_) throw Error("transition out of range");
  table_[from * symbols_ + s] = to;
}

void Dfa::set_output(std::size_t q, int letter) {
  if (outputs_.empty()) outputs_.assign(size(), 0);
  outputs_.at(q) = letter;
}

std::size_t Dfa::transition_count() const {
  return static_cast<std::size_t>(std::count_if(table_.begin(), table_.end(), [](std::size_t t) { return t != kNone; }));
}

std::size_t Dfa::run(const Word& w, std::size_t from) const {
  std::size_t q = from;
  for (Symbol s : w) {
    if (q == kNone) return kNone;
    if (s >= symbols_) throw Error("symbol " + std::to_string(s) + " outside the alphabet");
    q = next(q, s);
  }
  return q;
}

bool accepts(const Dfa& d, const Word& w) {
  if (d.size() == 0) return false;
  std::size_t q = d.run(w);
  return q != Dfa::kNone && d.accepting(q);
}

namespace {

// Copies the states marked in `keep` (renumbered in index order).
Dfa restrict_states(const Dfa& d, const std::vector<char>& keep) {
  std::vector<std::size_t> index(d.size(), Dfa::kNone);
  Dfa out(d.alphabet());
  for (std::size_t q = 0; q < d.size(); ++q) {
    if (!keep[q]) continue;
    index[q] = out.add_state(d.accepting(q));
    if (d.has_outputs()) out.set_output(index[q], d.output(q));
  }
  for (std::size_t q = 0; q < d.size(); ++q) {
    if (!keep[q]) continue;
    for (Symbol s = 0; s < d.symbols(); ++s) {
      std::size_t t = d.next(q, s);
      if (t != Dfa::kNone && keep[t]) out.set_transition(index[q], s, index[t]);
    }
  }
  out.set_initial(index[d.initial()]);
  return out;
}

Dfa empty_like(const Dfa& d) {
  Dfa out(d.alphabet(), 1);
  if (d.has_outputs() && d.size() > 0) out.set_output(0, d.output(d.initial()));
  return out;
}

}  // namespace

Dfa trim(const Dfa& d) {
  if (d.size() == 0) return Dfa(d.alphabet(), 1);
  std::vector<char> reach(d.size(), 0);
  std::vector<std::vector<std::size_t>> preds(d.size());
  std::deque<std::size_t> queue{d.initial()};
  reach[d.initial()] = 1;
  while (!queue.empty()) {
    std::size_t q = queue.front();
    queue.pop_front();
    for (Symbol s = 0; s < d.symbols(); ++s) {
      std::size_t t = d.next(q, s);
      if (t == Dfa::kNone) continue;
      preds[t].push_back(q);
      if (!reach[t]) {
        reach[t] = 1;
        queue.push_back(t);
      }
    }
  }
  std::vector<char> keep(d.size(), 0);
  for (std::size_t q = 0; q < d.size(); ++q)
    if (reach[q] && d.accepting(q)) {
      keep[q] = 1;
      queue.push_back(q);
    }
  while (!queue.empty()) {
    std::size_t q = queue.front();
    queue.pop_front();
    for (std::size_t p : preds[q])
      if (!keep[p]) {
        keep[p] = 1;
        queue.push_back(p);
      }
  }
  if (!keep[d.initial()]) return empty_like(d);
  return restrict_states(d, keep);
}

Dfa canonical(const Dfa& d) {
  if (d.size() == 0) return d;
  std::vector<std::size_t> index(d.size(), Dfa::kNone);
  std::vector<std::size_t> order{d.initial()};
  index[d.initial()] = 0;
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Symbol s = 0; s < d.symbols(); ++s) {
      std::size_t t = d.next(order[i], s);
      if (t != Dfa::kNone && index[t] == Dfa::kNone) {
        index[t] = order.size();
        order.push_back(t);
      }
    }
  Dfa out(d.alphabet(), order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.set_accepting(i, d.accepting(order[i]));
    if (d.has_outputs()) out.set_output(i, d.output(order[i]));
    for (Symbol s = 0; s < d.symbols(); ++s) {
      std::size_t t = d.next(order[i], s);
      if (t != Dfa::kNone) out.set_transition(i, s, index[t]);
    }
  }
  return out;
}

Dfa minimize(const Dfa& d) {
  Dfa t = trim(d);
  const std::size_t n = t.size();
  const std::size_t k = t.symbols();
  // Class of the dead state is n (absent transitions).
  std::vector<std::size_t> cls(n + 1);
  {
    std::map<std::pair<int, int>, std::size_t> first;
    for (std::size_t q = 0; q < n; ++q) {
      auto key = std::make_pair(t.accepting(q) ? 1 : 0, t.has_outputs() ? t.output(q) : 0);
      cls[q] = first.emplace(key, first.size()).first->second;
    }
    cls[n] = first.size();  // dead: non-accepting, distinct from every live state after trimming
  }
  std::size_t classes = 0;
  for (std::size_t q = 0; q <= n; ++q) classes = std::max(classes, cls[q] + 1);
  while (true) {
    std::map<std::vector<std::size_t>, std::size_t> signature;
    std::vector<std::size_t> next_cls(n + 1);
    std::vector<std::size_t> sig(k + 1);
    for (std::size_t q = 0; q <= n; ++q) {
      sig[0] = cls[q];
      for (Symbol s = 0; s < k; ++s) {
        std::size_t to = q == n ? n : t.next(q, s);
        sig[s + 1] = cls[to == Dfa::kNone ? n : to];
      }
      next_cls[q] = signature.emplace(sig, signature.size()).first->second;
    }
    cls.swap(next_cls);
    if (signature.size() == classes) break;
    classes = signature.size();
  }
  // Quotient without the dead class.
  const std::size_t dead = cls[n];
  std::vector<std::size_t> rep(classes, Dfa::kNone);
  for (std::size_t q = 0; q < n; ++q)
    if (rep[cls[q]] == Dfa::kNone) rep[cls[q]] = q;
  Dfa out(t.alphabet(), classes);
  for (std::size_t c = 0; c < classes; ++c) {
    if (c == dead || rep[c] == Dfa::kNone) continue;
    std::size_t q = rep[c];
    out.set_accepting(c, t.accepting(q));
    if (t.has_outputs()) out.set_output(c, t.output(q));
    for (Symbol s = 0; s < k; ++s) {
      std::size_t to = t.next(q, s);
      if (to != Dfa::kNone && cls[to] != dead) out.set_transition(c, s, cls[to]);
    }
  }
  out.set_initial(cls[t.initial()]);
  return canonical(out);
}

bool isomorphic(const Dfa& a, const Dfa& b) {
  if (!(a.alphabet() == b.alphabet())) return false;
  Dfa ca = canonical(a), cb = canonical(b);
  if (ca.size() != cb.size() || ca.has_outputs() != cb.has_outputs()) return false;
  for (std::size_t q = 0; q < ca.size(); ++q) {
    if (ca.accepting(q) != cb.accepting(q)) return false;
    if (ca.has_outputs() && ca.output(q) != cb.output(q)) return false;
    for (Symbol s = 0; s < ca.symbols(); ++s)
      if (ca.next(q, s) != cb.next(q, s)) return false;
  }
  return true;
}

bool equivalent(const Dfa& a, const Dfa& b) {
  if (a.symbols() != b.symbols()) return false;
  using Pair = std::pair<std::size_t, std::size_t>;
  std::map<Pair, bool> seen;
  std::deque<Pair> queue;
  auto visit = [&](Pair p) {
    if (p.first == Dfa::kNone && p.second == Dfa::kNone) return;
    if (seen.emplace(p, true).second) queue.push_back(p);
  };
  visit({a.size() ? a.initial() : Dfa::kNone, b.size() ? b.initial() : Dfa::kNone});
  const bool outputs = a.has_outputs() && b.has_outputs();
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    bool acc_p = p != Dfa::kNone && a.accepting(p);
    bool acc_q = q != Dfa::kNone && b.accepting(q);
    if (acc_p != acc_q) return false;
    if (outputs && acc_p && a.output(p) != b.output(q)) return false;
    for (Symbol s = 0; s < a.symbols(); ++s)
      visit({p == Dfa::kNone ? Dfa::kNone : a.next(p, s), q == Dfa::kNone ? Dfa::kNone : b.next(q, s)});
  }
  return true;
}

Dfa product(const std::vector<Dfa>& parts) {
  if (parts.empty()) throw Error("product of no automata");
  std::vector<Alphabet> alphabets;
  for (const auto& p : parts) alphabets.push_back(p.alphabet());
  Dfa out(concat(alphabets));
  std::size_t total = 1;
  for (const auto& p : parts) total *= p.size();
  for (std::size_t i = 0; i < total; ++i) out.add_state();

  std::vector<std::size_t> state(parts.size()), sub(parts.size());
  for (std::size_t index = 0; index < total; ++index) {
    std::size_t v = index;
    bool acc = true;
    for (std::size_t i = parts.size(); i-- > 0;) {
      state[i] = v % parts[i].size();
      v /= parts[i].size();
      acc = acc && parts[i].accepting(state[i]);
    }
    out.set_accepting(index, acc);
    for (Symbol s = 0; s < out.symbols(); ++s) {
      // Split the product symbol into component symbols (first part most significant).
      std::size_t rest = s;
      for (std::size_t i = parts.size(); i-- > 0;) {
        sub[i] = rest % parts[i].symbols();
        rest /= parts[i].symbols();
      }
      std::size_t to = 0;
      bool defined = true;
      for (std::size_t i = 0; i < parts.size() && defined; ++i) {
        std::size_t t = parts[i].next(state[i], static_cast<Symbol>(sub[i]));
        if (t == Dfa::kNone) defined = false;
        to = to * parts[i].size() + t;
      }
      if (defined) out.set_transition(index, s, to);
    }
  }
  std::size_t init = 0;
  for (const auto& p : parts) init = init * p.size() + p.initial();
  out.set_initial(init);
  return out;
}

Word radix_enumerate(const Dfa& d, std::size_t n) {
  if (d.size() == 0) throw Error("radix_enumerate: empty automaton");
  const std::size_t states = d.size();
  // counts[L][q]: accepted words of length L from q.
  std::vector<std::vector<mpz_class>> counts;
  counts.emplace_back(states);
  for (std::size_t q = 0; q < states; ++q) counts[0][q] = d.accepting(q) ? 1 : 0;
  mpz_class remaining = static_cast<unsigned long>(n);
  std::size_t length = 0;
  std::size_t silent = 0;  // consecutive lengths with no accepted word
  while (true) {
    const mpz_class& here = counts[length][d.initial()];
    if (remaining < here) break;
    remaining -= here;
    silent = here == 0 ? silent + 1 : 0;
    // A language with a word of length >= states has one in [states, 2 states).
    if (length >= 2 * states && silent > states)
      throw Error("radix_enumerate: index " + std::to_string(n) + " exceeds the finite language");
    std::vector<mpz_class> row(states);
    for (std::size_t q = 0; q < states; ++q)
      for (Symbol s = 0; s < d.symbols(); ++s) {
        std::size_t t = d.next(q, s);
        if (t != Dfa::kNone) row[q] += counts[length][t];
      }
    counts.push_back(std::move(row));
    ++length;
  }
  Word w;
  std::size_t q = d.initial();
  for (std::size_t pos = 0; pos < length; ++pos) {
    const std::size_t left = length - pos - 1;
    for (Symbol s = 0; s < d.symbols(); ++s) {
      std::size_t t = d.next(q, s);
      if (t == Dfa::kNone) continue;
      const mpz_class& c = counts[left][t];
      if (remaining < c) {
        w.push_back(s);
        q = t;
        break;
      }
      remaining -= c;
    }
  }
  return w;
}

Word pack_tracks(const Alphabet& alphabet, std::vector<Digits> tracks, unsigned pad_digit) {
  if (tracks.size() != alphabet.arity())
    throw Error("expected " + std::to_string(alphabet.arity()) + " tracks, got " + std::to_string(tracks.size()));
  std::size_t length = 0;
  for (const auto& t : tracks) length = std::max(length, t.size());
  for (auto& t : tracks) t.insert(t.begin(), length - t.size(), pad_digit);
  Word w(length);
  Digits digits(tracks.size());
  for (std::size_t i = 0; i < length; ++i) {
    for (std::size_t t = 0; t < tracks.size(); ++t) digits[t] = tracks[t][i];
    w[i] = alphabet.encode(digits);
  }
  return w;
}

std::vector<Digits> unpack_tracks(const Alphabet& alphabet, const Word& w) {
  std::vector<Digits> tracks(alphabet.arity());
  for (Symbol s : w) {
    Digits d = alphabet.decode(s);
    for (std::size_t t = 0; t < d.size(); ++t) tracks[t].push_back(d[t]);
  }
  return tracks;
}

Digits parse_digits(const std::string& text) {
  Digits out;
  if (text.find(',') != std::string::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find(',', start);
      if (end == std::string::npos) end = text.size();
      std::string part = text.substr(start, end - start);
      if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("malformed digit string: " + text);
      out.push_back(static_cast<unsigned>(std::stoul(part)));
      start = end + 1;
    }
    return out;
  }
  for (char c : text) {
    if (c < '0' || c > '9') throw ParseError("malformed digit string: " + text);
    out.push_back(static_cast<unsigned>(c - '0'));
  }
  return out;
}

std::string format_digits(const Digits& digits) {
  const bool wide = std::any_of(digits.begin(), digits.end(), [](unsigned d) { return d > 9; });
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (wide && i > 0) out += ',';
    out += std::to_string(digits[i]);
  }
  return out;
}

}  // namespace dtnum
