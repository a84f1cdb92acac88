#include "dtnum/dtns.hpp"

#include <algorithm>
#include <set>

#include "dtnum/error.hpp"

namespace dtnum {

namespace {

bool valid_letter(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::size_t Substitution::index(char letter) const {
  auto pos = alphabet.find(letter);
  if (pos == std::string::npos) throw Error(std::string("letter '") + letter + "' is not in the alphabet");
  return pos;
}

unsigned Substitution::radix() const {
  std::size_t r = 0;
  for (const auto& img : images) r = std::max(r, img.size());
  return static_cast<unsigned>(r);
}

std::string Substitution::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    if (i) out += ';';
    out += alphabet[i];
    out += "->";
    out += images[i];
  }
  return out;
}

Substitution parse_substitution(const std::string& text, char start) {
  std::vector<std::pair<char, std::string>> rules;
  std::set<char> seen;
  for (const auto& raw : [&] {
         std::vector<std::string> parts;
         std::size_t b = 0;
         while (true) {
           auto e = text.find(';', b);
           parts.push_back(text.substr(b, e == std::string::npos ? std::string::npos : e - b));
           if (e == std::string::npos) break;
           b = e + 1;
         }
         return parts;
       }()) {
    std::string rule = strip(raw);
    if (rule.empty()) continue;
    auto arrow = rule.find("->");
    if (arrow == std::string::npos) throw ParseError("malformed rule '" + rule + "': expected <letter>-><word>");
    std::string lhs = strip(rule.substr(0, arrow));
    std::string rhs = strip(rule.substr(arrow + 2));
    if (lhs.size() != 1 || !valid_letter(lhs[0]))
      throw ParseError("malformed rule '" + rule + "': the left side must be one letter in [a-z0-9]");
    if (rhs.empty()) throw ParseError("erasing substitution unsupported (" + lhs + " maps to the empty word)");
    for (char c : rhs)
      if (!valid_letter(c)) throw ParseError("invalid letter '" + std::string(1, c) + "' in rule '" + rule + "'");
    if (!seen.insert(lhs[0]).second) throw ParseError("letter " + lhs + " has two images");
    rules.emplace_back(lhs[0], rhs);
  }
  if (rules.empty()) throw ParseError("empty substitution");
  std::sort(rules.begin(), rules.end());
  Substitution s;
  for (const auto& [letter, img] : rules) {
    s.alphabet += letter;
    s.images.push_back(img);
  }
  for (const auto& img : s.images)
    for (char c : img)
      if (!seen.count(c)) throw ParseError("unknown letter '" + std::string(1, c) + "' in an image");
  if (!seen.count(start)) throw ParseError("start letter '" + std::string(1, start) + "' has no image");
  s.start = start;
  const std::string& img = s.image(start);
  if (img[0] != start || img.size() < 2)
    throw ParseError("not prolongable at start: " + std::string(1, start) + "->" + img);
  return s;
}

std::string fixpoint_prefix(const Substitution& s, std::size_t n) {
  std::string w(1, s.start);
  while (w.size() < n) {
    std::string next;
    for (char c : w) {
      next += s.image(c);
      if (next.size() >= n) break;
    }
    w = std::move(next);
  }
  w.resize(std::min(w.size(), n));
  return w;
}

std::vector<std::vector<Integer>> incidence_matrix(const Substitution& s) {
  const std::size_t d = s.alphabet.size();
  std::vector<std::vector<Integer>> m(d, std::vector<Integer>(d, 0));
  for (std::size_t y = 0; y < d; ++y)
    for (char c : s.images[y]) m[s.index(c)][y] += 1;
  return m;
}

IntPolynomial characteristic_polynomial(const std::vector<std::vector<Integer>>& a) {
  // Faddeev-LeVerrier: every division below is exact.
  const std::size_t n = a.size();
  std::vector<Integer> c(n + 1, 0);
  c[n] = 1;
  std::vector<std::vector<Integer>> mk(n, std::vector<Integer>(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<Integer>> next(n, std::vector<Integer>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Integer acc = 0;
        for (std::size_t l = 0; l < n; ++l) acc += a[i][l] * mk[l][j];
        next[i][j] = acc;
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    mk = std::move(next);
    Integer trace = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) trace += a[i][l] * mk[l][i];
    c[n - k] = -trace / static_cast<long>(k);
  }
  return IntPolynomial(c);
}

std::vector<Integer> DtnsSystem::lengths(std::size_t k) const {
  const std::size_t d = substitution.alphabet.size();
  std::vector<Integer> len(d, 1);
  for (std::size_t step = 0; step < k; ++step) {
    std::vector<Integer> next(d, 0);
    for (std::size_t x = 0; x < d; ++x)
      for (char c : substitution.images[x]) next[x] += len[substitution.index(c)];
    len = std::move(next);
  }
  return len;
}

namespace {

// table[k][x] = |phi^k(x)| for k = 0..rows-1.
std::vector<std::vector<Integer>> length_table(const Substitution& s, std::size_t rows) {
  const std::size_t d = s.alphabet.size();
  std::vector<std::vector<Integer>> table;
  table.emplace_back(d, 1);
  while (table.size() < rows) {
    std::vector<Integer> next(d, 0);
    for (std::size_t x = 0; x < d; ++x)
      for (char c : s.images[x]) next[x] += table.back()[s.index(c)];
    table.push_back(std::move(next));
  }
  return table;
}

}  // namespace

DtnsSystem build_system(const Substitution& s) {
  DtnsSystem sys;
  sys.substitution = s;
  const std::size_t d = s.alphabet.size();
  const Alphabet digits(std::vector<unsigned>{s.radix()});

  sys.addressing = Dfa(digits, d);
  for (std::size_t x = 0; x < d; ++x) {
    sys.addressing.set_accepting(x, true);
    sys.addressing.set_output(x, static_cast<int>(x));
    for (std::size_t i = 0; i < s.images[x].size(); ++i)
      sys.addressing.set_transition(x, static_cast<Symbol>(i), s.index(s.images[x][i]));
  }
  sys.addressing.set_initial(s.index(s.start));

  sys.incidence_polynomial = characteristic_polynomial(incidence_matrix(s));
  const std::size_t m = d;
  const auto table = length_table(s, 2 * m + 1);

  // pi(x, i) under the incidence polynomial, from explicit lengths.
  auto weight_terms = [&](std::size_t x, std::size_t i, std::size_t count) {
    std::vector<Integer> terms(count, 0);
    for (std::size_t n = 0; n < count; ++n)
      for (std::size_t j = 0; j < i; ++j) terms[n] += table[n][s.index(s.images[x][j])];
    return terms;
  };

  sys.weighted_incidence = SeqAutomaton(digits, sys.incidence_polynomial);
  for (std::size_t x = 0; x < d; ++x) sys.weighted_incidence.add_state(std::string(1, s.alphabet[x]), true);
  sys.weighted_incidence.set_initial(s.index(s.start));
  IntPolynomial rec = IntPolynomial::one();
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t i = 0; i < s.images[x].size(); ++i) {
      auto terms = weight_terms(x, i, 2 * m);
      LinRecSeq w(sys.incidence_polynomial, std::vector<Integer>(terms.begin(), terms.begin() + static_cast<long>(m)));
      if (w.terms(2 * m) != terms) throw Error("weight is not annihilated by the incidence polynomial");
      sys.weighted_incidence.set_transition(x, static_cast<Symbol>(i), s.index(s.images[x][i]), w);
      rec = poly_lcm(rec, minimal_annihilator(w));
    }
  sys.recurrence = rec;

  const std::size_t r = static_cast<std::size_t>(rec.degree());
  sys.weighted = SeqAutomaton(digits, rec);
  for (std::size_t x = 0; x < d; ++x) sys.weighted.add_state(std::string(1, s.alphabet[x]), true);
  sys.weighted.set_initial(s.index(s.start));
  for (std::size_t x = 0; x < d; ++x)
    for (std::size_t i = 0; i < s.images[x].size(); ++i) {
      auto terms = weight_terms(x, i, 2 * m);
      LinRecSeq w(rec, std::vector<Integer>(terms.begin(), terms.begin() + static_cast<long>(r)));
      if (w.terms(2 * m) != terms) throw Error("weight is not annihilated by the recurrence polynomial");
      sys.weighted.set_transition(x, static_cast<Symbol>(i), s.index(s.images[x][i]), w);
    }
  return sys;
}

Digits rep(const DtnsSystem& sys, const Integer& n) {
  if (n < 0) throw Error("rep of a negative number");
  if (n == 0) return Digits{0};
  const Substitution& s = sys.substitution;
  const std::size_t start = s.index(s.start);
  std::vector<std::vector<Integer>> table = length_table(s, 1);
  while (table.back()[start] <= n) table = length_table(s, table.size() + 1);
  const std::size_t length = table.size() - 1;

  Digits out;
  std::size_t q = start;
  Integer remainder = n;
  for (std::size_t pos = 0; pos < length; ++pos) {
    const auto& row = table[length - 1 - pos];
    const std::string& img = s.images[q];
    Integer prefix = 0;
    std::size_t digit = 0;
    for (std::size_t i = 1; i < img.size(); ++i) {
      Integer candidate = prefix + row[s.index(img[i - 1])];
      if (candidate > remainder) break;
      prefix = candidate;
      digit = i;
    }
    remainder -= prefix;
    out.push_back(static_cast<unsigned>(digit));
    q = s.index(img[digit]);
  }
  if (remainder != 0) throw Error("rep: greedy descent left a remainder");
  return out;
}

Integer val(const DtnsSystem& sys, const Digits& w) {
  if (w.empty()) throw Error("val of the empty word");
  if (w.size() > 1 && w[0] == 0) throw Error("val: word " + format_digits(w) + " has a leading zero");
  const Substitution& s = sys.substitution;
  const auto table = length_table(s, w.size());
  std::size_t q = s.index(s.start);
  Integer total = 0;
  for (std::size_t pos = 0; pos < w.size(); ++pos) {
    const std::string& img = s.images[q];
    if (w[pos] >= img.size())
      throw Error("val: word " + format_digits(w) + " is rejected at position " + std::to_string(pos));
    const auto& row = table[w.size() - 1 - pos];
    for (std::size_t j = 0; j < w[pos]; ++j) total += row[s.index(img[j])];
    q = s.index(img[w[pos]]);
  }
  return total;
}

char letter_at(const DtnsSystem& sys, const Integer& n) {
  Digits w = rep(sys, n);
  std::size_t q = sys.addressing.initial();
  for (unsigned dgt : w) q = sys.addressing.next(q, dgt);
  return sys.substitution.alphabet[q];
}

Dfa numeration_language(const DtnsSystem& sys) {
  const Dfa& a = sys.addressing;
  const std::size_t d = a.size();
  Dfa out(a.alphabet(), d + 2);
  const std::size_t init = d, zero = d + 1;
  for (std::size_t q = 0; q < d; ++q) {
    out.set_accepting(q, true);
    out.set_output(q, a.output(q));
    for (Symbol s = 0; s < a.symbols(); ++s) out.set_transition(q, s, a.next(q, s));
  }
  out.set_output(init, a.output(a.initial()));
  out.set_output(zero, a.output(a.initial()));
  out.set_accepting(zero, true);
  out.set_transition(init, 0, zero);
  for (Symbol s = 1; s < a.symbols(); ++s) out.set_transition(init, s, a.next(a.initial(), s));
  out.set_initial(init);
  return canonical(out);
}

}  // namespace dtnum
