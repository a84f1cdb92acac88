#include "dtnum/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "dtnum/error.hpp"
#include "dtnum/pisot.hpp"
#include "dtnum/relations.hpp"

namespace dtnum {

namespace {

constexpr std::size_t kMaxRepLength = 4096;

bool radix_less(const Digits& a, const Digits& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

// Leading-zero-free accepted words plus "0" (when accepted), without the
// empty word.
Dfa representation_language(const Dfa& u) {
  Dfa d(u.alphabet());
  for (std::size_t q = 0; q < u.size(); ++q) d.add_state(u.accepting(q));
  for (std::size_t q = 0; q < u.size(); ++q)
    for (Symbol s = 0; s < u.symbols(); ++s)
      if (u.next(q, s) != Dfa::kNone) d.set_transition(q, s, u.next(q, s));
  const std::size_t start = d.add_state(false);
  const std::size_t q0 = u.initial();
  const std::size_t zero_target = u.next(q0, 0);
  if (zero_target != Dfa::kNone && u.accepting(zero_target)) d.set_transition(start, 0, d.add_state(true));
  for (Symbol s = 1; s < u.symbols(); ++s)
    if (u.next(q0, s) != Dfa::kNone) d.set_transition(start, s, u.next(q0, s));
  d.set_initial(start);
  return trim(d);
}

// Appends the accepted words of exactly `length` symbols in lexicographic order.
void words_of_length(const Dfa& d, std::size_t length, std::vector<Digits>& out) {
  // live[r] = states from which some accepted word of length r starts.
  std::vector<std::vector<char>> live(length + 1, std::vector<char>(d.size(), 0));
  for (std::size_t q = 0; q < d.size(); ++q) live[0][q] = d.accepting(q);
  for (std::size_t r = 1; r <= length; ++r)
    for (std::size_t q = 0; q < d.size(); ++q)
      for (Symbol s = 0; s < d.symbols() && !live[r][q]; ++s) {
        std::size_t t = d.next(q, s);
        live[r][q] = t != Dfa::kNone && live[r - 1][t];
      }
  if (!live[length][d.initial()]) return;

  Digits w;
  std::vector<std::size_t> path{d.initial()};
  std::vector<Symbol> cursor{0};
  while (!cursor.empty()) {
    const std::size_t depth = w.size();
    if (depth == length) {
      out.push_back(w);
      cursor.pop_back();
      path.pop_back();
      if (!w.empty()) w.pop_back();
      continue;
    }
    Symbol& s = cursor.back();
    bool advanced = false;
    while (s < d.symbols()) {
      std::size_t t = d.next(path.back(), s);
      ++s;
      if (t != Dfa::kNone && live[length - depth - 1][t]) {
        w.push_back(s - 1);
        path.push_back(t);
        cursor.push_back(0);
        advanced = true;
        break;
      }
    }
    if (!advanced) {
      cursor.pop_back();
      path.pop_back();
      if (!w.empty()) w.pop_back();
    }
  }
}

std::string text(const Digits& d) { return format_digits(d); }

Word pad_tuple(const Alphabet& al, const std::vector<Digits>& tracks) {
  std::size_t len = 0;
  for (const auto& t : tracks) len = std::max(len, t.size());
  Word w(len);
  Digits tuple(tracks.size());
  for (std::size_t i = 0; i < len; ++i) {
    for (std::size_t t = 0; t < tracks.size(); ++t) {
      const std::size_t shift = len - tracks[t].size();
      const unsigned pad = al.pad_mark[t] >= 0 ? static_cast<unsigned>(al.pad_mark[t]) : 0;
      tuple[t] = i < shift ? pad : tracks[t][i - shift];
    }
    w[i] = al.encode(tuple);
  }
  return w;
}

}  // namespace

Numeration Numeration::of(const DtnsSystem& sys) {
  Numeration n;
  n.weighted_ = sys.weighted;
  n.system_ = sys;
  return n;
}

Numeration Numeration::of(const SeqAutomaton& a) {
  if (a.alphabet().arity() != 1) throw Error("numeration automaton must have a single track");
  Numeration n;
  n.weighted_ = a;
  n.language_ = representation_language(a.underlying());
  return n;
}

Digits Numeration::rep(std::size_t n) const {
  if (system_) return dtnum::rep(*system_, n);
  while (cache_.size() <= n) {
    if (++cached_length_ > kMaxRepLength) throw Error("numeration has fewer than " + std::to_string(n + 1) + " words");
    words_of_length(language_, cached_length_, cache_);
  }
  return cache_[n];
}

Integer Numeration::val(const Digits& w) const {
  if (system_) return dtnum::val(*system_, w);
  return pi_word(weighted_, weighted_.initial(), Word(w.begin(), w.end())).term(0);
}

Report check_numeration(const Numeration& num, std::size_t n) {
  Report r;
  Digits previous;
  for (std::size_t k = 0; k < n; ++k) {
    Digits w;
    try {
      w = num.rep(k);
    } catch (const Error& e) {
      r.ok = false;
      r.failure = "rep(" + std::to_string(k) + ") failed: " + e.what();
      return r;
    }
    Integer v = num.val(w);
    if (v != k) {
      r.ok = false;
      r.failure = "val(rep(" + std::to_string(k) + ")) = val(" + text(w) + ") = " + v.get_str();
      return r;
    }
    if (k > 0 && !radix_less(previous, w)) {
      r.ok = false;
      r.failure = "rep(" + std::to_string(k) + ") = " + text(w) + " does not follow " + text(previous) + " in radix order";
      return r;
    }
    previous = std::move(w);
    ++r.checked;
  }
  return r;
}

Report check_addition(const Dfa& addition, const Numeration& num, std::size_t n, std::size_t negatives,
                      std::uint32_t seed) {
  Report r;
  if (addition.alphabet().arity() != 3) {
    r.ok = false;
    r.failure = "addition automaton must have three tracks";
    return r;
  }
  const std::size_t limit = std::max<std::size_t>(3 * n, 1);
  std::vector<Digits> reps(limit);
  for (std::size_t k = 0; k < limit; ++k) reps[k] = num.rep(k);

  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, limit - 1);
  const Alphabet& al = addition.alphabet();
  auto fail = [&](std::size_t x, std::size_t y, std::size_t z, const char* what) {
    r.ok = false;
    r.failure = std::string(what) + " " + std::to_string(x) + " + " + std::to_string(y) + " = " + std::to_string(z) +
                " on (" + text(reps[x]) + ", " + text(reps[y]) + ", " + text(reps[z]) + ")";
  };
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t sum = x + y;
      if (!accepts(addition, pad_tuple(al, {reps[x], reps[y], reps[sum]}))) {
        fail(x, y, sum, "rejected");
        return r;
      }
      ++r.checked;
      if (limit < 2) continue;
      for (std::size_t i = 0; i < negatives; ++i) {
        std::size_t z = pick(rng);
        if (z == sum) z = (z + 1) % limit;
        if (accepts(addition, pad_tuple(al, {reps[x], reps[y], reps[z]}))) {
          fail(x, y, z, "accepted");
          return r;
        }
        ++r.checked;
      }
    }
  return r;
}

// --- survey -----------------------------------------------------------------

const char* const kSurveyConvention =
    "images over the first k letters; prolongable at a with |phi(a)| >= 2; non-erasing; every letter reachable from "
    "a; one representative per renaming of the non-start letters; classified by the recurrence polynomial";

std::size_t SurveyReport::ultimately_pisot() const {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const SurveyItem& i) { return i.ultimately_pisot; }));
}

std::size_t SurveyReport::addable() const {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const SurveyItem& i) {
    return !i.ultimately_pisot && i.addition_status == "ok";
  }));
}

namespace {

bool all_reachable(const std::vector<std::string>& images) {
  const std::size_t k = images.size();
  std::vector<char> seen(k, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    std::size_t x = stack.back();
    stack.pop_back();
    for (char c : images[x]) {
      auto y = static_cast<std::size_t>(c - 'a');
      if (!seen[y]) {
        seen[y] = 1;
        stack.push_back(y);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::string key_under(const std::vector<std::string>& images, const std::vector<std::size_t>& perm) {
  std::vector<std::string> renamed(images.size());
  for (std::size_t x = 0; x < images.size(); ++x) {
    std::string img = images[x];
    for (auto& c : img) c = static_cast<char>('a' + perm[static_cast<std::size_t>(c - 'a')]);
    renamed[perm[x]] = img;
  }
  std::string key;
  for (const auto& img : renamed) key += img + ';';
  return key;
}

// Every word of the given length over k letters, in lexicographic order.
std::vector<std::string> words(std::size_t k, std::size_t length) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<std::string> next;
    for (const auto& w : out)
      for (std::size_t c = 0; c < k; ++c) next.push_back(w + static_cast<char>('a' + c));
    out = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<Substitution> enumerate_substitutions(const SurveyClass& limits) {
  const std::size_t k = limits.letters;
  if (k == 0 || k > 26) throw Error("survey: letter count must be between 1 and 26");
  std::vector<std::vector<std::size_t>> perms;
  {
    std::vector<std::size_t> p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = i;
    do perms.push_back(p);
    while (std::next_permutation(p.begin() + 1, p.end()));
  }

  std::vector<Substitution> out;
  std::vector<std::size_t> lengths(k, 1);
  lengths[0] = 2;
  std::string alphabet;
  for (std::size_t i = 0; i < k; ++i) alphabet += static_cast<char>('a' + i);

  std::map<std::size_t, std::vector<std::string>> by_length;
  auto words_of = [&](std::size_t len) -> const std::vector<std::string>& {
    auto it = by_length.find(len);
    if (it == by_length.end()) it = by_length.emplace(len, words(k, len)).first;
    return it->second;
  };

  // Length vectors in lexicographic order.
  auto total = [&] {
    std::size_t t = 0;
    for (auto l : lengths) t += l;
    return t;
  };
  while (true) {
    if (total() <= limits.max_total) {
      std::vector<const std::vector<std::string>*> choices;
      for (std::size_t x = 0; x < k; ++x) choices.push_back(&words_of(x == 0 ? lengths[0] - 1 : lengths[x]));
      std::vector<std::size_t> idx(k, 0);
      while (true) {
        std::vector<std::string> images(k);
        images[0] = "a" + (*choices[0])[idx[0]];
        for (std::size_t x = 1; x < k; ++x) images[x] = (*choices[x])[idx[x]];
        if (all_reachable(images)) {
          const std::string own = key_under(images, perms.front());
          bool canonical = true;
          for (std::size_t p = 1; p < perms.size() && canonical; ++p) canonical = own <= key_under(images, perms[p]);
          if (canonical) out.push_back(Substitution{alphabet, images, 'a'});
        }
        std::size_t x = k;
        while (x > 0 && idx[x - 1] + 1 == choices[x - 1]->size()) idx[--x] = 0;
        if (x == 0) break;
        ++idx[x - 1];
      }
    }
    // Next length vector with total within the limit.
    std::size_t x = k;
    while (x > 0) {
      ++lengths[x - 1];
      if (total() <= limits.max_total) break;
      lengths[x - 1] = x - 1 == 0 ? 2 : 1;
      --x;
    }
    if (x == 0) break;
  }
  return out;
}

SurveyReport survey(const SurveyConfig& config) {
  SurveyReport report;
  report.convention = kSurveyConvention;
  std::vector<Substitution> subs;
  for (const auto& c : config.classes) {
    auto part = enumerate_substitutions(c);
    subs.insert(subs.end(), part.begin(), part.end());
  }
  report.items.resize(subs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < subs.size(); i = next++) {
      SurveyItem& item = report.items[i];
      item.substitution = subs[i];
      const DtnsSystem sys = build_system(subs[i]);
      item.recurrence = sys.recurrence;
      item.ultimately_pisot = is_ultimately_pisot(sys.recurrence).has_value();
      if (!config.addition) continue;
      BoundSpec mode;
      mode.state_cap = config.state_cap;
      if (!item.ultimately_pisot) {
        mode.mode = BoundMode::manual;
        mode.manual_bound = config.manual_bound;
      }
      try {
        auto r = addition_automaton(sys, mode);
        item.trimmed_states = r.trimmed_states;
        item.minimal_states = r.automaton.size();
        item.addition_status = check_addition(r.automaton, Numeration::of(sys), config.check_n, 4).ok ? "ok" : "invalid";
      } catch (const BoundExplosion&) {
        item.addition_status = "explosion";
      } catch (const Error&) {
        item.addition_status = "error";
      }
    }
  };
  const unsigned jobs = std::max(1u, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return report;
}

void write_survey_csv(std::ostream& out, const SurveyReport& report) {
  out << "# convention: " << report.convention << '\n';
  out << "substitution,recurrence,ultimately_pisot,addition,trimmed_states,minimal_states\n";
  for (const auto& i : report.items) {
    out << i.substitution.to_string() << ',' << i.recurrence.to_string() << ',' << (i.ultimately_pisot ? "yes" : "no")
        << ',' << i.addition_status << ',';
    if (!i.addition_status.empty()) out << i.trimmed_states << ',' << i.minimal_states;
    else out << ',';
    out << '\n';
  }
}

}  // namespace dtnum
