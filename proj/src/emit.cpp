#include "dtnum/emit.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtnum/error.hpp"

namespace dtnum {

namespace {

// BFS order of the states reachable from the initial state.
template <class Automaton>
std::vector<std::size_t> bfs_order(const Automaton& a, std::vector<std::size_t>& index) {
  index.assign(a.size(), Dfa::kNone);
  std::vector<std::size_t> order;
  if (a.size() == 0) return order;
  index[a.initial()] = 0;
  order.push_back(a.initial());
  for (std::size_t head = 0; head < order.size(); ++head)
    for (Symbol s = 0; s < a.symbols(); ++s) {
      std::size_t t = a.next(order[head], s);
      if (t != Dfa::kNone && index[t] == Dfa::kNone) {
        index[t] = order.size();
        order.push_back(t);
      }
    }
  return order;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}

std::string walnut_digits(const Alphabet& al, Symbol s) {
  std::string out;
  for (unsigned d : al.decode(s)) {
    if (!out.empty()) out += ' ';
    out += std::to_string(d);
  }
  return out;
}

}  // namespace

std::string emit_dot(const Dfa& d, const std::string& letters) {
  std::vector<std::size_t> index;
  auto order = bfs_order(d, index);
  std::ostringstream out;
  out << "digraph {\n  rankdir=LR;\n  node [shape=circle];\n  init [shape=point, label=\"\"];\n";
  if (!order.empty()) out << "  init -> 0;\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t q = order[i];
    std::string label = std::to_string(i);
    if (d.has_outputs() && !letters.empty() && d.output(q) >= 0 && static_cast<std::size_t>(d.output(q)) < letters.size())
      label = std::string(1, letters[static_cast<std::size_t>(d.output(q))]);
    out << "  " << i << " [label=" << quote(label);
    if (d.accepting(q)) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Symbol s = 0; s < d.symbols(); ++s) {
      std::size_t t = d.next(order[i], s);
      if (t != Dfa::kNone) out << "  " << i << " -> " << index[t] << " [label=" << quote(d.alphabet().label(s)) << "];\n";
    }
  out << "}\n";
  return out.str();
}

std::string emit_dot(const SeqAutomaton& a) {
  std::vector<std::size_t> index;
  auto order = bfs_order(a, index);
  std::ostringstream out;
  out << "digraph {\n  rankdir=LR;\n  node [shape=circle];\n  init [shape=point, label=\"\"];\n";
  if (!order.empty()) out << "  init -> 0;\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    out << "  " << i << " [label=" << quote(a.name(order[i]));
    if (a.accepting(order[i])) out << ", shape=doublecircle";
    out << "];\n";
  }
  for (std::size_t i = 0; i < order.size(); ++i)
    for (Symbol s = 0; s < a.symbols(); ++s) {
      std::size_t t = a.next(order[i], s);
      if (t == Dfa::kNone) continue;
      std::string weight;
      for (const auto& v : a.weight_vector(order[i], s)) weight += (weight.empty() ? "" : ",") + v.get_str();
      out << "  " << i << " -> " << index[t] << " [label=" << quote(a.alphabet().label(s) + ": " + weight) << "];\n";
    }
  out << "}\n";
  return out.str();
}

std::string emit_walnut_automaton(const Dfa& d, bool word) {
  if (word && !d.has_outputs()) throw Error("word automaton needs outputs");
  std::vector<std::size_t> index;
  auto order = bfs_order(d, index);
  std::ostringstream out;
  const Alphabet& al = d.alphabet();
  for (std::size_t t = 0; t < al.arity(); ++t) {
    out << (t ? " {" : "{");
    for (unsigned digit = 0; digit < al.radix[t]; ++digit) out << (digit ? "," : "") << digit;
    out << '}';
  }
  out << '\n';
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t q = order[i];
    out << '\n' << i << ' ' << (word ? d.output(q) : int(d.accepting(q))) << '\n';
    for (Symbol s = 0; s < d.symbols(); ++s) {
      std::size_t t = d.next(q, s);
      if (t != Dfa::kNone) out << walnut_digits(al, s) << " -> " << index[t] << '\n';
    }
  }
  return out.str();
}

Dfa parse_walnut_automaton(const std::string& text, bool word) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) { throw ParseError("walnut line " + std::to_string(line_no) + ": " + why); };

  std::vector<unsigned> radix;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::size_t pos = 0;
    while ((pos = line.find('{', pos)) != std::string::npos) {
      std::size_t close = line.find('}', pos);
      if (close == std::string::npos) fail("unterminated alphabet block");
      unsigned count = 0;
      std::istringstream digits(line.substr(pos + 1, close - pos - 1));
      std::string tok;
      while (std::getline(digits, tok, ',')) {
        if (std::stoul(tok) != count) fail("alphabet digits must be 0, 1, ... in order");
        ++count;
      }
      radix.push_back(count);
      pos = close + 1;
    }
    if (radix.empty()) fail("expected alphabet blocks");
    break;
  }

  Dfa d{Alphabet(radix)};
  struct Edge {
    std::size_t from;
    Symbol s;
    std::size_t to;
  };
  std::vector<Edge> edges;
  std::vector<std::pair<std::size_t, int>> states;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    auto arrow = line.find("->");
    if (arrow == std::string::npos) {
      std::size_t id;
      int flag;
      if (!(ls >> id >> flag) || id != states.size()) fail("expected state header '<id> <value>' in order");
      states.emplace_back(id, flag);
      continue;
    }
    if (states.empty()) fail("transition before any state");
    std::istringstream lhs(line.substr(0, arrow)), rhs(line.substr(arrow + 2));
    Digits digits;
    unsigned v;
    while (lhs >> v) digits.push_back(v);
    std::size_t to;
    if (digits.size() != radix.size() || !(rhs >> to)) fail("malformed transition");
    for (std::size_t t = 0; t < radix.size(); ++t)
      if (digits[t] >= radix[t]) fail("digit outside the alphabet");
    edges.push_back({states.back().first, d.alphabet().encode(digits), to});
  }
  for (const auto& [id, flag] : states) {
    d.add_state(word || flag != 0);
    if (word) d.set_output(id, flag);
  }
  for (const auto& e : edges) {
    if (e.to >= states.size()) fail("unknown destination state " + std::to_string(e.to));
    d.set_transition(e.from, e.s, e.to);
  }
  if (states.empty()) d.add_state(false);
  d.set_initial(0);
  return d;
}

bool valid_walnut_name(const std::string& name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::islower(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c));
  });
}

std::string emit_check_script(const std::string& name) {
  if (!valid_walnut_name(name)) throw Error("invalid Walnut name '" + name + "'");
  const std::string base = "?msd_" + name + " ";
  std::ostringstream out;
  out << "eval " << name << "_Total \"" << base << "Ax,y Ez x+y=z\";\n";
  out << "eval " << name << "_Function \"" << base << "Ax,y,z,w (x+y=z & x+y=w) => z=w\";\n";
  out << "eval " << name << "_Zero \"" << base << "Ax,z x+0=z <=> x=z\";\n";
  out << "eval " << name << "_One \"" << base << "Ax,w x+1=w <=> (x<w & (Ay x<y => w<=y))\";\n";
  out << "eval " << name << "_More \"" << base << "Ax,y,z,u,v (u=y+1 & v=z+1) => (x+y=z <=> x+u=v)\";\n";
  return out.str();
}

WalnutBundle emit_walnut(const DtnsSystem& sys, const Dfa& addition, const std::string& name) {
  if (!valid_walnut_name(name)) throw Error("invalid Walnut name '" + name + "'");
  if (addition.alphabet().arity() != 3) throw Error("addition automaton must have three tracks");

  WalnutBundle b;
  b.name = name;
  Dfa recognizer = sys.addressing;
  recognizer.clear_outputs();
  b.recognizer = emit_walnut_automaton(minimize(recognizer));
  b.addition = emit_walnut_automaton(minimize(addition));
  b.word_automaton = emit_walnut_automaton(minimize(sys.addressing), true);
  b.check_script = emit_check_script(name);

  std::ostringstream readme;
  readme << "Numeration system msd_" << name << " for the fixpoint of " << sys.substitution.to_string() << " at "
         << sys.substitution.start << ".\n\n"
         << "Copy msd_" << name << ".txt and msd_" << name << "_addition.txt into Walnut's Custom Bases directory,\n"
         << "the word automaton into Word Automata Library, and run the commands in " << name << "_check.txt.\n\n"
         << "Word automaton outputs encode letters in alphabet order:";
  for (std::size_t i = 0; i < sys.substitution.alphabet.size(); ++i)
    readme << ' ' << sys.substitution.alphabet[i] << '=' << i;
  readme << "\n";
  b.readme = readme.str();
  return b;
}

void WalnutBundle::write(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::string upper = name;
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  const std::vector<std::pair<std::string, const std::string*>> files = {
      {"msd_" + name + ".txt", &recognizer},
      {"msd_" + name + "_addition.txt", &addition},
      {upper + ".txt", &word_automaton},
      {name + "_check.txt", &check_script},
      {"README.txt", &readme}};
  for (const auto& [file, content] : files) {
    std::ofstream out(fs::path(dir) / file, std::ios::binary);
    if (!out) throw Error("cannot write " + (fs::path(dir) / file).string());
    out << *content;
  }
}

}  // namespace dtnum
