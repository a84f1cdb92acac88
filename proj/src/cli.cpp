#include "dtnum/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "dtnum/dtns.hpp"
#include "dtnum/emit.hpp"
#include "dtnum/error.hpp"
#include "dtnum/oracle.hpp"
#include "dtnum/pisot.hpp"
#include "dtnum/relations.hpp"
#include "dtnum/seqauto.hpp"

namespace dtnum::cli {

namespace {

namespace fs = std::filesystem;

// Exit codes.
constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string subst;
  std::string start = "a";
  std::string seqauto;
  std::string mode = "pisot";
  long bound = 0;
  std::string out;
  std::string name;
  std::size_t max = 0;
  unsigned jobs = 1;
  std::string format;
  bool force = false;
  bool verbose = false;
  std::string coeffs;
  long rhs = 0;
  bool survey_addition = false;
  std::vector<std::string> args;
};

// The numeration system selected on the command line.
struct Source {
  std::optional<DtnsSystem> system;
  SeqAutomaton automaton;

  const SeqAutomaton& weighted() const { return system ? system->weighted : automaton; }
  Numeration numeration() const { return system ? Numeration::of(*system) : Numeration::of(automaton); }
};

Source load_source(const Options& o) {
  if (o.subst.empty() == o.seqauto.empty()) throw UsageError("give exactly one of --subst or --seqauto");
  Source s;
  if (!o.subst.empty()) {
    if (o.start.size() != 1) throw UsageError("--start takes a single letter");
    s.system = build_system(parse_substitution(o.subst, o.start[0]));
  } else {
    std::ifstream in(o.seqauto);
    if (!in) throw Error("cannot read " + o.seqauto);
    s.automaton = parse_seqauto(in);
  }
  return s;
}

BoundSpec bound_spec(const Options& o) {
  BoundSpec b;
  if (o.mode == "manual") {
    if (o.bound <= 0) throw UsageError("--mode manual needs a positive --bound");
    b.mode = BoundMode::manual;
    b.manual_bound = o.bound;
  } else if (o.mode != "pisot") {
    throw UsageError("--mode must be pisot or manual");
  }
  return b;
}

void write_new(const fs::path& path, const std::string& content, bool force) {
  if (fs::exists(path) && !force) throw Error(path.string() + " exists (use --force to overwrite)");
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string weights_text(const SeqAutomaton& a) {
  std::ostringstream out;
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Symbol s = 0; s < a.symbols(); ++s) {
      if (a.next(q, s) == Dfa::kNone) continue;
      out << "  " << a.name(q) << " --" << a.alphabet().label(s) << "--> " << a.name(a.next(q, s)) << "  weight";
      for (const auto& v : a.weight(q, s).terms(std::max<std::size_t>(a.order(), 6))) out << ' ' << v.get_str();
      out << " ...\n";
    }
  return out.str();
}

void print_stats(const RelationResult& r) {
  std::cerr << "flattening: explored " << r.stats.explored << ", pruned " << r.stats.pruned << ", peak frontier "
            << r.stats.peak_frontier << ", trimmed " << r.stats.trimmed << ", minimal " << r.automaton.size() << '\n';
  std::cerr << "bounds:";
  for (const auto& b : r.bounds) std::cerr << ' ' << b.get_str();
  std::cerr << '\n';
}

int cmd_analyze(const Options& o) {
  Source src = load_source(o);
  const SeqAutomaton& a = src.weighted();
  if (src.system) {
    const auto& sys = *src.system;
    std::cout << "substitution: " << sys.substitution.to_string() << " (start " << sys.substitution.start << ")\n";
    std::cout << "addressing automaton:\n";
    for (std::size_t q = 0; q < sys.addressing.size(); ++q) {
      std::cout << "  " << sys.substitution.alphabet[q] << ':';
      for (Symbol i = 0; i < sys.addressing.symbols(); ++i)
        if (sys.addressing.next(q, i) != Dfa::kNone)
          std::cout << ' ' << i << "->" << sys.substitution.alphabet[sys.addressing.next(q, i)];
      std::cout << '\n';
    }
    std::cout << "incidence polynomial: " << sys.incidence_polynomial.to_string() << '\n';
  }
  std::cout << "weights:\n" << weights_text(a);
  const IntPolynomial rec = src.system ? src.system->recurrence : reduce_annihilator(a).annihilator();
  std::cout << "recurrence polynomial: " << rec.to_string() << '\n';
  auto up = is_ultimately_pisot(rec);
  if (up)
    std::cout << "verdict: ultimately Pisot (X^" << up->k << " * " << up->pisot_factor.to_string() << ")\n";
  else
    std::cout << "verdict: not ultimately Pisot\n";
  return kOk;
}

int cmd_fixpoint(const Options& o) {
  Source src = load_source(o);
  if (!src.system) throw UsageError("fixpoint needs --subst");
  std::cout << fixpoint_prefix(src.system->substitution, o.max ? o.max : 50) << '\n';
  return kOk;
}

int cmd_rep(const Options& o) {
  Source src = load_source(o);
  if (o.args.empty()) throw UsageError("rep needs one or more integers");
  Numeration num = src.numeration();
  for (const auto& arg : o.args) {
    std::size_t n;
    try {
      std::size_t used = 0;
      n = std::stoul(arg, &used);
      if (used != arg.size()) throw std::invalid_argument(arg);
    } catch (const std::exception&) {
      throw UsageError("not a natural number: " + arg);
    }
    std::cout << format_digits(num.rep(n)) << '\n';
  }
  return kOk;
}

int cmd_val(const Options& o) {
  Source src = load_source(o);
  if (o.args.empty()) throw UsageError("val needs one or more digit words");
  Numeration num = src.numeration();
  for (const auto& arg : o.args) std::cout << num.val(parse_digits(arg)).get_str() << '\n';
  return kOk;
}

int export_relation(const Options& o, const Source& src, const RelationResult& r, const std::string& kind) {
  if (o.out.empty()) return kOk;
  const std::string format = o.format.empty() ? "walnut" : o.format;
  const std::string name = o.name.empty() ? "sys" : o.name;
  if (!valid_walnut_name(name)) throw UsageError("--name must be lowercase alphanumeric starting with a letter");
  const fs::path dir(o.out);
  if (format == "dot") {
    write_new(dir / (name + "_" + kind + ".dot"), emit_dot(r.automaton), o.force);
  } else if (format == "walnut") {
    if (kind == "addition" && src.system) {
      WalnutBundle b = emit_walnut(*src.system, r.automaton, name);
      std::string upper = name;
      for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      write_new(dir / ("msd_" + name + ".txt"), b.recognizer, o.force);
      write_new(dir / ("msd_" + name + "_addition.txt"), b.addition, o.force);
      write_new(dir / (upper + ".txt"), b.word_automaton, o.force);
      write_new(dir / (name + "_check.txt"), b.check_script, o.force);
      write_new(dir / "README.txt", b.readme, o.force);
    } else {
      write_new(dir / ("msd_" + name + "_" + kind + ".txt"), emit_walnut_automaton(r.automaton), o.force);
    }
  } else {
    throw UsageError("--format must be dot or walnut");
  }
  return kOk;
}

int cmd_addition(const Options& o) {
  Source src = load_source(o);
  RelationResult r = addition_automaton(src.weighted(), bound_spec(o));
  if (o.verbose) print_stats(r);
  std::cout << "trimmed flattening: " << r.trimmed_states << " states\n";
  std::cout << "minimal automaton: " << r.automaton.size() << " states\n";
  const std::size_t n = o.max ? o.max : 300;
  Report rep = check_addition(r.automaton, src.numeration(), n);
  if (!rep.ok) {
    std::cout << "oracle: FAILED: " << rep.failure << '\n';
    return kFailed;
  }
  std::cout << "oracle: passed for x, y < " << n << " (" << rep.checked << " checks)\n";
  return export_relation(o, src, r, "addition");
}

int cmd_constraint(const Options& o) {
  Source src = load_source(o);
  if (o.coeffs.empty()) throw UsageError("constraint needs --coeffs, e.g. --coeffs 1,-1");
  ConstraintSpec spec;
  std::stringstream ss(o.coeffs);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      spec.coefficients.emplace_back(std::stol(tok));
    } catch (const std::exception&) {
      throw UsageError("bad coefficient '" + tok + "'");
    }
  }
  spec.rhs = o.rhs;
  RelationResult r = linear_constraint_automaton(src.weighted(), spec, bound_spec(o));
  if (o.verbose) print_stats(r);
  std::cout << "trimmed flattening: " << r.trimmed_states << " states\n";
  std::cout << "minimal automaton: " << r.automaton.size() << " states\n";
  return export_relation(o, src, r, "constraint");
}

int cmd_emit(const Options& o) {
  Source src = load_source(o);
  const std::string format = o.format.empty() ? "dot" : o.format;
  std::string text;
  std::string file;
  if (format == "dot") {
    text = src.system ? emit_dot(src.system->addressing, src.system->substitution.alphabet) : emit_dot(src.automaton);
    file = (o.name.empty() ? "sys" : o.name) + ".dot";
  } else if (format == "walnut") {
    Dfa rec = src.system ? src.system->addressing : src.automaton.underlying();
    rec.clear_outputs();
    text = emit_walnut_automaton(minimize(rec));
    file = "msd_" + (o.name.empty() ? std::string("sys") : o.name) + ".txt";
  } else {
    throw UsageError("--format must be dot or walnut");
  }
  if (o.out.empty())
    std::cout << text;
  else
    write_new(fs::path(o.out) / file, text, o.force);
  return kOk;
}

int cmd_check(const Options& o) {
  Source src = load_source(o);
  const std::size_t n = o.max ? o.max : 1000;
  Numeration num = src.numeration();
  Report rn = check_numeration(num, n);
  if (!rn.ok) {
    std::cout << "numeration: FAILED: " << rn.failure << '\n';
    return kFailed;
  }
  std::cout << "numeration: passed for k < " << n << '\n';
  try {
    RelationResult r = addition_automaton(src.weighted(), bound_spec(o));
    if (o.verbose) print_stats(r);
    const std::size_t na = std::min<std::size_t>(n, 300);
    Report ra = check_addition(r.automaton, num, na);
    if (!ra.ok) {
      std::cout << "addition: FAILED: " << ra.failure << '\n';
      return kFailed;
    }
    std::cout << "addition: passed for x, y < " << na << '\n';
  } catch (const NotPisotError& e) {
    std::cout << "addition: skipped (" << e.what() << ")\n";
  }
  return kOk;
}

int cmd_survey(const Options& o) {
  SurveyConfig c;
  c.jobs = o.jobs;
  c.addition = o.survey_addition;
  if (o.bound > 0) c.manual_bound = o.bound;
  SurveyReport r = survey(c);
  std::ostringstream csv;
  write_survey_csv(csv, r);
  if (o.out.empty())
    std::cout << csv.str();
  else
    write_new(fs::path(o.out) / "survey.csv", csv.str(), o.force);
  std::cerr << "convention: " << r.convention << '\n';
  std::cerr << "total: " << r.total() << ", ultimately Pisot: " << r.ultimately_pisot();
  if (c.addition) std::cerr << ", addable by manual bound (not ultimately Pisot): " << r.addable();
  std::cerr << '\n';
  return kOk;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Dumont-Thomas numeration systems: addressing, flattening and addition automata"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--subst", o.subst, "substitution, e.g. \"a->abb;b->a\"");
  app.add_option("--start", o.start, "letter the fixpoint starts with")->capture_default_str();
  app.add_option("--seqauto", o.seqauto, "sequence automaton file");
  app.add_option("--mode", o.mode, "bound mode: pisot or manual")->capture_default_str();
  app.add_option("--bound", o.bound, "manual bound");
  app.add_option("--out", o.out, "output directory");
  app.add_option("--name", o.name, "system name for exported files");
  app.add_option("--max", o.max, "size of checks or prefixes");
  app.add_option("--jobs", o.jobs, "survey threads")->capture_default_str();
  app.add_option("--format", o.format, "dot, walnut or csv");
  app.add_flag("--force", o.force, "overwrite existing files");
  app.add_flag("-v,--verbose", o.verbose, "print flattening statistics");

  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const Options&);
  };
  const std::vector<Entry> commands = {
      {"analyze", "addressing automaton, weights, recurrence polynomial and Pisot verdict", cmd_analyze},
      {"fixpoint", "prefix of the fixpoint", cmd_fixpoint},
      {"rep", "representations of integers", cmd_rep},
      {"val", "values of digit words", cmd_val},
      {"addition", "build, verify and export the addition automaton", cmd_addition},
      {"constraint", "linear equality constraint automaton", cmd_constraint},
      {"emit", "export the numeration automaton", cmd_emit},
      {"check", "brute-force oracle checks", cmd_check},
      {"survey", "classify short substitutions", cmd_survey}};
  std::vector<std::pair<CLI::App*, int (*)(const Options&)>> subs;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    if (std::string(c.name) == "rep" || std::string(c.name) == "val") sub->add_option("values", o.args, "inputs");
    if (std::string(c.name) == "constraint") {
      sub->add_option("--coeffs", o.coeffs, "comma-separated coefficients");
      sub->add_option("--rhs", o.rhs, "right-hand side")->capture_default_str();
    }
    if (std::string(c.name) == "survey") sub->add_flag("--addition", o.survey_addition, "also attempt addition automata");
    subs.emplace_back(sub, c.fn);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (auto& [sub, fn] : subs)
      if (sub->parsed()) return fn(o);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const BoundExplosion& e) {
    std::cerr << "error: " << e.what() << " (the flattening may be infinite; try another bound)\n";
    return kFailed;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kUsage;
}

}  // namespace dtnum::cli
