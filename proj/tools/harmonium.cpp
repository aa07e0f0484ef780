// Command-line front end: reduce / score / harmony / compose / selftest.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "harmonium/report.hpp"
#include "harmonium/selftest.hpp"

namespace {

using namespace harmonium;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;  // config/parse errors
constexpr int kExitData = 2;    // unknown word / missing tensor

struct Options {
  std::string lexicon_path;
  std::string grammar_path;
  std::string tensors_path;
  std::string input_path;
  GradingWeights weights;
  std::string base_override;
  std::string format = "json";
  std::size_t cap = 1024;
  unsigned jobs = 1;
  std::string anchors = "root";
  bool include_words = false;
  int arity = 2;
  int depth_max = 8;
};

std::vector<std::string> split_words(const std::string& sentence) {
  std::istringstream in(sentence);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(std::move(w));
  return words;
}

Lexicon load_lexicon(const Options& opt) {
  if (opt.lexicon_path.empty())
    throw Error("this command needs --lexicon");
  Lexicon lex = Lexicon::load_file(opt.lexicon_path);
  if (!opt.base_override.empty()) lex.set_sentence_base(BaseType{opt.base_override});
  return lex;
}

void warn_truncated(const BestAssignment& best, const std::string& sentence) {
  if (best.truncated)
    std::cerr << "warning: ambiguity cap exceeded, candidates truncated for: "
              << sentence << "\n";
}

int cmd_reduce(const Options& opt, const std::string& sentence) {
  const Lexicon lex = load_lexicon(opt);
  const auto words = split_words(sentence);
  const BestAssignment best = grade_best_assignment(words, lex, opt.weights, opt.cap);
  warn_truncated(best, sentence);
  if (opt.format == "json") {
    std::cout << reduce_record(words, best).dump() << "\n";
  } else if (opt.format == "dot") {
    std::cout << reduction_to_dot(best.reduction);
  } else {
    std::cout << reduction_text(best.reduction) << "\n";
    std::cout << "links:";
    for (const Link& l : best.reduction.links) std::cout << " (" << l.i << "," << l.j << ")";
    std::cout << "\n";
  }
  return kExitOk;
}

std::string score_line(const Options& opt, const Lexicon& lex, const std::string& sentence) {
  const auto words = split_words(sentence);
  const BestAssignment best = grade_best_assignment(words, lex, opt.weights, opt.cap);
  if (opt.format == "text") {
    std::ostringstream out;
    out << reduction_text(best.reduction) << "  harmony=" << best.score.harmony
        << " grammatical=" << (best.score.sentence_reached ? "true" : "false")
        << " links=" << best.score.links;
    return out.str();
  }
  return score_record(words, best).dump();
}

int cmd_score(const Options& opt, const std::string& sentence, bool batch) {
  const Lexicon lex = load_lexicon(opt);
  if (!batch) {
    std::cout << score_line(opt, lex, sentence) << "\n";
    return kExitOk;
  }
  std::vector<std::string> lines;
  if (opt.input_path == "-") {
    std::string line;
    while (std::getline(std::cin, line)) lines.push_back(std::move(line));
  } else {
    std::ifstream in(opt.input_path);
    if (!in) throw Error("cannot open input file: " + opt.input_path);
    std::string line;
    while (std::getline(in, line)) lines.push_back(std::move(line));
  }
  std::vector<std::string> out(lines.size());
  const unsigned jobs = std::max(1u, opt.jobs);
  if (jobs == 1 || lines.size() <= 1) {
    for (std::size_t k = 0; k < lines.size(); ++k) out[k] = score_line(opt, lex, lines[k]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
      pool.emplace_back([&, t]() {
        for (std::size_t k = t; k < lines.size(); k += jobs)
          out[k] = score_line(opt, lex, lines[k]);
      });
    for (std::thread& th : pool) th.join();
  }
  for (const std::string& line : out) std::cout << line << "\n";
  return kExitOk;
}

int cmd_harmony(const Options& opt, const std::string& tree_text) {
  if (opt.grammar_path.empty()) throw Error("harmony needs --grammar");
  const auto templates = load_grammar_file(opt.grammar_path);
  const TreeNode tree = parse_tree_literal(tree_text);

  std::vector<std::string> fillers;
  for (const HarmonicRule& r : templates) {
    for (const std::string* sym : {&r.parent, &r.left, &r.right})
      if (!sym->empty() && std::find(fillers.begin(), fillers.end(), *sym) == fillers.end())
        fillers.push_back(*sym);
  }
  collect_tree_labels(tree, opt.include_words, fillers);

  const Spaces spaces{FillerSpace(fillers), RoleSpace(opt.arity, opt.depth_max)};
  std::vector<HarmonicRule> rules;
  if (opt.anchors == "all") {
    for (const HarmonicRule& t : templates)
      for (HarmonicRule& r : instantiate_rule_at_all_anchors(t, spaces.roles))
        rules.push_back(std::move(r));
  } else {
    rules = templates;  // templates are root-anchored as written
  }
  const GrammarMatrix g = grammar_matrix(std::move(rules), spaces);
  const StructureVector s = tree_to_structure(tree, spaces, opt.include_words);

  if (opt.format == "json") {
    std::cout << harmony_record(s, g).dump() << "\n";
    return kExitOk;
  }
  std::cout << "H = " << round12(harmony(s, g)) << "\n";
  for (const HarmonicRule& r : g.rules()) {
    const double h = rule_harmony(s, r);
    if (h == 0.0) continue;
    if (r.kind == RuleKind::Root)
      std::cout << "  root " << r.parent;
    else
      std::cout << "  " << r.parent << " -> " << r.left << " " << r.right;
    std::cout << " @ [";
    for (std::size_t k = 0; k < r.anchor.size(); ++k)
      std::cout << (k ? "," : "") << r.anchor[k];
    std::cout << "]: " << round12(h) << "\n";
  }
  return kExitOk;
}

int cmd_compose(const Options& opt, const std::string& sentence) {
  if (opt.tensors_path.empty()) throw Error("compose needs --tensors");
  const TensorStore store = TensorStore::load_file(opt.tensors_path);
  const auto words = split_words(sentence);
  std::vector<WordTensor> tensors;
  tensors.reserve(words.size());
  for (const std::string& w : words) tensors.push_back(store.get(w));

  PregroupType concat;
  for (const WordTensor& w : tensors) concat = concat + w.type;
  const Reduction r = max_reduction(concat);
  const WordTensor result = compose(tensors, r, store.spaces());

  if (opt.format == "json") {
    std::cout << compose_record(words, result).dump() << "\n";
    return kExitOk;
  }
  std::cout << reduction_text(r) << "\n";
  std::cout << "shape:";
  for (Eigen::Index d : result.data.shape()) std::cout << " " << d;
  std::cout << "\nvalues:";
  for (Eigen::Index k = 0; k < result.data.size(); ++k)
    std::cout << " " << round12(result.data[k]);
  std::cout << "\n";
  return kExitOk;
}

int cmd_selftest() {
  std::uint64_t seed = 20259;
  if (const char* env = std::getenv("PH_SEED")) seed = std::strtoull(env, nullptr, 10);
  int failures = 0;
  const auto report = [&](const selftest::SuiteResult& res) {
    std::cout << (res.ok() ? "[PASS] " : "[FAIL] ") << res.name << " (" << res.cases
              << " cases)\n";
    for (const std::string& msg : res.messages) std::cout << "       " << msg << "\n";
    if (!res.ok()) ++failures;
  };
  report(selftest::run_reducer_oracle(seed, 500));
  report(selftest::run_ics_exactness(seed + 1, 200));
  report(selftest::run_compose_oracle(seed + 2, 60, 10));
  return failures == 0 ? kExitOk : kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pregroup reductions, graded grammaticality, and tensor semantics"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--lexicon,-l", opt.lexicon_path, "lexicon file (word<TAB>type lines)");
  app.add_option("--grammar,-g", opt.grammar_path, "harmonic grammar file");
  app.add_option("--tensors,-t", opt.tensors_path, "word tensor file");
  app.add_option("--w-eps", opt.weights.per_reduction, "points per cancellation link");
  app.add_option("--w-s", opt.weights.sentence_bonus, "points for reaching the sentence type");
  app.add_option("--base", opt.base_override, "sentence base type (overrides lexicon)");
  app.add_option("--format,-f", opt.format, "output format: json|text|dot")
      ->check(CLI::IsMember({"json", "text", "dot"}));
  app.add_option("--cap", opt.cap, "ambiguity cap on type assignments")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs", opt.jobs, "worker threads for batch scoring")
      ->check(CLI::PositiveNumber);
  app.add_option("--anchors", opt.anchors, "rule instantiation: root|all")
      ->check(CLI::IsMember({"root", "all"}));
  app.add_flag("--include-words", opt.include_words, "bind leaf words as fillers");
  app.add_option("--arity", opt.arity, "role space branching factor")
      ->check(CLI::PositiveNumber);
  app.add_option("--depth-max", opt.depth_max, "role space depth limit")
      ->check(CLI::NonNegativeNumber);

  std::string sentence;
  std::string tree_text;

  CLI::App* reduce = app.add_subcommand("reduce", "maximal reduction of a sentence");
  reduce->add_option("sentence", sentence, "whitespace-separated words");

  CLI::App* score = app.add_subcommand("score", "graded grammaticality of sentences");
  score->add_option("sentence", sentence, "whitespace-separated words");
  score->add_option("--input", opt.input_path, "file of sentences, one per line ('-' = stdin)");

  CLI::App* harm = app.add_subcommand("harmony", "quadratic-form harmony of a tree");
  harm->add_option("tree", tree_text, "bracketed tree literal, e.g. \"[S [N John] [V runs]]\"")
      ->required();

  CLI::App* comp = app.add_subcommand("compose", "contract word tensors along the reduction");
  comp->add_option("sentence", sentence, "whitespace-separated words");

  app.add_subcommand("selftest", "randomized oracle-equivalence suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (reduce->parsed()) return cmd_reduce(opt, sentence);
    if (score->parsed()) return cmd_score(opt, sentence, !opt.input_path.empty());
    if (harm->parsed()) return cmd_harmony(opt, tree_text);
    if (comp->parsed()) return cmd_compose(opt, sentence);
    return cmd_selftest();
  } catch (const UnknownWordError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const UnknownFillerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
