// qfaeq: simulate multi-letter quantum finite automata and check equivalence.
//
// Exit codes: 0 success / equivalent, 1 not equivalent, 2 usage or input
// error, 3 rank-tolerance escalation (span basis cap exceeded).

#include "qfaeq/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using nlohmann::json;
using namespace qfaeq;

enum Exit : int
{
  kOk = 0,
  kNotEquivalent = 1,
  kInputError = 2,
  kCapViolation = 3,
};

struct Globals
{
  bool       json_out = false;
  Tolerances tol;
};

auto fmt12(double p) -> std::string
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12f", std::clamp(p, 0.0, 1.0));
  return buf;
}

void emit(Globals const &g, json const &record, std::string const &text)
{
  if (g.json_out) {
    std::cout << record.dump() << '\n';
  } else {
    std::cout << text << '\n';
  }
}

auto load_or_report(std::string const &path, Globals const &g, MultiLetterQFA &out) -> bool
{
  auto r = load_qfa(path, g.tol);
  if (!r.ok()) {
    if (g.json_out) {
      std::cout << json{{"status", "error"}, {"errors", r.errors}}.dump() << '\n';
    } else {
      for (auto const &e : r.errors) { std::cerr << e << '\n'; }
    }
    return false;
  }
  out = std::move(*r.automaton);
  return true;
}

void write_output(std::string const &path, std::string const &text)
{
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) { throw InputError("cannot write " + path); }
  out << text;
}

auto verdict_record(EquivalenceVerdict const &v) -> json
{
  json rec;
  rec["verdict"] = v.equivalent() ? "equivalent" : "not-equivalent";
  if (v.counterexample) {
    rec["witness"] = v.counterexample->word;
    rec["p1"] = v.counterexample->p1;
    rec["p2"] = v.counterexample->p2;
  } else {
    rec["witness"] = nullptr;
    rec["p1"] = nullptr;
    rec["p2"] = nullptr;
  }
  auto const &st = v.stats;
  rec["method"] = method_name(st.method);
  rec["effective_z"] = st.effective_z;
  rec["words_evaluated"] = st.words_evaluated;
  rec["total_insertions"] = st.total_insertions;
  rec["classes_touched"] = st.classes_touched();
  rec["class_count"] = st.class_count;
  rec["class_cap"] = st.class_cap;
  if (st.bound_unary) { rec["bound_thm1"] = *st.bound_unary; }
  rec["bound_remark"] = st.bound_reference;
  return rec;
}

auto counterexample_text(Counterexample const &c) -> std::string
{
  return "not equivalent: witness " + json(c.word).dump() + " p1=" + fmt12(c.p1) + " p2=" + fmt12(c.p2);
}

auto cmd_validate(Globals const &g, std::string const &file) -> int
{
  auto r = load_qfa(file, g.tol);
  if (g.json_out) {
    std::cout << json{{"status", r.ok() ? "valid" : "invalid"}, {"errors", r.errors}}.dump() << '\n';
  } else if (r.ok()) {
    std::cout << "valid\n";
  } else {
    for (auto const &e : r.errors) { std::cout << e << '\n'; }
  }
  return r.ok() ? kOk : kInputError;
}

auto cmd_prob(Globals const &g, std::string const &file, std::string const &word) -> int
{
  MultiLetterQFA a;
  if (!load_or_report(file, g, a)) { return kInputError; }
  auto const p = acceptance_probability(a, word);
  emit(g, json{{"word", word}, {"probability", p}}, fmt12(p));
  return kOk;
}

auto cmd_equiv(Globals const &g, std::string const &fa, std::string const &fb, std::string const &method) -> int
{
  MultiLetterQFA a1, a2;
  if (!load_or_report(fa, g, a1) || !load_or_report(fb, g, a2)) { return kInputError; }
  auto const v = decide_equivalence(a1, a2, {parse_method(method), g.tol});
  std::string text;
  if (v.equivalent()) {
    text = "equivalent (method " + method_name(v.stats.method) + ", effective z " +
           std::to_string(v.stats.effective_z) + ", " + std::to_string(v.stats.words_evaluated) + " words)";
  } else {
    text = counterexample_text(*v.counterexample);
  }
  emit(g, verdict_record(v), text);
  return v.equivalent() ? kOk : kNotEquivalent;
}

auto cmd_sum(Globals const &g, std::string const &fa, std::string const &fb, std::string const &out) -> int
{
  MultiLetterQFA a1, a2;
  if (!load_or_report(fa, g, a1) || !load_or_report(fb, g, a2)) { return kInputError; }
  auto const s = diagonal_sum(a1, a2);
  write_output(out, serialize_diagonal_sum(s));
  if (!out.empty() && out != "-") {
    emit(g, json{{"output", out}, {"states", s.n()}, {"k", s.k}, {"blocks", {s.n1, s.n2}}},
         "wrote " + out + " (states " + std::to_string(s.n()) + ", k " + std::to_string(s.k) + ")");
  }
  return kOk;
}

auto cmd_gen(Globals const &g, long states, int k, std::string const &alphabet, std::uint64_t seed,
             std::string const &out) -> int
{
  auto const a = gen_random_qfa(states, k, Alphabet(alphabet), seed);
  write_output(out, serialize_qfa(a));
  if (!out.empty() && out != "-") {
    emit(g, json{{"output", out}, {"seed", seed}}, "wrote " + out);
  }
  return kOk;
}

auto cmd_oracle(Globals const &g, std::string const &fa, std::string const &fb, std::uint64_t max_len,
                std::uint64_t budget) -> int
{
  MultiLetterQFA a1, a2;
  if (!load_or_report(fa, g, a1) || !load_or_report(fb, g, a2)) { return kInputError; }
  auto const r = exhaustive_check(a1, a2, max_len, g.tol.prob, budget);
  json rec{{"max_length", r.max_length}, {"words_checked", r.words_checked}};
  if (r.counterexample) {
    rec["verdict"] = "not-equivalent";
    rec["witness"] = r.counterexample->word;
    rec["p1"] = r.counterexample->p1;
    rec["p2"] = r.counterexample->p2;
    emit(g, rec, counterexample_text(*r.counterexample));
    return kNotEquivalent;
  }
  rec["verdict"] = "exhausted-clean";
  emit(g, rec, "exhausted-clean up to length " + std::to_string(r.max_length));
  return kOk;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Multi-letter quantum finite automata: simulation and equivalence checking"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_flag("--json", g.json_out, "Emit one JSON record instead of text");
  app.add_option("--tol-prob", g.tol.prob, "Probability comparison tolerance")->envname("QFAEQ_TOL_PROB");
  app.add_option("--tol-rank", g.tol.rank, "Relative residual threshold for span bases")->envname("QFAEQ_TOL_RANK");
  app.add_option("--tol-unitary", g.tol.unitary, "Max |U^dagger U - I| accepted")->envname("QFAEQ_TOL_UNITARY");
  app.add_option("--tol-norm", g.tol.norm, "Initial-vector norm tolerance")->envname("QFAEQ_TOL_NORM");

  std::string file_a, file_b, word, out, method = "auto", alphabet;
  long        states = 2;
  int         k = 1;
  std::uint64_t seed = 0, max_len = 6, budget = kDefaultOracleBudget;

  auto *validate = app.add_subcommand("validate", "Check an automaton document");
  validate->add_option("file", file_a)->required();

  auto *prob = app.add_subcommand("prob", "Acceptance probability of a word");
  prob->add_option("file", file_a)->required();
  prob->add_option("word", word, "Bare symbol string; \"\" for the empty word")->required();

  auto *equiv = app.add_subcommand("equiv", "Decide equivalence of two automata");
  equiv->add_option("file_a", file_a)->required();
  equiv->add_option("file_b", file_b)->required();
  equiv->add_option("--method", method, "auto | unary-bound | span")
    ->check(CLI::IsMember({"auto", "unary-bound", "span", "span-closure"}));

  auto *sum = app.add_subcommand("sum", "Write the diagonal sum of two automata");
  sum->add_option("file_a", file_a)->required();
  sum->add_option("file_b", file_b)->required();
  sum->add_option("-o,--output", out, "Output file (default stdout)");

  auto *gen = app.add_subcommand("gen", "Generate a random automaton");
  gen->add_option("--states", states)->required()->check(CLI::PositiveNumber);
  gen->add_option("--k", k)->required()->check(CLI::PositiveNumber);
  gen->add_option("--alphabet", alphabet)->required();
  gen->add_option("--seed", seed)->required();
  gen->add_option("-o,--output", out, "Output file (default stdout)");

  auto *oracle = app.add_subcommand("oracle", "Compare two automata on every word up to a length");
  oracle->add_option("file_a", file_a)->required();
  oracle->add_option("file_b", file_b)->required();
  oracle->add_option("--max-len", max_len)->required();
  oracle->add_option("--budget", budget, "Maximum number of words");

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const &e) {
    auto const rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*validate) { return cmd_validate(g, file_a); }
    if (*prob) { return cmd_prob(g, file_a, word); }
    if (*equiv) { return cmd_equiv(g, file_a, file_b, method); }
    if (*sum) { return cmd_sum(g, file_a, file_b, out); }
    if (*gen) { return cmd_gen(g, states, k, alphabet, seed, out); }
    if (*oracle) { return cmd_oracle(g, file_a, file_b, max_len, budget); }
  } catch (CapViolation const &e) {
    std::cerr << "tolerance escalation: " << e.what() << '\n';
    return kCapViolation;
  } catch (std::exception const &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
