// Copyright 2026 The vapl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
// and exits non-zero when any criterion fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "testing.h"
#include "vapl/arguments.h"
#include "vapl/canonical.h"
#include "vapl/dataset.h"
#include "vapl/generator.h"
#include "vapl/nn_syntax.h"
#include "vapl/pipeline.h"
#include "vapl/printer.h"
#include "vapl/typecheck.h"

namespace vapl {
namespace {

using testing::BundledLibrary;
using testing::BundledParamDb;
using testing::BundledTemplates;
using testing::DataPath;

// Tolerances and sizes.
constexpr double kCoverageSeconds = 5.0;
constexpr size_t kMinCoveragePrograms = 50;
constexpr size_t kMinGeneratedPairs = 10000;
constexpr double kGenerateSeconds = 120.0;
constexpr double kSigmas = 3.0;
constexpr int kRandomPredicates = 1000;
constexpr int kMaxAtoms = 6;
constexpr int kSyntheticSentences = 1000;
constexpr double kQuickstartSeconds = 300.0;
constexpr uint64_t kSeed = 7;

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Collects failures for one criterion.
class Report {
 public:
  void Fail(const std::string &what) {
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  void Expect(bool ok, const std::string &what) {
    if (!ok) Fail(what);
  }
  void Note(const std::string &note) { notes_ += (notes_.empty() ? "" : "; ") + note; }
  bool ok() const { return count_ == 0; }

  bool Print(int criterion, const std::string &title) const {
    std::cout << "criterion " << criterion << ": " << (ok() ? "PASS" : "FAIL") << "  "
              << title;
    if (!notes_.empty()) std::cout << " (" << notes_ << ")";
    std::cout << "\n";
    for (const auto &f : failures_) std::cout << "    " << f << "\n";
    if (count_ > static_cast<int>(failures_.size())) {
      std::cout << "    ... " << count_ - failures_.size() << " more\n";
    }
    return ok();
  }

 private:
  std::vector<std::string> failures_;
  int count_ = 0;
  std::string notes_;
};

std::optional<TypedProgram> TypeNn(const Tokens &tokens) {
  try {
    auto typed = Typecheck(ParseNn(tokens, BundledLibrary()), BundledLibrary());
    if (typed.ok()) return std::move(typed).value();
  } catch (const Error &) {
  }
  return std::nullopt;
}

Tokens CanonicalNn(const std::string &program) {
  auto typed = Typecheck(ParseProgram(program), BundledLibrary());
  if (!typed.ok()) throw ValueError("does not typecheck: " + program);
  return EmitNn(Canonicalize(*typed, BundledLibrary()).program);
}

const GenerationResult &Generated() {
  static const GenerationResult *result = [] {
    GenerationConfig config;
    config.seed = kSeed;
    return new GenerationResult(
        Generate(BundledTemplates(), BundledLibrary(), BundledParamDb(), config));
  }();
  return *result;
}

// 1. Every coverage program parses, typechecks and survives both round trips.
bool GrammarCoverage() {
  Report r;
  const auto start = std::chrono::steady_clock::now();
  const auto corpus = testing::ReadCorpus(DataPath("coverage.txt"));
  r.Expect(corpus.size() >= kMinCoveragePrograms,
           "only " + std::to_string(corpus.size()) + " programs");
  std::string all;
  for (const auto &line : corpus) {
    try {
      auto typed = Typecheck(ParseProgram(line), BundledLibrary());
      if (!typed.ok()) {
        r.Fail("typecheck: " + line);
        continue;
      }
      const Program &p = typed->program;
      const std::string text = Pretty(p);
      all += text + "\n";
      r.Expect(ParseProgram(text) == p, "pretty round trip: " + line);
      r.Expect(ParseNn(EmitNn(p), BundledLibrary()) == p, "nn round trip: " + line);
    } catch (const Error &e) {
      r.Fail(line + ": " + e.what());
    }
  }
  for (const char *feature :
       {"now =>", "monitor ", "edge (", "timer base", "attimer time", " join ", " on ",
        "agg ", " filter ", " on new ", " { ", "!", " || ", " && ", " == ", " > ", " < ",
        " contains ", " substr ", " starts_with ", " ends_with ", " prefix_of ", "=> notify",
        "$?", "true", "enum:", "date:", "time:", "location:", "^^"}) {
    r.Expect(all.find(feature) != std::string::npos,
             std::string("no program uses '") + feature + "'");
  }
  const double secs = Seconds(start);
  r.Expect(secs < kCoverageSeconds, "took " + std::to_string(secs) + "s");
  r.Note(std::to_string(corpus.size()) + " programs, " + std::to_string(secs) + "s");
  return r.Print(1, "grammar coverage and round trips");
}

bool OracleValue(const Predicate &p, uint32_t row) {
  switch (p.kind) {
    case PredicateKind::kTrue: return true;
    case PredicateKind::kFalse: return false;
    case PredicateKind::kNot: return !OracleValue(*p.inner(), row);
    case PredicateKind::kAnd:
      return OracleValue(*p.operands[0], row) && OracleValue(*p.operands[1], row);
    case PredicateKind::kOr:
      return OracleValue(*p.operands[0], row) || OracleValue(*p.operands[1], row);
    case PredicateKind::kAtom: return (row >> std::stoi(p.param.substr(1))) & 1u;
    case PredicateKind::kGet: break;
  }
  throw ValueError("unexpected predicate");
}

PredicatePtr RandomPredicate(std::mt19937_64 &rng, int atoms, int depth) {
  const int choice = depth == 0 ? 0 : static_cast<int>(rng() % 10);
  if (choice <= 2) {
    return Predicate::Atom("v" + std::to_string(rng() % atoms), Operator::kEquals,
                           Value::Number(1));
  }
  if (choice == 3) return rng() % 2 ? Predicate::True() : Predicate::False();
  if (choice == 4) return Predicate::Not(RandomPredicate(rng, atoms, depth - 1));
  auto a = RandomPredicate(rng, atoms, depth - 1);
  auto b = RandomPredicate(rng, atoms, depth - 1);
  return choice < 7 ? Predicate::And(a, b) : Predicate::Or(a, b);
}

PredicatePtr SwapConjuncts(const PredicatePtr &p) {
  if (!p) return p;
  if (p->kind == PredicateKind::kAnd || p->kind == PredicateKind::kOr) {
    auto a = SwapConjuncts(p->operands[0]), b = SwapConjuncts(p->operands[1]);
    return p->kind == PredicateKind::kAnd ? Predicate::And(b, a) : Predicate::Or(b, a);
  }
  if (p->kind == PredicateKind::kNot) return Predicate::Not(SwapConjuncts(p->inner()));
  return p;
}

bool HasReferences(const Query &q) {
  switch (q.kind) {
    case QueryKind::kInvocation:
      return std::any_of(q.invocation.bindings.begin(), q.invocation.bindings.end(),
                         [](const Binding &b) { return b.is_output_ref(); });
    case QueryKind::kJoin:
      return !q.on.empty() || HasReferences(*q.left()) || HasReferences(*q.right);
    default: return HasReferences(*q.inner);
  }
}

// Operands may trade places when neither refers to outputs and their output
// names are disjoint, so that name resolution cannot change.
bool Swappable(const Query &a, const Query &b) {
  if (HasReferences(a) || HasReferences(b)) return false;
  std::set<std::string> names;
  for (const auto &o : QueryOutputs(a, BundledLibrary())) names.insert(o.name);
  for (const auto &o : QueryOutputs(b, BundledLibrary())) {
    if (names.count(o.name)) return false;
  }
  return true;
}

// `pinned`: the query is the right operand of a join with parameter
// passing, so its leftmost invocation must stay first.
QueryPtr Rewrite(const QueryPtr &q, bool commute_joins, bool swap_conjuncts,
                 bool pinned = false) {
  if (!q) return q;
  switch (q->kind) {
    case QueryKind::kInvocation: return q;
    case QueryKind::kFilter:
      return Query::Filter(Rewrite(q->inner, commute_joins, swap_conjuncts, pinned),
                           swap_conjuncts ? SwapConjuncts(q->predicate) : q->predicate);
    case QueryKind::kAggregate:
      return Query::Aggregate(q->aggregate, q->aggregate_param,
                              Rewrite(q->inner, commute_joins, swap_conjuncts, pinned));
    case QueryKind::kJoin: {
      auto l = Rewrite(q->left(), commute_joins, swap_conjuncts, pinned);
      auto rt = Rewrite(q->right, commute_joins, swap_conjuncts, !q->on.empty());
      if (commute_joins && !pinned && q->on.empty() && Swappable(*l, *rt)) {
        return Query::Join(rt, l);
      }
      return Query::Join(l, rt, q->on);
    }
  }
  return q;
}

StreamPtr Rewrite(const StreamPtr &s, bool commute_joins, bool swap_conjuncts) {
  switch (s->kind) {
    case StreamKind::kMonitor:
      return Stream::Monitor(Rewrite(s->query, commute_joins, swap_conjuncts), s->on_new);
    case StreamKind::kEdge:
      return Stream::Edge(Rewrite(s->inner, commute_joins, swap_conjuncts),
                          swap_conjuncts ? SwapConjuncts(s->predicate) : s->predicate);
    default: return s;
  }
}

Program Rewrite(const Program &p, bool commute_joins, bool swap_conjuncts) {
  Program out = p;
  out.stream = Rewrite(p.stream, commute_joins, swap_conjuncts);
  out.query = Rewrite(p.query, commute_joins, swap_conjuncts);
  return out;
}

// 2. Canonicalization is idempotent, simplification keeps truth tables and
// equivalent variants compare equal.
bool Canonicalization() {
  Report r;
  const auto &gen = Generated();
  std::set<Tokens> programs;
  for (const auto &e : gen.examples) programs.insert(e.program);
  r.Expect(programs.size() >= kMinGeneratedPairs,
           "only " + std::to_string(programs.size()) + " distinct programs");
  std::mt19937_64 rng(kSeed);
  int variants = 0;
  for (const auto &tokens : programs) {
    auto typed = TypeNn(tokens);
    if (!typed) {
      r.Fail("does not typecheck: " + JoinTokens(tokens));
      continue;
    }
    TypedProgram once = Canonicalize(*typed, BundledLibrary());
    r.Expect(EmitNn(once.program) == tokens, "not a fixed point: " + JoinTokens(tokens));
    r.Expect(EmitNn(Canonicalize(once, BundledLibrary()).program) == EmitNn(once.program),
             "not idempotent: " + JoinTokens(tokens));
    for (int kind = 0; kind < 3; ++kind) {
      Program variant = kind == 0   ? ShuffleBindings(typed->program, rng)
                        : kind == 1 ? Rewrite(typed->program, true, false)
                                    : Rewrite(typed->program, false, true);
      if (EmitNn(variant) == tokens) continue;
      auto vt = Typecheck(variant, BundledLibrary());
      if (!vt.ok()) {
        r.Fail("variant does not typecheck: " + Pretty(variant));
        continue;
      }
      ++variants;
      r.Expect(Equivalent(*vt, *typed, BundledLibrary()),
               "variant not equivalent: " + Pretty(variant));
    }
  }
  int tables = 0;
  for (int i = 0; i < kRandomPredicates; ++i) {
    const int atoms = 1 + i % kMaxAtoms;
    PredicatePtr p = RandomPredicate(rng, atoms, 4);
    PredicatePtr s = SimplifyPredicate(p);
    bool same = true;
    for (uint32_t row = 0; row < (1u << atoms); ++row) {
      same = same && OracleValue(*p, row) == OracleValue(*s, row);
    }
    r.Expect(same, "truth table changed: " + PrettyPredicate(*p));
    tables += same;
  }
  r.Note(std::to_string(programs.size()) + " programs, " + std::to_string(variants) +
         " variants, " + std::to_string(tables) + "/" + std::to_string(kRandomPredicates) +
         " truth tables");
  return r.Print(2, "canonicalization");
}

std::string Serialize(const GenerationResult &g) {
  std::string out;
  for (const auto &e : g.examples) {
    out += e.text + "\t" + JoinTokens(e.sentence) + "\t" + JoinTokens(e.program) + "\n";
  }
  return out;
}

std::string Quoted(const std::string &s) { return "'" + s + "'"; }

int Run(const std::string &command) {
  return WEXITSTATUS(std::system((command + " >/dev/null 2>&1").c_str()));
}

std::string Cli() { return Quoted(VAPL_CLI_PATH); }

std::filesystem::path WorkDir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("vapl_acceptance_" + std::to_string(getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

// 3. Generation is large, sound, reproducible and follows the per-rule target.
bool GenerationSoundness() {
  Report r;
  const auto &templates = BundledTemplates();
  r.Expect(BundledLibrary().classes().size() >= 3, "fewer than 3 classes");
  r.Expect(templates.primitives.size() >= 30,
           "only " + std::to_string(templates.primitives.size()) + " primitive templates");
  r.Expect(templates.constructs.size() >= 20,
           "only " + std::to_string(templates.constructs.size()) + " construct templates");

  GenerationConfig config;
  config.seed = kSeed;
  const auto start = std::chrono::steady_clock::now();
  GenerationResult first = Generate(templates, BundledLibrary(), BundledParamDb(), config);
  const double secs = Seconds(start);
  r.Expect(secs < kGenerateSeconds, "took " + std::to_string(secs) + "s");

  std::set<std::pair<Tokens, Tokens>> pairs;
  for (const auto &e : first.examples) {
    pairs.emplace(e.sentence, e.program);
    auto typed = TypeNn(e.program);
    r.Expect(typed && IsCanonical(*typed, BundledLibrary()),
             "unsound: " + JoinTokens(e.program));
  }
  r.Expect(pairs.size() >= kMinGeneratedPairs,
           "only " + std::to_string(pairs.size()) + " distinct pairs");

  config.jobs = 3;
  GenerationResult second = Generate(templates, BundledLibrary(), BundledParamDb(), config);
  r.Expect(Serialize(first) == Serialize(second), "runs with equal seed differ");

  const auto a = (WorkDir() / "gen_a.tsv").string(), b = (WorkDir() / "gen_b.tsv").string();
  r.Expect(Run(Cli() + " generate --seed 11 --max-depth 3 --output " + Quoted(a)) == 0,
           "cli generate failed");
  r.Expect(Run(Cli() + " generate --seed 11 --max-depth 3 --jobs 2 --output " + Quoted(b)) ==
               0,
           "cli generate failed");
  r.Expect(ReadFile(a) == ReadFile(b), "cli outputs differ");

  // Retained counts against the binomial expectation of the sampler.
  int rules = 0;
  for (const auto &s : first.stats) {
    if (s.examined == 0) continue;
    ++rules;
    const double pass = static_cast<double>(s.passed) / static_cast<double>(s.examined);
    const double draws =
        std::min(s.candidates * s.probability,
                 static_cast<double>(s.target) * config.candidate_budget);
    const double q = std::min(1.0, s.probability * pass);
    const double mean = draws * pass;
    const double sigma = std::sqrt(std::max(1.0, s.candidates * q * (1 - q)));
    const double expected = std::min<double>(s.target, mean);
    r.Expect(s.retained <= s.target, "rule " + std::to_string(s.rule) + " over target");
    r.Expect(s.retained >= expected - kSigmas * sigma,
             "rule " + std::to_string(s.rule) + " depth " + std::to_string(s.depth) +
                 " retained " + std::to_string(s.retained) + ", expected " +
                 std::to_string(expected));
  }
  r.Note(std::to_string(pairs.size()) + " pairs in " + std::to_string(secs) + "s, " +
         std::to_string(rules) + " rule expansions");
  return r.Print(3, "generation soundness and determinism");
}

// 4. Both orders of the paired command appear and share one program.
bool TemplateFidelity() {
  Report r;
  const std::string forward = "when I modify a file in Dropbox, send a Slack message";
  const std::string flipped = "send a Slack message when I modify a file in Dropbox";
  std::map<std::string, std::set<Tokens>> found;
  for (const auto &e : Generated().examples) {
    if (e.text == forward || e.text == flipped) found[e.text].insert(e.program);
  }
  r.Expect(found.count(forward) == 1, "missing: " + forward);
  r.Expect(found.count(flipped) == 1, "missing: " + flipped);
  if (found.size() == 2) {
    r.Expect(found[forward] == found[flipped] && found[forward].size() == 1,
             "programs differ");
    r.Note(JoinTokens(*found[forward].begin()));
  }
  return r.Print(4, "template example fidelity");
}

DatasetExample MakeExample(const std::string &id, const std::string &sentence,
                           const std::string &program, Provenance provenance,
                           const std::string &arity) {
  DatasetExample e;
  e.id = id;
  e.set_provenance(provenance);
  e.flags.insert(arity);
  e.sentence = IdentifyArguments(sentence).tokens;
  e.programs = {CanonicalNn(program)};
  return e;
}

// 5. Class-based expansion factors on a mixed set.
bool ExpansionFactorsHold() {
  Report r;
  const char *words[] = {"good news", "lunch time", "hello team", "big sale", "new post"};
  const char *users[] = {"bob", "carol", "dave", "erin", "frank"};
  std::vector<DatasetExample> set;
  std::map<std::string, int> expected;
  for (int i = 0; i < 25; ++i) {
    const std::string w = std::string(words[i % 5]) + (i < 5 ? "" : " " + std::string(words[i / 5]));
    const std::string u = users[i % 5];
    const std::string n = std::to_string(i);
    set.push_back(MakeExample("ps" + n, "tweet " + w,
                              "now => @com.twitter.post(status = \"" + w + "\");",
                              Provenance::kParaphrase, "primitive"));
    set.push_back(MakeExample("pe" + n, "follow " + u + " on twitter",
                              "now => @com.twitter.follow(user_name = \"" + u +
                                  "\"^^tt:username);",
                              Provenance::kParaphrase, "primitive"));
    set.push_back(MakeExample("sp" + n, "share " + w + " on linkedin",
                              "now => @com.linkedin.share(status = \"" + w + "\");",
                              Provenance::kSynthesized, "primitive"));
    set.push_back(MakeExample("sc" + n, "when i get an email , post " + w + " on facebook",
                              "monitor @com.gmail.inbox() => @com.facebook.post(status = \"" +
                                  w + "\");",
                              Provenance::kSynthesized, "compound"));
  }
  ExpansionFactors factors;
  ExpansionStats stats;
  auto out = ExpandDataset(set, BundledParamDb(), BundledLibrary(), factors, kSeed, 2, &stats);
  std::map<std::string, int> per_example, per_class;
  for (const auto &e : out) {
    const std::string base = e.id.substr(0, e.id.find('-'));
    ++per_example[base];
    ++per_class[base.substr(0, 2)];
    // Sentence and program carry the same new value.
    for (const auto &slot : FindValueSlots(e.programs[0])) {
      r.Expect(std::search(e.sentence.begin(), e.sentence.end(), slot.words.begin(),
                           slot.words.end()) != e.sentence.end(),
               "value missing from sentence: " + e.id);
    }
  }
  const std::map<std::string, int> factor = {{"ps", factors.paraphrase_with_string},
                                             {"pe", factors.paraphrase},
                                             {"sp", factors.synthesized_primitive},
                                             {"sc", factors.other}};
  for (const auto &e : set) {
    const int want = factor.at(e.id.substr(0, 2));
    r.Expect(factors.For(e) == want, e.id + " has the wrong class");
    r.Expect(per_example[e.id] == want, e.id + " expanded " +
                                            std::to_string(per_example[e.id]) + " times");
  }
  for (const auto &[cls, f] : factor) {
    r.Expect(per_class[cls] == 25 * f, cls + " produced " + std::to_string(per_class[cls]));
  }
  r.Expect(stats.dropped == 0 && stats.degenerate == 0, "dropped or degenerate examples");
  r.Note("30x/10x/4x/1x -> " + std::to_string(per_class["ps"]) + "/" +
         std::to_string(per_class["pe"]) + "/" + std::to_string(per_class["sp"]) + "/" +
         std::to_string(per_class["sc"]) + " from 25 each");
  return r.Print(5, "expansion factors");
}

// 6. Argument identification: the worked example, idempotence and dense
// per-kind indexing.
bool ArgumentIdentification() {
  Report r;
  IdentifiedSentence s = IdentifyArguments("set the temperature to 25 C");
  r.Expect(JoinTokens(s.tokens) == "set the temperature to NUMBER_0 c",
           "got " + JoinTokens(s.tokens));
  const NamedConstant *n = s.Find(NamedConstKind::kNumber, 0);
  r.Expect(n && n->value.kind() == ValueKind::kNumber && n->value.number() == 25,
           "NUMBER_0 does not map to 25");
  r.Expect(IdentifyArguments(JoinTokens(s.tokens)).tokens == s.tokens, "not idempotent");

  struct Literal {
    NamedConstKind kind;
    std::function<std::string(int)> surface;
  };
  const std::vector<Literal> literals = {
      {NamedConstKind::kNumber, [](int i) { return std::to_string(11 + i); }},
      {NamedConstKind::kTime, [](int i) { return std::to_string(1 + i % 11) + ":" + std::to_string(10 + i); }},
      {NamedConstKind::kEmail, [](int i) { return "user" + std::to_string(i) + "@example.com"; }},
      {NamedConstKind::kUrl, [](int i) { return "www.site" + std::to_string(i) + ".org"; }},
      {NamedConstKind::kPhone, [](int i) { return "+1650555" + std::to_string(1000 + i); }},
      {NamedConstKind::kHashtag, [](int i) { return "#tag" + std::to_string(i); }},
      {NamedConstKind::kUsername, [](int i) { return "@user" + std::to_string(i); }},
      {NamedConstKind::kCurrency, [](int i) { return "$" + std::to_string(5 + i); }},
      {NamedConstKind::kDate, [](int i) { return "2026-0" + std::to_string(1 + i % 9) + "-" + std::to_string(10 + i); }},
      {NamedConstKind::kDuration, [](int i) { return std::to_string(2 + i) + " hours"; }},
  };
  const char *fillers[] = {"and", "then", "please", "with", "remind", "me", "about"};
  std::mt19937_64 rng(kSeed);
  int checked = 0;
  for (int t = 0; t < kSyntheticSentences; ++t) {
    std::string text = "send";
    std::vector<NamedConstKind> kinds;
    const int count = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < count; ++i) {
      const auto &lit = literals[rng() % literals.size()];
      text += " " + lit.surface(i) + " " + fillers[rng() % 7];
      kinds.push_back(lit.kind);
    }
    IdentifiedSentence got = IdentifyArguments(text);
    std::vector<NamedConstKind> seen;
    std::map<NamedConstKind, int> next;
    bool dense = true;
    for (const auto &tok : got.tokens) {
      auto named = ParseNamedConstToken(tok);
      if (!named) continue;
      seen.push_back(named->first);
      dense = dense && named->second == next[named->first]++;
    }
    const bool ok = dense && seen == kinds && got.constants.size() == kinds.size() &&
                    IdentifyArguments(JoinTokens(got.tokens)).tokens == got.tokens;
    r.Expect(ok, text + " -> " + JoinTokens(got.tokens));
    checked += ok;
  }
  r.Note(std::to_string(checked) + "/" + std::to_string(kSyntheticSentences) +
         " synthetic sentences");
  return r.Print(6, "argument identification");
}

bool Ordered(const Metrics &m) {
  return m.program_correct <= m.function_correct && m.function_correct <= m.device_correct &&
         m.device_correct <= m.type_ok && m.type_ok <= m.syntax_ok && m.syntax_ok <= m.total;
}

std::string Counts(const Metrics &m) {
  std::ostringstream out;
  out << "syntax " << m.syntax_ok << " type " << m.type_ok << " device " << m.device_correct
      << " function " << m.function_correct << " program " << m.program_correct << " of "
      << m.total;
  return out.str();
}

// 7. Golds score 1.0 and each mutation moves exactly the expected metrics.
bool EvaluationHarness() {
  Report r;
  std::vector<DatasetExample> golds;
  const auto &examples = Generated().examples;
  for (size_t i = 0; i < examples.size(); i += 20) {
    DatasetExample e;
    e.id = "g" + std::to_string(100000 + i);
    e.sentence = examples[i].sentence;
    e.programs = {examples[i].program};
    golds.push_back(std::move(e));
  }
  auto evaluate = [&](const std::map<std::string, Tokens> &preds,
                      const std::vector<DatasetExample> &subset) {
    Metrics m = Evaluate(preds, subset, BundledLibrary(), 2);
    r.Expect(Ordered(m), "ordering violated: " + Counts(m));
    return m;
  };

  std::map<std::string, Tokens> identity;
  for (const auto &g : golds) identity[g.id] = g.programs[0];
  Metrics perfect = evaluate(identity, golds);
  for (double rate : {perfect.Rate(perfect.syntax_ok), perfect.Rate(perfect.type_ok),
                      perfect.Rate(perfect.device_correct), perfect.Rate(perfect.function_correct),
                      perfect.Rate(perfect.program_correct), perfect.Rate(perfect.arity_correct)}) {
    r.Expect(rate == 1.0, "golds as predictions: " + Counts(perfect));
  }

  // Each suite: predictions for a subset of golds and the expected counts
  // of syntax, type, device, function and program correctness.
  struct Suite {
    std::string name;
    std::vector<DatasetExample> golds;
    std::map<std::string, Tokens> preds;
    std::array<bool, 5> correct;
  };
  std::vector<Suite> suites = {{"wrong constant", {}, {}, {true, true, true, true, false}},
                               {"wrong function", {}, {}, {true, true, true, false, false}},
                               {"shuffled bindings", {}, {}, {true, true, true, true, true}},
                               {"broken syntax", {}, {}, {false, false, false, false, false}}};
  std::map<std::vector<std::string>, std::vector<const Tokens *>> by_devices;
  for (const auto &e : examples) {
    std::vector<std::string> devices;
    for (const auto &f : FunctionTokens(e.program)) devices.push_back(ClassOfFunction(f));
    std::sort(devices.begin(), devices.end());
    by_devices[devices].push_back(&e.program);
  }
  std::mt19937_64 rng(kSeed);
  for (const auto &g : golds) {
    const Tokens &gold = g.programs[0];
    auto slots = FindValueSlots(gold);
    if (!slots.empty()) {
      Tokens p = gold;
      p.erase(p.begin() + slots[0].begin + 1, p.begin() + slots[0].end - 1);
      p.insert(p.begin() + slots[0].begin + 1, "zzqx");
      suites[0].golds.push_back(g);
      suites[0].preds[g.id] = p;
    }
    std::vector<std::string> devices, functions = FunctionTokens(gold);
    for (const auto &f : functions) devices.push_back(ClassOfFunction(f));
    std::sort(devices.begin(), devices.end());
    std::sort(functions.begin(), functions.end());
    for (const Tokens *other : by_devices[devices]) {
      auto fs = FunctionTokens(*other);
      std::sort(fs.begin(), fs.end());
      if (fs != functions) {
        suites[1].golds.push_back(g);
        suites[1].preds[g.id] = *other;
        break;
      }
    }
    auto typed = TypeNn(gold);
    Tokens shuffled = EmitNn(ShuffleBindings(typed->program, rng));
    if (shuffled != gold) {
      suites[2].golds.push_back(g);
      suites[2].preds[g.id] = shuffled;
    }
    Tokens broken = gold;
    broken.insert(broken.begin() + 1, "((");
    suites[3].golds.push_back(g);
    suites[3].preds[g.id] = broken;
  }
  std::string summary;
  for (const auto &s : suites) {
    if (s.golds.empty()) {
      r.Fail(s.name + ": no applicable golds");
      continue;
    }
    Metrics m = evaluate(s.preds, s.golds);
    const int n = m.total;
    const std::array<int, 5> got = {m.syntax_ok, m.type_ok, m.device_correct,
                                    m.function_correct, m.program_correct};
    for (int k = 0; k < 5; ++k) {
      r.Expect(got[k] == (s.correct[k] ? n : 0), s.name + ": " + Counts(m));
    }
    summary += (summary.empty() ? "" : ", ") + s.name + " " + std::to_string(n);
  }
  r.Note(std::to_string(golds.size()) + " golds; " + summary);
  return r.Print(7, "evaluation harness");
}

// 8. The documented quickstart through the command-line tool.
bool Quickstart() {
  Report r;
  const auto dir = WorkDir();
  auto path = [&](const char *name) { return Quoted((dir / name).string()); };
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, std::string>> steps = {
      {"compile", Cli() + " compile " + Quoted(DataPath("library.vapl"))},
      {"generate", Cli() + " generate --seed 7 --output " + path("synth.tsv")},
      {"augment", Cli() + " augment --seed 7 --input " + path("synth.tsv") + " --output " +
                      path("all.tsv")},
      {"split", Cli() + " split --seed 7 --by functions --input " + path("all.tsv") +
                    " --train " + path("train.tsv") + " --valid " + path("valid.tsv") +
                    " --test " + path("test.tsv")},
      {"baseline train", Cli() + " baseline --train " + path("train.tsv") + " --input " +
                             path("train.tsv") + " --output " + path("pred_train.tsv")},
      {"baseline test", Cli() + " baseline --train " + path("train.tsv") + " --input " +
                            path("test.tsv") + " --output " + path("pred_test.tsv")},
      {"evaluate train", Cli() + " evaluate --format json --pred " + path("pred_train.tsv") +
                             " --gold " + path("train.tsv") + " --output " +
                             path("train.json")},
      {"evaluate test", Cli() + " evaluate --format json --pred " + path("pred_test.tsv") +
                            " --gold " + path("test.tsv") + " --output " + path("test.json")},
  };
  for (const auto &[name, command] : steps) {
    const int code = Run(command);
    r.Expect(code == 0, name + " exited with " + std::to_string(code));
  }
  const double secs = Seconds(start);
  r.Expect(secs < kQuickstartSeconds, "took " + std::to_string(secs) + "s");
  r.Expect(Run(Cli() + " evaluate --pred " + path("pred_test.tsv") + " --gold " +
               path("missing.tsv")) == 2,
           "missing gold file is not exit 2");
  if (r.ok()) {
    try {
      auto train = nlohmann::json::parse(ReadFile((dir / "train.json").string()));
      auto test = nlohmann::json::parse(ReadFile((dir / "test.json").string()));
      const double a = train["programAccuracy"], b = test["programAccuracy"];
      r.Expect(a == 1.0, "train-as-test accuracy " + std::to_string(a));
      r.Expect(b < a, "held-out accuracy " + std::to_string(b) + " not lower");
      r.Note("train " + std::to_string(a) + ", held-out " + std::to_string(b) + ", " +
             std::to_string(secs) + "s");
    } catch (const std::exception &e) {
      r.Fail(std::string("bad report: ") + e.what());
    }
  }
  return r.Print(8, "end-to-end quickstart");
}

int Main() {
  bool ok = true;
  for (auto check : {GrammarCoverage, Canonicalization, GenerationSoundness, TemplateFidelity,
                     ExpansionFactorsHold, ArgumentIdentification, EvaluationHarness,
                     Quickstart}) {
    try {
      ok = check() && ok;
    } catch (const std::exception &e) {
      std::cout << "FAIL  unexpected exception: " << e.what() << "\n";
      ok = false;
    }
  }
  std::error_code ec;
  std::filesystem::remove_all(WorkDir(), ec);
  return ok ? 0 : 1;
}

}  // namespace
}  // namespace vapl

int main() { return vapl::Main(); }
