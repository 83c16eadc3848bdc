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

// Command-line driver for the data pipeline.
//
//   vapl compile data/library.vapl
//   vapl generate --seed 7 --output synth.tsv
//   vapl augment --seed 7 --input synth.tsv --output train.tsv
//   vapl split --seed 7 --input train.tsv --by functions --train a.tsv ...
//   vapl baseline --train a.tsv --input b.tsv --output pred.tsv
//   vapl evaluate --pred pred.tsv --gold b.tsv
//
// Exit status: 0 on success, 1 when the input has validation diagnostics,
// 2 on usage, I/O or format errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vapl/arguments.h"
#include "vapl/canonical.h"
#include "vapl/dataset.h"
#include "vapl/generator.h"
#include "vapl/nn_syntax.h"
#include "vapl/paramdb.h"
#include "vapl/parser.h"
#include "vapl/pipeline.h"
#include "vapl/printer.h"
#include "vapl/templates.h"
#include "vapl/typecheck.h"

namespace vapl {
namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kIoError = 2;

// Raised after diagnostics have been printed.
struct InvalidInput {};

std::string DataFile(const std::string &name) {
  return std::string(VAPL_DATA_DIR) + "/" + name;
}

void PrintDiagnostics(const std::vector<Diagnostic> &diagnostics,
                      const std::string &where) {
  for (const auto &d : diagnostics) {
    std::cerr << where << ": " << d.ToString() << "\n";
  }
}

template <typename T>
T Require(Checked<T> checked, const std::string &where) {
  PrintDiagnostics(checked.diagnostics(), where);
  if (!checked.ok()) throw InvalidInput{};
  return std::move(checked).value();
}

Library LoadLibraryOrFail(const std::vector<std::string> &paths) {
  return Require(LoadLibrary(paths), paths.size() == 1 ? paths[0] : "library");
}

// One pair of function tokens per line; '#' starts a comment.
std::set<std::pair<std::string, std::string>> ReadBlacklist(const std::string &path) {
  std::set<std::pair<std::string, std::string>> out;
  if (path.empty()) return out;
  std::istringstream in(ReadFile(path));
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    auto tokens = SplitTokens(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) {
      throw IoError(path + ":" + std::to_string(number) + ": expected two function tokens");
    }
    out.emplace(tokens[0], tokens[1]);
  }
  return out;
}

std::set<std::string> ReadWordSet(const std::string &path) {
  std::set<std::string> out;
  if (path.empty()) return out;
  std::istringstream in(ReadFile(path));
  for (std::string line; std::getline(in, line);) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (auto &t : SplitTokens(line)) out.insert(t);
  }
  return out;
}

std::vector<std::string> ReadLines(const std::string &path) {
  std::istringstream in(path == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                    : ReadFile(path));
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

void WriteText(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFileAtomic(path, text);
  }
}

std::string ZeroPadded(const std::string &prefix, size_t i, size_t n) {
  const size_t width = std::max<size_t>(1, std::to_string(n).size());
  std::string digits = std::to_string(i);
  return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

struct CommonOptions {
  std::vector<std::string> library = {DataFile("library.vapl")};
  int jobs = 1;
};

int RunCompile(const std::vector<std::string> &files) {
  Library library = LoadLibraryOrFail(files);
  for (const auto &cls : library.classes()) {
    for (const auto &fn : library.FunctionsOf(cls.name)) {
      std::cout << PrettySignature(fn) << "\n";
    }
  }
  return kOk;
}

struct CanonicalizeOptions {
  std::string input = "-";
  std::string output;
  bool nn_input = false;
  bool nn_output = false;
};

int RunCanonicalize(const CommonOptions &common, const CanonicalizeOptions &opt) {
  Library library = LoadLibraryOrFail(common.library);
  std::string out;
  bool failed = false;
  int number = 0;
  for (const auto &line : ReadLines(opt.input)) {
    ++number;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where = opt.input + ":" + std::to_string(number);
    Program program;
    try {
      program = opt.nn_input ? ParseNn(SplitTokens(line), library) : ParseProgram(line);
    } catch (const SyntaxError &e) {
      std::cerr << where << ": " << e.what() << "\n";
      failed = true;
      continue;
    }
    auto typed = Typecheck(program, library);
    PrintDiagnostics(typed.diagnostics(), where);
    if (!typed.ok()) {
      failed = true;
      continue;
    }
    Program canonical = Canonicalize(*typed, library).program;
    out += (opt.nn_output ? JoinTokens(EmitNn(canonical)) : Pretty(canonical)) + "\n";
  }
  WriteText(opt.output, out);
  return failed ? kInvalid : kOk;
}

struct GenerateOptions {
  std::vector<std::string> templates = {DataFile("templates.tmpl")};
  std::string paramdb = DataFile("paramdb");
  std::string output;
  std::string blacklist;
  std::string stats;
  std::vector<std::string> flags;
  GenerationConfig config;
};

int RunGenerate(const CommonOptions &common, GenerateOptions &opt) {
  Library library = LoadLibraryOrFail(common.library);
  TemplateSet templates = Require(LoadTemplates(opt.templates, library), "templates");
  ParamDb db = ParamDb::Load(ParamDbPath(opt.paramdb));
  opt.config.jobs = common.jobs;
  opt.config.enabled_flags = {opt.flags.begin(), opt.flags.end()};
  opt.config.blacklist = ReadBlacklist(opt.blacklist);
  GenerationResult result = Generate(templates, library, db, opt.config);

  std::vector<DatasetExample> examples;
  examples.reserve(result.examples.size());
  for (size_t i = 0; i < result.examples.size(); ++i) {
    const auto &g = result.examples[i];
    DatasetExample e;
    e.id = ZeroPadded("s", i, result.examples.size());
    e.flags = {g.flags.begin(), g.flags.end()};
    e.set_provenance(Provenance::kSynthesized);
    e.sentence = g.sentence;
    e.programs = {g.program};
    examples.push_back(std::move(e));
  }
  examples = MergeBySentence(std::move(examples));
  WriteDataset(examples, opt.output);

  if (!opt.stats.empty()) {
    std::string text = "rule\tdepth\ttarget\tcandidates\tprobability\texamined\tpassed\tretained\n";
    for (const auto &s : result.stats) {
      std::ostringstream line;
      line << s.rule << '\t' << s.depth << '\t' << s.target << '\t' << s.candidates << '\t'
           << s.probability << '\t' << s.examined << '\t' << s.passed << '\t' << s.retained
           << '\n';
      text += line.str();
    }
    WriteFileAtomic(opt.stats, text);
  }
  std::cerr << "generated " << result.examples.size() << " pairs, " << examples.size()
            << " sentences\n";
  for (const auto &[reason, count] : result.dropped) {
    std::cerr << "dropped " << reason << ": " << count << "\n";
  }
  return kOk;
}

struct AugmentOptions {
  std::string input;
  std::string output;
  std::string paramdb = DataFile("paramdb");
  std::string ppdb = DataFile("ppdb.tsv");
  double lexical_probability = 0.1;
  ExpansionFactors factors;
  uint64_t seed = 0;
};

int RunAugment(const CommonOptions &common, const AugmentOptions &opt) {
  Library library = LoadLibraryOrFail(common.library);
  ParamDb db = ParamDb::Load(ParamDbPath(opt.paramdb));
  auto input = ReadDataset(opt.input);
  ExpansionStats stats;
  auto expanded = ExpandDataset(input, db, library, opt.factors, opt.seed, common.jobs, &stats);
  SubstitutionTable table;
  if (!opt.ppdb.empty() && opt.lexical_probability > 0) table = SubstitutionTable::Load(opt.ppdb);
  std::vector<DatasetExample> out;
  out.reserve(expanded.size() * 2);
  for (size_t i = 0; i < expanded.size(); ++i) {
    out.push_back(expanded[i]);
    if (table.empty()) continue;
    std::mt19937_64 rng(MixSeed(opt.seed, 0x1e8000000ULL + i));
    DatasetExample lex = LexicalAugment(expanded[i], table, opt.lexical_probability, rng);
    if (lex.id != expanded[i].id) out.push_back(std::move(lex));
  }
  out = MergeBySentence(std::move(out));
  WriteDataset(out, opt.output);
  std::cerr << "read " << input.size() << ", wrote " << out.size() << " (dropped "
            << stats.dropped << ", nothing to substitute " << stats.degenerate << ")\n";
  return kOk;
}

struct SampleOptions {
  std::string input;
  std::string output;
  std::string easy;
  std::string hard;
  std::string blacklist;
  int per_row = 4;
  int cap = 1;
  uint64_t seed = 0;
};

int RunSampleParaphrase(const CommonOptions &common, const SampleOptions &opt) {
  Library library = LoadLibraryOrFail(common.library);
  ParaphraseConfig config;
  config.easy_functions = ReadWordSet(opt.easy);
  config.hard_functions = ReadWordSet(opt.hard);
  config.blacklist = ReadBlacklist(opt.blacklist);
  config.per_program_cap = opt.cap;
  auto prompts = SampleForParaphrase(ReadDataset(opt.input), config, library, opt.seed);
  WriteText(opt.output, ExportParaphraseBatch(prompts, opt.per_row));
  std::cerr << "sampled " << prompts.size() << " prompts\n";
  return kOk;
}

struct ImportOptions {
  std::string input;
  std::string output;
  std::string rejected;
};

int RunImportParaphrase(const CommonOptions &common, const ImportOptions &opt) {
  Library library = LoadLibraryOrFail(common.library);
  ImportedBatch batch = ImportParaphraseBatch(ReadFile(opt.input));
  for (const auto &p : batch.problems) std::cerr << opt.input << ": " << p << "\n";
  ValidationResult result = ValidateParaphrases(batch.paraphrases, batch.prompts, library);
  WriteDataset(result.accepted, opt.output);
  if (!opt.rejected.empty()) {
    std::string text;
    for (const auto &r : result.rejected) {
      text += r.prompt_id + "\t" + r.reason + "\t" + r.text + "\n";
    }
    WriteFileAtomic(opt.rejected, text);
  }
  std::cerr << "accepted " << result.accepted.size() << ", rejected "
            << result.rejected.size() << ", missing answers " << batch.missing_answers
            << "\n";
  return batch.problems.empty() ? kOk : kInvalid;
}

struct SplitOptions {
  std::string input;
  std::string train, valid, test;
  std::vector<double> ratios = {0.8, 0.1, 0.1};
  std::string by = "functions";
  uint64_t seed = 0;
};

int RunSplit(const SplitOptions &opt) {
  if (opt.ratios.size() != 3) throw ValueError("--ratios takes three numbers");
  Splits s = SplitDataset(ReadDataset(opt.input), {opt.ratios[0], opt.ratios[1], opt.ratios[2]},
                          opt.seed,
                          opt.by == "program" ? SplitGroup::kProgram : SplitGroup::kFunctions);
  WriteDataset(s.train, opt.train);
  if (!opt.valid.empty()) WriteDataset(s.valid, opt.valid);
  if (!opt.test.empty()) WriteDataset(s.test, opt.test);
  std::cerr << "train " << s.train.size() << ", valid " << s.valid.size() << ", test "
            << s.test.size() << "\n";
  return kOk;
}

struct EvaluateOptions {
  std::string pred;
  std::string gold;
  std::string format = "text";
  std::string output;
};

int RunEvaluate(const CommonOptions &common, const EvaluateOptions &opt) {
  Library library = LoadLibraryOrFail(common.library);
  auto golds = ReadDataset(opt.gold);
  auto preds = ReadPredictions(opt.pred);
  Metrics m = Evaluate(preds, golds, library, common.jobs);
  WriteText(opt.output, opt.format == "json" ? m.ToJson() + "\n" : m.ToText());
  return kOk;
}

struct BaselineOptions {
  std::string train;
  std::string input;
  std::string output;
};

int RunBaseline(const BaselineOptions &opt) {
  RetrievalBaseline baseline(ReadDataset(opt.train));
  std::map<std::string, Tokens> preds;
  for (const auto &e : ReadDataset(opt.input)) preds[e.id] = baseline.Predict(e.sentence);
  WritePredictions(preds, opt.output);
  return kOk;
}

int Main(int argc, char **argv) {
  CLI::App app{"Synthesizes, augments and evaluates semantic parsing datasets for a "
               "virtual assistant programming language."};
  app.set_config("--config", "", "key=value file; [subcommand] sections set its flags");
  app.require_subcommand(1);
  CommonOptions common;
  auto add_library = [&](CLI::App *cmd) {
    cmd->add_option("--library", common.library, "Class definition files")
        ->check(CLI::ExistingFile);
  };
  auto add_jobs = [&](CLI::App *cmd) {
    cmd->add_option("--jobs", common.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };

  std::vector<std::string> compile_files;
  auto *compile = app.add_subcommand("compile", "Validate classes and print flattened signatures");
  compile->add_option("files", compile_files, "Class definition files")->required();

  CanonicalizeOptions canon;
  auto *canonicalize = app.add_subcommand("canonicalize", "Print the canonical form of each program");
  add_library(canonicalize);
  canonicalize->add_option("input", canon.input, "One program per line; - for stdin");
  canonicalize->add_option("--output", canon.output, "Output file (default stdout)");
  canonicalize->add_flag("--nn-input", canon.nn_input, "Input lines are NN tokens");
  canonicalize->add_flag("--nn", canon.nn_output, "Print NN tokens");

  GenerateOptions gen;
  auto *generate = app.add_subcommand("generate", "Synthesize sentence/program pairs");
  add_library(generate);
  add_jobs(generate);
  generate->add_option("--templates", gen.templates)->check(CLI::ExistingFile);
  generate->add_option("--paramdb", gen.paramdb, "Parameter value directory ($VAPL_PARAMDB wins)");
  generate->add_option("--seed", gen.config.seed)->required();
  generate->add_option("--max-depth", gen.config.max_depth)->check(CLI::NonNegativeNumber);
  generate->add_option("--target", gen.config.target, "Per-rule target at depth 0")
      ->check(CLI::PositiveNumber);
  generate->add_option("--decay", gen.config.decay)->check(CLI::Range(0.0, 1.0));
  generate->add_option("--candidate-budget", gen.config.candidate_budget)
      ->check(CLI::PositiveNumber);
  generate->add_option("--flag", gen.flags, "Enable an optional template flag");
  generate->add_option("--blacklist", gen.blacklist, "Function pairs that may not co-occur")
      ->check(CLI::ExistingFile);
  generate->add_option("--stats", gen.stats, "Per-rule statistics TSV");
  generate->add_option("--output", gen.output)->required();

  AugmentOptions aug;
  auto *augment = app.add_subcommand("augment", "Expand parameters and apply lexical substitution");
  add_library(augment);
  add_jobs(augment);
  augment->add_option("--input", aug.input)->required()->check(CLI::ExistingFile);
  augment->add_option("--output", aug.output)->required();
  augment->add_option("--paramdb", aug.paramdb);
  augment->add_option("--ppdb", aug.ppdb, "Substitution table; empty disables");
  augment->add_option("--lexical-probability", aug.lexical_probability)
      ->check(CLI::Range(0.0, 1.0));
  augment->add_option("--factor-paraphrase-string", aug.factors.paraphrase_with_string)
      ->check(CLI::PositiveNumber);
  augment->add_option("--factor-paraphrase", aug.factors.paraphrase)->check(CLI::PositiveNumber);
  augment->add_option("--factor-primitive", aug.factors.synthesized_primitive)
      ->check(CLI::PositiveNumber);
  augment->add_option("--factor-other", aug.factors.other)->check(CLI::PositiveNumber);
  augment->add_option("--seed", aug.seed)->required();

  SampleOptions samp;
  auto *sample = app.add_subcommand("sample-paraphrase", "Export a paraphrase batch as CSV");
  add_library(sample);
  sample->add_option("--input", samp.input)->required()->check(CLI::ExistingFile);
  sample->add_option("--output", samp.output, "CSV file (default stdout)");
  sample->add_option("--easy", samp.easy, "File of easy function tokens")->check(CLI::ExistingFile);
  sample->add_option("--hard", samp.hard, "File of hard function tokens")->check(CLI::ExistingFile);
  sample->add_option("--blacklist", samp.blacklist)->check(CLI::ExistingFile);
  sample->add_option("--per-row", samp.per_row)->check(CLI::PositiveNumber);
  sample->add_option("--cap", samp.cap, "Prompts per program")->check(CLI::PositiveNumber);
  sample->add_option("--seed", samp.seed)->required();

  ImportOptions imp;
  auto *import = app.add_subcommand("import-paraphrase", "Validate a filled paraphrase batch");
  add_library(import);
  import->add_option("--input", imp.input)->required()->check(CLI::ExistingFile);
  import->add_option("--output", imp.output, "Accepted examples")->required();
  import->add_option("--rejected", imp.rejected, "Rejected answers with reasons");

  SplitOptions spl;
  auto *split = app.add_subcommand("split", "Split a dataset into train, valid and test");
  split->add_option("--input", spl.input)->required()->check(CLI::ExistingFile);
  split->add_option("--train", spl.train)->required();
  split->add_option("--valid", spl.valid);
  split->add_option("--test", spl.test);
  split->add_option("--ratios", spl.ratios)->delimiter(',')->expected(3);
  split->add_option("--by", spl.by)->check(CLI::IsMember({"program", "functions"}));
  split->add_option("--seed", spl.seed)->required();

  EvaluateOptions ev;
  auto *evaluate = app.add_subcommand("evaluate", "Score predictions against golds");
  add_library(evaluate);
  add_jobs(evaluate);
  evaluate->add_option("--pred", ev.pred)->required();
  evaluate->add_option("--gold", ev.gold)->required();
  evaluate->add_option("--format", ev.format)->check(CLI::IsMember({"text", "json"}));
  evaluate->add_option("--output", ev.output, "Report file (default stdout)");

  BaselineOptions base;
  auto *baseline = app.add_subcommand("baseline", "Predict with nearest-neighbour retrieval");
  baseline->add_option("--train", base.train)->required()->check(CLI::ExistingFile);
  baseline->add_option("--input", base.input)->required()->check(CLI::ExistingFile);
  baseline->add_option("--output", base.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kIoError;
  }

  try {
    if (*compile) return RunCompile(compile_files);
    if (*canonicalize) return RunCanonicalize(common, canon);
    if (*generate) return RunGenerate(common, gen);
    if (*augment) return RunAugment(common, aug);
    if (*sample) return RunSampleParaphrase(common, samp);
    if (*import) return RunImportParaphrase(common, imp);
    if (*split) return RunSplit(spl);
    if (*evaluate) return RunEvaluate(common, ev);
    if (*baseline) return RunBaseline(base);
  } catch (const InvalidInput &) {
    return kInvalid;
  } catch (const IoError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kIoError;
}

}  // namespace
}  // namespace vapl

int main(int argc, char **argv) { return vapl::Main(argc, argv); }
