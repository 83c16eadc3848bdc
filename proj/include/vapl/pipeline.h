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

// Dataset construction steps after synthesis: parameter expansion, lexical
// augmentation from a phrase table, and the paraphrase round trip (prompt
// sampling, CSV batches, validation of the answers).

#ifndef VAPL_PIPELINE_H_
#define VAPL_PIPELINE_H_

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vapl/dataset.h"
#include "vapl/library.h"
#include "vapl/paramdb.h"

namespace vapl {

// A quoted value of a program: its words and the parameter it fills.
struct ValueSlot {
  size_t begin = 0, end = 0;  // token range including the quote tokens
  std::vector<std::string> words;
  std::string param;
  TypeExpr type;
};

std::vector<ValueSlot> FindValueSlots(const Tokens &program);
// Whether some slot holds a free-form String value.
bool HasStringValue(const Tokens &program);

struct ExpansionFactors {
  int paraphrase_with_string = 30;
  int paraphrase = 10;
  int synthesized_primitive = 4;
  int other = 1;

  int For(const DatasetExample &e) const;
};

struct ExpansionStats {
  int dropped = 0;     // no value available for some slot
  int degenerate = 0;  // nothing to substitute, kept once
};

// Returns `factor` copies of the example with every quoted value redrawn
// from the database, consistently in sentence and program. An example
// without substitutable values is returned once.
std::vector<DatasetExample> ExpandParameters(const DatasetExample &example,
                                             const ParamDb &db,
                                             const Library &library, int factor,
                                             std::mt19937_64 &rng,
                                             ExpansionStats *stats = nullptr);

// Expands a whole dataset with per-example random streams.
std::vector<DatasetExample> ExpandDataset(const std::vector<DatasetExample> &examples,
                                          const ParamDb &db, const Library &library,
                                          const ExpansionFactors &factors,
                                          uint64_t seed, int jobs = 1,
                                          ExpansionStats *stats = nullptr);

// Phrase-level substitutions, read from a TSV of `phrase <TAB> paraphrase`
// lines (a third score column is ignored).
class SubstitutionTable {
 public:
  static SubstitutionTable Load(const std::string &path);
  void Add(std::string_view phrase, std::string_view paraphrase);
  bool empty() const { return entries_.empty(); }
  size_t size() const { return entries_.size(); }

  struct Entry {
    Tokens phrase;
    std::vector<Tokens> paraphrases;
  };
  // Longest phrase first.
  const std::vector<Entry> &entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// Replaces each matching phrase of the sentence with probability
// `probability`. Named constants and words of program values are never
// touched; the program is unchanged.
DatasetExample LexicalAugment(const DatasetExample &example,
                              const SubstitutionTable &table, double probability,
                              std::mt19937_64 &rng);

struct ParaphraseConfig {
  std::set<std::string> easy_functions;  // empty: every function not hard
  std::set<std::string> hard_functions;
  std::set<std::pair<std::string, std::string>> blacklist;
  int per_program_cap = 1;
};

struct ParaphrasePrompt {
  std::string id;
  std::string sentence;  // concrete values, strings in double quotes
  Tokens program;
  std::string hint;
};

// Sentence shown to paraphrasers: named constants become concrete values
// (`@bob`, `#news`, numbers, dates) and string values are quoted.
std::string RenderPromptSentence(const DatasetExample &example);

std::vector<ParaphrasePrompt> SampleForParaphrase(
    const std::vector<DatasetExample> &examples, const ParaphraseConfig &config,
    const Library &library, uint64_t seed);

// CSV with `per_row` prompts per row and two answer columns per prompt.
std::string ExportParaphraseBatch(const std::vector<ParaphrasePrompt> &prompts,
                                  int per_row);

struct ImportedBatch {
  std::vector<ParaphrasePrompt> prompts;
  std::vector<std::pair<std::string, std::string>> paraphrases;  // id, text
  std::vector<std::string> problems;  // malformed rows
  int missing_answers = 0;
};

ImportedBatch ImportParaphraseBatch(std::string_view csv);

struct Rejection {
  std::string prompt_id;
  std::string text;
  std::string reason;  // too-short, no-change, constant-dropped, ...
};

struct ValidationResult {
  std::vector<DatasetExample> accepted;
  std::vector<Rejection> rejected;
};

ValidationResult ValidateParaphrases(
    const std::vector<std::pair<std::string, std::string>> &candidates,
    const std::vector<ParaphrasePrompt> &prompts, const Library &library);

// RFC 4180 helpers.
std::string CsvRow(const std::vector<std::string> &cells);
// Parses all records; throws IoError on an unterminated quote.
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

}  // namespace vapl

#endif  // VAPL_PIPELINE_H_
