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

// Dataset files, splits, exact-match evaluation and a nearest-neighbour
// retrieval baseline.
//
// A dataset is a TSV file with one example per line and four fields:
//
//   id <TAB> flags <TAB> sentence tokens <TAB> program ||| program ...
//
// Flags are a comma list; one of them names the provenance (synthesized,
// paraphrase or augmented).

#ifndef VAPL_DATASET_H_
#define VAPL_DATASET_H_

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "vapl/library.h"

namespace vapl {

using Tokens = std::vector<std::string>;

enum class Provenance { kSynthesized, kParaphrase, kAugmented };

std::string_view ProvenanceName(Provenance p);

struct DatasetExample {
  std::string id;
  std::set<std::string> flags;
  Tokens sentence;
  std::vector<Tokens> programs;  // at least one, all canonical

  Provenance provenance() const;
  void set_provenance(Provenance p);
  bool HasFlag(std::string_view f) const { return flags.count(std::string(f)) > 0; }
};

std::string FormatExample(const DatasetExample &e);
// Throws IoError naming `where` and the line number on malformed input.
DatasetExample ParseExample(std::string_view line, const std::string &where,
                            int line_number);

void WriteDataset(const std::vector<DatasetExample> &examples,
                  const std::string &path);
std::vector<DatasetExample> ReadDataset(const std::string &path);

// Merges examples with identical sentences into one multi-gold example that
// keeps the first id and flags.
std::vector<DatasetExample> MergeBySentence(std::vector<DatasetExample> examples);

// Function tokens of a program, in order, with repetitions.
std::vector<std::string> FunctionTokens(const Tokens &program);
// Class of a function token: "@com.twitter.post" -> "com.twitter".
std::string ClassOfFunction(std::string_view token);

enum class SplitGroup { kProgram, kFunctions };

struct Splits {
  std::vector<DatasetExample> train, valid, test;
};

// Groups examples by program or by the set of functions they use, shuffles
// the groups and fills train, valid and test up to the given ratios of the
// example count. No group spans two parts.
Splits SplitDataset(const std::vector<DatasetExample> &examples,
                    std::array<double, 3> ratios, uint64_t seed,
                    SplitGroup group);

struct Metrics {
  int total = 0;
  int syntax_ok = 0;
  int type_ok = 0;
  int device_correct = 0;
  int function_correct = 0;
  int program_correct = 0;
  int arity_correct = 0;  // primitive vs compound
  int missing = 0;        // golds without a prediction
  int unknown = 0;        // predictions without a gold

  double Rate(int n) const { return total == 0 ? 0.0 : static_cast<double>(n) / total; }
  // key=value lines.
  std::string ToText() const;
  std::string ToJson() const;
};

// Scores predictions (id -> NN tokens) against gold examples. A prediction
// counts for a metric only when it parses and, except for the syntax rate,
// typechecks; it is program-correct when its canonical form equals a gold.
Metrics Evaluate(const std::map<std::string, Tokens> &predictions,
                 const std::vector<DatasetExample> &golds, const Library &library,
                 int jobs = 1);

void WritePredictions(const std::map<std::string, Tokens> &predictions,
                      const std::string &path);
std::map<std::string, Tokens> ReadPredictions(const std::string &path);

// Returns the first gold program of the training example whose sentence
// token set is most similar (Jaccard) to the query; a verbatim match wins,
// then the lowest id.
class RetrievalBaseline {
 public:
  explicit RetrievalBaseline(std::vector<DatasetExample> train);
  Tokens Predict(const Tokens &sentence) const;

 private:
  std::vector<DatasetExample> train_;  // sorted by id
  std::vector<std::vector<int>> token_sets_;
  std::map<std::string, int> vocabulary_;
  std::map<std::string, int> verbatim_;
};

// Writes `content` to a temporary file next to `path` and renames it.
void WriteFileAtomic(const std::string &path, const std::string &content);

}  // namespace vapl

#endif  // VAPL_DATASET_H_
