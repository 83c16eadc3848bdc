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

// Randomized bottom-up expansion of a template set into (sentence,
// program) pairs.
//
// Derivations are kept in charts indexed by category and depth. Depth 0
// holds the primitive templates and the parameter-name categories; a
// construct template produces depth d from child combinations whose
// deepest child has depth d - 1. Each (rule, depth) keeps at most
// TargetAt(d) derivations, sampling candidates with probability
//
//   target / (candidate count * pass rate of the rule at depth d - 1).
//
// Templates disabled by flags are still expanded; their derivations carry
// the flags and are filtered only at the end, so changing the flag set
// never changes sampling decisions.

#ifndef VAPL_GENERATOR_H_
#define VAPL_GENERATOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vapl/library.h"
#include "vapl/paramdb.h"
#include "vapl/templates.h"

namespace vapl {

struct GenerationConfig {
  int max_depth = 5;
  int target = 2000;    // per-rule target at depth 0
  double decay = 0.5;   // per-depth factor of the target
  // Upper bound on candidates examined per (rule, depth), as a multiple
  // of the target.
  int candidate_budget = 50;
  std::set<std::string> enabled_flags;
  // Function tokens ("@com.gmail.inbox") that may not appear together.
  std::set<std::pair<std::string, std::string>> blacklist;
  uint64_t seed = 0;
  int jobs = 1;

  int TargetAt(int depth) const;
  bool Blacklisted(const std::string &a, const std::string &b) const;
};

struct Derivation {
  std::string category;
  std::vector<std::string> sentence;  // placeholders are "$p0", "$p1", ...
  Fragment value;
  int depth = 0;
  std::vector<TemplateParam> placeholders;  // in sentence order
  std::string projection;  // preferred output when passed as a parameter
  TemplateFlags flags;     // accumulated over the derivation tree
  std::vector<std::string> functions;  // sorted function tokens
  std::vector<OutputInfo> outputs;     // for queries and streams
  int rule = -1;                       // construct index, -1 for primitives

  // Identity for de-duplication: sentence and program fragment.
  std::string Key() const;
};

using DerivationPtr = std::shared_ptr<const Derivation>;

struct RuleStats {
  int rule = -1;
  int depth = 0;
  int target = 0;
  double candidates = 0;   // size of the candidate space
  double probability = 0;  // acceptance probability used
  int64_t examined = 0;
  int64_t passed = 0;  // examined candidates that survived every check
  int retained = 0;
};

struct Charts {
  // charts[category][depth]
  std::map<std::string, std::vector<std::vector<DerivationPtr>>> charts;
  std::vector<RuleStats> stats;

  const std::vector<DerivationPtr> &At(const std::string &category,
                                       int depth) const;
  // Every derivation of the category, by depth then rule order.
  std::vector<DerivationPtr> All(const std::string &category) const;
};

Charts BuildCharts(const TemplateSet &templates, const Library &library,
                   const GenerationConfig &config);

// Replaces every placeholder with a value drawn for its parameter. No
// value is used twice in one sentence, and numeric values of one kind
// increase from left to right. On failure returns nullopt and sets
// `reason` ("no-value:<type>" or "duplicate-value:<type>").
std::optional<Derivation> InstantiatePlaceholders(const Derivation &derivation,
                                                  const ParamDb &db,
                                                  const Library &library,
                                                  std::mt19937_64 &rng,
                                                  std::string *reason);

struct GeneratedExample {
  std::string text;                   // instantiated sentence, original case
  std::vector<std::string> sentence;  // after argument identification
  std::vector<std::string> program;   // canonical NN tokens
  int depth = 0;
  int rule = -1;
  std::vector<std::string> flags;  // "primitive" or "compound", "string"
};

struct GenerationResult {
  std::vector<GeneratedExample> examples;
  std::vector<RuleStats> stats;
  std::map<std::string, int> dropped;  // reason -> count
};

// Expands the templates and emits distinct pairs for the root category,
// in chart order. Output depends only on the inputs and config.seed.
GenerationResult Generate(const TemplateSet &templates, const Library &library,
                          const ParamDb &db, const GenerationConfig &config);

// 64-bit mixing of a seed with a stream identifier.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

}  // namespace vapl

#endif  // VAPL_GENERATOR_H_
