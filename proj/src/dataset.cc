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

#include "vapl/dataset.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "vapl/canonical.h"
#include "vapl/error.h"
#include "vapl/nn_syntax.h"
#include "vapl/parallel.h"
#include "vapl/typecheck.h"

namespace vapl {

namespace {

constexpr std::string_view kGoldSeparator = "|||";

std::vector<std::string> SplitOn(std::string_view text, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    size_t end = text.find(sep, start);
    out.emplace_back(text.substr(start, end == std::string_view::npos
                                            ? std::string_view::npos
                                            : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::string ReadAll(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kSynthesized: return "synthesized";
    case Provenance::kParaphrase: return "paraphrase";
    case Provenance::kAugmented: return "augmented";
  }
  return "?";
}

Provenance DatasetExample::provenance() const {
  if (HasFlag("paraphrase")) return Provenance::kParaphrase;
  if (HasFlag("augmented")) return Provenance::kAugmented;
  return Provenance::kSynthesized;
}

void DatasetExample::set_provenance(Provenance p) {
  for (auto q : {Provenance::kSynthesized, Provenance::kParaphrase,
                 Provenance::kAugmented}) {
    flags.erase(std::string(ProvenanceName(q)));
  }
  flags.insert(std::string(ProvenanceName(p)));
}

std::string FormatExample(const DatasetExample &e) {
  std::string out = e.id + "\t";
  bool first = true;
  for (const auto &f : e.flags) {
    if (!first) out += ',';
    out += f;
    first = false;
  }
  out += "\t" + JoinTokens(e.sentence) + "\t";
  for (size_t i = 0; i < e.programs.size(); ++i) {
    if (i > 0) out += " " + std::string(kGoldSeparator) + " ";
    out += JoinTokens(e.programs[i]);
  }
  return out;
}

DatasetExample ParseExample(std::string_view line, const std::string &where,
                            int line_number) {
  auto fail = [&](const std::string &why) {
    return IoError(where + ":" + std::to_string(line_number) + ": " + why);
  };
  auto fields = SplitOn(line, '\t');
  if (fields.size() != 4) {
    throw fail("expected 4 tab-separated fields, found " +
               std::to_string(fields.size()));
  }
  DatasetExample e;
  e.id = fields[0];
  if (e.id.empty()) throw fail("empty id");
  for (auto &f : SplitOn(fields[1], ',')) {
    if (!f.empty()) e.flags.insert(std::move(f));
  }
  e.sentence = SplitTokens(fields[2]);
  Tokens current;
  for (auto &tok : SplitTokens(fields[3])) {
    if (tok == kGoldSeparator) {
      e.programs.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(std::move(tok));
    }
  }
  e.programs.push_back(std::move(current));
  for (const auto &p : e.programs) {
    if (p.empty()) throw fail("empty program");
  }
  return e;
}

void WriteFileAtomic(const std::string &path, const std::string &content) {
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw IoError("cannot write " + path);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot write " + path + ": " + ec.message());
  }
}

void WriteDataset(const std::vector<DatasetExample> &examples,
                  const std::string &path) {
  std::string out;
  for (const auto &e : examples) out += FormatExample(e) + "\n";
  WriteFileAtomic(path, out);
}

std::vector<DatasetExample> ReadDataset(const std::string &path) {
  const std::string text = ReadAll(path);
  std::vector<DatasetExample> out;
  int line_number = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(ParseExample(line, path, line_number));
  }
  return out;
}

std::vector<DatasetExample> MergeBySentence(std::vector<DatasetExample> examples) {
  std::vector<DatasetExample> out;
  std::map<std::string, size_t> index;
  for (auto &e : examples) {
    auto [it, fresh] = index.emplace(JoinTokens(e.sentence), out.size());
    if (fresh) {
      out.push_back(std::move(e));
      continue;
    }
    auto &programs = out[it->second].programs;
    for (auto &p : e.programs) {
      if (std::find(programs.begin(), programs.end(), p) == programs.end()) {
        programs.push_back(std::move(p));
      }
    }
  }
  return out;
}

std::vector<std::string> FunctionTokens(const Tokens &program) {
  std::vector<std::string> out;
  const auto classes = ClassifyTokens(program);
  for (size_t i = 0; i < program.size(); ++i) {
    if (classes[i] == TokenClass::kFunction) out.push_back(program[i]);
  }
  return out;
}

std::string ClassOfFunction(std::string_view token) {
  if (!token.empty() && token[0] == '@') token.remove_prefix(1);
  const size_t dot = token.rfind('.');
  return std::string(dot == std::string_view::npos ? token : token.substr(0, dot));
}

Splits SplitDataset(const std::vector<DatasetExample> &examples,
                    std::array<double, 3> ratios, uint64_t seed, SplitGroup group) {
  for (double r : ratios) {
    if (r < 0) throw ValueError("split ratios must be non-negative");
  }
  const double sum = ratios[0] + ratios[1] + ratios[2];
  if (sum <= 0) throw ValueError("split ratios must not all be zero");
  std::map<std::string, std::vector<size_t>> groups;
  for (size_t i = 0; i < examples.size(); ++i) {
    const auto &e = examples[i];
    std::string key;
    if (group == SplitGroup::kProgram) {
      key = e.programs.empty() ? "" : JoinTokens(e.programs[0]);
    } else {
      auto fns = e.programs.empty() ? std::vector<std::string>{}
                                    : FunctionTokens(e.programs[0]);
      std::sort(fns.begin(), fns.end());
      fns.erase(std::unique(fns.begin(), fns.end()), fns.end());
      key = JoinTokens(fns);
    }
    groups[key].push_back(i);
  }
  std::vector<const std::vector<size_t> *> order;
  for (const auto &[key, members] : groups) order.push_back(&members);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  const double n = static_cast<double>(examples.size());
  const size_t want_train = static_cast<size_t>(std::llround(n * ratios[0] / sum));
  const size_t want_valid = static_cast<size_t>(std::llround(n * ratios[1] / sum));
  std::vector<int> part(examples.size(), 2);
  size_t train = 0, valid = 0;
  for (const auto *members : order) {
    int p = 2;
    if (train < want_train) {
      p = 0;
      train += members->size();
    } else if (valid < want_valid) {
      p = 1;
      valid += members->size();
    }
    for (size_t i : *members) part[i] = p;
  }
  Splits out;
  for (size_t i = 0; i < examples.size(); ++i) {
    (part[i] == 0 ? out.train : part[i] == 1 ? out.valid : out.test)
        .push_back(examples[i]);
  }
  return out;
}

std::string Metrics::ToText() const {
  std::ostringstream out;
  out << "examples=" << total << "\n"
      << "programAccuracy=" << Rate(program_correct) << "\n"
      << "functionAccuracy=" << Rate(function_correct) << "\n"
      << "deviceAccuracy=" << Rate(device_correct) << "\n"
      << "syntaxOkRate=" << Rate(syntax_ok) << "\n"
      << "typeOkRate=" << Rate(type_ok) << "\n"
      << "primitiveVsCompoundAccuracy=" << Rate(arity_correct) << "\n"
      << "missingPredictions=" << missing << "\n"
      << "unknownPredictions=" << unknown << "\n";
  return out.str();
}

std::string Metrics::ToJson() const {
  nlohmann::ordered_json j;
  j["examples"] = total;
  j["programAccuracy"] = Rate(program_correct);
  j["functionAccuracy"] = Rate(function_correct);
  j["deviceAccuracy"] = Rate(device_correct);
  j["syntaxOkRate"] = Rate(syntax_ok);
  j["typeOkRate"] = Rate(type_ok);
  j["primitiveVsCompoundAccuracy"] = Rate(arity_correct);
  j["missingPredictions"] = missing;
  j["unknownPredictions"] = unknown;
  return j.dump(2) + "\n";
}

namespace {

struct Scored {
  Tokens canonical;  // empty when the program does not typecheck
  bool syntax_ok = false;
  bool type_ok = false;
  std::vector<std::string> functions;  // sorted
  std::vector<std::string> classes;    // sorted
};

Scored Score(const Tokens &tokens, const Library &library) {
  Scored s;
  Program program;
  try {
    program = ParseNn(tokens, library);
  } catch (const Error &) {
    return s;
  }
  s.syntax_ok = true;
  auto typed = Typecheck(program, library);
  if (!typed.ok()) return s;
  s.type_ok = true;
  try {
    s.canonical = EmitNn(Canonicalize(*typed, library).program);
  } catch (const ValueError &) {
    s.canonical = EmitNn(typed->program);
  }
  s.functions = FunctionTokens(s.canonical);
  std::sort(s.functions.begin(), s.functions.end());
  for (const auto &f : s.functions) s.classes.push_back(ClassOfFunction(f));
  std::sort(s.classes.begin(), s.classes.end());
  return s;
}

}  // namespace

Metrics Evaluate(const std::map<std::string, Tokens> &predictions,
                 const std::vector<DatasetExample> &golds, const Library &library,
                 int jobs) {
  Metrics m;
  m.total = static_cast<int>(golds.size());
  std::set<std::string> ids;
  for (const auto &g : golds) ids.insert(g.id);
  for (const auto &[id, tokens] : predictions) {
    if (!ids.count(id)) ++m.unknown;
  }
  struct Row {
    bool missing = false, syntax = false, type = false, device = false,
         function = false, program = false, arity = false;
  };
  std::vector<Row> rows(golds.size());
  ParallelFor(golds.size(), jobs, [&](size_t i) {
    const DatasetExample &gold = golds[i];
    Row &row = rows[i];
    auto it = predictions.find(gold.id);
    if (it == predictions.end()) {
      row.missing = true;
      return;
    }
    const Scored pred = Score(it->second, library);
    row.syntax = pred.syntax_ok;
    row.type = pred.type_ok;
    if (!pred.syntax_ok) return;
    const bool pred_primitive = FunctionTokens(it->second).size() <= 1;
    const bool gold_primitive =
        !gold.programs.empty() && FunctionTokens(gold.programs[0]).size() <= 1;
    row.arity = pred_primitive == gold_primitive;
    if (!pred.type_ok) return;
    for (const auto &g : gold.programs) {
      Scored gs = Score(g, library);
      if (!gs.type_ok) {
        gs.canonical = g;
        gs.functions = FunctionTokens(g);
        std::sort(gs.functions.begin(), gs.functions.end());
        for (const auto &f : gs.functions) gs.classes.push_back(ClassOfFunction(f));
        std::sort(gs.classes.begin(), gs.classes.end());
      }
      row.device = row.device || gs.classes == pred.classes;
      row.function = row.function || gs.functions == pred.functions;
      row.program = row.program || gs.canonical == pred.canonical;
    }
  });
  for (const auto &r : rows) {
    m.missing += r.missing;
    m.syntax_ok += r.syntax;
    m.type_ok += r.type;
    m.device_correct += r.device;
    m.function_correct += r.function;
    m.program_correct += r.program;
    m.arity_correct += r.arity;
  }
  return m;
}

void WritePredictions(const std::map<std::string, Tokens> &predictions,
                      const std::string &path) {
  std::string out;
  for (const auto &[id, tokens] : predictions) {
    out += id + "\t" + JoinTokens(tokens) + "\n";
  }
  WriteFileAtomic(path, out);
}

std::map<std::string, Tokens> ReadPredictions(const std::string &path) {
  const std::string text = ReadAll(path);
  std::map<std::string, Tokens> out;
  std::istringstream in(text);
  int line_number = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw IoError(path + ":" + std::to_string(line_number) +
                    ": expected id <TAB> program");
    }
    out[line.substr(0, tab)] = SplitTokens(std::string_view(line).substr(tab + 1));
  }
  return out;
}

RetrievalBaseline::RetrievalBaseline(std::vector<DatasetExample> train)
    : train_(std::move(train)) {
  std::stable_sort(train_.begin(), train_.end(),
                   [](const DatasetExample &a, const DatasetExample &b) {
                     return a.id < b.id;
                   });
  for (size_t i = 0; i < train_.size(); ++i) {
    std::vector<int> set;
    for (const auto &tok : train_[i].sentence) {
      auto it = vocabulary_.emplace(tok, static_cast<int>(vocabulary_.size())).first;
      set.push_back(it->second);
    }
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    token_sets_.push_back(std::move(set));
    verbatim_.emplace(JoinTokens(train_[i].sentence), static_cast<int>(i));
  }
}

Tokens RetrievalBaseline::Predict(const Tokens &sentence) const {
  if (train_.empty()) return {};
  if (auto it = verbatim_.find(JoinTokens(sentence)); it != verbatim_.end()) {
    return train_[it->second].programs.at(0);
  }
  std::vector<int> query;
  int unknown = 0;
  std::set<std::string> seen;
  for (const auto &tok : sentence) {
    if (!seen.insert(tok).second) continue;
    auto it = vocabulary_.find(tok);
    if (it == vocabulary_.end()) {
      ++unknown;
    } else {
      query.push_back(it->second);
    }
  }
  std::sort(query.begin(), query.end());
  size_t best = 0;
  double best_score = -1;
  for (size_t i = 0; i < train_.size(); ++i) {
    const auto &set = token_sets_[i];
    size_t common = 0;
    for (size_t a = 0, b = 0; a < query.size() && b < set.size();) {
      if (query[a] == set[b]) {
        ++common, ++a, ++b;
      } else if (query[a] < set[b]) {
        ++a;
      } else {
        ++b;
      }
    }
    const size_t uni = query.size() + unknown + set.size() - common;
    const double score = uni == 0 ? 0.0 : static_cast<double>(common) / uni;
    if (score > best_score) {
      best_score = score;
      best = i;
    }
  }
  return train_[best].programs.at(0);
}

}  // namespace vapl
