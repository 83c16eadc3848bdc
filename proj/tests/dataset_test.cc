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

#include <filesystem>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "testing.h"
#include "vapl/canonical.h"
#include "vapl/dataset.h"
#include "vapl/nn_syntax.h"
#include "vapl/typecheck.h"

namespace vapl {
namespace {

using testing::BundledLibrary;

Tokens Canonical(const std::string &program) {
  auto typed = Typecheck(ParseProgram(program), BundledLibrary());
  EXPECT_TRUE(typed.ok()) << program;
  return EmitNn(Canonicalize(*typed, BundledLibrary()).program);
}

DatasetExample Example(const std::string &id, const std::string &sentence,
                       std::vector<std::string> programs) {
  DatasetExample e;
  e.id = id;
  e.set_provenance(Provenance::kSynthesized);
  e.flags.insert(programs.size() > 1 ? "compound" : "primitive");
  e.sentence = SplitTokens(sentence);
  for (const auto &p : programs) e.programs.push_back(Canonical(p));
  return e;
}

std::string TempPath(const std::string &name) {
  auto dir = std::filesystem::temp_directory_path() / ("vapl_dataset_test_" + std::to_string(getpid()));
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

const char *const kPost = R"(now => @com.twitter.post(status = "funny cat");)";
const char *const kSend =
    R"(now => @com.gmail.send(to = "bob@gmail.com"^^tt:email_address, subject = "hi", message = "hello");)";
const char *const kMonitor = R"(monitor @com.gmail.inbox() => @com.slack.send(channel = "general"^^tt:hashtag, message = subject);)";
const char *const kWeather = "now => (@weather.current()) filter humidity > 70 => notify;";

std::vector<DatasetExample> Golds() {
  return {Example("0001", "tweet funny cat", {kPost}),
          Example("0002", "email bob@gmail.com about hi saying hello", {kSend}),
          Example("0003", "post new email subjects to general on slack", {kMonitor}),
          Example("0004", "is the humidity above 70", {kWeather})};
}

TEST(DatasetFileTest, RoundTrip) {
  auto golds = Golds();
  golds[1].programs.push_back(Canonical(kPost));
  const std::string path = TempPath("rt.tsv");
  WriteDataset(golds, path);
  auto back = ReadDataset(path);
  ASSERT_EQ(back.size(), golds.size());
  for (size_t i = 0; i < golds.size(); ++i) {
    EXPECT_EQ(back[i].id, golds[i].id);
    EXPECT_EQ(back[i].flags, golds[i].flags);
    EXPECT_EQ(back[i].sentence, golds[i].sentence);
    EXPECT_EQ(back[i].programs, golds[i].programs);
  }
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 3);
  std::getline(in, line);
  EXPECT_NE(line.find(" ||| "), std::string::npos);
}

TEST(DatasetFileTest, MalformedLineNamesItsNumber) {
  const std::string path = TempPath("bad.tsv");
  {
    std::ofstream out(path);
    out << FormatExample(Golds()[0]) << "\n" << "x\tsynthesized\tonly three\n";
  }
  try {
    ReadDataset(path);
    FAIL() << "expected IoError";
  } catch (const IoError &e) {
    EXPECT_NE(std::string(e.what()).find(path + ":2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(ReadDataset(TempPath("missing.tsv")), IoError);
}

TEST(DatasetFileTest, ProvenanceIsAFlag) {
  DatasetExample e = Golds()[0];
  e.set_provenance(Provenance::kParaphrase);
  EXPECT_TRUE(e.HasFlag("paraphrase"));
  EXPECT_FALSE(e.HasFlag("synthesized"));
  EXPECT_EQ(ParseExample(FormatExample(e), "x", 1).provenance(), Provenance::kParaphrase);
}

TEST(DatasetFileTest, MergeBySentenceKeepsEveryGold) {
  auto golds = Golds();
  DatasetExample dup = Example("0009", "tweet funny cat", {kWeather});
  golds.push_back(dup);
  golds.push_back(Golds()[0]);
  auto merged = MergeBySentence(golds);
  ASSERT_EQ(merged.size(), 4u);
  EXPECT_EQ(merged[0].id, "0001");
  EXPECT_EQ(merged[0].programs.size(), 2u);
}

TEST(DatasetFileTest, Functions) {
  Tokens p = Canonical(kMonitor);
  EXPECT_EQ(FunctionTokens(p),
            (std::vector<std::string>{"@com.gmail.inbox", "@com.slack.send"}));
  EXPECT_EQ(ClassOfFunction("@com.twitter.post"), "com.twitter");
}

std::vector<DatasetExample> SplitCorpus() {
  const char *programs[] = {kPost, kSend, kMonitor, kWeather};
  std::vector<DatasetExample> out;
  for (int i = 0; i < 200; ++i) {
    DatasetExample e;
    e.id = std::to_string(1000 + i);
    e.sentence = {"s" + std::to_string(i)};
    e.programs = {Canonical(programs[i % 4])};
    if (i % 8 >= 4) e.programs[0] = Canonical(programs[(i + 1) % 4]);
    out.push_back(e);
  }
  return out;
}

std::set<std::string> Combos(const std::vector<DatasetExample> &v) {
  std::set<std::string> out;
  for (const auto &e : v) {
    auto f = FunctionTokens(e.programs[0]);
    std::sort(f.begin(), f.end());
    out.insert(JoinTokens(f));
  }
  return out;
}

TEST(SplitTest, FunctionCombinationsDoNotCrossParts) {
  auto corpus = SplitCorpus();
  Splits s = SplitDataset(corpus, {0.5, 0.25, 0.25}, 3, SplitGroup::kFunctions);
  EXPECT_EQ(s.train.size() + s.valid.size() + s.test.size(), corpus.size());
  auto train = Combos(s.train), valid = Combos(s.valid), test = Combos(s.test);
  for (const auto &c : test) {
    EXPECT_FALSE(train.count(c));
    EXPECT_FALSE(valid.count(c));
  }
  for (const auto &c : valid) EXPECT_FALSE(train.count(c));
}

TEST(SplitTest, ProgramGroupsAndDegenerateRatios) {
  auto corpus = SplitCorpus();
  Splits all = SplitDataset(corpus, {1, 0, 0}, 3, SplitGroup::kProgram);
  EXPECT_EQ(all.train.size(), corpus.size());
  EXPECT_TRUE(all.valid.empty());
  EXPECT_TRUE(all.test.empty());
  Splits a = SplitDataset(corpus, {0.6, 0.2, 0.2}, 11, SplitGroup::kProgram);
  Splits b = SplitDataset(corpus, {0.6, 0.2, 0.2}, 11, SplitGroup::kProgram);
  auto ids = [](const std::vector<DatasetExample> &v) {
    std::vector<std::string> out;
    for (const auto &e : v) out.push_back(e.id);
    return out;
  };
  EXPECT_EQ(ids(a.train), ids(b.train));
  EXPECT_EQ(ids(a.test), ids(b.test));
  std::set<Tokens> train_programs;
  for (const auto &e : a.train) train_programs.insert(e.programs[0]);
  for (const auto &e : a.test) EXPECT_FALSE(train_programs.count(e.programs[0]));
}

// Counts computed independently of the library under test: token equality
// for programs, sorted function and class lists, and a parse-and-typecheck
// for the syntax and type rates.
struct OracleCounts {
  int syntax = 0, type = 0, device = 0, function = 0, program = 0;
};

OracleCounts Oracle(const std::map<std::string, Tokens> &preds,
                    const std::vector<DatasetExample> &golds) {
  OracleCounts c;
  for (const auto &g : golds) {
    auto it = preds.find(g.id);
    if (it == preds.end()) continue;
    Program parsed;
    try {
      parsed = ParseNn(it->second, BundledLibrary());
    } catch (const Error &) {
      continue;
    }
    ++c.syntax;
    auto typed = Typecheck(parsed, BundledLibrary());
    if (!typed.ok()) continue;
    ++c.type;
    Tokens canon = EmitNn(Canonicalize(*typed, BundledLibrary()).program);
    auto fns = [](const Tokens &t) {
      std::vector<std::string> f, d;
      for (const auto &tok : t) {
        if (tok.size() > 1 && tok[0] == '@') {
          f.push_back(tok);
          d.push_back(tok.substr(1, tok.rfind('.') - 1));
        }
      }
      std::sort(f.begin(), f.end());
      std::sort(d.begin(), d.end());
      return std::make_pair(f, d);
    };
    bool dev = false, fn = false, prog = false;
    for (const auto &gold : g.programs) {
      auto [gf, gd] = fns(gold);
      auto [pf, pd] = fns(canon);
      dev = dev || gd == pd;
      fn = fn || gf == pf;
      prog = prog || gold == canon;
    }
    c.device += dev;
    c.function += fn;
    c.program += prog;
  }
  return c;
}

std::map<std::string, Tokens> GoldPredictions(const std::vector<DatasetExample> &golds) {
  std::map<std::string, Tokens> out;
  for (const auto &g : golds) out[g.id] = g.programs[0];
  return out;
}

TEST(EvaluateTest, GoldsScorePerfectly) {
  auto golds = Golds();
  Metrics m = Evaluate(GoldPredictions(golds), golds, BundledLibrary());
  EXPECT_EQ(m.total, 4);
  for (int n : {m.syntax_ok, m.type_ok, m.device_correct, m.function_correct,
                m.program_correct, m.arity_correct}) {
    EXPECT_EQ(n, 4);
  }
  EXPECT_EQ(m.missing, 0);
  EXPECT_EQ(m.unknown, 0);
}

TEST(EvaluateTest, BindingOrderDoesNotMatter) {
  auto golds = Golds();
  auto preds = GoldPredictions(golds);
  // Move the last binding to the front.
  Tokens permuted = golds[1].programs[0];
  auto to = std::find(permuted.begin(), permuted.end(), "param:to:Entity(tt:email_address)");
  ASSERT_NE(to, permuted.end());
  std::rotate(permuted.begin() + 3, to, permuted.end());
  preds["0002"] = permuted;
  ASSERT_NE(preds["0002"], golds[1].programs[0]);
  Metrics m = Evaluate(preds, golds, BundledLibrary());
  EXPECT_EQ(m.program_correct, 4);
}

TEST(EvaluateTest, WrongConstantIsFunctionCorrectOnly) {
  auto golds = Golds();
  auto preds = GoldPredictions(golds);
  preds["0001"] = Canonical(R"(now => @com.twitter.post(status = "funny dog");)");
  preds["0004"] = Canonical("now => @com.twitter.timeline() => notify;");
  preds["0002"] = {"now", "=>", "@com.gmail.send", "(", "oops"};
  preds["0099"] = Canonical(kPost);
  preds.erase("0003");
  Metrics m = Evaluate(preds, golds, BundledLibrary());
  EXPECT_EQ(m.program_correct, 0);
  EXPECT_EQ(m.function_correct, 1);
  EXPECT_EQ(m.device_correct, 1);
  EXPECT_EQ(m.syntax_ok, 2);
  EXPECT_EQ(m.type_ok, 2);
  EXPECT_EQ(m.missing, 1);
  EXPECT_EQ(m.unknown, 1);
  OracleCounts o = Oracle(preds, golds);
  EXPECT_EQ(o.syntax, m.syntax_ok);
  EXPECT_EQ(o.function, m.function_correct);
}

TEST(EvaluateTest, MultiGoldAcceptsAnyReading) {
  auto golds = Golds();
  golds[0].programs.push_back(Canonical(kWeather));
  auto preds = GoldPredictions(golds);
  preds["0001"] = Canonical(kWeather);
  EXPECT_EQ(Evaluate(preds, golds, BundledLibrary()).program_correct, 4);
}

TEST(EvaluateTest, CorruptionNeverRaisesAnyMetric) {
  std::vector<DatasetExample> golds;
  const char *programs[] = {kPost, kSend, kMonitor, kWeather};
  for (int i = 0; i < 24; ++i) {
    golds.push_back(Example("g" + std::to_string(100 + i), "s" + std::to_string(i),
                            {programs[i % 4]}));
  }
  auto preds = GoldPredictions(golds);
  std::mt19937_64 rng(17);
  Metrics prev = Evaluate(preds, golds, BundledLibrary(), 2);
  const Tokens other = Canonical("now => @com.twitter.follow(user_name = \"bob\"^^tt:username);");
  std::vector<std::string> untouched;
  for (const auto &g : golds) untouched.push_back(g.id);
  std::shuffle(untouched.begin(), untouched.end(), rng);
  for (; !untouched.empty(); untouched.pop_back()) {
    auto it = preds.find(untouched.back());
    switch (rng() % 4) {
      case 0: it->second.erase(it->second.begin() + rng() % it->second.size()); break;
      case 1: it->second = other; break;
      case 2: it->second.insert(it->second.begin() + rng() % it->second.size(), "cat"); break;
      default: preds.erase(it); break;
    }
    Metrics m = Evaluate(preds, golds, BundledLibrary(), 2);
    OracleCounts o = Oracle(preds, golds);
    EXPECT_EQ(m.syntax_ok, o.syntax);
    EXPECT_EQ(m.type_ok, o.type);
    EXPECT_EQ(m.device_correct, o.device);
    EXPECT_EQ(m.function_correct, o.function);
    EXPECT_EQ(m.program_correct, o.program);
    EXPECT_LE(m.program_correct, prev.program_correct);
    EXPECT_LE(m.function_correct, prev.function_correct);
    EXPECT_LE(m.syntax_ok, prev.syntax_ok);
    EXPECT_LE(m.program_correct, m.function_correct);
    EXPECT_LE(m.function_correct, m.device_correct);
    EXPECT_LE(m.device_correct, m.type_ok);
    EXPECT_LE(m.type_ok, m.syntax_ok);
    prev = m;
  }
}

TEST(EvaluateTest, Reports) {
  auto golds = Golds();
  Metrics m = Evaluate(GoldPredictions(golds), golds, BundledLibrary());
  auto j = nlohmann::json::parse(m.ToJson());
  EXPECT_DOUBLE_EQ(j["programAccuracy"].get<double>(), 1.0);
  EXPECT_TRUE(j.contains("primitiveVsCompoundAccuracy"));
  EXPECT_NE(m.ToText().find("programAccuracy=1"), std::string::npos);
  EXPECT_EQ(Metrics{}.Rate(0), 0.0);
}

TEST(PredictionsFileTest, RoundTrip) {
  auto preds = GoldPredictions(Golds());
  const std::string path = TempPath("preds.tsv");
  WritePredictions(preds, path);
  EXPECT_EQ(ReadPredictions(path), preds);
}

TEST(BaselineTest, VerbatimAndFallback) {
  auto train = Golds();
  RetrievalBaseline baseline(train);
  EXPECT_EQ(baseline.Predict(SplitTokens("is the humidity above 70")), train[3].programs[0]);
  EXPECT_EQ(baseline.Predict(SplitTokens("humidity above 70 please")), train[3].programs[0]);
  EXPECT_EQ(baseline.Predict(SplitTokens("zzz qqq")), train[0].programs[0]);
  std::reverse(train.begin(), train.end());
  EXPECT_EQ(RetrievalBaseline(train).Predict(SplitTokens("zzz")), Golds()[0].programs[0]);
}

TEST(BaselineTest, TrainingSetScoresPerfectly) {
  auto golds = MergeBySentence(Golds());
  RetrievalBaseline baseline(golds);
  std::map<std::string, Tokens> preds;
  for (const auto &g : golds) preds[g.id] = baseline.Predict(g.sentence);
  EXPECT_EQ(Evaluate(preds, golds, BundledLibrary()).program_correct,
            static_cast<int>(golds.size()));
}

}  // namespace
}  // namespace vapl
