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

#include <random>

#include <gtest/gtest.h>

#include "testing.h"
#include "vapl/canonical.h"
#include "vapl/nn_syntax.h"
#include "vapl/parser.h"
#include "vapl/printer.h"
#include "vapl/typecheck.h"

namespace vapl {
namespace {

using testing::BundledLibrary;

TypedProgram Typed(const std::string &text) {
  auto r = Typecheck(ParseProgram(text), BundledLibrary());
  EXPECT_TRUE(r.ok()) << text << ": "
                      << (r.ok() ? "" : r.diagnostics()[0].ToString());
  return std::move(r).value();
}

std::string Canon(const std::string &text) {
  return Pretty(Canonicalize(Typed(text), BundledLibrary()).program);
}

// Test-only evaluator: atoms are `vK == 1`, variable K is bit K of row.
bool Oracle(const Predicate &p, uint32_t row) {
  switch (p.kind) {
    case PredicateKind::kTrue: return true;
    case PredicateKind::kFalse: return false;
    case PredicateKind::kNot: return !Oracle(*p.inner(), row);
    case PredicateKind::kAnd:
      return Oracle(*p.operands[0], row) && Oracle(*p.operands[1], row);
    case PredicateKind::kOr:
      return Oracle(*p.operands[0], row) || Oracle(*p.operands[1], row);
    case PredicateKind::kAtom:
      return (row >> std::stoi(p.param.substr(1))) & 1;
    case PredicateKind::kGet: break;
  }
  ADD_FAILURE();
  return false;
}

std::vector<bool> OracleTable(const Predicate &p, int vars) {
  std::vector<bool> t;
  for (uint32_t row = 0; row < (1u << vars); ++row) t.push_back(Oracle(p, row));
  return t;
}

std::vector<PredicatePtr> Vars(int n) {
  std::vector<PredicatePtr> v;
  for (int i = 0; i < n; ++i) {
    v.push_back(Predicate::Atom("v" + std::to_string(i), Operator::kEquals,
                                Value::Number(1)));
  }
  return v;
}

PredicatePtr RandomPredicate(std::mt19937_64 &rng, int vars, int depth) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int choice = depth == 0 ? 0 : pick(rng);
  if (choice <= 2) {
    return Vars(vars)[std::uniform_int_distribution<int>(0, vars - 1)(rng)];
  }
  if (choice == 3) return pick(rng) < 5 ? Predicate::True() : Predicate::False();
  if (choice == 4) return Predicate::Not(RandomPredicate(rng, vars, depth - 1));
  PredicatePtr a = RandomPredicate(rng, vars, depth - 1);
  PredicatePtr b = RandomPredicate(rng, vars, depth - 1);
  return choice < 7 ? Predicate::And(a, b) : Predicate::Or(a, b);
}

TEST(SimplifyTest, Examples) {
  auto a = ParsePredicateText("v0 == 1");
  EXPECT_EQ(PrettyPredicate(
                *SimplifyPredicate(Predicate::And(a, Predicate::True()))),
            "v0 == 1");
  auto absorbed = SimplifyPredicate(ParsePredicateText("v0 == 1 || (v0 == 1 && v1 == 1)"));
  EXPECT_EQ(PrettyPredicate(*absorbed), "v0 == 1");
  EXPECT_EQ(OracleTable(*absorbed, 2),
            OracleTable(*ParsePredicateText("v0 == 1 || (v0 == 1 && v1 == 1)"),
                        2));
  auto dist = SimplifyPredicate(ParsePredicateText("(v0 == 1 && v1 == 1) || v2 == 1"));
  EXPECT_EQ(PrettyPredicate(*dist), "(v0 == 1 || v2 == 1) && (v1 == 1 || v2 == 1)");
  EXPECT_EQ(OracleTable(*dist, 3),
            OracleTable(*ParsePredicateText("(v0 == 1 && v1 == 1) || v2 == 1"), 3));
  EXPECT_EQ(SimplifyPredicate(ParsePredicateText("v0 == 1 || !v0 == 1"))->kind,
            PredicateKind::kTrue);
  EXPECT_EQ(SimplifyPredicate(ParsePredicateText("v0 == 1 && !v0 == 1"))->kind,
            PredicateKind::kFalse);
  EXPECT_EQ(PrettyPredicate(*SimplifyPredicate(
                ParsePredicateText("b == 2 && a == 3 && b == 2"))),
            "a == 3 && b == 2");
  EXPECT_EQ(PrettyPredicate(*SimplifyPredicate(ParsePredicateText(
                "x == NUMBER_10 && x == NUMBER_2"))),
            "x == NUMBER_2 && x == NUMBER_10");
}

TEST(SimplifyTest, CnfGuard) {
  std::string text;
  for (int i = 0; i < 7; ++i) {
    if (i > 0) text += " || ";
    text += "(a" + std::to_string(i) + " == 1 && b" + std::to_string(i) +
            " == 1)";
  }
  EXPECT_THROW(SimplifyPredicate(ParsePredicateText(text)), ValueError);
}

TEST(TruthTableTest, Basics) {
  auto vars = Vars(2);
  EXPECT_EQ(PredicateTruthTable(Predicate::True(), vars),
            std::vector<bool>(4, true));
  EXPECT_EQ(PredicateTruthTable(Predicate::Not(vars[0]), vars),
            (std::vector<bool>{true, false, true, false}));
  EXPECT_EQ(PredicateTruthTable(vars[1], vars),
            (std::vector<bool>{false, false, true, true}));
  EXPECT_THROW(PredicateTruthTable(vars[1], {vars[0]}), ValueError);
}

// Simplification preserves the truth table on random predicates.
TEST(TruthTableTest, SimplifyPreservesSemantics) {
  std::mt19937_64 rng(2026);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const int vars = 1 + i % 6;
    PredicatePtr p = RandomPredicate(rng, vars, 4);
    PredicatePtr s;
    try {
      s = SimplifyPredicate(p);
    } catch (const ValueError &) {
      continue;
    }
    ++checked;
    const auto expected = OracleTable(*p, vars);
    EXPECT_EQ(OracleTable(*s, vars), expected) << PrettyPredicate(*p);
    EXPECT_EQ(PredicateTruthTable(p, Vars(vars)), expected);
    EXPECT_EQ(PredicateTruthTable(s, Vars(vars)), expected);
    EXPECT_EQ(PrettyPredicate(*SimplifyPredicate(s)), PrettyPredicate(*s));
  }
  EXPECT_EQ(checked, 1000);
}

TEST(CanonicalizeTest, SortsBindings) {
  EXPECT_EQ(Canon("now => @com.thecatapi.get() => "
                  "@com.facebook.post_picture(picture_url = picture_url, "
                  "caption = \"cat\")"),
            "now => @com.thecatapi.get() => "
            "@com.facebook.post_picture(caption = \"cat\", picture_url = "
            "picture_url)");
}

TEST(CanonicalizeTest, MergesFilters) {
  EXPECT_EQ(Canon("now => (@com.gmail.inbox() filter subject == \"b\") "
                  "filter sender == \"a\" => notify"),
            "now => (@com.gmail.inbox()) filter sender == \"a\" && subject == "
            "\"b\" => notify");
  EXPECT_EQ(Canon("now => @com.gmail.inbox() filter true => notify"),
            "now => @com.gmail.inbox() => notify");
}

TEST(CanonicalizeTest, CommutesIndependentJoins) {
  EXPECT_EQ(Canon("now => @com.thecatapi.get() join "
                  "@com.dropbox.get_space_usage() => notify"),
            "now => @com.dropbox.get_space_usage() join @com.thecatapi.get() "
            "=> notify");
  // Parameter passing pins the order.
  const std::string passing =
      "now => @com.nytimes.get_front_page() join @com.yandex.translate() on "
      "text = title => notify";
  EXPECT_EQ(Canon(passing), passing);
  // Shared output names pin the order.
  const std::string shared =
      "now => @com.thecatapi.get() join @com.nytimes.get_front_page() => "
      "notify";
  EXPECT_EQ(Canon(shared), shared);
}

TEST(CanonicalizeTest, PushesClausesToProducers) {
  EXPECT_EQ(Canon("now => (@com.dropbox.get_space_usage() join "
                  "@com.gmail.inbox()) filter sender == \"a\" && used_space > "
                  "1GB => notify"),
            "now => ((@com.dropbox.get_space_usage()) filter used_space > "
            "1GB) join ((@com.gmail.inbox()) filter sender == \"a\") => "
            "notify");
  EXPECT_EQ(Canon("now => (@com.dropbox.get_space_usage() join "
                  "@com.gmail.inbox()) filter sender == \"a\" || used_space > "
                  "1GB => notify"),
            "now => (@com.dropbox.get_space_usage() join @com.gmail.inbox()) "
            "filter sender == \"a\" || used_space > 1GB => notify");
}

TEST(CanonicalizeTest, MonitorOnNewSorted) {
  EXPECT_EQ(Canon("monitor @com.dropbox.list_folder(folder_name = \"/\") on "
                  "new file_size, file_name => notify"),
            "monitor @com.dropbox.list_folder(folder_name = \"/\") on new "
            "file_name, file_size => notify");
}

TEST(CanonicalizeTest, IdempotentOnCorpus) {
  const Library &lib = BundledLibrary();
  for (const auto &line :
       testing::ReadCorpus(testing::DataPath("coverage.txt"))) {
    TypedProgram once = Canonicalize(Typed(line), lib);
    TypedProgram twice = Canonicalize(once, lib);
    EXPECT_EQ(EmitNn(once.program), EmitNn(twice.program)) << line;
    EXPECT_TRUE(IsCanonical(once, lib)) << line;
  }
}

TEST(EquivalentTest, Variants) {
  const Library &lib = BundledLibrary();
  EXPECT_TRUE(Equivalent(
      Typed("now => @com.gmail.inbox() => @com.gmail.send(to = EMAIL_0, "
            "subject = subject, message = \"hi\")"),
      Typed("now => @com.gmail.inbox() => @com.gmail.send(message = \"hi\", "
            "to = EMAIL_0, subject = subject)"),
      lib));
  EXPECT_TRUE(Equivalent(
      Typed("now => @com.thecatapi.get() join @com.gmail.inbox() => notify"),
      Typed("now => @com.gmail.inbox() join @com.thecatapi.get() => notify"),
      lib));
  EXPECT_TRUE(Equivalent(
      Typed("now => @com.gmail.inbox() filter sender == \"a\" && "
            "(is_important == true || subject substr \"x\") => notify"),
      Typed("now => @com.gmail.inbox() filter (subject substr \"x\" || "
            "is_important == true) && sender == \"a\" => notify"),
      lib));
  EXPECT_FALSE(Equivalent(
      Typed("now => @com.gmail.inbox() filter sender == \"a\" => notify"),
      Typed("now => @com.gmail.inbox() filter sender == \"b\" => notify"),
      lib));
}

TEST(ShuffleTest, AblationKeepsShuffledOrder) {
  const Library &lib = BundledLibrary();
  TypedProgram p = Typed(
      "now => @com.gmail.inbox() => @com.gmail.send(message = \"hi\", subject "
      "= subject, to = EMAIL_0)");
  std::mt19937_64 rng(5);
  CanonicalOptions keep;
  keep.sort_bindings = false;
  bool changed = false;
  for (int i = 0; i < 20; ++i) {
    Program shuffled = ShuffleBindings(p.program, rng);
    EXPECT_EQ(shuffled, p.program);
    TypedProgram typed = Typecheck(shuffled, lib).value();
    EXPECT_EQ(EmitNn(Canonicalize(typed, lib, keep).program),
              EmitNn(typed.program));
    EXPECT_EQ(EmitNn(Canonicalize(typed, lib).program),
              EmitNn(Canonicalize(p, lib).program));
    changed |= EmitNn(shuffled) != EmitNn(p.program);
  }
  EXPECT_TRUE(changed);
}

}  // namespace
}  // namespace vapl
