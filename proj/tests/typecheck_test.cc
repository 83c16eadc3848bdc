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

#include <algorithm>

#include <gtest/gtest.h>

#include "testing.h"
#include "vapl/parser.h"
#include "vapl/printer.h"
#include "vapl/typecheck.h"

namespace vapl {
namespace {

using testing::BundledLibrary;

Checked<TypedProgram> Check(const std::string &text,
                            const Library &lib = BundledLibrary()) {
  return Typecheck(ParseProgram(text), lib);
}

std::string FirstCode(const Checked<TypedProgram> &r) {
  if (r.ok()) return "ok";
  return r.diagnostics().front().code;
}

TEST(TypecheckTest, CatPictureFlowsToFacebook) {
  auto r = Check(
      "now => @com.thecatapi.get() => @com.facebook.post_picture(picture_url "
      "= picture_url, caption = \"funny cat\")");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->invocation_count, 2);
  const Invocation &post = r->program.action.invocation;
  EXPECT_EQ(post.index, 1);
  const Binding *pic = post.FindBinding("picture_url");
  ASSERT_NE(pic, nullptr);
  EXPECT_EQ(pic->output_ref().source, 0);
  EXPECT_EQ(*pic->type, TypeExpr::Picture());
}

TEST(TypecheckTest, MonitorRequiresMonitorable) {
  EXPECT_EQ(FirstCode(Check("monitor @com.dropbox.open(file_name = \"/a\") => "
                            "notify")),
            "not-monitorable");
  EXPECT_EQ(FirstCode(Check("monitor @com.dropbox.get_space_usage() => notify")),
            "ok");
}

TEST(TypecheckTest, Aggregation) {
  auto sum = Check(
      "now => agg sum file_size of (@com.dropbox.list_folder()) => notify");
  ASSERT_TRUE(sum.ok());
  EXPECT_EQ(*sum->program.query->aggregate_type, TypeExpr::Measure("byte"));
  EXPECT_EQ(FirstCode(Check("now => agg sum used_space of "
                            "(@com.dropbox.get_space_usage()) => notify")),
            "aggregate-non-list");
  EXPECT_EQ(FirstCode(Check("now => agg count of "
                            "(@com.dropbox.get_space_usage()) => notify")),
            "aggregate-non-list");
  EXPECT_EQ(FirstCode(Check("now => agg max file_name of "
                            "(@com.dropbox.list_folder()) => notify")),
            "type-mismatch");
  EXPECT_EQ(FirstCode(Check("now => agg max nope of "
                            "(@com.dropbox.list_folder()) => notify")),
            "unbound-output");
  auto count = Check(
      "now => agg count of (@com.gmail.inbox()) => @com.twitter.post(status = "
      "\"x\")");
  EXPECT_TRUE(count.ok());
}

TEST(TypecheckTest, MissingRequiredInputsBecomeSlots) {
  auto r = Check("now => @com.dropbox.list_folder() => notify");
  ASSERT_TRUE(r.ok());
  const Binding *b = r->program.query->invocation.FindBinding("folder_name");
  ASSERT_NE(b, nullptr);
  EXPECT_TRUE(b->literal().is_slot());
  EXPECT_EQ(r->program.query->invocation.FindBinding("order_by"), nullptr);
}

TEST(TypecheckTest, Diagnostics) {
  EXPECT_EQ(FirstCode(Check("now => @com.twitter.post(status = \"a\", status "
                            "= \"b\")")),
            "duplicate-binding");
  EXPECT_EQ(FirstCode(Check("now => @com.twitter.post(stat = \"a\")")),
            "unknown-parameter");
  EXPECT_EQ(FirstCode(Check("now => @com.twitter.post(status = title)")),
            "unbound-output");
  EXPECT_EQ(FirstCode(Check("now => @com.nest.thermostat.set_target_"
                            "temperature(value = 6ft)")),
            "type-mismatch");
  EXPECT_EQ(FirstCode(Check("now => @com.twitter.post(status = 3)")),
            "type-mismatch");
  EXPECT_EQ(FirstCode(Check("now => @com.twitter.post(status = \"a\") => "
                            "notify")),
            "not-a-query");
  EXPECT_EQ(FirstCode(Check("now => @com.gmail.inbox() => @com.gmail.inbox()")),
            "not-an-action");
  EXPECT_EQ(FirstCode(Check("now => @com.nope.f() => notify")),
            "unknown-class");
  EXPECT_EQ(FirstCode(Check("now => @com.gmail.nope() => notify")),
            "unknown-function");
  EXPECT_EQ(FirstCode(Check("monitor @com.gmail.inbox() on new nope => "
                            "notify")),
            "unbound-output");
  EXPECT_EQ(FirstCode(Check("now => @com.gmail.inbox() filter sender > "
                            "\"a\" => notify")),
            "type-mismatch");
  EXPECT_EQ(FirstCode(Check("now => @com.gmail.inbox() filter labels == "
                            "\"a\" => notify")),
            "type-mismatch");
  EXPECT_EQ(FirstCode(Check("now => @com.gmail.inbox() filter sender "
                            "contains \"a\" => notify")),
            "type-mismatch");
  EXPECT_EQ(FirstCode(Check("now => @com.gmail.inbox() filter date substr "
                            "\"a\" => notify")),
            "type-mismatch");
  EXPECT_EQ(FirstCode(Check("now => @com.nest.thermostat.set_mode(mode = "
                            "enum:frozen)")),
            "type-mismatch");
  EXPECT_EQ(FirstCode(Check("now => @com.nest.thermostat.set_mode(mode = "
                            "frozen)")),
            "unbound-output");
}

TEST(TypecheckTest, EdgeOverTimerWarns) {
  auto r = Check(
      "edge (timer base = date:2026-01-01 interval = 1h) on true => notify");
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->warnings.size(), 1u);
  EXPECT_EQ(r->warnings[0].code, "edge-over-timer");
  EXPECT_EQ(r->warnings[0].severity, Severity::kWarning);
  EXPECT_EQ(FirstCode(Check("timer base = 1h interval = 1h => notify")),
            "type-mismatch");
}

TEST(TypecheckTest, GetPredicateUsesOwnOutputs) {
  EXPECT_EQ(FirstCode(Check("now => @com.nytimes.get_front_page() filter "
                            "@com.yandex.translate(text = \"a\") { "
                            "translated_text == \"b\" } => notify")),
            "ok");
  EXPECT_EQ(FirstCode(Check("now => @com.nytimes.get_front_page() filter "
                            "@com.yandex.translate(text = \"a\") { title == "
                            "\"b\" } => notify")),
            "unbound-output");
  EXPECT_EQ(FirstCode(Check("now => @com.nytimes.get_front_page() filter "
                            "@com.yandex.translate(text = title) { "
                            "translated_text == \"b\" } => notify")),
            "unbound-output");
}

TEST(TypecheckTest, EnumShorthandAndPlaceholders) {
  auto r = Check("now => @com.nest.thermostat.set_mode(mode = heat)");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->program.action.invocation.bindings[0].literal(),
            Value::Enum("heat"));

  ParseOptions popts;
  popts.placeholders.insert("p");
  Program p = ParseProgram("now => @com.twitter.post(status = p)", popts);
  EXPECT_EQ(Typecheck(p, BundledLibrary()).diagnostics().front().code,
            "unbound-placeholder");
  TypecheckOptions topts;
  topts.placeholder_types.emplace("p", TypeExpr::String());
  EXPECT_TRUE(Typecheck(p, BundledLibrary(), topts).ok());
  topts.placeholder_types["p"] = TypeExpr::Number();
  EXPECT_FALSE(Typecheck(p, BundledLibrary(), topts).ok());
}

TEST(TypecheckTest, JoinOnBindingTargetsRightOperand) {
  auto r = Check(
      "now => @com.nytimes.get_front_page() join @com.yandex.translate() on "
      "text = title => notify");
  ASSERT_TRUE(r.ok());
  const Query &q = *r->program.query;
  EXPECT_EQ(q.on[0].output_ref().source, 0);
  EXPECT_EQ(q.right->invocation.index, 1);
  EXPECT_EQ(q.right->invocation.FindBinding("text"), nullptr);
  EXPECT_EQ(FirstCode(Check("now => @com.nytimes.get_front_page() join "
                            "@com.yandex.translate() on nope = title => "
                            "notify")),
            "unknown-parameter");
  EXPECT_EQ(FirstCode(Check("now => @com.nytimes.get_front_page() join "
                            "@com.yandex.translate(text = \"a\") on text = "
                            "title => notify")),
            "duplicate-binding");
}

// Toy library: producers p0..p3 all emit `n`, q0..q3 emit only `m`.
const Library &ChainLibrary() {
  static const Library *lib = [] {
    std::string text = "class @t {\n";
    for (int i = 0; i < 4; ++i) {
      text += "  list query p" + std::to_string(i) +
              "(out n : String, out m : String);\n";
      text += "  list query q" + std::to_string(i) + "(out m : String);\n";
    }
    text += "  action consume(in req x : String);\n}\n";
    return new Library(LoadLibraryFromText(text).value());
  }();
  return *lib;
}

TEST(TypecheckTest, DuplicateOutputBindsToRightOperand) {
  auto r = Check(
      "now => @t.p0() join @t.p1() => @t.consume(x = n)", ChainLibrary());
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->program.action.invocation.bindings[0].output_ref().source, 1);
}

// For every chain of up to four invocations, each either producing `n` or
// not, the consumer binds to the last producer found by a linear scan.
TEST(TypecheckTest, RightmostRuleBruteForce) {
  for (int k = 1; k <= 4; ++k) {
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::string query;
      int expected = -1;
      for (int i = 0; i < k; ++i) {
        const bool produces = (mask >> i) & 1;
        if (produces) expected = i;
        const std::string inv =
            std::string("@t.") + (produces ? "p" : "q") + std::to_string(i) +
            "()";
        query = i == 0 ? inv : "(" + query + ") join " + inv;
      }
      auto r = Check("now => " + query + " => @t.consume(x = n)",
                     ChainLibrary());
      if (expected < 0) {
        EXPECT_EQ(FirstCode(r), "unbound-output") << query;
        continue;
      }
      ASSERT_TRUE(r.ok()) << query;
      EXPECT_EQ(r->program.action.invocation.bindings[0].output_ref().source,
                expected)
          << query;
    }
  }
}

TEST(TypecheckTest, BindingOrderDoesNotMatter) {
  const char *a =
      "now => @com.gmail.inbox() => @com.gmail.send(to = EMAIL_0, subject = "
      "subject, message = \"hi\")";
  const char *b =
      "now => @com.gmail.inbox() => @com.gmail.send(message = \"hi\", subject "
      "= subject, to = EMAIL_0)";
  auto ra = Check(a);
  auto rb = Check(b);
  ASSERT_TRUE(ra.ok());
  ASSERT_TRUE(rb.ok());
  EXPECT_EQ(ra->program, rb->program);
  for (const auto &binding : ra->program.action.invocation.bindings) {
    const Binding *other = rb->program.action.invocation.FindBinding(binding.name);
    ASSERT_NE(other, nullptr);
    EXPECT_EQ(*binding.type, *other->type);
  }
}

TEST(TypecheckTest, StringLikeOutputsPassIntoStrings) {
  EXPECT_EQ(FirstCode(Check("now => @com.nytimes.get_front_page() => "
                            "@com.twitter.post(status = link)")),
            "ok");
  EXPECT_EQ(FirstCode(Check("now => @com.gmail.inbox() => "
                            "@com.twitter.post(status = date)")),
            "type-mismatch");
}

TEST(TypecheckTest, CoverageCorpusTypechecks) {
  for (const auto &line :
       testing::ReadCorpus(testing::DataPath("coverage.txt"))) {
    auto r = Check(line);
    EXPECT_TRUE(r.ok()) << line << ": "
                        << (r.ok() ? "" : r.diagnostics()[0].ToString());
  }
}

TEST(QueryOutputsTest, Shapes) {
  const Library &lib = BundledLibrary();
  auto outs = QueryOutputs(*ParseQueryText("@com.nytimes.get_front_page() "
                                           "join @com.yandex.translate()"),
                           lib);
  ASSERT_EQ(outs.size(), 5u);
  EXPECT_EQ(outs.back().name, "translated_text");
  EXPECT_EQ(outs.back().source, 1);
  auto agg = QueryOutputs(
      *ParseQueryText("agg count of (@com.gmail.inbox())"), lib);
  ASSERT_EQ(agg.size(), 1u);
  EXPECT_EQ(agg[0].name, "count");
  EXPECT_TRUE(IsListQuery(*ParseQueryText("@com.gmail.inbox()"), lib));
  EXPECT_FALSE(IsListQuery(*ParseQueryText("agg count of (@com.gmail.inbox())"),
                           lib));
  EXPECT_FALSE(IsMonitorableQuery(*ParseQueryText("@com.dropbox.open()"), lib));
}

}  // namespace
}  // namespace vapl
