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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "testing.h"
#include "vapl/library.h"
#include "vapl/parser.h"
#include "vapl/printer.h"
#include "vapl/types.h"
#include "vapl/units.h"
#include "vapl/value.h"

namespace vapl {
namespace {

constexpr char kDropboxClass[] = R"(
class @com.dropbox {
  monitorable query get_space_usage(out used_space : Measure(byte),
                                    out total_space : Measure(byte));
  monitorable list query list_folder(in req folder_name : PathName,
      in opt order_by : Enum(modified_time_decreasing, name_increasing),
      out file_name : PathName, out is_folder : Boolean,
      out modified_time : Date, out file_size : Measure(byte),
      out full_path : PathName);
  query open(in req file_name : PathName, out download_url : URL);
  action move(in req old_name : PathName, in req new_name : PathName);
}
)";

// Independent meters-per-unit table for the conversion oracle.
double MetersPer(const std::string &unit) {
  if (unit == "ft") return 12 * 0.0254;
  if (unit == "in") return 0.0254;
  if (unit == "km") return 1000;
  if (unit == "m") return 1;
  ADD_FAILURE() << unit;
  return 0;
}

std::vector<std::string> DiagnosticCodes(const std::vector<Diagnostic> &ds) {
  std::vector<std::string> codes;
  for (const auto &d : ds) codes.push_back(d.code);
  return codes;
}

TEST(TypeOfValueTest, Basics) {
  EXPECT_EQ(TypeOfValue(Value::String({"funny", "cat"})), TypeExpr::String());
  EXPECT_EQ(TypeOfValue(Value::Measure({{6, -1, "ft"}, {3, -1, "in"}})),
            TypeExpr::Measure("length"));
  EXPECT_EQ(TypeOfValue(Value::NamedConst(NamedConstKind::kNumber, 0)),
            TypeExpr::Number());
  EXPECT_EQ(TypeOfValue(Value::NamedConst(NamedConstKind::kDate, 1)),
            TypeExpr::Date());
  EXPECT_THROW(TypeOfValue(Value::Measure({{6, -1, "ft"}, {3, -1, "s"}})),
               ValueError);
  EXPECT_THROW(TypeOfValue(Value::Measure({})), ValueError);
}

TEST(ConvertMeasureTest, FeetAndInchesToMeters) {
  Value v = Value::Measure({{6, -1, "ft"}, {3, -1, "in"}});
  const double expected = 6 * MetersPer("ft") + 3 * MetersPer("in");
  Value m = ConvertMeasure(v, "m");
  ASSERT_EQ(m.terms().size(), 1u);
  EXPECT_EQ(m.terms()[0].unit, "m");
  EXPECT_NEAR(m.terms()[0].magnitude, expected, 1e-12);
  EXPECT_NEAR(m.terms()[0].magnitude, 1.905, 1e-12);
}

TEST(ConvertMeasureTest, ZeroAndMilliseconds) {
  EXPECT_EQ(ConvertMeasure(Value::Measure({{0, -1, "km"}}), "m").terms()[0]
                .magnitude,
            0);
  EXPECT_NEAR(ConvertMeasure(Value::Measure({{500, -1, "ms"}}), "s")
                  .terms()[0]
                  .magnitude,
              0.5, 1e-12);
}

TEST(ConvertMeasureTest, Errors) {
  EXPECT_THROW(ConvertMeasure(Value::Measure({{1, -1, "m"}}), "s"), ValueError);
  EXPECT_THROW(ConvertMeasure(Value::Measure({{1, -1, "m"}}), "parsec"),
               ValueError);
  EXPECT_THROW(ConvertMeasure(Value::Measure({{0, 0, "m"}}), "km"), ValueError);
}

TEST(ConvertMeasureTest, FahrenheitIsAffine) {
  EXPECT_NEAR(ConvertMeasure(Value::Measure({{212, -1, "F"}}), "C")
                  .terms()[0]
                  .magnitude,
              100, 1e-9);
  EXPECT_NEAR(ConvertMeasure(Value::Measure({{0, -1, "C"}}), "K")
                  .terms()[0]
                  .magnitude,
              273.15, 1e-9);
}

// convert(a ++ b) == convert(a) + convert(b) for linear unit classes.
TEST(ConvertMeasureTest, LinearityProperty) {
  const UnitTable &units = UnitTable::Default();
  std::mt19937_64 rng(17);
  for (const std::string cls :
       {"length", "byte", "duration", "speed", "weight"}) {
    std::vector<std::string> names = units.UnitsOf(cls);
    ASSERT_FALSE(names.empty());
    const std::string target = *units.BaseUnit(cls);
    std::uniform_int_distribution<size_t> pick(0, names.size() - 1);
    std::uniform_real_distribution<double> mag(0, 1000);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<MeasureTerm> a, b;
      for (int i = 0; i < 3; ++i) a.push_back({mag(rng), -1, names[pick(rng)]});
      for (int i = 0; i < 2; ++i) b.push_back({mag(rng), -1, names[pick(rng)]});
      std::vector<MeasureTerm> ab = a;
      ab.insert(ab.end(), b.begin(), b.end());
      const double whole =
          ConvertMeasure(Value::Measure(ab), target).terms()[0].magnitude;
      const double parts =
          ConvertMeasure(Value::Measure(a), target).terms()[0].magnitude +
          ConvertMeasure(Value::Measure(b), target).terms()[0].magnitude;
      EXPECT_NEAR(whole, parts, 1e-9 * std::max(1.0, std::fabs(whole)));
    }
  }
}

TEST(TypeExprTest, Invariants) {
  EXPECT_THROW(TypeExpr::Enum({}), ValueError);
  EXPECT_THROW(TypeExpr::Enum({"a", "a"}), ValueError);
  EXPECT_THROW(TypeExpr::Array(TypeExpr::Array(TypeExpr::String())),
               ValueError);
  EXPECT_EQ(ParseTypeText("Array(Entity(tt:hashtag))").ToString(),
            "Array(Entity(tt:hashtag))");
  EXPECT_TRUE(IsAssignable(TypeExpr::Enum({"a"}), TypeExpr::Enum({"a", "b"})));
  EXPECT_FALSE(IsAssignable(TypeExpr::Enum({"c"}), TypeExpr::Enum({"a", "b"})));
}

TEST(ValidateClassTest, DropboxHasFourFunctions) {
  ClassFile file = ParseClassFile(kDropboxClass);
  ASSERT_EQ(file.classes.size(), 1u);
  Library empty;
  auto fns = ValidateClass(file.classes[0], empty);
  ASSERT_TRUE(fns.ok()) << fns.diagnostics()[0].ToString();
  ASSERT_EQ(fns->size(), 4u);
  std::vector<std::string> names;
  for (const auto &f : *fns) names.push_back(f.function_name);
  EXPECT_EQ(names, (std::vector<std::string>{"get_space_usage", "list_folder",
                                             "move", "open"}));
  const FunctionSignature &list = (*fns)[1];
  EXPECT_TRUE(list.monitorable);
  EXPECT_TRUE(list.list);
  EXPECT_FALSE((*fns)[2].is_query());
}

TEST(ValidateClassTest, ActionWithOutputIsRejected) {
  ClassFile file = ParseClassFile(
      "class @a { action move(in req x : String, out y : String); }");
  auto fns = ValidateClass(file.classes[0], Library());
  ASSERT_FALSE(fns.ok());
  EXPECT_EQ(DiagnosticCodes(fns.diagnostics()),
            std::vector<std::string>{"action-output"});
}

TEST(ValidateClassTest, DuplicatesAndUnits) {
  auto dup = ValidateClass(
      ParseClassFile("class @a { query f(out x : String, out x : Number); }")
          .classes[0],
      Library());
  EXPECT_EQ(DiagnosticCodes(dup.diagnostics()),
            std::vector<std::string>{"duplicate-parameter"});
  auto dupf = ValidateClass(
      ParseClassFile("class @a { query f(); action f(); }").classes[0],
      Library());
  EXPECT_EQ(DiagnosticCodes(dupf.diagnostics()),
            std::vector<std::string>{"duplicate-function"});
  auto unit = ValidateClass(
      ParseClassFile("class @a { query f(out x : Measure(parsecs)); }")
          .classes[0],
      Library());
  EXPECT_EQ(DiagnosticCodes(unit.diagnostics()),
            std::vector<std::string>{"unknown-unit-class"});
}

TEST(LibraryTest, CyclicInheritance) {
  auto lib = LoadLibraryFromText(
      "class @a extends @b { query f(); } class @b extends @a { query g(); }");
  ASSERT_FALSE(lib.ok());
  bool cyclic = false;
  for (const auto &d : lib.diagnostics()) cyclic |= d.code == "cyclic-inheritance";
  EXPECT_TRUE(cyclic);
}

TEST(LibraryTest, ExtendsOrderDoesNotMatter) {
  const std::string parents =
      "class @p { query f(out x : String); } class @q { action g(); } ";
  auto ab = LoadLibraryFromText(parents + "class @c extends @p, @q { }");
  auto ba = LoadLibraryFromText(parents + "class @c extends @q, @p { }");
  ASSERT_TRUE(ab.ok());
  ASSERT_TRUE(ba.ok());
  const auto &x = ab->FunctionsOf("c");
  const auto &y = ba->FunctionsOf("c");
  ASSERT_EQ(x.size(), 2u);
  ASSERT_EQ(x.size(), y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    EXPECT_EQ(PrettySignature(x[i]), PrettySignature(y[i]));
  }
}

TEST(LibraryTest, InheritanceCollisionIsAnError) {
  auto lib = LoadLibraryFromText(
      "class @p { query f(); } class @q { query f(); } "
      "class @c extends @p, @q { }");
  ASSERT_FALSE(lib.ok());
  EXPECT_EQ(lib.diagnostics()[0].code, "duplicate-function");
}

TEST(LibraryTest, ResolveFunction) {
  const Library &lib = testing::BundledLibrary();
  auto open = lib.ResolveFunction({"com.dropbox", "open"});
  ASSERT_TRUE(open.ok());
  EXPECT_TRUE(open->is_query());
  ASSERT_EQ(open->params.size(), 2u);
  EXPECT_EQ(open->params[0].name, "file_name");
  EXPECT_TRUE(open->params[0].is_required());
  EXPECT_EQ(open->params[1].name, "download_url");
  EXPECT_EQ(open->params[1].type, TypeExpr::Url());

  auto inherited = lib.ResolveFunction({"com.nest.thermostat", "get_temperature"});
  ASSERT_TRUE(inherited.ok());
  EXPECT_EQ(inherited->class_name, "org.thingpedia.iot.thermostat");

  auto missing = lib.ResolveFunction({"com.nope", "f"});
  ASSERT_FALSE(missing.ok());
  EXPECT_EQ(missing.diagnostics()[0].code, "unknown-class");
  auto missing_fn = lib.ResolveFunction({"com.dropbox", "nope"});
  EXPECT_EQ(missing_fn.diagnostics()[0].code, "unknown-function");
}

}  // namespace
}  // namespace vapl
