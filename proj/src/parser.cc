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

#include "vapl/parser.h"

#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

namespace vapl {

namespace {

constexpr std::array<std::string_view, 4> kValueTags = {"enum", "date", "time",
                                                        "location"};

std::vector<std::string> LowercaseWords(std::string_view text) {
  std::vector<std::string> words;
  std::string cur;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) words.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

// NUMBER_0F -> (0, "F"): a named-constant magnitude with an attached unit.
std::optional<std::pair<int, std::string>> SplitConstMeasure(
    std::string_view ident) {
  constexpr std::string_view kPrefix = "NUMBER_";
  if (ident.substr(0, kPrefix.size()) != kPrefix) return std::nullopt;
  size_t i = kPrefix.size();
  size_t digits = i;
  while (digits < ident.size() &&
         std::isdigit(static_cast<unsigned char>(ident[digits]))) {
    ++digits;
  }
  if (digits == i || digits == ident.size()) return std::nullopt;
  if (!std::isalpha(static_cast<unsigned char>(ident[digits]))) {
    return std::nullopt;
  }
  return std::make_pair(std::stoi(std::string(ident.substr(i, digits - i))),
                        std::string(ident.substr(digits)));
}

bool IsTagContinuation(const Token &t) {
  if (t.space_before) return false;
  if (t.kind == TokenKind::kIdent || t.kind == TokenKind::kNumber) return true;
  return t.IsPunct(":") || t.IsPunct(".") || t.IsPunct("/") || t.IsPunct("-");
}

}  // namespace

ProgramParser::ProgramParser(const std::vector<Token> *tokens, size_t pos,
                             ParseOptions options)
    : tokens_(tokens), pos_(pos), options_(std::move(options)) {}

const Token &ProgramParser::Peek(size_t k) const {
  size_t i = std::min(pos_ + k, tokens_->size() - 1);
  return (*tokens_)[i];
}

const Token &ProgramParser::Next() {
  const Token &t = Peek();
  if (t.kind != TokenKind::kEnd) ++pos_;
  return t;
}

bool ProgramParser::AcceptPunct(std::string_view p) {
  if (!Peek().IsPunct(p)) return false;
  Next();
  return true;
}

bool ProgramParser::AcceptIdent(std::string_view id) {
  if (!Peek().IsIdent(id)) return false;
  Next();
  return true;
}

void ProgramParser::ExpectPunct(std::string_view p) {
  if (!AcceptPunct(p)) {
    Fail("expected '" + std::string(p) + "' but found " + Peek().Describe());
  }
}

void ProgramParser::ExpectIdent(std::string_view id) {
  if (!AcceptIdent(id)) {
    Fail("expected '" + std::string(id) + "' but found " + Peek().Describe());
  }
}

std::string ProgramParser::ExpectName() {
  if (Peek().kind != TokenKind::kIdent) {
    Fail("expected a name but found " + Peek().Describe());
  }
  return Next().text;
}

void ProgramParser::Fail(const std::string &message) const {
  throw SyntaxError(message, Peek().span);
}

Program ProgramParser::ParseProgram() {
  Program program;
  program.stream = ParseStream();
  ExpectPunct("=>");
  if (AcceptIdent("notify")) {
    program.action = Action::Notify();
  } else {
    if (Peek().kind == TokenKind::kEnd) Fail("expected a query or an action");
    QueryPtr q = ParseQuery();
    if (AcceptPunct("=>")) {
      program.query = std::move(q);
      program.action = ParseAction();
    } else if (q->kind == QueryKind::kInvocation) {
      program.action = Action::Invoke(q->invocation);
    } else {
      Fail("expected '=>' after the query");
    }
  }
  AcceptPunct(";");
  return program;
}

bool ProgramParser::StartsStream() const {
  const Token &t = Peek();
  return t.IsIdent("now") || t.IsIdent("attimer") || t.IsIdent("timer") ||
         t.IsIdent("monitor") || t.IsIdent("edge");
}

StreamPtr ProgramParser::ParseStream() {
  if (AcceptIdent("now")) return Stream::Now();
  if (AcceptIdent("attimer")) {
    ExpectIdent("time");
    ExpectPunct("=");
    return Stream::AtTimer(ParseValue());
  }
  if (AcceptIdent("timer")) {
    ExpectIdent("base");
    ExpectPunct("=");
    Value base = ParseValue();
    AcceptPunct(",");
    ExpectIdent("interval");
    ExpectPunct("=");
    return Stream::Timer(std::move(base), ParseValue());
  }
  if (AcceptIdent("monitor")) {
    QueryPtr q = ParseQuery();
    std::vector<std::string> on_new;
    if (Peek().IsIdent("on") && Peek(1).IsIdent("new")) {
      Next();
      Next();
      do {
        on_new.push_back(ExpectName());
      } while (AcceptPunct(","));
    }
    return Stream::Monitor(std::move(q), std::move(on_new));
  }
  if (AcceptIdent("edge")) {
    StreamPtr inner = ParseStream();
    ExpectIdent("on");
    return Stream::Edge(std::move(inner), ParsePredicate());
  }
  if (Peek().IsPunct("(")) {
    size_t save = pos_;
    Next();
    if (StartsStream() || Peek().IsPunct("(")) {
      StreamPtr s = ParseStream();
      ExpectPunct(")");
      return s;
    }
    pos_ = save;
  }
  Fail("expected a stream (now, attimer, timer, monitor or edge) but found " +
       Peek().Describe());
}

QueryPtr ProgramParser::ParseQuery() {
  QueryPtr q = ParseQueryPrimary();
  for (;;) {
    if (AcceptIdent("filter")) {
      q = Query::Filter(std::move(q), ParsePredicate());
    } else if (AcceptIdent("join")) {
      QueryPtr right = ParseQueryPrimary();
      std::vector<Binding> on;
      if (Peek().IsIdent("on") && !Peek(1).IsIdent("new")) {
        Next();
        on = ParseOnBindings();
      }
      q = Query::Join(std::move(q), std::move(right), std::move(on));
    } else {
      return q;
    }
  }
}

QueryPtr ProgramParser::ParseQueryPrimary() {
  if (AcceptPunct("(")) {
    QueryPtr q = ParseQuery();
    ExpectPunct(")");
    return q;
  }
  if (AcceptIdent("agg")) {
    const Token &op_token = Peek();
    auto op = op_token.kind == TokenKind::kIdent
                  ? ParseAggregateOp(op_token.text)
                  : std::nullopt;
    if (!op) Fail("expected an aggregation operator but found " +
                  op_token.Describe());
    Next();
    std::string param;
    if (*op != AggregateOp::kCount) param = ExpectName();
    ExpectIdent("of");
    return Query::Aggregate(*op, std::move(param), ParseQueryPrimary());
  }
  if (Peek().kind == TokenKind::kFunction) {
    return Query::Invoke(ParseInvocation());
  }
  Fail("expected a query but found " + Peek().Describe());
}

Action ProgramParser::ParseAction() {
  if (AcceptIdent("notify")) return Action::Notify();
  if (Peek().kind == TokenKind::kFunction) {
    return Action::Invoke(ParseInvocation());
  }
  Fail("expected 'notify' or an action invocation but found " +
       Peek().Describe());
}

Invocation ProgramParser::ParseInvocation() {
  const Token &t = Peek();
  if (t.kind != TokenKind::kFunction) {
    Fail("expected a function but found " + t.Describe());
  }
  auto ref = FunctionRef::FromToken("@" + t.text);
  if (!ref) Fail("malformed function name '@" + t.text + "'");
  Next();
  Invocation inv;
  inv.function = *ref;
  ExpectPunct("(");
  inv.bindings = ParseBindings();
  ExpectPunct(")");
  return inv;
}

std::vector<Binding> ProgramParser::ParseBindings() {
  std::vector<Binding> out;
  if (Peek().IsPunct(")")) return out;
  do {
    Binding b;
    b.name = ExpectName();
    ExpectPunct("=");
    const Token &t = Peek();
    if (t.kind == TokenKind::kIdent && !t.IsIdent("true") &&
        !t.IsIdent("false") && !ParseNamedConstToken(t.text) &&
        !SplitConstMeasure(t.text) &&
        !(Peek(1).IsPunct(":") && !Peek(1).space_before)) {
      if (options_.placeholders.count(t.text)) {
        b.value = Value::Placeholder(t.text);
      } else {
        b.value = OutputRef{t.text, -1};
      }
      Next();
    } else {
      b.value = ParseValue();
    }
    out.push_back(std::move(b));
  } while (AcceptPunct(","));
  return out;
}

std::vector<Binding> ProgramParser::ParseOnBindings() {
  std::vector<Binding> out;
  do {
    Binding b;
    b.name = ExpectName();
    ExpectPunct("=");
    if (Peek().kind == TokenKind::kIdent &&
        options_.placeholders.count(Peek().text)) {
      b.value = Value::Placeholder(Next().text);
    } else {
      b.value = OutputRef{ExpectName(), -1};
    }
    out.push_back(std::move(b));
  } while (AcceptPunct(",") ||
           (Peek().kind == TokenKind::kIdent && Peek(1).IsPunct("=") &&
            !Peek(1).IsPunct("==")));
  return out;
}

PredicatePtr ProgramParser::ParsePredicate() { return ParseOr(); }

PredicatePtr ProgramParser::ParseOr() {
  PredicatePtr p = ParseAnd();
  while (AcceptPunct("||")) p = Predicate::Or(std::move(p), ParseAnd());
  return p;
}

PredicatePtr ProgramParser::ParseAnd() {
  PredicatePtr p = ParseUnary();
  while (AcceptPunct("&&")) p = Predicate::And(std::move(p), ParseUnary());
  return p;
}

PredicatePtr ProgramParser::ParseUnary() {
  if (AcceptPunct("!")) return Predicate::Not(ParseUnary());
  if (AcceptPunct("(")) {
    PredicatePtr p = ParseOr();
    ExpectPunct(")");
    return p;
  }
  if (AcceptIdent("true")) return Predicate::True();
  if (AcceptIdent("false")) return Predicate::False();
  if (Peek().kind == TokenKind::kFunction) {
    Invocation inv = ParseInvocation();
    ExpectPunct("{");
    PredicatePtr inner = ParseOr();
    ExpectPunct("}");
    return Predicate::Get(std::move(inv), std::move(inner));
  }
  std::string param = ExpectName();
  const Token &op_token = Peek();
  std::optional<Operator> op;
  if (op_token.IsPunct("=")) {
    op = Operator::kEquals;
  } else if (op_token.kind == TokenKind::kPunct ||
             op_token.kind == TokenKind::kIdent) {
    op = ParseOperator(op_token.text);
  }
  if (!op) Fail("expected an operator but found " + op_token.Describe());
  Next();
  return Predicate::Atom(std::move(param), *op, ParseValue());
}

Value ProgramParser::ParseMeasureRest(MeasureTerm first) {
  std::vector<MeasureTerm> terms{std::move(first)};
  while (AcceptPunct("+")) {
    const Token &t = Peek();
    if (t.kind == TokenKind::kNumber && !t.suffix.empty()) {
      auto magnitude = ParseNumber(t.text);
      if (!magnitude) Fail("malformed number " + t.Describe());
      terms.push_back(MeasureTerm{*magnitude, -1, t.suffix});
    } else if (t.kind == TokenKind::kIdent && SplitConstMeasure(t.text)) {
      auto [index, unit] = *SplitConstMeasure(t.text);
      terms.push_back(MeasureTerm{0, index, unit});
    } else {
      Fail("expected a measure term after '+' but found " + t.Describe());
    }
    Next();
  }
  return Value::Measure(std::move(terms));
}

Value ProgramParser::ParseValue() {
  const Token &t = Peek();
  switch (t.kind) {
    case TokenKind::kString: {
      std::vector<std::string> words = LowercaseWords(t.text);
      Next();
      if (!AcceptPunct("^^")) return Value::String(std::move(words));
      std::string type = ExpectName();
      while (Peek().IsPunct(":") || Peek().IsPunct(".")) {
        type += Next().text;
        type += ExpectName();
      }
      return Value::Entity(std::move(type), std::move(words));
    }
    case TokenKind::kNumber: {
      auto magnitude = ParseNumber(t.text);
      if (!magnitude) Fail("malformed number " + t.Describe());
      std::string unit = t.suffix;
      Next();
      if (unit.empty()) return Value::Number(*magnitude);
      return ParseMeasureRest(MeasureTerm{*magnitude, -1, unit});
    }
    case TokenKind::kDollar: {
      std::string name = t.text;
      Next();
      if (name == "?") return Value::Slot();
      return Value::Placeholder(std::move(name));
    }
    case TokenKind::kIdent: {
      std::string text = t.text;
      if (text == "true" || text == "false") {
        Next();
        return Value::Boolean(text == "true");
      }
      bool tag = false;
      for (auto tg : kValueTags) tag = tag || text == tg;
      if (tag && Peek(1).IsPunct(":") && !Peek(1).space_before) {
        Next();
        Next();
        std::string body;
        while (IsTagContinuation(Peek())) {
          body += Peek().text + Peek().suffix;
          Next();
        }
        if (body.empty()) Fail("expected a value after '" + text + ":'");
        if (text == "enum") return Value::Enum(std::move(body));
        if (text == "date") return Value::Date(std::move(body));
        if (text == "time") return Value::Time(std::move(body));
        return Value::Location(std::move(body));
      }
      if (auto named = ParseNamedConstToken(text)) {
        Next();
        return Value::NamedConst(named->first, named->second);
      }
      if (auto measure = SplitConstMeasure(text)) {
        Next();
        return ParseMeasureRest(
            MeasureTerm{0, measure->first, std::move(measure->second)});
      }
      Next();
      if (options_.placeholders.count(text)) return Value::Placeholder(text);
      return Value::Enum(std::move(text));
    }
    default:
      break;
  }
  Fail("expected a value but found " + t.Describe());
}

Program ParseProgram(std::string_view text, const ParseOptions &options) {
  std::vector<Token> tokens = Lex(text);
  ProgramParser parser(&tokens, 0, options);
  Program p = parser.ParseProgram();
  if (!parser.AtEnd()) {
    parser.Fail("unexpected " + parser.Peek().Describe() +
                " after the program");
  }
  return p;
}

QueryPtr ParseQueryText(std::string_view text, const ParseOptions &options) {
  std::vector<Token> tokens = Lex(text);
  ProgramParser parser(&tokens, 0, options);
  QueryPtr q = parser.ParseQuery();
  if (!parser.AtEnd()) parser.Fail("unexpected " + parser.Peek().Describe());
  return q;
}

PredicatePtr ParsePredicateText(std::string_view text,
                                const ParseOptions &options) {
  std::vector<Token> tokens = Lex(text);
  ProgramParser parser(&tokens, 0, options);
  PredicatePtr p = parser.ParsePredicate();
  if (!parser.AtEnd()) parser.Fail("unexpected " + parser.Peek().Describe());
  return p;
}

Value ParseValueText(std::string_view text) {
  std::vector<Token> tokens = Lex(text);
  ProgramParser parser(&tokens, 0);
  Value v = parser.ParseValue();
  if (!parser.AtEnd()) parser.Fail("unexpected " + parser.Peek().Describe());
  return v;
}

TypeExpr ParseType(ProgramParser &p) {
  const Token &start = p.Peek();
  std::string name = p.ExpectName();
  auto simple = [&]() -> std::optional<TypeExpr> {
    if (name == "String") return TypeExpr::String();
    if (name == "Number") return TypeExpr::Number();
    if (name == "Boolean") return TypeExpr::Boolean();
    if (name == "Date") return TypeExpr::Date();
    if (name == "Time") return TypeExpr::Time();
    if (name == "Location") return TypeExpr::Location();
    if (name == "Picture") return TypeExpr::Picture();
    if (name == "URL") return TypeExpr::Url();
    if (name == "PathName") return TypeExpr::PathName();
    if (name == "Currency") return TypeExpr::Currency();
    return std::nullopt;
  }();
  if (simple) return *simple;
  try {
    if (name == "Enum") {
      p.ExpectPunct("(");
      std::vector<std::string> values;
      do {
        values.push_back(p.ExpectName());
      } while (p.AcceptPunct(","));
      p.ExpectPunct(")");
      return TypeExpr::Enum(std::move(values));
    }
    if (name == "Measure") {
      p.ExpectPunct("(");
      std::string unit_class = p.ExpectName();
      p.ExpectPunct(")");
      return TypeExpr::Measure(std::move(unit_class));
    }
    if (name == "Entity") {
      p.ExpectPunct("(");
      std::string type = p.ExpectName();
      while (p.Peek().IsPunct(":") || p.Peek().IsPunct(".")) {
        type += p.Next().text;
        type += p.ExpectName();
      }
      p.ExpectPunct(")");
      return TypeExpr::Entity(std::move(type));
    }
    if (name == "Array") {
      p.ExpectPunct("(");
      TypeExpr element = ParseType(p);
      p.ExpectPunct(")");
      return TypeExpr::Array(element);
    }
  } catch (const ValueError &e) {
    throw SyntaxError(e.what(), start.span);
  }
  throw SyntaxError("unknown type '" + name + "'", start.span);
}

namespace {

ParamDecl ParseParamDecl(ProgramParser &p) {
  ParamDecl decl;
  if (p.AcceptIdent("in")) {
    if (p.AcceptIdent("req")) {
      decl.direction = ParamDirection::kInRequired;
    } else if (p.AcceptIdent("opt")) {
      decl.direction = ParamDirection::kInOptional;
    } else {
      p.Fail("expected 'req' or 'opt' after 'in' but found " +
             p.Peek().Describe());
    }
  } else if (p.AcceptIdent("out")) {
    decl.direction = ParamDirection::kOut;
  } else {
    p.Fail("expected 'in req', 'in opt' or 'out' but found " +
           p.Peek().Describe());
  }
  decl.name = p.ExpectName();
  p.ExpectPunct(":");
  decl.type = ParseType(p);
  if (p.AcceptIdent("examples")) {
    p.ExpectPunct("[");
    if (!p.Peek().IsPunct("]")) {
      do {
        decl.example_values.push_back(p.ParseValue());
      } while (p.AcceptPunct(","));
    }
    p.ExpectPunct("]");
  }
  return decl;
}

FunctionSignature ParseFunctionDecl(ProgramParser &p,
                                    const std::string &class_name) {
  FunctionSignature fn;
  fn.span = p.Peek().span;
  fn.class_name = class_name;
  fn.monitorable = p.AcceptIdent("monitorable");
  fn.list = p.AcceptIdent("list");
  if (p.AcceptIdent("query")) {
    fn.kind = FunctionKind::kQuery;
  } else if (p.Peek().IsIdent("action")) {
    if (fn.monitorable || fn.list) {
      p.Fail("'monitorable' and 'list' apply only to queries");
    }
    p.Next();
    fn.kind = FunctionKind::kAction;
  } else {
    p.Fail("expected 'query' or 'action' but found " + p.Peek().Describe());
  }
  fn.function_name = p.ExpectName();
  p.ExpectPunct("(");
  if (!p.Peek().IsPunct(")")) {
    do {
      fn.params.push_back(ParseParamDecl(p));
    } while (p.AcceptPunct(","));
  }
  p.ExpectPunct(")");
  p.ExpectPunct(";");
  return fn;
}

std::string ExpectClassName(ProgramParser &p) {
  if (p.Peek().kind != TokenKind::kFunction) {
    p.Fail("expected a class name '@...' but found " + p.Peek().Describe());
  }
  return p.Next().text;
}

}  // namespace

TypeExpr ParseTypeText(std::string_view text) {
  std::vector<Token> tokens = Lex(text);
  ProgramParser parser(&tokens, 0);
  TypeExpr t = ParseType(parser);
  if (!parser.AtEnd()) parser.Fail("unexpected " + parser.Peek().Describe());
  return t;
}

ClassFile ParseClassFile(std::string_view text) {
  std::vector<Token> tokens = Lex(text);
  ProgramParser p(&tokens, 0);
  ClassFile out;
  std::string description;
  while (!p.AtEnd()) {
    if (p.AcceptPunct("#")) {
      p.ExpectPunct("[");
      std::string key = p.ExpectName();
      p.ExpectPunct("=");
      if (p.Peek().kind != TokenKind::kString) {
        p.Fail("expected a string but found " + p.Peek().Describe());
      }
      std::string value = p.Next().text;
      p.ExpectPunct("]");
      if (key == "description") description = std::move(value);
      continue;
    }
    if (p.AcceptIdent("unit")) {
      UnitInfo unit;
      unit.name = p.ExpectName();
      p.ExpectPunct(":");
      unit.unit_class = p.ExpectName();
      p.ExpectPunct("=");
      auto number = [&]() {
        const Token &t = p.Peek();
        auto v = t.kind == TokenKind::kNumber && t.suffix.empty()
                     ? ParseNumber(t.text)
                     : std::nullopt;
        if (!v) p.Fail("expected a number but found " + t.Describe());
        p.Next();
        return *v;
      };
      unit.scale = number();
      if (p.AcceptPunct("+")) unit.offset = number();
      if (unit.scale == 0) p.Fail("unit scale must be non-zero");
      p.ExpectPunct(";");
      out.units.push_back(std::move(unit));
      continue;
    }
    ClassDef cls;
    cls.span = p.Peek().span;
    p.ExpectIdent("class");
    cls.name = ExpectClassName(p);
    cls.description = std::move(description);
    description.clear();
    while (p.AcceptIdent("extends")) {
      do {
        cls.extends.push_back(ExpectClassName(p));
      } while (p.AcceptPunct(","));
    }
    p.ExpectPunct("{");
    while (!p.AcceptPunct("}")) {
      if (p.AtEnd()) p.Fail("unterminated class @" + cls.name);
      cls.functions.push_back(ParseFunctionDecl(p, cls.name));
    }
    out.classes.push_back(std::move(cls));
  }
  return out;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

namespace {

Checked<Library> BuildFrom(std::vector<ClassFile> files) {
  UnitTable units = UnitTable::Default();
  std::vector<ClassDef> classes;
  for (auto &f : files) {
    for (auto &u : f.units) units.Add(std::move(u));
    for (auto &c : f.classes) classes.push_back(std::move(c));
  }
  return Library::Build(std::move(classes), units);
}

}  // namespace

Checked<Library> LoadLibrary(const std::vector<std::string> &paths) {
  std::vector<ClassFile> files;
  for (const auto &path : paths) {
    try {
      files.push_back(ParseClassFile(ReadFile(path)));
    } catch (const SyntaxError &e) {
      throw SyntaxError(e.bare_message() + " in " + path, e.span());
    }
  }
  return BuildFrom(std::move(files));
}

Checked<Library> LoadLibraryFromText(std::string_view text) {
  std::vector<ClassFile> files;
  files.push_back(ParseClassFile(text));
  return BuildFrom(std::move(files));
}

}  // namespace vapl
