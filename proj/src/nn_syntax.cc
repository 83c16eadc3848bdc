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

#include "vapl/nn_syntax.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "vapl/parser.h"

namespace vapl {

namespace {

constexpr std::string_view kParamPrefix = "param:";
constexpr std::string_view kUnitPrefix = "unit:";
constexpr std::string_view kEntitySuffix = "\"^^";

bool StartsWith(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

class Emitter {
 public:
  explicit Emitter(const EmitOptions &options) : options_(options) {}

  std::vector<std::string> out;

  void Param(const std::string &name, const std::optional<TypeExpr> &type) {
    std::string tok = std::string(kParamPrefix) + name;
    if (options_.type_annotations && type) tok += ":" + type->ToString();
    out.push_back(std::move(tok));
  }

  void Value(const vapl::Value &v) {
    switch (v.kind()) {
      case ValueKind::kString:
      case ValueKind::kEntity:
        out.push_back("\"");
        for (const auto &w : v.words()) out.push_back(w);
        out.push_back(v.kind() == ValueKind::kString
                          ? std::string("\"")
                          : std::string(kEntitySuffix) + v.entity_type());
        return;
      case ValueKind::kNumber: out.push_back(FormatNumber(v.number())); return;
      case ValueKind::kBoolean:
        out.push_back(v.boolean() ? "true" : "false");
        return;
      case ValueKind::kEnum: out.push_back("enum:" + v.text()); return;
      case ValueKind::kDate: out.push_back("date:" + v.text()); return;
      case ValueKind::kTime: out.push_back("time:" + v.text()); return;
      case ValueKind::kLocation: out.push_back("location:" + v.text()); return;
      case ValueKind::kNamedConst:
        out.push_back(NamedConstToken(v.named_kind(), v.named_index()));
        return;
      case ValueKind::kSlot: out.push_back("$?"); return;
      case ValueKind::kPlaceholder: out.push_back("$" + v.text()); return;
      case ValueKind::kMeasure: {
        bool first = true;
        for (const auto &t : v.terms()) {
          if (!first) out.push_back("+");
          first = false;
          out.push_back(t.is_constant()
                            ? NamedConstToken(NamedConstKind::kNumber,
                                              t.constant)
                            : FormatNumber(t.magnitude));
          out.push_back(std::string(kUnitPrefix) + t.unit);
        }
        return;
      }
    }
  }

  void Binding(const vapl::Binding &b) {
    Param(b.name, b.type);
    out.push_back("=");
    if (b.is_output_ref()) {
      Param(b.output_ref().name, b.type);
    } else {
      Value(b.literal());
    }
  }

  void Invocation(const vapl::Invocation &inv) {
    out.push_back(inv.function.Token());
    for (const auto &b : inv.bindings) Binding(b);
  }

  void Predicate(const vapl::Predicate &p) {
    switch (p.kind) {
      case PredicateKind::kTrue: out.push_back("true"); return;
      case PredicateKind::kFalse: out.push_back("false"); return;
      case PredicateKind::kAtom:
        Param(p.param, p.param_type);
        out.push_back(std::string(OperatorToken(p.op)));
        Value(p.value);
        return;
      case PredicateKind::kGet:
        Invocation(p.invocation);
        out.push_back("{");
        Predicate(*p.inner());
        out.push_back("}");
        return;
      case PredicateKind::kNot: {
        out.push_back("!");
        const auto &in = *p.inner();
        const bool wrap =
            in.kind == PredicateKind::kAnd || in.kind == PredicateKind::kOr;
        if (wrap) out.push_back("(");
        Predicate(in);
        if (wrap) out.push_back(")");
        return;
      }
      case PredicateKind::kAnd:
      case PredicateKind::kOr: {
        const bool is_and = p.kind == PredicateKind::kAnd;
        const auto &l = *p.operands[0];
        const auto &r = *p.operands[1];
        const bool wrap_l = is_and && l.kind == PredicateKind::kOr;
        const bool wrap_r =
            r.kind == PredicateKind::kOr || r.kind == PredicateKind::kAnd;
        if (wrap_l) out.push_back("(");
        Predicate(l);
        if (wrap_l) out.push_back(")");
        out.push_back(is_and ? "&&" : "||");
        if (wrap_r) out.push_back("(");
        Predicate(r);
        if (wrap_r) out.push_back(")");
        return;
      }
    }
  }

  void Wrapped(const vapl::Query &q) {
    out.push_back("(");
    Query(q);
    out.push_back(")");
  }

  void Query(const vapl::Query &q) {
    switch (q.kind) {
      case QueryKind::kInvocation: Invocation(q.invocation); return;
      case QueryKind::kFilter:
        if (q.inner->kind == QueryKind::kInvocation) {
          Invocation(q.inner->invocation);
        } else {
          Wrapped(*q.inner);
        }
        out.push_back("filter");
        Predicate(*q.predicate);
        return;
      case QueryKind::kJoin:
        Wrapped(*q.left());
        out.push_back("join");
        Wrapped(*q.right);
        if (!q.on.empty()) {
          out.push_back("on");
          for (const auto &b : q.on) Binding(b);
        }
        return;
      case QueryKind::kAggregate:
        out.push_back("agg");
        out.push_back(std::string(AggregateOpName(q.aggregate)));
        if (!q.aggregate_param.empty()) {
          Param(q.aggregate_param, q.aggregate_type);
        }
        out.push_back("of");
        Wrapped(*q.inner);
        return;
    }
  }

  void Stream(const vapl::Stream &s) {
    switch (s.kind) {
      case StreamKind::kNow: out.push_back("now"); return;
      case StreamKind::kAtTimer:
        out.insert(out.end(), {"attimer", "time", "="});
        Value(s.time);
        return;
      case StreamKind::kTimer:
        out.insert(out.end(), {"timer", "base", "="});
        Value(s.base);
        out.insert(out.end(), {"interval", "="});
        Value(s.interval);
        return;
      case StreamKind::kMonitor:
        out.push_back("monitor");
        Wrapped(*s.query);
        if (!s.on_new.empty()) {
          out.insert(out.end(), {"on", "new"});
          for (size_t i = 0; i < s.on_new.size(); ++i) {
            std::optional<TypeExpr> type;
            if (i < s.on_new_types.size()) type = s.on_new_types[i];
            Param(s.on_new[i], type);
          }
        }
        return;
      case StreamKind::kEdge:
        out.insert(out.end(), {"edge", "("});
        Stream(*s.inner);
        out.insert(out.end(), {")", "on"});
        Predicate(*s.predicate);
        return;
    }
  }

 private:
  const EmitOptions &options_;
};

class NnParser {
 public:
  NnParser(const std::vector<std::string> &tokens, const Library &library)
      : tokens_(tokens), library_(library) {}

  Program Parse() {
    if (tokens_.empty()) Fail("empty program");
    Program p;
    p.stream = ParseStream();
    Expect("=>");
    if (Accept("notify")) {
      p.action = Action::Notify();
    } else {
      QueryPtr q = ParseQuery();
      if (Accept("=>")) {
        p.query = std::move(q);
        if (Accept("notify")) {
          p.action = Action::Notify();
        } else {
          p.action = Action::Invoke(ParseInvocation());
        }
      } else if (q->kind == QueryKind::kInvocation) {
        p.action = Action::Invoke(q->invocation);
      } else {
        Fail("expected '=>'");
      }
    }
    if (pos_ != tokens_.size()) Fail("unexpected token '" + Peek() + "'");
    return p;
  }

 private:
  const std::string &Peek(size_t k = 0) const {
    static const std::string kEnd;
    return pos_ + k < tokens_.size() ? tokens_[pos_ + k] : kEnd;
  }
  const std::string &Next() {
    const std::string &t = Peek();
    if (pos_ < tokens_.size()) ++pos_;
    return t;
  }
  bool Accept(std::string_view t) {
    if (pos_ >= tokens_.size() || Peek() != t) return false;
    ++pos_;
    return true;
  }
  void Expect(std::string_view t) {
    if (!Accept(t)) {
      Fail("expected '" + std::string(t) + "' but found " + Describe());
    }
  }
  std::string Describe() const {
    return pos_ < tokens_.size() ? "'" + Peek() + "'" : "end of input";
  }
  [[noreturn]] void Fail(const std::string &message) const {
    throw SyntaxError(message, Span{1, static_cast<int>(pos_) + 1});
  }

  // param:name[:Type] -> name
  std::string ParamName(bool must_exist = true) {
    const std::string &t = Peek();
    if (!StartsWith(t, kParamPrefix)) {
      Fail("expected a parameter but found " + Describe());
    }
    std::string_view rest = std::string_view(t).substr(kParamPrefix.size());
    auto colon = rest.find(':');
    std::string name(rest.substr(0, colon));
    if (name.empty()) Fail("empty parameter name");
    if (colon != std::string_view::npos) {
      try {
        ParseTypeText(rest.substr(colon + 1));
      } catch (const SyntaxError &) {
        Fail("malformed type annotation in '" + t + "'");
      }
    }
    if (must_exist && !library_.HasParameterName(name)) {
      Fail("unknown parameter '" + name + "'");
    }
    Next();
    return name;
  }

  bool AtBinding() const {
    return StartsWith(Peek(), kParamPrefix) && Peek(1) == "=";
  }

  StreamPtr ParseStream() {
    if (Accept("now")) return Stream::Now();
    if (Accept("attimer")) {
      Expect("time");
      Expect("=");
      return Stream::AtTimer(ParseValue());
    }
    if (Accept("timer")) {
      Expect("base");
      Expect("=");
      vapl::Value base = ParseValue();
      Expect("interval");
      Expect("=");
      return Stream::Timer(std::move(base), ParseValue());
    }
    if (Accept("monitor")) {
      QueryPtr q = ParseAtom();
      std::vector<std::string> on_new;
      if (Peek() == "on" && Peek(1) == "new") {
        pos_ += 2;
        while (StartsWith(Peek(), kParamPrefix)) on_new.push_back(ParamName());
        if (on_new.empty()) Fail("expected parameters after 'on new'");
      }
      return Stream::Monitor(std::move(q), std::move(on_new));
    }
    if (Accept("edge")) {
      Expect("(");
      StreamPtr inner = ParseStream();
      Expect(")");
      Expect("on");
      return Stream::Edge(std::move(inner), ParsePredicate());
    }
    Fail("expected a stream but found " + Describe());
  }

  QueryPtr ParseQuery() {
    QueryPtr q = ParseAtom();
    for (;;) {
      if (Accept("filter")) {
        q = Query::Filter(std::move(q), ParsePredicate());
      } else if (Accept("join")) {
        QueryPtr right = ParseAtom();
        std::vector<vapl::Binding> on;
        if (Peek() == "on" && Peek(1) != "new") {
          ++pos_;
          while (AtBinding()) on.push_back(ParseBinding(nullptr));
          if (on.empty()) Fail("expected parameter passing after 'on'");
        }
        q = Query::Join(std::move(q), std::move(right), std::move(on));
      } else {
        return q;
      }
    }
  }

  QueryPtr ParseAtom() {
    if (Accept("(")) {
      QueryPtr q = ParseQuery();
      Expect(")");
      return q;
    }
    if (Accept("agg")) {
      auto op = ParseAggregateOp(Peek());
      if (!op) Fail("expected an aggregation operator but found " + Describe());
      Next();
      std::string param;
      if (*op != AggregateOp::kCount) param = ParamName();
      Expect("of");
      return Query::Aggregate(*op, std::move(param), ParseAtom());
    }
    if (StartsWith(Peek(), "@")) return Query::Invoke(ParseInvocation());
    Fail("expected a query but found " + Describe());
  }

  Invocation ParseInvocation() {
    auto ref = FunctionRef::FromToken(Peek());
    if (!ref) Fail("expected a function but found " + Describe());
    const FunctionSignature *fn = library_.FindFunction(*ref);
    if (fn == nullptr) Fail("unknown function " + Peek());
    Next();
    vapl::Invocation inv;
    inv.function = *ref;
    while (AtBinding()) inv.bindings.push_back(ParseBinding(fn));
    return inv;
  }

  vapl::Binding ParseBinding(const FunctionSignature *fn) {
    vapl::Binding b;
    size_t at = pos_;
    b.name = ParamName(fn == nullptr);
    if (fn != nullptr && fn->FindInput(b.name) == nullptr) {
      pos_ = at;
      Fail("unknown input parameter '" + b.name + "' of " +
           fn->ref().Token());
    }
    Expect("=");
    if (StartsWith(Peek(), kParamPrefix)) {
      b.value = OutputRef{ParamName(), -1};
    } else if (fn == nullptr) {
      Fail("expected an output parameter but found " + Describe());
    } else {
      b.value = ParseValue();
    }
    return b;
  }

  PredicatePtr ParsePredicate() {
    PredicatePtr p = ParseAnd();
    while (Accept("||")) p = Predicate::Or(std::move(p), ParseAnd());
    return p;
  }

  PredicatePtr ParseAnd() {
    PredicatePtr p = ParseUnary();
    while (Accept("&&")) p = Predicate::And(std::move(p), ParseUnary());
    return p;
  }

  PredicatePtr ParseUnary() {
    if (Accept("!")) return Predicate::Not(ParseUnary());
    if (Accept("(")) {
      PredicatePtr p = ParsePredicate();
      Expect(")");
      return p;
    }
    if (Accept("true")) return Predicate::True();
    if (Accept("false")) return Predicate::False();
    if (StartsWith(Peek(), "@")) {
      vapl::Invocation inv = ParseInvocation();
      Expect("{");
      PredicatePtr inner = ParsePredicate();
      Expect("}");
      return Predicate::Get(std::move(inv), std::move(inner));
    }
    std::string param = ParamName();
    auto op = ParseOperator(Peek());
    if (!op) Fail("expected an operator but found " + Describe());
    Next();
    return Predicate::Atom(std::move(param), *op, ParseValue());
  }

  std::optional<MeasureTerm> MeasureTermAt() {
    if (!StartsWith(Peek(1), kUnitPrefix)) return std::nullopt;
    MeasureTerm term;
    if (auto number = ParseNumber(Peek())) {
      term.magnitude = *number;
    } else if (auto named = ParseNamedConstToken(Peek());
               named && named->first == NamedConstKind::kNumber) {
      term.constant = named->second;
    } else {
      return std::nullopt;
    }
    term.unit = Peek(1).substr(kUnitPrefix.size());
    if (term.unit.empty()) Fail("empty unit");
    if (!library_.units().IsUnit(term.unit)) {
      Fail("unknown unit '" + term.unit + "'");
    }
    pos_ += 2;
    return term;
  }

  vapl::Value ParseValue() {
    if (pos_ >= tokens_.size()) Fail("expected a value but found end of input");
    if (auto term = MeasureTermAt()) {
      std::vector<MeasureTerm> terms{*term};
      while (Peek() == "+") {
        ++pos_;
        auto next = MeasureTermAt();
        if (!next) Fail("expected a measure term after '+'");
        terms.push_back(*next);
      }
      return Value::Measure(std::move(terms));
    }
    const std::string tok = Next();
    if (tok == "\"") {
      std::vector<std::string> words;
      for (;;) {
        if (pos_ >= tokens_.size()) Fail("unbalanced quote");
        const std::string &w = Next();
        if (w == "\"") return Value::String(std::move(words));
        if (StartsWith(w, kEntitySuffix)) {
          std::string type = w.substr(kEntitySuffix.size());
          if (type.empty()) Fail("empty entity type");
          return Value::Entity(std::move(type), std::move(words));
        }
        words.push_back(w);
      }
    }
    if (tok == "true" || tok == "false") return Value::Boolean(tok == "true");
    if (tok == "$?") return Value::Slot();
    if (StartsWith(tok, "$") && tok.size() > 1) {
      return Value::Placeholder(tok.substr(1));
    }
    auto tagged = [&](std::string_view prefix) -> std::optional<std::string> {
      if (!StartsWith(tok, prefix) || tok.size() == prefix.size()) {
        return std::nullopt;
      }
      return tok.substr(prefix.size());
    };
    if (auto v = tagged("enum:")) return Value::Enum(*v);
    if (auto v = tagged("date:")) return Value::Date(*v);
    if (auto v = tagged("time:")) return Value::Time(*v);
    if (auto v = tagged("location:")) return Value::Location(*v);
    if (auto named = ParseNamedConstToken(tok)) {
      return Value::NamedConst(named->first, named->second);
    }
    if (auto number = ParseNumber(tok)) return Value::Number(*number);
    --pos_;
    Fail("expected a value but found " + Describe());
  }

  const std::vector<std::string> &tokens_;
  const Library &library_;
  size_t pos_ = 0;
};

constexpr std::array<std::string_view, 36> kKeywords = {
    "now",    "attimer", "timer",       "time",      "base",      "interval",
    "monitor", "edge",   "on",          "new",       "filter",    "join",
    "agg",    "of",      "notify",      "=>",        "=",         "(",
    ")",      "{",       "}",           "&&",        "||",        "!",
    "+",      "==",      ">",           "<",         "contains",  "substr",
    "starts_with", "ends_with", "prefix_of", "max", "min",        "sum",
};

}  // namespace

std::vector<std::string> EmitNn(const Program &program,
                                const EmitOptions &options) {
  Emitter e(options);
  e.Stream(*program.stream);
  e.out.push_back("=>");
  if (program.query) {
    e.Query(*program.query);
    e.out.push_back("=>");
  }
  if (program.action.kind == ActionKind::kNotify) {
    e.out.push_back("notify");
  } else {
    e.Invocation(program.action.invocation);
  }
  return std::move(e.out);
}

std::vector<std::string> EmitNnPredicate(const Predicate &predicate,
                                         const EmitOptions &options) {
  Emitter e(options);
  e.Predicate(predicate);
  return std::move(e.out);
}

std::vector<std::string> EmitNnValue(const Value &value) {
  EmitOptions options;
  Emitter e(options);
  e.Value(value);
  return std::move(e.out);
}

Program ParseNn(const std::vector<std::string> &tokens,
                const Library &library) {
  return NnParser(tokens, library).Parse();
}

std::string JoinTokens(const std::vector<std::string> &tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::vector<std::string> SplitTokens(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view TokenClassName(TokenClass c) {
  switch (c) {
    case TokenClass::kFunction: return "function";
    case TokenClass::kParameter: return "parameter";
    case TokenClass::kEnum: return "enum";
    case TokenClass::kValue: return "value";
    case TokenClass::kKeyword: return "keyword";
  }
  return "?";
}

TokenClass ClassifyToken(std::string_view token) {
  if (StartsWith(token, "@")) return TokenClass::kFunction;
  if (StartsWith(token, kParamPrefix)) return TokenClass::kParameter;
  if (StartsWith(token, "enum:")) return TokenClass::kEnum;
  if (token == "avg" || token == "count") return TokenClass::kKeyword;
  if (std::find(kKeywords.begin(), kKeywords.end(), token) != kKeywords.end()) {
    return TokenClass::kKeyword;
  }
  return TokenClass::kValue;
}

std::vector<TokenClass> ClassifyTokens(const std::vector<std::string> &tokens) {
  std::vector<TokenClass> out;
  bool in_quote = false;
  for (const auto &t : tokens) {
    if (t == "\"" || StartsWith(t, kEntitySuffix)) {
      out.push_back(TokenClass::kValue);
      in_quote = t == "\"" ? !in_quote : false;
    } else {
      out.push_back(in_quote ? TokenClass::kValue : ClassifyToken(t));
    }
  }
  return out;
}

}  // namespace vapl
