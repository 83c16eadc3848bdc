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

#include "vapl/templates.h"

#include <algorithm>
#include <map>

#include "vapl/lexer.h"
#include "vapl/parser.h"
#include "vapl/printer.h"

namespace vapl {

std::string_view FragmentKindName(FragmentKind kind) {
  switch (kind) {
    case FragmentKind::kStream: return "stream";
    case FragmentKind::kQuery: return "query";
    case FragmentKind::kAction: return "action";
    case FragmentKind::kProgram: return "program";
    case FragmentKind::kPredicate: return "predicate";
    case FragmentKind::kParam: return "param";
  }
  return "?";
}

Fragment Fragment::OfStream(StreamPtr s) {
  Fragment f;
  f.kind = FragmentKind::kStream;
  f.stream = std::move(s);
  return f;
}

Fragment Fragment::OfQuery(QueryPtr q) {
  Fragment f;
  f.kind = FragmentKind::kQuery;
  f.query = std::move(q);
  return f;
}

Fragment Fragment::OfAction(Action a) {
  Fragment f;
  f.kind = FragmentKind::kAction;
  f.action = std::move(a);
  return f;
}

Fragment Fragment::OfProgram(Program p) {
  Fragment f;
  f.kind = FragmentKind::kProgram;
  f.program = std::move(p);
  return f;
}

Fragment Fragment::OfPredicate(PredicatePtr p) {
  Fragment f;
  f.kind = FragmentKind::kPredicate;
  f.predicate = std::move(p);
  return f;
}

Fragment Fragment::OfParam(OutputInfo p) {
  Fragment f;
  f.kind = FragmentKind::kParam;
  f.param = std::move(p);
  return f;
}

std::string Fragment::ToString() const {
  switch (kind) {
    case FragmentKind::kStream: return "stream " + PrettyStream(*stream);
    case FragmentKind::kQuery: return "query " + PrettyQuery(*query);
    case FragmentKind::kAction: return "action " + PrettyAction(action);
    case FragmentKind::kProgram: return "program " + Pretty(program);
    case FragmentKind::kPredicate:
      return "predicate " + PrettyPredicate(*predicate);
    case FragmentKind::kParam:
      return "param " + param.name + " : " + param.type.ToString();
  }
  return "?";
}

std::optional<Program> Fragment::AsProgram() const {
  Program p;
  p.stream = Stream::Now();
  switch (kind) {
    case FragmentKind::kStream:
      p.stream = stream;
      return p;
    case FragmentKind::kQuery:
      p.query = query;
      return p;
    case FragmentKind::kAction:
      p.action = action;
      return p;
    case FragmentKind::kProgram:
      return program;
    default:
      return std::nullopt;
  }
}

Fragment Fragment::Rewritten(const Rewriter &rewriter) const {
  Fragment out = *this;
  switch (kind) {
    case FragmentKind::kStream: out.stream = Rewrite(stream, rewriter); break;
    case FragmentKind::kQuery: out.query = Rewrite(query, rewriter); break;
    case FragmentKind::kAction: out.action = Rewrite(action, rewriter); break;
    case FragmentKind::kProgram:
      out.program = Rewrite(program, rewriter);
      break;
    case FragmentKind::kPredicate:
      out.predicate = Rewrite(predicate, rewriter);
      break;
    case FragmentKind::kParam: break;
  }
  return out;
}

bool IsParamCategory(std::string_view category) {
  for (auto c : kParamCategories) {
    if (c == category) return true;
  }
  return false;
}

bool InParamCategory(std::string_view category, const TypeExpr &type) {
  if (category == "PARAM") return true;
  if (category == "PARAM_NUMERIC") return type.IsNumeric();
  if (category == "PARAM_STRING") {
    return type.kind() == TypeKind::kString ||
           type.kind() == TypeKind::kEntity ||
           type.kind() == TypeKind::kPathName;
  }
  if (category == "PARAM_ARRAY") return type.kind() == TypeKind::kArray;
  return false;
}

bool TemplateFlags::Enabled(const std::set<std::string> &enabled) const {
  for (const auto &f : required) {
    if (!enabled.count(f)) return false;
  }
  for (const auto &f : forbidden) {
    if (enabled.count(f)) return false;
  }
  return true;
}

std::string BuildExpr::ToString() const {
  if (!call) return name;
  std::string out = name + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += args[i].ToString();
  }
  return out + ")";
}

std::vector<std::pair<std::string, std::string>> ConstructTemplate::Variables()
    const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto &item : rhs) {
    if (item.kind != RhsItem::Kind::kVariable) continue;
    out.emplace_back(item.text, item.category);
    if (!item.fill_from_category.empty()) {
      out.emplace_back(item.fill_from, item.fill_from_category);
    }
  }
  return out;
}

std::string ConstructTemplate::Label() const {
  std::string out = lhs + " :=";
  for (const auto &item : rhs) {
    out += ' ';
    switch (item.kind) {
      case RhsItem::Kind::kLiteral: out += "'" + item.text + "'"; break;
      case RhsItem::Kind::kPlaceholder: out += "$" + item.text; break;
      case RhsItem::Kind::kVariable:
        out += item.text + ":" + item.category;
        if (!item.fill_from.empty()) {
          out += "[" + item.fill_from;
          if (!item.fill_from_category.empty()) {
            out += ":" + item.fill_from_category;
          }
          out += "]";
        }
        break;
    }
  }
  return out;
}

std::set<std::string> TemplateSet::Categories() const {
  std::set<std::string> out;
  for (const auto &p : primitives) out.insert(p.category);
  for (const auto &c : constructs) out.insert(c.lhs);
  return out;
}

namespace {

struct Arity {
  std::string_view name;
  size_t min_args;
  size_t max_args;
};

constexpr Arity kGuards[] = {
    {"is_monitorable", 1, 1}, {"is_list", 1, 1},
    {"returns_numeric", 2, 2}, {"has_output", 2, 2},
    {"type_compatible", 2, 2},
};

constexpr Arity kCombinators[] = {
    {"monitor", 1, 2}, {"edge", 2, 2},   {"rule", 2, 3},    {"filter", 2, 2},
    {"atom", 3, 3},    {"and", 2, 2},    {"or", 2, 2},      {"not", 1, 1},
    {"join", 2, 2},    {"agg", 2, 3},    {"project", 2, 2},
};

const Arity *FindArity(const Arity *begin, const Arity *end,
                       std::string_view name) {
  for (const Arity *a = begin; a != end; ++a) {
    if (a->name == name) return a;
  }
  return nullptr;
}

// Splits an utterance or literal into words, detaching trailing and
// leading punctuation.
std::vector<std::string> SplitWords(std::string_view text) {
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
    if (j > i) {
      std::string word(text.substr(i, j - i));
      std::vector<std::string> tail;
      while (word.size() > 1 && std::string_view(",.?!").find(word.back()) !=
                                    std::string_view::npos) {
        tail.insert(tail.begin(), std::string(1, word.back()));
        word.pop_back();
      }
      out.push_back(std::move(word));
      out.insert(out.end(), tail.begin(), tail.end());
    }
    i = j;
  }
  return out;
}

std::set<std::string> BodyPlaceholders(const Fragment &f) {
  std::set<std::string> out;
  Rewriter rw;
  rw.value = [&](const Value &v, std::string_view) {
    if (v.is_placeholder()) out.insert(v.text());
    return v;
  };
  f.Rewritten(rw);
  return out;
}

class TemplateParser {
 public:
  TemplateParser(std::string_view text, const Library &library)
      : library_(library) {
    try {
      tokens_ = Lex(text);
    } catch (const SyntaxError &e) {
      diags_.push_back(MakeError("template-syntax", e.bare_message(), e.span()));
      tokens_.clear();
    }
  }

  Checked<TemplateSet> Run() {
    if (tokens_.empty()) return diags_;
    size_t pos = 0;
    while (tokens_[pos].kind != TokenKind::kEnd) {
      ProgramParser p(&tokens_, pos);
      try {
        ParseStatement(p);
        pos = p.pos();
      } catch (const SyntaxError &e) {
        diags_.push_back(
            MakeError("template-syntax", e.bare_message(), e.span()));
        pos = std::max(pos + 1, p.pos());
        while (tokens_[pos].kind != TokenKind::kEnd &&
               !tokens_[pos - 1].IsPunct(";")) {
          ++pos;
        }
      }
    }
    CheckCategories();
    if (HasErrors(diags_)) return diags_;
    return std::move(set_);
  }

 private:
  void ParseStatement(ProgramParser &p) {
    const Span span = p.Peek().span;
    std::string lhs = p.ExpectName();
    p.ExpectPunct(":=");
    TemplateFlags flags;
    while (p.Peek().IsPunct("?") || p.Peek().IsPunct("!")) {
      bool required = p.Next().text == "?";
      std::string name = p.ExpectName();
      (required ? flags.required : flags.forbidden).insert(name);
    }
    if (p.Peek().kind == TokenKind::kString && p.Peek().suffix.empty()) {
      ParsePrimitive(p, std::move(lhs), std::move(flags), span);
    } else {
      ParseConstruct(p, std::move(lhs), std::move(flags), span);
    }
  }

  void ParsePrimitive(ProgramParser &p, std::string lhs, TemplateFlags flags,
                      Span span) {
    PrimitiveTemplate t;
    t.category = std::move(lhs);
    t.flags = std::move(flags);
    t.span = span;
    t.utterance = SplitWords(p.Next().text);
    p.ExpectPunct("->");
    ParseOptions options;
    if (p.AcceptIdent("lambda")) {
      p.ExpectPunct("(");
      if (!p.Peek().IsPunct(")")) {
        do {
          TemplateParam param;
          param.name = p.ExpectName();
          p.ExpectPunct(":");
          param.type = ParseType(p);
          if (options.placeholders.count(param.name)) {
            diags_.push_back(MakeError(
                "placeholder-mismatch",
                "parameter '" + param.name + "' is declared twice", span));
          }
          options.placeholders.insert(param.name);
          t.params.push_back(std::move(param));
        } while (p.AcceptPunct(","));
      }
      p.ExpectPunct(")");
      p.ExpectPunct("->");
    }
    ProgramParser body(&tokens_, p.pos(), options);
    t.body = ParseBody(body);
    p.set_pos(body.pos());
    if (!tokens_[p.pos() - 1].IsPunct(";")) p.ExpectPunct(";");

    // Placeholders in the utterance and declared parameters must match.
    std::set<std::string> declared;
    for (const auto &param : t.params) declared.insert(param.name);
    std::set<std::string> used;
    for (const auto &w : t.utterance) {
      if (w.size() < 2 || w[0] != '$') continue;
      std::string name = w.substr(1);
      if (!declared.count(name)) {
        diags_.push_back(MakeError(
            "placeholder-mismatch",
            "placeholder '$" + name + "' has no declared parameter", span));
      } else if (!used.insert(name).second) {
        diags_.push_back(MakeError(
            "placeholder-mismatch",
            "placeholder '$" + name + "' appears twice", span));
      }
    }
    const std::set<std::string> in_body = BodyPlaceholders(t.body);
    for (const auto &name : declared) {
      if (!used.count(name)) {
        diags_.push_back(MakeError(
            "placeholder-mismatch",
            "parameter '" + name + "' does not appear in the utterance", span));
      }
      if (!in_body.count(name)) {
        diags_.push_back(MakeError(
            "placeholder-mismatch",
            "parameter '" + name + "' is not used by the body", span));
      }
    }
    if (!CheckBody(&t)) return;
    set_.primitives.push_back(std::move(t));
  }

  Fragment ParseBody(ProgramParser &p) {
    const Token &t = p.Peek();
    if (t.IsIdent("now") || t.IsIdent("attimer") || t.IsIdent("timer") ||
        t.IsIdent("monitor") || t.IsIdent("edge")) {
      size_t start = p.pos();
      StreamPtr s = p.ParseStream();
      if (!p.Peek().IsPunct("=>")) return Fragment::OfStream(std::move(s));
      p.set_pos(start);
      return Fragment::OfProgram(p.ParseProgram());
    }
    if (p.AcceptIdent("notify")) return Fragment::OfAction(Action::Notify());
    if (t.kind == TokenKind::kFunction || t.IsPunct("(") || t.IsIdent("agg")) {
      QueryPtr q = p.ParseQuery();
      if (q->kind == QueryKind::kInvocation) {
        const FunctionSignature *fn = library_.FindFunction(q->invocation.function);
        if (fn && !fn->is_query()) {
          return Fragment::OfAction(Action::Invoke(q->invocation));
        }
      }
      return Fragment::OfQuery(std::move(q));
    }
    return Fragment::OfPredicate(p.ParsePredicate());
  }

  // Typechecks the body with the declared placeholder types and keeps the
  // annotated copy.
  bool CheckBody(PrimitiveTemplate *t) {
    if (t->body.kind == FragmentKind::kPredicate) return true;
    TypecheckOptions options;
    for (const auto &param : t->params) {
      options.placeholder_types[param.name] = param.type;
    }
    auto typed = Typecheck(*t->body.AsProgram(), library_, options);
    if (!typed.ok()) {
      for (auto d : typed.diagnostics()) {
        if (d.severity != Severity::kError) continue;
        d.message = t->category + " template: " + d.message;
        d.span = t->span;
        diags_.push_back(std::move(d));
      }
      return false;
    }
    const Program &prog = typed->program;
    switch (t->body.kind) {
      case FragmentKind::kStream: t->body.stream = prog.stream; break;
      case FragmentKind::kQuery: t->body.query = prog.query; break;
      case FragmentKind::kAction: t->body.action = prog.action; break;
      case FragmentKind::kProgram: t->body.program = prog; break;
      default: break;
    }
    return true;
  }

  void ParseConstruct(ProgramParser &p, std::string lhs, TemplateFlags flags,
                      Span span) {
    // Each rhs position holds one or more literal alternatives.
    std::vector<std::vector<RhsItem>> positions;
    for (;;) {
      const Token &t = p.Peek();
      if (t.kind == TokenKind::kString) {
        std::vector<RhsItem> alts;
        do {
          const Token &lit = p.Peek();
          if (lit.kind != TokenKind::kString) p.Fail("expected a literal");
          RhsItem item;
          item.text = p.Next().text;
          alts.push_back(std::move(item));
        } while (p.AcceptPunct("|"));
        positions.push_back(std::move(alts));
      } else if (t.kind == TokenKind::kDollar) {
        RhsItem item;
        item.kind = RhsItem::Kind::kPlaceholder;
        item.text = p.Next().text;
        positions.push_back({std::move(item)});
      } else if (t.kind == TokenKind::kIdent && p.Peek(1).IsPunct(":") &&
                 !t.IsIdent("if")) {
        RhsItem item;
        item.kind = RhsItem::Kind::kVariable;
        item.text = p.Next().text;
        p.Next();
        item.category = p.ExpectName();
        if (p.AcceptPunct("[")) {
          item.fill_from = p.ExpectName();
          if (p.AcceptPunct(":")) item.fill_from_category = p.ExpectName();
          p.ExpectPunct("]");
        }
        positions.push_back({std::move(item)});
      } else {
        break;
      }
    }
    if (positions.empty()) p.Fail("expected a literal, a variable or a string");
    std::vector<GuardCall> guards;
    if (p.AcceptIdent("if")) {
      do {
        GuardCall g;
        g.negated = p.AcceptPunct("!");
        g.name = p.ExpectName();
        p.ExpectPunct("(");
        do {
          g.args.push_back(p.ExpectName());
        } while (p.AcceptPunct(","));
        p.ExpectPunct(")");
        guards.push_back(std::move(g));
      } while (p.AcceptPunct("&&"));
    }
    p.ExpectPunct("->");
    BuildExpr build = ParseBuild(p);
    p.ExpectPunct(";");

    ConstructTemplate base;
    base.lhs = std::move(lhs);
    base.guards = std::move(guards);
    base.build = std::move(build);
    base.flags = std::move(flags);
    base.span = span;
    if (!CheckConstruct(base, positions)) return;

    // One template per combination of literal alternatives.
    std::vector<std::vector<RhsItem>> expanded = {{}};
    for (const auto &alts : positions) {
      std::vector<std::vector<RhsItem>> next;
      for (const auto &prefix : expanded) {
        for (const auto &alt : alts) {
          next.push_back(prefix);
          next.back().push_back(alt);
        }
      }
      expanded = std::move(next);
    }
    for (auto &rhs : expanded) {
      ConstructTemplate t = base;
      t.rhs = std::move(rhs);
      set_.constructs.push_back(std::move(t));
    }
  }

  BuildExpr ParseBuild(ProgramParser &p) {
    BuildExpr e;
    const Token &t = p.Peek();
    if (t.IsPunct("==") || t.IsPunct(">") || t.IsPunct("<")) {
      e.name = p.Next().text;
      return e;
    }
    if (t.kind == TokenKind::kDollar) {
      e.name = "$" + p.Next().text;
      return e;
    }
    e.name = p.ExpectName();
    if (p.AcceptPunct("(")) {
      e.call = true;
      if (!p.Peek().IsPunct(")")) {
        do {
          e.args.push_back(ParseBuild(p));
        } while (p.AcceptPunct(","));
      }
      p.ExpectPunct(")");
    }
    return e;
  }

  bool CheckConstruct(const ConstructTemplate &t,
                      const std::vector<std::vector<RhsItem>> &positions) {
    const size_t before = diags_.size();
    auto error = [&](const std::string &code, const std::string &message) {
      diags_.push_back(MakeError(code, t.lhs + " template: " + message, t.span));
    };
    std::set<std::string> vars, placeholders;
    for (const auto &alts : positions) {
      const RhsItem &item = alts.front();
      if (item.kind == RhsItem::Kind::kPlaceholder) {
        if (!placeholders.insert(item.text).second) {
          error("duplicate-variable", "placeholder '$" + item.text +
                                          "' appears twice");
        }
      }
      if (item.kind != RhsItem::Kind::kVariable) continue;
      if (!vars.insert(item.text).second) {
        error("duplicate-variable", "variable '" + item.text + "' appears twice");
      }
      used_categories_.emplace_back(item.category, t.span);
      if (!item.fill_from_category.empty()) {
        if (!vars.insert(item.fill_from).second) {
          error("duplicate-variable",
                "variable '" + item.fill_from + "' appears twice");
        }
        used_categories_.emplace_back(item.fill_from_category, t.span);
      }
    }
    for (const auto &alts : positions) {
      const RhsItem &item = alts.front();
      if (item.kind == RhsItem::Kind::kVariable && !item.fill_from.empty() &&
          item.fill_from_category.empty() && !vars.count(item.fill_from)) {
        error("unknown-variable", "'" + item.fill_from + "' is not a variable");
      }
    }
    for (const auto &g : t.guards) {
      const Arity *a = FindArity(std::begin(kGuards), std::end(kGuards), g.name);
      if (!a) {
        error("unknown-guard", "unknown guard '" + g.name + "'");
        continue;
      }
      if (g.args.size() < a->min_args || g.args.size() > a->max_args) {
        error("guard-arity", "wrong number of arguments to '" + g.name + "'");
        continue;
      }
      for (size_t i = 0; i < g.args.size(); ++i) {
        const bool param_slot = i == 1 && (g.name == "returns_numeric" ||
                                           g.name == "has_output");
        if (vars.count(g.args[i])) continue;
        if (param_slot && library_.HasParameterName(g.args[i])) continue;
        error("unknown-variable", "guard argument '" + g.args[i] +
                                      "' is not a variable");
      }
    }
    CheckBuild(t.build, vars, placeholders, error);
    return diags_.size() == before;
  }

  template <typename ErrorFn>
  void CheckBuild(const BuildExpr &e, const std::set<std::string> &vars,
                  const std::set<std::string> &placeholders, ErrorFn &error) {
    if (e.call) {
      const Arity *a =
          FindArity(std::begin(kCombinators), std::end(kCombinators), e.name);
      if (!a) {
        error("unknown-combinator", "unknown combinator '" + e.name + "'");
        return;
      }
      if (e.args.size() < a->min_args || e.args.size() > a->max_args) {
        error("combinator-arity",
              "wrong number of arguments to '" + e.name + "'");
      }
      for (const auto &arg : e.args) CheckBuild(arg, vars, placeholders, error);
      return;
    }
    if (vars.count(e.name) || e.name == "now" || e.name == "notify") return;
    if (e.name[0] == '$' && placeholders.count(e.name.substr(1))) return;
    if (ParseOperator(e.name) || ParseAggregateOp(e.name)) return;
    if (library_.HasParameterName(e.name)) return;
    error("unknown-variable", "'" + e.name + "' is not a variable");
  }

  void CheckCategories() {
    std::set<std::string> known = set_.Categories();
    for (const auto &[category, span] : used_categories_) {
      if (known.count(category) || IsParamCategory(category)) continue;
      diags_.push_back(MakeError("unknown-category",
                                 "unknown non-terminal '" + category + "'",
                                 span));
    }
  }

  const Library &library_;
  std::vector<Token> tokens_;
  std::vector<Diagnostic> diags_;
  std::vector<std::pair<std::string, Span>> used_categories_;
  TemplateSet set_;
};

}  // namespace

Checked<TemplateSet> ParseTemplates(std::string_view text,
                                    const Library &library) {
  return TemplateParser(text, library).Run();
}

Checked<TemplateSet> LoadTemplates(const std::vector<std::string> &paths,
                                   const Library &library) {
  std::string text;
  for (const auto &path : paths) {
    text += ReadFile(path);
    text += '\n';
  }
  return ParseTemplates(text, library);
}

}  // namespace vapl
