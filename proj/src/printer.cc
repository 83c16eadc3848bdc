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

#include "vapl/printer.h"

namespace vapl {

namespace {

std::string Quote(const std::vector<std::string> &words) {
  std::string out = "\"";
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    for (char c : words[i]) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
  }
  return out + "\"";
}

std::string Operand(const Query &q) {
  if (q.kind == QueryKind::kInvocation) return PrettyQuery(q);
  return "(" + PrettyQuery(q) + ")";
}

std::string PrettyBinding(const Binding &b) {
  if (b.is_output_ref()) return b.name + " = " + b.output_ref().name;
  return b.name + " = " + PrettyValue(b.literal());
}

bool IsBinary(const Predicate &p, PredicateKind kind) { return p.kind == kind; }

}  // namespace

std::string PrettyValue(const Value &v) {
  switch (v.kind()) {
    case ValueKind::kString: return Quote(v.words());
    case ValueKind::kNumber: return FormatNumber(v.number());
    case ValueKind::kBoolean: return v.boolean() ? "true" : "false";
    case ValueKind::kEnum: return "enum:" + v.text();
    case ValueKind::kDate: return "date:" + v.text();
    case ValueKind::kTime: return "time:" + v.text();
    case ValueKind::kLocation: return "location:" + v.text();
    case ValueKind::kEntity: return Quote(v.words()) + "^^" + v.entity_type();
    case ValueKind::kNamedConst:
      return NamedConstToken(v.named_kind(), v.named_index());
    case ValueKind::kSlot: return "$?";
    case ValueKind::kPlaceholder: return "$" + v.text();
    case ValueKind::kMeasure: {
      std::string out;
      for (const auto &t : v.terms()) {
        if (!out.empty()) out += " + ";
        out += t.is_constant()
                   ? NamedConstToken(NamedConstKind::kNumber, t.constant)
                   : FormatNumber(t.magnitude);
        out += t.unit;
      }
      return out;
    }
  }
  return "?";
}

std::string PrettyInvocation(const Invocation &inv) {
  std::string out = inv.function.Token() + "(";
  for (size_t i = 0; i < inv.bindings.size(); ++i) {
    if (i > 0) out += ", ";
    out += PrettyBinding(inv.bindings[i]);
  }
  return out + ")";
}

std::string PrettyPredicate(const Predicate &p) {
  switch (p.kind) {
    case PredicateKind::kTrue: return "true";
    case PredicateKind::kFalse: return "false";
    case PredicateKind::kAtom:
      return p.param + " " + std::string(OperatorToken(p.op)) + " " +
             PrettyValue(p.value);
    case PredicateKind::kGet:
      return PrettyInvocation(p.invocation) + " { " +
             PrettyPredicate(*p.inner()) + " }";
    case PredicateKind::kNot: {
      const Predicate &in = *p.inner();
      if (in.kind == PredicateKind::kAnd || in.kind == PredicateKind::kOr) {
        return "!(" + PrettyPredicate(in) + ")";
      }
      return "!" + PrettyPredicate(in);
    }
    case PredicateKind::kAnd:
    case PredicateKind::kOr: {
      // Left-associative: the left operand of the same kind needs no
      // parentheses, the right one does.
      const Predicate &l = *p.operands[0];
      const Predicate &r = *p.operands[1];
      const bool is_and = p.kind == PredicateKind::kAnd;
      std::string ls = PrettyPredicate(l);
      std::string rs = PrettyPredicate(r);
      if (is_and && IsBinary(l, PredicateKind::kOr)) ls = "(" + ls + ")";
      if (IsBinary(r, PredicateKind::kOr) || IsBinary(r, PredicateKind::kAnd)) {
        rs = "(" + rs + ")";
      }
      return ls + (is_and ? " && " : " || ") + rs;
    }
  }
  return "?";
}

std::string PrettyQuery(const Query &q) {
  switch (q.kind) {
    case QueryKind::kInvocation: return PrettyInvocation(q.invocation);
    case QueryKind::kFilter:
      return "(" + PrettyQuery(*q.inner) + ") filter " +
             PrettyPredicate(*q.predicate);
    case QueryKind::kJoin: {
      std::string out = Operand(*q.left()) + " join " + Operand(*q.right);
      for (size_t i = 0; i < q.on.size(); ++i) {
        out += i == 0 ? " on " : ", ";
        out += PrettyBinding(q.on[i]);
      }
      return out;
    }
    case QueryKind::kAggregate: {
      std::string out = "agg " + std::string(AggregateOpName(q.aggregate));
      if (!q.aggregate_param.empty()) out += " " + q.aggregate_param;
      return out + " of (" + PrettyQuery(*q.inner) + ")";
    }
  }
  return "?";
}

std::string PrettyStream(const Stream &s) {
  switch (s.kind) {
    case StreamKind::kNow: return "now";
    case StreamKind::kAtTimer: return "attimer time = " + PrettyValue(s.time);
    case StreamKind::kTimer:
      return "timer base = " + PrettyValue(s.base) +
             " interval = " + PrettyValue(s.interval);
    case StreamKind::kMonitor: {
      std::string out = "monitor " + Operand(*s.query);
      for (size_t i = 0; i < s.on_new.size(); ++i) {
        out += i == 0 ? " on new " : ", ";
        out += s.on_new[i];
      }
      return out;
    }
    case StreamKind::kEdge:
      return "edge (" + PrettyStream(*s.inner) + ") on " +
             PrettyPredicate(*s.predicate);
  }
  return "?";
}

std::string PrettyAction(const Action &a) {
  if (a.kind == ActionKind::kNotify) return "notify";
  return PrettyInvocation(a.invocation);
}

std::string Pretty(const Program &p) {
  std::string out = PrettyStream(*p.stream) + " => ";
  if (p.query) out += PrettyQuery(*p.query) + " => ";
  return out + PrettyAction(p.action);
}

std::string PrettySignature(const FunctionSignature &fn) {
  std::string out;
  if (fn.monitorable) out += "monitorable ";
  if (fn.list) out += "list ";
  out += fn.is_query() ? "query " : "action ";
  out += "@" + fn.class_name + "." + fn.function_name + "(";
  for (size_t i = 0; i < fn.params.size(); ++i) {
    const auto &p = fn.params[i];
    if (i > 0) out += ", ";
    switch (p.direction) {
      case ParamDirection::kInRequired: out += "in req "; break;
      case ParamDirection::kInOptional: out += "in opt "; break;
      case ParamDirection::kOut: out += "out "; break;
    }
    out += p.name + " : " + p.type.ToString();
  }
  return out + ");";
}

}  // namespace vapl
