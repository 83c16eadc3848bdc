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

#include "vapl/typecheck.h"

#include <algorithm>
#include <set>

#include "vapl/printer.h"

namespace vapl {

const OutputInfo *ResolveOutput(const std::vector<OutputInfo> &scope,
                                std::string_view name) {
  for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
    if (it->name == name) return &*it;
  }
  return nullptr;
}

bool IsPassable(const TypeExpr &from, const TypeExpr &to) {
  if (IsAssignable(from, to)) return true;
  return to.kind() == TypeKind::kString && from.IsStringLike();
}

namespace {

void AppendOutputs(const Query &q, const Library &library, int *counter,
                   std::vector<OutputInfo> *out) {
  switch (q.kind) {
    case QueryKind::kInvocation: {
      const int index = (*counter)++;
      const FunctionSignature *fn = library.FindFunction(q.invocation.function);
      if (fn == nullptr) return;
      for (const auto &p : fn->params) {
        if (!p.is_input()) out->push_back({p.name, p.type, index});
      }
      return;
    }
    case QueryKind::kFilter:
      AppendOutputs(*q.inner, library, counter, out);
      return;
    case QueryKind::kJoin:
      AppendOutputs(*q.left(), library, counter, out);
      AppendOutputs(*q.right, library, counter, out);
      return;
    case QueryKind::kAggregate: {
      std::vector<OutputInfo> inner;
      AppendOutputs(*q.inner, library, counter, &inner);
      if (q.aggregate == AggregateOp::kCount) {
        out->push_back({"count", TypeExpr::Number(), *counter - 1});
      } else if (const OutputInfo *o = ResolveOutput(inner, q.aggregate_param)) {
        out->push_back(*o);
      }
      return;
    }
  }
}

bool ContainsList(const Query &q, const Library &library) {
  switch (q.kind) {
    case QueryKind::kInvocation: {
      const FunctionSignature *fn = library.FindFunction(q.invocation.function);
      return fn != nullptr && fn->list;
    }
    case QueryKind::kFilter: return ContainsList(*q.inner, library);
    case QueryKind::kJoin:
      return ContainsList(*q.left(), library) ||
             ContainsList(*q.right, library);
    case QueryKind::kAggregate: return false;
  }
  return false;
}

class Checker {
 public:
  Checker(const Library &library, const TypecheckOptions &options)
      : library_(library), options_(options) {}

  std::vector<Diagnostic> diags;
  int next_index = 0;

  void Error(std::string code, std::string message) {
    diags.push_back(MakeError(std::move(code), std::move(message)));
  }

  StreamPtr CheckStream(const Stream &s, std::vector<OutputInfo> *outs) {
    auto copy = std::make_shared<Stream>(s);
    switch (s.kind) {
      case StreamKind::kNow: break;
      case StreamKind::kAtTimer:
        CheckValue(s.time, TypeExpr::Time(), "attimer time");
        break;
      case StreamKind::kTimer:
        CheckValue(s.base, TypeExpr::Date(), "timer base");
        CheckValue(s.interval, TypeExpr::Measure("duration"), "timer interval");
        break;
      case StreamKind::kMonitor: {
        std::vector<OutputInfo> q_outs;
        copy->query = CheckQuery(*s.query, {}, {}, &q_outs);
        if (!IsMonitorableQuery(*s.query, library_)) {
          std::string which;
          std::vector<const Invocation *> invs;
          CollectInvocations(s.query, &invs);
          for (const auto *inv : invs) {
            const auto *fn = library_.FindFunction(inv->function);
            if (fn != nullptr && !fn->monitorable) which = inv->function.Token();
          }
          if (!which.empty()) {
            Error("not-monitorable", "cannot monitor " + which +
                                         ": the function is not monitorable");
          }
        }
        copy->on_new_types.clear();
        std::set<std::string> seen;
        for (const auto &name : s.on_new) {
          if (!seen.insert(name).second) {
            Error("duplicate-binding", "'" + name + "' listed twice in on new");
          }
          const OutputInfo *o = ResolveOutput(q_outs, name);
          if (o == nullptr) {
            Error("unbound-output",
                  "monitor on new '" + name + "': no such output parameter");
            copy->on_new_types.push_back(TypeExpr::String());
          } else {
            copy->on_new_types.push_back(o->type);
          }
        }
        *outs = std::move(q_outs);
        break;
      }
      case StreamKind::kEdge: {
        std::vector<OutputInfo> inner_outs;
        copy->inner = CheckStream(*s.inner, &inner_outs);
        if (s.inner->kind != StreamKind::kMonitor &&
            s.inner->kind != StreamKind::kEdge) {
          diags.push_back(MakeWarning(
              "edge-over-timer",
              "edge filter over a stream without outputs has unspecified "
              "semantics"));
        }
        copy->predicate = CheckPredicate(*s.predicate, inner_outs);
        *outs = std::move(inner_outs);
        break;
      }
    }
    return copy;
  }

  QueryPtr CheckQuery(const Query &q, const std::vector<OutputInfo> &scope,
                      const std::set<std::string> &on_bound,
                      std::vector<OutputInfo> *outs) {
    auto copy = std::make_shared<Query>(q);
    switch (q.kind) {
      case QueryKind::kInvocation:
        copy->invocation = CheckInvocation(q.invocation, scope, on_bound,
                                           FunctionKind::kQuery, outs);
        break;
      case QueryKind::kFilter: {
        std::vector<OutputInfo> inner_outs;
        copy->inner = CheckQuery(*q.inner, scope, on_bound, &inner_outs);
        copy->predicate = CheckPredicate(*q.predicate, inner_outs);
        *outs = std::move(inner_outs);
        break;
      }
      case QueryKind::kJoin: {
        std::vector<OutputInfo> left_outs;
        copy->inner = CheckQuery(*q.left(), scope, on_bound, &left_outs);
        std::vector<OutputInfo> right_scope = scope;
        right_scope.insert(right_scope.end(), left_outs.begin(),
                           left_outs.end());
        std::set<std::string> right_bound;
        for (const auto &b : q.on) right_bound.insert(b.name);
        std::vector<OutputInfo> right_outs;
        copy->right = CheckQuery(*q.right, right_scope, right_bound,
                                 &right_outs);
        const Invocation &head = LeftmostInvocation(*q.right);
        const FunctionSignature *fn = library_.FindFunction(head.function);
        std::set<std::string> seen;
        for (auto &b : copy->on) {
          if (!seen.insert(b.name).second) {
            Error("duplicate-binding",
                  "parameter '" + b.name + "' passed twice in join");
          }
          if (fn == nullptr) continue;
          const ParamDecl *decl = fn->FindInput(b.name);
          if (decl == nullptr) {
            Error("unknown-parameter", head.function.Token() +
                                           " has no input parameter '" +
                                           b.name + "'");
            continue;
          }
          b.type = decl->type;
          CheckBindingValue(&b, decl->type, right_scope, head.function);
        }
        *outs = std::move(left_outs);
        outs->insert(outs->end(), right_outs.begin(), right_outs.end());
        break;
      }
      case QueryKind::kAggregate: {
        std::vector<OutputInfo> inner_outs;
        copy->inner = CheckQuery(*q.inner, scope, on_bound, &inner_outs);
        if (!IsListQuery(*q.inner, library_)) {
          Error("aggregate-non-list",
                "aggregation requires a list query: " + PrettyQuery(*q.inner));
        }
        outs->clear();
        if (q.aggregate == AggregateOp::kCount) {
          if (!q.aggregate_param.empty()) {
            Error("aggregate-param", "count takes no parameter");
          }
          copy->aggregate_type = std::nullopt;
          outs->push_back({"count", TypeExpr::Number(), next_index - 1});
        } else {
          const OutputInfo *o = ResolveOutput(inner_outs, q.aggregate_param);
          if (o == nullptr) {
            Error("unbound-output", "aggregated parameter '" +
                                        q.aggregate_param +
                                        "' is not an output of the query");
          } else if (!o->type.IsNumeric()) {
            Error("type-mismatch", "cannot aggregate '" + q.aggregate_param +
                                       "' of type " + o->type.ToString());
          } else {
            copy->aggregate_type = o->type;
            outs->push_back(*o);
          }
        }
        break;
      }
    }
    return copy;
  }

  Invocation CheckInvocation(const Invocation &inv,
                             const std::vector<OutputInfo> &scope,
                             const std::set<std::string> &externally_bound,
                             FunctionKind expected,
                             std::vector<OutputInfo> *outs) {
    Invocation copy = inv;
    copy.index = next_index++;
    const FunctionSignature *fn = library_.FindFunction(inv.function);
    if (fn == nullptr) {
      auto r = library_.ResolveFunction(inv.function);
      diags.insert(diags.end(), r.diagnostics().begin(), r.diagnostics().end());
      return copy;
    }
    if (fn->kind != expected) {
      Error(expected == FunctionKind::kQuery ? "not-a-query" : "not-an-action",
            inv.function.Token() + " is " +
                (fn->is_query() ? "a query" : "an action") + ", expected " +
                (expected == FunctionKind::kQuery ? "a query" : "an action"));
    }
    CheckBindings(&copy, *fn, scope, externally_bound);
    if (outs != nullptr) {
      outs->clear();
      for (const auto &p : fn->params) {
        if (!p.is_input()) outs->push_back({p.name, p.type, copy.index});
      }
    }
    return copy;
  }

  void CheckBindings(Invocation *inv, const FunctionSignature &fn,
                     const std::vector<OutputInfo> &scope,
                     const std::set<std::string> &externally_bound) {
    std::set<std::string> seen;
    for (auto &b : inv->bindings) {
      if (!seen.insert(b.name).second || externally_bound.count(b.name)) {
        Error("duplicate-binding", "parameter '" + b.name + "' of " +
                                       inv->function.Token() +
                                       " is bound twice");
        continue;
      }
      const ParamDecl *decl = fn.FindInput(b.name);
      if (decl == nullptr) {
        Error("unknown-parameter", inv->function.Token() +
                                       " has no input parameter '" + b.name +
                                       "'");
        continue;
      }
      b.type = decl->type;
      CheckBindingValue(&b, decl->type, scope, inv->function);
    }
    for (const auto &p : fn.params) {
      if (p.is_required() && !seen.count(p.name) &&
          !externally_bound.count(p.name)) {
        Binding slot;
        slot.name = p.name;
        slot.value = Value::Slot();
        slot.type = p.type;
        inv->bindings.push_back(std::move(slot));
      }
    }
  }

  void CheckBindingValue(Binding *b, const TypeExpr &type,
                         const std::vector<OutputInfo> &scope,
                         const FunctionRef &where) {
    const std::string context = where.Token() + " parameter '" + b->name + "'";
    if (!b->is_output_ref()) {
      CheckValue(b->literal(), type, context);
      return;
    }
    OutputRef ref = b->output_ref();
    const OutputInfo *o = ResolveOutput(scope, ref.name);
    if (o == nullptr) {
      if (type.kind() == TypeKind::kEnum) {
        const auto &vals = type.enum_values();
        if (std::find(vals.begin(), vals.end(), ref.name) != vals.end()) {
          b->value = Value::Enum(ref.name);
          return;
        }
      }
      Error("unbound-output", context + ": '" + ref.name +
                                  "' is not an output parameter in scope");
      return;
    }
    if (!IsPassable(o->type, type)) {
      Error("type-mismatch", context + ": cannot pass '" + ref.name +
                                 "' of type " + o->type.ToString() + " to " +
                                 type.ToString());
    }
    ref.source = o->source;
    b->value = ref;
  }

  // Type of a literal value; nullopt for slots. Reports bad values.
  std::optional<TypeExpr> ValueType(const Value &v,
                                    const std::string &context) {
    if (v.is_slot()) return std::nullopt;
    if (v.is_placeholder()) {
      auto it = options_.placeholder_types.find(v.text());
      if (it == options_.placeholder_types.end()) {
        Error("unbound-placeholder",
              context + ": unknown placeholder $" + v.text());
        return std::nullopt;
      }
      return it->second;
    }
    try {
      return TypeOfValue(v, library_.units());
    } catch (const ValueError &e) {
      Error("ill-formed-value", context + ": " + e.what());
      return std::nullopt;
    }
  }

  void CheckValue(const Value &v, const TypeExpr &type,
                  const std::string &context) {
    auto vt = ValueType(v, context);
    if (!vt) return;
    if (!IsAssignable(*vt, type)) {
      Error("type-mismatch", context + ": value " + PrettyValue(v) + " of type " +
                                 vt->ToString() + " does not match " +
                                 type.ToString());
    }
  }

  PredicatePtr CheckPredicate(const Predicate &p,
                              const std::vector<OutputInfo> &scope) {
    auto copy = std::make_shared<Predicate>(p);
    switch (p.kind) {
      case PredicateKind::kTrue:
      case PredicateKind::kFalse:
        break;
      case PredicateKind::kNot:
      case PredicateKind::kAnd:
      case PredicateKind::kOr:
        for (auto &op : copy->operands) op = CheckPredicate(*op, scope);
        break;
      case PredicateKind::kAtom:
        CheckAtom(copy.get(), scope);
        break;
      case PredicateKind::kGet: {
        const FunctionSignature *fn =
            library_.FindFunction(p.invocation.function);
        if (fn == nullptr) {
          auto r = library_.ResolveFunction(p.invocation.function);
          diags.insert(diags.end(), r.diagnostics().begin(),
                       r.diagnostics().end());
          break;
        }
        if (!fn->is_query()) {
          Error("not-a-query",
                p.invocation.function.Token() + " in a predicate is an action");
        }
        CheckBindings(&copy->invocation, *fn, {}, {});
        std::vector<OutputInfo> own;
        for (const auto &param : fn->params) {
          if (!param.is_input()) own.push_back({param.name, param.type, -1});
        }
        copy->operands[0] = CheckPredicate(*p.inner(), own);
        break;
      }
    }
    return copy;
  }

  void CheckAtom(Predicate *atom, const std::vector<OutputInfo> &scope) {
    const OutputInfo *o = ResolveOutput(scope, atom->param);
    const std::string context = "filter on '" + atom->param + "'";
    if (o == nullptr) {
      Error("unbound-output",
            context + ": not an output parameter of the filtered query");
      return;
    }
    atom->param_type = o->type;
    atom->source = o->source;
    const TypeExpr &t = o->type;
    auto vt = ValueType(atom->value, context);
    if (!vt && !atom->value.is_slot()) return;
    auto mismatch = [&](const std::string &why) {
      Error("type-mismatch", context + ": " + why);
    };
    const std::string op(OperatorToken(atom->op));
    switch (atom->op) {
      case Operator::kEquals:
        if (t.kind() == TypeKind::kArray) {
          mismatch("'==' does not apply to arrays");
        } else if (vt && !IsAssignable(*vt, t)) {
          mismatch("value of type " + vt->ToString() + " does not match " +
                   t.ToString());
        }
        break;
      case Operator::kGreater:
      case Operator::kLess:
        if (!t.IsComparable()) {
          mismatch("'" + op + "' does not apply to " + t.ToString());
        } else if (vt && !IsAssignable(*vt, t)) {
          mismatch("value of type " + vt->ToString() + " does not match " +
                   t.ToString());
        }
        break;
      case Operator::kContains:
        if (t.kind() != TypeKind::kArray) {
          mismatch("'contains' requires an array, found " + t.ToString());
        } else if (vt && !IsAssignable(*vt, t.element())) {
          mismatch("value of type " + vt->ToString() +
                   " does not match element type " + t.element().ToString());
        }
        break;
      case Operator::kSubstr:
      case Operator::kStartsWith:
      case Operator::kEndsWith:
      case Operator::kPrefixOf:
        if (!t.IsStringLike()) {
          mismatch("'" + op + "' does not apply to " + t.ToString());
        } else if (vt && !vt->IsStringLike()) {
          mismatch("'" + op + "' requires a string value");
        }
        break;
    }
  }

 private:
  const Library &library_;
  const TypecheckOptions &options_;
};

}  // namespace

bool IsMonitorableQuery(const Query &query, const Library &library) {
  std::vector<const Invocation *> invs;
  CollectInvocations(std::make_shared<Query>(query), &invs);
  for (const auto *inv : invs) {
    const FunctionSignature *fn = library.FindFunction(inv->function);
    if (fn == nullptr || !fn->monitorable) return false;
  }
  return true;
}

bool IsListQuery(const Query &query, const Library &library) {
  return ContainsList(query, library);
}

std::vector<OutputInfo> QueryOutputs(const Query &query,
                                     const Library &library) {
  std::vector<OutputInfo> out;
  int counter = 0;
  AppendOutputs(query, library, &counter, &out);
  return out;
}

std::vector<OutputInfo> StreamOutputs(const Stream &stream,
                                      const Library &library) {
  switch (stream.kind) {
    case StreamKind::kMonitor: return QueryOutputs(*stream.query, library);
    case StreamKind::kEdge: return StreamOutputs(*stream.inner, library);
    default: return {};
  }
}

Checked<TypedProgram> Typecheck(const Program &program, const Library &library,
                                const TypecheckOptions &options) {
  Checker checker(library, options);
  TypedProgram typed;
  std::vector<OutputInfo> stream_outs;
  typed.program.stream = checker.CheckStream(*program.stream, &stream_outs);
  std::vector<OutputInfo> scope = stream_outs;
  if (program.query) {
    std::vector<OutputInfo> q_outs;
    typed.program.query =
        checker.CheckQuery(*program.query, stream_outs, {}, &q_outs);
    scope.insert(scope.end(), q_outs.begin(), q_outs.end());
  }
  typed.program.action = program.action;
  if (program.action.kind == ActionKind::kInvocation) {
    typed.program.action.invocation =
        checker.CheckInvocation(program.action.invocation, scope, {},
                                FunctionKind::kAction, nullptr);
  }
  typed.invocation_count = checker.next_index;
  if (HasErrors(checker.diags)) return checker.diags;
  typed.warnings = std::move(checker.diags);
  return typed;
}

Checked<QueryPtr> TypecheckQuery(const QueryPtr &query, const Library &library,
                                 const TypecheckOptions &options,
                                 std::vector<OutputInfo> *outputs) {
  Checker checker(library, options);
  std::vector<OutputInfo> outs;
  QueryPtr typed = checker.CheckQuery(*query, {}, {}, &outs);
  if (HasErrors(checker.diags)) return checker.diags;
  if (outputs != nullptr) *outputs = std::move(outs);
  return typed;
}

}  // namespace vapl
