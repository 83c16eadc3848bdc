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

// Program AST: stream => [query =>] action.
//
// Nodes are immutable and shared through shared_ptr<const T>; rewriting
// builds new nodes. Each node also carries annotations filled in by the
// typechecker (parameter types, resolved output sources, invocation
// indices). Structural equality (operator==) compares syntax only and
// ignores annotations; keyword bindings compare as unordered sets.

#ifndef VAPL_AST_H_
#define VAPL_AST_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "vapl/error.h"
#include "vapl/types.h"
#include "vapl/value.h"

namespace vapl {

struct FunctionRef {
  std::string class_name;     // com.dropbox
  std::string function_name;  // list_folder

  // "@com.dropbox.list_folder"
  std::string Token() const { return "@" + class_name + "." + function_name; }
  // Parses "@cn.fn"; nullopt when malformed.
  static std::optional<FunctionRef> FromToken(std::string_view token);

  friend bool operator==(const FunctionRef &a, const FunctionRef &b) {
    return a.class_name == b.class_name && a.function_name == b.function_name;
  }
  friend bool operator<(const FunctionRef &a, const FunctionRef &b) {
    return a.Token() < b.Token();
  }
};

// Reference to an output parameter of an earlier invocation.
struct OutputRef {
  std::string name;
  // Program-order index of the producing invocation; -1 until typechecked.
  int source = -1;

  friend bool operator==(const OutputRef &a, const OutputRef &b) {
    return a.name == b.name;
  }
};

// Keyword binding `name = value` or `name = output`.
struct Binding {
  std::string name;
  std::variant<Value, OutputRef> value;
  std::optional<TypeExpr> type;  // declared type of the input parameter

  bool is_output_ref() const {
    return std::holds_alternative<OutputRef>(value);
  }
  const Value &literal() const { return std::get<Value>(value); }
  const OutputRef &output_ref() const { return std::get<OutputRef>(value); }

  friend bool operator==(const Binding &a, const Binding &b) {
    return a.name == b.name && a.value == b.value;
  }
};

bool SameBindings(const std::vector<Binding> &a, const std::vector<Binding> &b);

struct Invocation {
  FunctionRef function;
  std::vector<Binding> bindings;
  // Program-order index among all invocations; -1 until typechecked.
  int index = -1;

  const Binding *FindBinding(std::string_view name) const;

  friend bool operator==(const Invocation &a, const Invocation &b) {
    return a.function == b.function && SameBindings(a.bindings, b.bindings);
  }
};

enum class Operator {
  kEquals,      // ==
  kGreater,     // >
  kLess,        // <
  kContains,    // array containment
  kSubstr,      // string containment
  kStartsWith,
  kEndsWith,
  kPrefixOf,
};

std::string_view OperatorToken(Operator op);
std::optional<Operator> ParseOperator(std::string_view token);

struct Predicate;
using PredicatePtr = std::shared_ptr<const Predicate>;

enum class PredicateKind { kTrue, kFalse, kNot, kAnd, kOr, kAtom, kGet };

struct Predicate {
  PredicateKind kind = PredicateKind::kTrue;
  std::vector<PredicatePtr> operands;  // Not: 1, And/Or: 2, Get: inner

  // Atom: `param op value`.
  std::string param;
  Operator op = Operator::kEquals;
  Value value;
  std::optional<TypeExpr> param_type;  // type of the output parameter
  int source = -1;                     // producing invocation, by typecheck

  // Get: `@fn(bindings) { inner }`.
  Invocation invocation;

  static PredicatePtr True();
  static PredicatePtr False();
  static PredicatePtr Not(PredicatePtr p);
  static PredicatePtr And(PredicatePtr a, PredicatePtr b);
  static PredicatePtr Or(PredicatePtr a, PredicatePtr b);
  static PredicatePtr Atom(std::string param, Operator op, Value value);
  static PredicatePtr Get(Invocation invocation, PredicatePtr inner);

  const PredicatePtr &inner() const { return operands.front(); }
};

bool operator==(const Predicate &a, const Predicate &b);
bool SamePredicate(const PredicatePtr &a, const PredicatePtr &b);

enum class AggregateOp { kMax, kMin, kSum, kAvg, kCount };
std::string_view AggregateOpName(AggregateOp op);
std::optional<AggregateOp> ParseAggregateOp(std::string_view name);

struct Query;
using QueryPtr = std::shared_ptr<const Query>;

enum class QueryKind { kInvocation, kFilter, kJoin, kAggregate };

struct Query {
  QueryKind kind = QueryKind::kInvocation;
  Invocation invocation;      // kInvocation
  QueryPtr inner;             // kFilter, kAggregate; left operand of kJoin
  QueryPtr right;             // kJoin
  PredicatePtr predicate;     // kFilter
  std::vector<Binding> on;    // kJoin parameter passing, values are OutputRef
  AggregateOp aggregate = AggregateOp::kCount;
  std::string aggregate_param;  // empty for count
  std::optional<TypeExpr> aggregate_type;  // set by typecheck

  static QueryPtr Invoke(Invocation invocation);
  static QueryPtr Filter(QueryPtr inner, PredicatePtr predicate);
  static QueryPtr Join(QueryPtr left, QueryPtr right,
                       std::vector<Binding> on = {});
  static QueryPtr Aggregate(AggregateOp op, std::string param, QueryPtr inner);

  const QueryPtr &left() const { return inner; }
};

bool operator==(const Query &a, const Query &b);
bool SameQuery(const QueryPtr &a, const QueryPtr &b);

struct Stream;
using StreamPtr = std::shared_ptr<const Stream>;

enum class StreamKind { kNow, kAtTimer, kTimer, kMonitor, kEdge };

struct Stream {
  StreamKind kind = StreamKind::kNow;
  Value time;      // kAtTimer
  Value base;      // kTimer
  Value interval;  // kTimer
  QueryPtr query;  // kMonitor
  std::vector<std::string> on_new;  // kMonitor: restrict to these outputs
  std::vector<TypeExpr> on_new_types;  // set by typecheck
  StreamPtr inner;         // kEdge
  PredicatePtr predicate;  // kEdge

  static StreamPtr Now();
  static StreamPtr AtTimer(Value time);
  static StreamPtr Timer(Value base, Value interval);
  static StreamPtr Monitor(QueryPtr query, std::vector<std::string> on_new = {});
  static StreamPtr Edge(StreamPtr inner, PredicatePtr predicate);
};

bool operator==(const Stream &a, const Stream &b);
bool SameStream(const StreamPtr &a, const StreamPtr &b);

enum class ActionKind { kNotify, kInvocation };

struct Action {
  ActionKind kind = ActionKind::kNotify;
  Invocation invocation;

  static Action Notify() { return Action{}; }
  static Action Invoke(Invocation invocation) {
    return Action{ActionKind::kInvocation, std::move(invocation)};
  }

  friend bool operator==(const Action &a, const Action &b) {
    if (a.kind != b.kind) return false;
    return a.kind == ActionKind::kNotify || a.invocation == b.invocation;
  }
};

struct Program {
  StreamPtr stream;
  QueryPtr query;  // may be null
  Action action;

  friend bool operator==(const Program &a, const Program &b) {
    return SameStream(a.stream, b.stream) && SameQuery(a.query, b.query) &&
           a.action == b.action;
  }
  friend bool operator!=(const Program &a, const Program &b) {
    return !(a == b);
  }
};

// Every function invocation in program order (stream, query, action), not
// counting get-predicate functions.
std::vector<const Invocation *> Invocations(const Program &program);
void CollectInvocations(const QueryPtr &query,
                        std::vector<const Invocation *> *out);
void CollectInvocations(const StreamPtr &stream,
                        std::vector<const Invocation *> *out);
// Every invoked function including get-predicates, in program order.
std::vector<FunctionRef> AllFunctions(const Program &program);
// The leftmost invocation of a query.
const Invocation &LeftmostInvocation(const Query &query);

// Rewrites nodes bottom-up, keeping annotations. `value` sees every
// literal (binding values, comparison values, timer values) together with
// the parameter it belongs to; `binding` then sees every keyword binding,
// including join `on` bindings. Either callback may be empty.
struct Rewriter {
  std::function<Value(const Value &, std::string_view param)> value;
  std::function<void(Binding *)> binding;
};

PredicatePtr Rewrite(const PredicatePtr &predicate, const Rewriter &rewriter);
QueryPtr Rewrite(const QueryPtr &query, const Rewriter &rewriter);
StreamPtr Rewrite(const StreamPtr &stream, const Rewriter &rewriter);
Action Rewrite(const Action &action, const Rewriter &rewriter);
Program Rewrite(const Program &program, const Rewriter &rewriter);

}  // namespace vapl

#endif  // VAPL_AST_H_
