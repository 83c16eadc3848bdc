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

#include "vapl/ast.h"

#include <algorithm>
#include <array>

namespace vapl {

std::optional<FunctionRef> FunctionRef::FromToken(std::string_view token) {
  if (token.size() < 4 || token.front() != '@') return std::nullopt;
  auto dot = token.rfind('.');
  if (dot == std::string_view::npos || dot <= 1 || dot + 1 >= token.size()) {
    return std::nullopt;
  }
  FunctionRef ref;
  ref.class_name = std::string(token.substr(1, dot - 1));
  ref.function_name = std::string(token.substr(dot + 1));
  return ref;
}

bool SameBindings(const std::vector<Binding> &a,
                  const std::vector<Binding> &b) {
  if (a.size() != b.size()) return false;
  for (const auto &x : a) {
    auto it = std::find_if(b.begin(), b.end(),
                           [&](const Binding &y) { return y.name == x.name; });
    if (it == b.end() || !(*it == x)) return false;
  }
  return true;
}

const Binding *Invocation::FindBinding(std::string_view name) const {
  for (const auto &b : bindings) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

namespace {

constexpr std::array<std::pair<Operator, std::string_view>, 8> kOperators = {{
    {Operator::kEquals, "=="},
    {Operator::kGreater, ">"},
    {Operator::kLess, "<"},
    {Operator::kContains, "contains"},
    {Operator::kSubstr, "substr"},
    {Operator::kStartsWith, "starts_with"},
    {Operator::kEndsWith, "ends_with"},
    {Operator::kPrefixOf, "prefix_of"},
}};

constexpr std::array<std::pair<AggregateOp, std::string_view>, 5> kAggregates =
    {{
        {AggregateOp::kMax, "max"},
        {AggregateOp::kMin, "min"},
        {AggregateOp::kSum, "sum"},
        {AggregateOp::kAvg, "avg"},
        {AggregateOp::kCount, "count"},
    }};

}  // namespace

std::string_view OperatorToken(Operator op) {
  for (const auto &[o, t] : kOperators) {
    if (o == op) return t;
  }
  return "?";
}

std::optional<Operator> ParseOperator(std::string_view token) {
  for (const auto &[o, t] : kOperators) {
    if (t == token) return o;
  }
  return std::nullopt;
}

std::string_view AggregateOpName(AggregateOp op) {
  for (const auto &[o, t] : kAggregates) {
    if (o == op) return t;
  }
  return "?";
}

std::optional<AggregateOp> ParseAggregateOp(std::string_view name) {
  for (const auto &[o, t] : kAggregates) {
    if (t == name) return o;
  }
  return std::nullopt;
}

PredicatePtr Predicate::True() {
  static const PredicatePtr kTrue = std::make_shared<const Predicate>();
  return kTrue;
}

PredicatePtr Predicate::False() {
  static const PredicatePtr kFalse = [] {
    auto p = std::make_shared<Predicate>();
    p->kind = PredicateKind::kFalse;
    return PredicatePtr(p);
  }();
  return kFalse;
}

PredicatePtr Predicate::Not(PredicatePtr p) {
  auto out = std::make_shared<Predicate>();
  out->kind = PredicateKind::kNot;
  out->operands = {std::move(p)};
  return out;
}

PredicatePtr Predicate::And(PredicatePtr a, PredicatePtr b) {
  auto out = std::make_shared<Predicate>();
  out->kind = PredicateKind::kAnd;
  out->operands = {std::move(a), std::move(b)};
  return out;
}

PredicatePtr Predicate::Or(PredicatePtr a, PredicatePtr b) {
  auto out = std::make_shared<Predicate>();
  out->kind = PredicateKind::kOr;
  out->operands = {std::move(a), std::move(b)};
  return out;
}

PredicatePtr Predicate::Atom(std::string param, Operator op, Value value) {
  auto out = std::make_shared<Predicate>();
  out->kind = PredicateKind::kAtom;
  out->param = std::move(param);
  out->op = op;
  out->value = std::move(value);
  return out;
}

PredicatePtr Predicate::Get(Invocation invocation, PredicatePtr inner) {
  auto out = std::make_shared<Predicate>();
  out->kind = PredicateKind::kGet;
  out->invocation = std::move(invocation);
  out->operands = {std::move(inner)};
  return out;
}

bool operator==(const Predicate &a, const Predicate &b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PredicateKind::kTrue:
    case PredicateKind::kFalse:
      return true;
    case PredicateKind::kAtom:
      return a.param == b.param && a.op == b.op && a.value == b.value;
    case PredicateKind::kGet:
      if (!(a.invocation == b.invocation)) return false;
      break;
    default:
      break;
  }
  if (a.operands.size() != b.operands.size()) return false;
  for (size_t i = 0; i < a.operands.size(); ++i) {
    if (!SamePredicate(a.operands[i], b.operands[i])) return false;
  }
  return true;
}

bool SamePredicate(const PredicatePtr &a, const PredicatePtr &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

QueryPtr Query::Invoke(Invocation invocation) {
  auto q = std::make_shared<Query>();
  q->kind = QueryKind::kInvocation;
  q->invocation = std::move(invocation);
  return q;
}

QueryPtr Query::Filter(QueryPtr inner, PredicatePtr predicate) {
  auto q = std::make_shared<Query>();
  q->kind = QueryKind::kFilter;
  q->inner = std::move(inner);
  q->predicate = std::move(predicate);
  return q;
}

QueryPtr Query::Join(QueryPtr left, QueryPtr right, std::vector<Binding> on) {
  auto q = std::make_shared<Query>();
  q->kind = QueryKind::kJoin;
  q->inner = std::move(left);
  q->right = std::move(right);
  q->on = std::move(on);
  return q;
}

QueryPtr Query::Aggregate(AggregateOp op, std::string param, QueryPtr inner) {
  auto q = std::make_shared<Query>();
  q->kind = QueryKind::kAggregate;
  q->aggregate = op;
  q->aggregate_param = std::move(param);
  q->inner = std::move(inner);
  return q;
}

bool operator==(const Query &a, const Query &b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case QueryKind::kInvocation:
      return a.invocation == b.invocation;
    case QueryKind::kFilter:
      return SameQuery(a.inner, b.inner) &&
             SamePredicate(a.predicate, b.predicate);
    case QueryKind::kJoin:
      return SameQuery(a.inner, b.inner) && SameQuery(a.right, b.right) &&
             SameBindings(a.on, b.on);
    case QueryKind::kAggregate:
      return a.aggregate == b.aggregate &&
             a.aggregate_param == b.aggregate_param &&
             SameQuery(a.inner, b.inner);
  }
  return false;
}

bool SameQuery(const QueryPtr &a, const QueryPtr &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

StreamPtr Stream::Now() {
  static const StreamPtr kNow = std::make_shared<const Stream>();
  return kNow;
}

StreamPtr Stream::AtTimer(Value time) {
  auto s = std::make_shared<Stream>();
  s->kind = StreamKind::kAtTimer;
  s->time = std::move(time);
  return s;
}

StreamPtr Stream::Timer(Value base, Value interval) {
  auto s = std::make_shared<Stream>();
  s->kind = StreamKind::kTimer;
  s->base = std::move(base);
  s->interval = std::move(interval);
  return s;
}

StreamPtr Stream::Monitor(QueryPtr query, std::vector<std::string> on_new) {
  auto s = std::make_shared<Stream>();
  s->kind = StreamKind::kMonitor;
  s->query = std::move(query);
  s->on_new = std::move(on_new);
  return s;
}

StreamPtr Stream::Edge(StreamPtr inner, PredicatePtr predicate) {
  auto s = std::make_shared<Stream>();
  s->kind = StreamKind::kEdge;
  s->inner = std::move(inner);
  s->predicate = std::move(predicate);
  return s;
}

bool operator==(const Stream &a, const Stream &b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case StreamKind::kNow:
      return true;
    case StreamKind::kAtTimer:
      return a.time == b.time;
    case StreamKind::kTimer:
      return a.base == b.base && a.interval == b.interval;
    case StreamKind::kMonitor:
      return SameQuery(a.query, b.query) && a.on_new == b.on_new;
    case StreamKind::kEdge:
      return SameStream(a.inner, b.inner) &&
             SamePredicate(a.predicate, b.predicate);
  }
  return false;
}

bool SameStream(const StreamPtr &a, const StreamPtr &b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

void CollectInvocations(const QueryPtr &query,
                        std::vector<const Invocation *> *out) {
  if (!query) return;
  switch (query->kind) {
    case QueryKind::kInvocation:
      out->push_back(&query->invocation);
      break;
    case QueryKind::kFilter:
    case QueryKind::kAggregate:
      CollectInvocations(query->inner, out);
      break;
    case QueryKind::kJoin:
      CollectInvocations(query->inner, out);
      CollectInvocations(query->right, out);
      break;
  }
}

void CollectInvocations(const StreamPtr &stream,
                        std::vector<const Invocation *> *out) {
  if (!stream) return;
  if (stream->kind == StreamKind::kMonitor) {
    CollectInvocations(stream->query, out);
  } else if (stream->kind == StreamKind::kEdge) {
    CollectInvocations(stream->inner, out);
  }
}

std::vector<const Invocation *> Invocations(const Program &program) {
  std::vector<const Invocation *> out;
  CollectInvocations(program.stream, &out);
  CollectInvocations(program.query, &out);
  if (program.action.kind == ActionKind::kInvocation) {
    out.push_back(&program.action.invocation);
  }
  return out;
}

namespace {

void CollectPredicateFunctions(const PredicatePtr &p,
                               std::vector<FunctionRef> *out) {
  if (!p) return;
  if (p->kind == PredicateKind::kGet) out->push_back(p->invocation.function);
  for (const auto &child : p->operands) CollectPredicateFunctions(child, out);
}

void CollectFunctions(const QueryPtr &q, std::vector<FunctionRef> *out) {
  if (!q) return;
  switch (q->kind) {
    case QueryKind::kInvocation:
      out->push_back(q->invocation.function);
      break;
    case QueryKind::kFilter:
      CollectFunctions(q->inner, out);
      CollectPredicateFunctions(q->predicate, out);
      break;
    case QueryKind::kAggregate:
      CollectFunctions(q->inner, out);
      break;
    case QueryKind::kJoin:
      CollectFunctions(q->inner, out);
      CollectFunctions(q->right, out);
      break;
  }
}

void CollectFunctions(const StreamPtr &s, std::vector<FunctionRef> *out) {
  if (!s) return;
  if (s->kind == StreamKind::kMonitor) {
    CollectFunctions(s->query, out);
  } else if (s->kind == StreamKind::kEdge) {
    CollectFunctions(s->inner, out);
    CollectPredicateFunctions(s->predicate, out);
  }
}

}  // namespace

std::vector<FunctionRef> AllFunctions(const Program &program) {
  std::vector<FunctionRef> out;
  CollectFunctions(program.stream, &out);
  CollectFunctions(program.query, &out);
  if (program.action.kind == ActionKind::kInvocation) {
    out.push_back(program.action.invocation.function);
  }
  return out;
}

const Invocation &LeftmostInvocation(const Query &query) {
  const Query *q = &query;
  while (q->kind != QueryKind::kInvocation) q = q->inner.get();
  return q->invocation;
}

namespace {

void RewriteBindings(std::vector<Binding> *bindings, const Rewriter &rw) {
  for (auto &b : *bindings) {
    if (rw.value && !b.is_output_ref()) b.value = rw.value(b.literal(), b.name);
    if (rw.binding) rw.binding(&b);
  }
}

Invocation RewriteInvocation(const Invocation &inv, const Rewriter &rw) {
  Invocation out = inv;
  RewriteBindings(&out.bindings, rw);
  return out;
}

}  // namespace

PredicatePtr Rewrite(const PredicatePtr &predicate, const Rewriter &rw) {
  if (!predicate) return predicate;
  const Predicate &p = *predicate;
  switch (p.kind) {
    case PredicateKind::kTrue:
    case PredicateKind::kFalse:
      return predicate;
    default:
      break;
  }
  auto out = std::make_shared<Predicate>(p);
  for (auto &op : out->operands) op = Rewrite(op, rw);
  if (p.kind == PredicateKind::kAtom && rw.value) {
    out->value = rw.value(p.value, p.param);
  }
  if (p.kind == PredicateKind::kGet) {
    out->invocation = RewriteInvocation(p.invocation, rw);
  }
  return out;
}

QueryPtr Rewrite(const QueryPtr &query, const Rewriter &rw) {
  if (!query) return query;
  auto out = std::make_shared<Query>(*query);
  switch (query->kind) {
    case QueryKind::kInvocation:
      out->invocation = RewriteInvocation(query->invocation, rw);
      break;
    case QueryKind::kFilter:
      out->inner = Rewrite(query->inner, rw);
      out->predicate = Rewrite(query->predicate, rw);
      break;
    case QueryKind::kJoin:
      out->inner = Rewrite(query->inner, rw);
      out->right = Rewrite(query->right, rw);
      RewriteBindings(&out->on, rw);
      break;
    case QueryKind::kAggregate:
      out->inner = Rewrite(query->inner, rw);
      break;
  }
  return out;
}

StreamPtr Rewrite(const StreamPtr &stream, const Rewriter &rw) {
  if (!stream) return stream;
  auto out = std::make_shared<Stream>(*stream);
  switch (stream->kind) {
    case StreamKind::kNow:
      break;
    case StreamKind::kAtTimer:
      if (rw.value) out->time = rw.value(stream->time, "time");
      break;
    case StreamKind::kTimer:
      if (rw.value) {
        out->base = rw.value(stream->base, "base");
        out->interval = rw.value(stream->interval, "interval");
      }
      break;
    case StreamKind::kMonitor:
      out->query = Rewrite(stream->query, rw);
      break;
    case StreamKind::kEdge:
      out->inner = Rewrite(stream->inner, rw);
      out->predicate = Rewrite(stream->predicate, rw);
      break;
  }
  return out;
}

Action Rewrite(const Action &action, const Rewriter &rw) {
  if (action.kind == ActionKind::kNotify) return action;
  return Action::Invoke(RewriteInvocation(action.invocation, rw));
}

Program Rewrite(const Program &program, const Rewriter &rw) {
  Program out;
  out.stream = Rewrite(program.stream, rw);
  out.query = Rewrite(program.query, rw);
  out.action = Rewrite(program.action, rw);
  return out;
}

}  // namespace vapl
