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

#include "vapl/canonical.h"

#include <algorithm>
#include <set>
#include <string>

#include "vapl/nn_syntax.h"
#include "vapl/printer.h"

namespace vapl {

namespace {

// ---------------------------------------------------------------------------
// Predicates

struct Literal {
  PredicatePtr atom;  // kAtom or kGet
  bool negated = false;
  std::string key;
};

using Clause = std::vector<Literal>;
using Cnf = std::vector<Clause>;

std::string AtomKey(const Predicate &p) {
  EmitOptions bare;
  bare.type_annotations = false;
  return JoinTokens(EmitNnPredicate(p, bare));
}

template <typename T>
int Cmp(const T &a, const T &b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

int CompareValues(const Value &a, const Value &b) {
  if (a.kind() != b.kind()) {
    return Cmp(static_cast<int>(a.kind()), static_cast<int>(b.kind()));
  }
  if (a.kind() == ValueKind::kNamedConst) {
    if (int c = Cmp(static_cast<int>(a.named_kind()),
                    static_cast<int>(b.named_kind()))) {
      return c;
    }
    return Cmp(a.named_index(), b.named_index());
  }
  if (a.kind() == ValueKind::kNumber) return Cmp(a.number(), b.number());
  return Cmp(JoinTokens(EmitNnValue(a)), JoinTokens(EmitNnValue(b)));
}

int CompareLiterals(const Literal &a, const Literal &b) {
  const Predicate &x = *a.atom;
  const Predicate &y = *b.atom;
  if (x.kind != y.kind) {
    return Cmp(static_cast<int>(x.kind), static_cast<int>(y.kind));
  }
  if (x.kind == PredicateKind::kAtom) {
    if (int c = Cmp(x.param, y.param)) return c;
    if (int c = Cmp(static_cast<int>(x.op), static_cast<int>(y.op))) return c;
    if (int c = CompareValues(x.value, y.value)) return c;
  } else if (int c = Cmp(a.key, b.key)) {
    return c;
  }
  return Cmp(a.negated, b.negated);
}

bool LiteralLess(const Literal &a, const Literal &b) {
  return CompareLiterals(a, b) < 0;
}

int CompareClauses(const Clause &a, const Clause &b) {
  for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (int c = CompareLiterals(a[i], b[i])) return c;
  }
  return Cmp(a.size(), b.size());
}

bool SameClause(const Clause &a, const Clause &b) {
  return CompareClauses(a, b) == 0;
}

const Cnf kFalseCnf = {Clause{}};

// Sorts and deduplicates; drops tautologies and subsumed clauses.
Cnf Normalize(Cnf cnf) {
  Cnf out;
  for (auto &clause : cnf) {
    std::sort(clause.begin(), clause.end(), LiteralLess);
    clause.erase(std::unique(clause.begin(), clause.end(),
                             [](const Literal &a, const Literal &b) {
                               return CompareLiterals(a, b) == 0;
                             }),
                 clause.end());
    bool tautology = false;
    for (size_t i = 0; i + 1 < clause.size() && !tautology; ++i) {
      for (size_t j = i + 1; j < clause.size(); ++j) {
        if (clause[i].key == clause[j].key &&
            clause[i].negated != clause[j].negated) {
          tautology = true;
          break;
        }
      }
    }
    if (tautology) continue;
    if (clause.empty()) return kFalseCnf;
    out.push_back(std::move(clause));
  }
  std::sort(out.begin(), out.end(), [](const Clause &a, const Clause &b) {
    return CompareClauses(a, b) < 0;
  });
  out.erase(std::unique(out.begin(), out.end(), SameClause), out.end());
  Cnf kept;
  for (size_t i = 0; i < out.size(); ++i) {
    bool subsumed = false;
    for (size_t j = 0; j < out.size() && !subsumed; ++j) {
      if (i == j || out[j].size() >= out[i].size()) continue;
      subsumed = std::includes(out[i].begin(), out[i].end(), out[j].begin(),
                               out[j].end(), LiteralLess);
    }
    if (!subsumed) kept.push_back(out[i]);
  }
  for (size_t i = 0; i < kept.size(); ++i) {
    for (size_t j = i + 1; j < kept.size(); ++j) {
      if (kept[i].size() == 1 && kept[j].size() == 1 &&
          kept[i][0].key == kept[j][0].key &&
          kept[i][0].negated != kept[j][0].negated) {
        return kFalseCnf;
      }
    }
  }
  if (static_cast<int>(kept.size()) > kMaxCnfClauses) {
    throw ValueError("predicate normal form exceeds " +
                     std::to_string(kMaxCnfClauses) + " clauses");
  }
  return kept;
}

Cnf Disjoin(const Cnf &a, const Cnf &b) {
  if (a.size() * b.size() > static_cast<size_t>(kMaxCnfClauses) * 16) {
    throw ValueError("predicate normal form exceeds " +
                     std::to_string(kMaxCnfClauses) + " clauses");
  }
  Cnf out;
  for (const auto &x : a) {
    for (const auto &y : b) {
      Clause c = x;
      c.insert(c.end(), y.begin(), y.end());
      out.push_back(std::move(c));
    }
  }
  return Normalize(std::move(out));
}

Cnf Conjoin(Cnf a, const Cnf &b) {
  a.insert(a.end(), b.begin(), b.end());
  return Normalize(std::move(a));
}

void SortBindings(std::vector<Binding> *bindings) {
  std::stable_sort(bindings->begin(), bindings->end(),
                   [](const Binding &a, const Binding &b) {
                     return a.name < b.name;
                   });
}

PredicatePtr FromCnf(const Cnf &cnf);
Cnf ToCnf(const PredicatePtr &p, bool negate, bool sort_bindings);

PredicatePtr Simplify(const PredicatePtr &p, bool sort_bindings) {
  return FromCnf(ToCnf(p, false, sort_bindings));
}

Literal MakeLiteral(const PredicatePtr &p, bool negate, bool sort_bindings) {
  PredicatePtr atom = p;
  if (p->kind == PredicateKind::kGet) {
    auto copy = std::make_shared<Predicate>(*p);
    if (sort_bindings) SortBindings(&copy->invocation.bindings);
    copy->operands[0] = Simplify(p->inner(), sort_bindings);
    atom = copy;
  }
  return Literal{atom, negate, AtomKey(*atom)};
}

Cnf ToCnf(const PredicatePtr &p, bool negate, bool sort_bindings) {
  switch (p->kind) {
    case PredicateKind::kTrue: return negate ? kFalseCnf : Cnf{};
    case PredicateKind::kFalse: return negate ? Cnf{} : kFalseCnf;
    case PredicateKind::kNot:
      return ToCnf(p->inner(), !negate, sort_bindings);
    case PredicateKind::kAnd:
    case PredicateKind::kOr: {
      Cnf a = ToCnf(p->operands[0], negate, sort_bindings);
      Cnf b = ToCnf(p->operands[1], negate, sort_bindings);
      const bool conjunction = (p->kind == PredicateKind::kAnd) != negate;
      return conjunction ? Conjoin(std::move(a), b) : Disjoin(a, b);
    }
    case PredicateKind::kAtom:
    case PredicateKind::kGet:
      return {Clause{MakeLiteral(p, negate, sort_bindings)}};
  }
  return {};
}

PredicatePtr FromCnf(const Cnf &cnf) {
  if (cnf.empty()) return Predicate::True();
  PredicatePtr out;
  for (const auto &clause : cnf) {
    if (clause.empty()) return Predicate::False();
    PredicatePtr disj;
    for (const auto &lit : clause) {
      PredicatePtr l = lit.negated ? Predicate::Not(lit.atom) : lit.atom;
      disj = disj ? Predicate::Or(disj, l) : l;
    }
    out = out ? Predicate::And(out, disj) : disj;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Queries

void CollectIndices(const Query &q, std::set<int> *out) {
  switch (q.kind) {
    case QueryKind::kInvocation: out->insert(q.invocation.index); break;
    case QueryKind::kFilter:
    case QueryKind::kAggregate: CollectIndices(*q.inner, out); break;
    case QueryKind::kJoin:
      CollectIndices(*q.left(), out);
      CollectIndices(*q.right, out);
      break;
  }
}

void CollectRefs(const Query &q, std::vector<OutputRef> *out) {
  auto add = [&](const std::vector<Binding> &bindings) {
    for (const auto &b : bindings) {
      if (b.is_output_ref()) out->push_back(b.output_ref());
    }
  };
  switch (q.kind) {
    case QueryKind::kInvocation: add(q.invocation.bindings); break;
    case QueryKind::kFilter:
    case QueryKind::kAggregate: CollectRefs(*q.inner, out); break;
    case QueryKind::kJoin:
      add(q.on);
      CollectRefs(*q.left(), out);
      CollectRefs(*q.right, out);
      break;
  }
}

std::set<int> ClauseSources(const Clause &clause) {
  std::set<int> s;
  for (const auto &lit : clause) {
    if (lit.atom->kind == PredicateKind::kAtom && lit.atom->source >= 0) {
      s.insert(lit.atom->source);
    }
  }
  return s;
}

bool Subset(const std::set<int> &a, const std::set<int> &b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

class Canonicalizer {
 public:
  Canonicalizer(const Library &library, const CanonicalOptions &options)
      : library_(library), options_(options) {}

  QueryPtr CanonQuery(const QueryPtr &q) {
    Cnf clauses;
    QueryPtr stripped = Strip(q, &clauses);
    return Attach(Commute(stripped), Normalize(std::move(clauses)));
  }

  StreamPtr CanonStream(const StreamPtr &s) {
    auto copy = std::make_shared<Stream>(*s);
    switch (s->kind) {
      case StreamKind::kMonitor: {
        copy->query = CanonQuery(s->query);
        std::sort(copy->on_new.begin(), copy->on_new.end());
        copy->on_new.erase(std::unique(copy->on_new.begin(), copy->on_new.end()),
                           copy->on_new.end());
        break;
      }
      case StreamKind::kEdge:
        copy->inner = CanonStream(s->inner);
        copy->predicate = Simplify(s->predicate, options_.sort_bindings);
        break;
      default: break;
    }
    return copy;
  }

  Invocation CanonInvocation(const Invocation &inv) {
    Invocation copy = inv;
    if (options_.sort_bindings) SortBindings(&copy.bindings);
    return copy;
  }

 private:
  QueryPtr Strip(const QueryPtr &q, Cnf *clauses) {
    switch (q->kind) {
      case QueryKind::kFilter: {
        QueryPtr inner = Strip(q->inner, clauses);
        Cnf cnf = ToCnf(q->predicate, false, options_.sort_bindings);
        clauses->insert(clauses->end(), cnf.begin(), cnf.end());
        return inner;
      }
      case QueryKind::kJoin: {
        auto copy = std::make_shared<Query>(*q);
        copy->inner = Strip(q->left(), clauses);
        copy->right = Strip(q->right, clauses);
        if (options_.sort_bindings) SortBindings(&copy->on);
        return copy;
      }
      case QueryKind::kInvocation: {
        auto copy = std::make_shared<Query>(*q);
        copy->invocation = CanonInvocation(q->invocation);
        return copy;
      }
      case QueryKind::kAggregate: {
        auto copy = std::make_shared<Query>(*q);
        copy->inner = CanonQuery(q->inner);
        return copy;
      }
    }
    return q;
  }

  std::pair<std::string, std::string> OrderKey(const Query &q) {
    return {LeftmostInvocation(q).function.Token(), PrettyQuery(q)};
  }

  bool Independent(const Query &left, const Query &right) {
    std::set<int> left_indices;
    CollectIndices(left, &left_indices);
    std::set<std::string> left_names, right_names;
    for (const auto &o : QueryOutputs(left, library_)) left_names.insert(o.name);
    for (const auto &o : QueryOutputs(right, library_)) {
      if (left_names.count(o.name)) return false;
      right_names.insert(o.name);
    }
    std::vector<OutputRef> refs;
    CollectRefs(right, &refs);
    for (const auto &r : refs) {
      if (left_indices.count(r.source)) return false;
    }
    refs.clear();
    CollectRefs(left, &refs);
    for (const auto &r : refs) {
      if (right_names.count(r.name)) return false;
    }
    return true;
  }

  // `pinned`: the leftmost invocation receives join parameters and must
  // stay in place.
  QueryPtr Commute(const QueryPtr &q, bool pinned = false) {
    if (q->kind != QueryKind::kJoin) return q;
    QueryPtr left = Commute(q->left(), pinned);
    QueryPtr right = Commute(q->right, !q->on.empty());
    auto copy = std::make_shared<Query>(*q);
    if (!pinned && q->on.empty() && OrderKey(*right) < OrderKey(*left) &&
        Independent(*left, *right)) {
      std::swap(left, right);
    }
    copy->inner = left;
    copy->right = right;
    return copy;
  }

  QueryPtr Attach(const QueryPtr &q, const Cnf &clauses) {
    QueryPtr node = q;
    Cnf here;
    if (q->kind == QueryKind::kJoin) {
      std::set<int> left_set, right_set;
      CollectIndices(*q->left(), &left_set);
      CollectIndices(*q->right, &right_set);
      Cnf to_left, to_right;
      const int leftmost = LeftmostInvocation(*q).index;
      for (const auto &c : clauses) {
        std::set<int> s = ClauseSources(c);
        if (s.empty()) s.insert(leftmost);
        if (Subset(s, left_set)) {
          to_left.push_back(c);
        } else if (Subset(s, right_set)) {
          to_right.push_back(c);
        } else {
          here.push_back(c);
        }
      }
      auto copy = std::make_shared<Query>(*q);
      copy->inner = Attach(q->left(), to_left);
      copy->right = Attach(q->right, to_right);
      node = copy;
    } else {
      here = clauses;
    }
    if (here.empty()) return node;
    return Query::Filter(node, FromCnf(Normalize(std::move(here))));
  }

  const Library &library_;
  const CanonicalOptions &options_;
};

void ShuffleInvocation(Invocation *inv, std::mt19937_64 &rng) {
  std::shuffle(inv->bindings.begin(), inv->bindings.end(), rng);
}

PredicatePtr ShufflePredicate(const PredicatePtr &p, std::mt19937_64 &rng) {
  if (p->kind == PredicateKind::kAtom || p->kind == PredicateKind::kTrue ||
      p->kind == PredicateKind::kFalse) {
    return p;
  }
  auto copy = std::make_shared<Predicate>(*p);
  if (p->kind == PredicateKind::kGet) ShuffleInvocation(&copy->invocation, rng);
  for (auto &op : copy->operands) op = ShufflePredicate(op, rng);
  return copy;
}

QueryPtr ShuffleQuery(const QueryPtr &q, std::mt19937_64 &rng) {
  auto copy = std::make_shared<Query>(*q);
  switch (q->kind) {
    case QueryKind::kInvocation: ShuffleInvocation(&copy->invocation, rng); break;
    case QueryKind::kFilter:
      copy->inner = ShuffleQuery(q->inner, rng);
      copy->predicate = ShufflePredicate(q->predicate, rng);
      break;
    case QueryKind::kJoin:
      copy->inner = ShuffleQuery(q->left(), rng);
      copy->right = ShuffleQuery(q->right, rng);
      std::shuffle(copy->on.begin(), copy->on.end(), rng);
      break;
    case QueryKind::kAggregate:
      copy->inner = ShuffleQuery(q->inner, rng);
      break;
  }
  return copy;
}

StreamPtr ShuffleStream(const StreamPtr &s, std::mt19937_64 &rng) {
  auto copy = std::make_shared<Stream>(*s);
  if (s->kind == StreamKind::kMonitor) copy->query = ShuffleQuery(s->query, rng);
  if (s->kind == StreamKind::kEdge) {
    copy->inner = ShuffleStream(s->inner, rng);
    copy->predicate = ShufflePredicate(s->predicate, rng);
  }
  return copy;
}

bool EvalPredicate(const Predicate &p, const std::vector<std::string> &keys,
                   uint32_t row) {
  switch (p.kind) {
    case PredicateKind::kTrue: return true;
    case PredicateKind::kFalse: return false;
    case PredicateKind::kNot: return !EvalPredicate(*p.inner(), keys, row);
    case PredicateKind::kAnd:
      return EvalPredicate(*p.operands[0], keys, row) &&
             EvalPredicate(*p.operands[1], keys, row);
    case PredicateKind::kOr:
      return EvalPredicate(*p.operands[0], keys, row) ||
             EvalPredicate(*p.operands[1], keys, row);
    case PredicateKind::kAtom:
    case PredicateKind::kGet: {
      const std::string key = MakeLiteral(
          std::make_shared<Predicate>(p), false, true).key;
      auto it = std::find(keys.begin(), keys.end(), key);
      if (it == keys.end()) throw ValueError("atom not in list: " + key);
      return (row >> (it - keys.begin())) & 1;
    }
  }
  return false;
}

void CollectAtoms(const PredicatePtr &p, std::vector<PredicatePtr> *out,
                  std::set<std::string> *seen) {
  switch (p->kind) {
    case PredicateKind::kAtom:
    case PredicateKind::kGet:
      if (seen->insert(MakeLiteral(p, false, true).key).second) {
        out->push_back(p);
      }
      return;
    default:
      for (const auto &op : p->operands) CollectAtoms(op, out, seen);
  }
}

}  // namespace

PredicatePtr SimplifyPredicate(const PredicatePtr &predicate) {
  return Simplify(predicate, true);
}

TypedProgram Canonicalize(const TypedProgram &typed, const Library &library,
                          const CanonicalOptions &options) {
  Canonicalizer c(library, options);
  Program p;
  p.stream = c.CanonStream(typed.program.stream);
  if (typed.program.query) p.query = c.CanonQuery(typed.program.query);
  p.action = typed.program.action;
  if (p.action.kind == ActionKind::kInvocation) {
    p.action.invocation = c.CanonInvocation(p.action.invocation);
  }
  auto result = Typecheck(p, library, options.typecheck);
  if (!result.ok()) {
    throw ValueError("canonical form does not typecheck: " +
                     result.diagnostics().front().ToString());
  }
  return std::move(result).value();
}

bool IsCanonical(const TypedProgram &program, const Library &library,
                 const CanonicalOptions &options) {
  return EmitNn(Canonicalize(program, library, options).program) ==
         EmitNn(program.program);
}

bool Equivalent(const TypedProgram &a, const TypedProgram &b,
                const Library &library) {
  return EmitNn(Canonicalize(a, library).program) ==
         EmitNn(Canonicalize(b, library).program);
}

std::vector<PredicatePtr> PredicateAtoms(const PredicatePtr &predicate) {
  std::vector<PredicatePtr> out;
  std::set<std::string> seen;
  CollectAtoms(predicate, &out, &seen);
  return out;
}

std::vector<bool> PredicateTruthTable(const PredicatePtr &predicate,
                                      const std::vector<PredicatePtr> &atoms) {
  if (atoms.size() > 12) throw ValueError("truth table limited to 12 atoms");
  std::vector<std::string> keys;
  for (const auto &a : atoms) keys.push_back(MakeLiteral(a, false, true).key);
  const uint32_t rows = 1u << atoms.size();
  std::vector<bool> table(rows);
  for (uint32_t row = 0; row < rows; ++row) {
    table[row] = EvalPredicate(*predicate, keys, row);
  }
  return table;
}

Program ShuffleBindings(const Program &program, std::mt19937_64 &rng) {
  Program out = program;
  out.stream = ShuffleStream(program.stream, rng);
  if (program.query) out.query = ShuffleQuery(program.query, rng);
  if (out.action.kind == ActionKind::kInvocation) {
    ShuffleInvocation(&out.action.invocation, rng);
  }
  return out;
}

}  // namespace vapl
