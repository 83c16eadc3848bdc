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

// Canonical form of typed programs, used for training targets and
// exact-match evaluation.
//
// A canonical program has bindings sorted by parameter name, at most one
// filter per query node with its predicate in sorted conjunctive normal
// form, every clause attached to the smallest join subtree producing all
// the outputs it reads, and the operands of independent joins in lexical
// order.

#ifndef VAPL_CANONICAL_H_
#define VAPL_CANONICAL_H_

#include <cstdint>
#include <random>
#include <vector>

#include "vapl/ast.h"
#include "vapl/library.h"
#include "vapl/typecheck.h"

namespace vapl {

// Predicates whose normal form exceeds this many clauses are rejected.
constexpr int kMaxCnfClauses = 64;

struct CanonicalOptions {
  // When false, keyword bindings keep their current order.
  bool sort_bindings = true;
  TypecheckOptions typecheck;
};

// Sorted CNF with duplicate, tautological and subsumed clauses removed.
// Throws ValueError when the CNF grows past kMaxCnfClauses.
PredicatePtr SimplifyPredicate(const PredicatePtr &predicate);

// Throws ValueError if the input does not typecheck after rewriting, which
// cannot happen for the output of Typecheck.
TypedProgram Canonicalize(const TypedProgram &program, const Library &library,
                          const CanonicalOptions &options = {});

bool IsCanonical(const TypedProgram &program, const Library &library,
                 const CanonicalOptions &options = {});

// Canonical forms are token-identical.
bool Equivalent(const TypedProgram &a, const TypedProgram &b,
                const Library &library);

// Distinct atoms (comparisons and get-predicates) in first-occurrence order.
std::vector<PredicatePtr> PredicateAtoms(const PredicatePtr &predicate);

// Value of the predicate under every assignment to `atoms`; bit j of the
// row index is the value of atoms[j]. Atoms not in the list are an error.
// At most 12 atoms.
std::vector<bool> PredicateTruthTable(const PredicatePtr &predicate,
                                      const std::vector<PredicatePtr> &atoms);

// Randomly permutes the keyword bindings of every invocation.
Program ShuffleBindings(const Program &program, std::mt19937_64 &rng);

}  // namespace vapl

#endif  // VAPL_CANONICAL_H_
