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

// Static checking: function resolution through inheritance, keyword
// binding, output-reference resolution (rightmost producer wins),
// monitor/list/aggregation constraints and value typing.
//
// Invocations are numbered in program order: stream, query, action; the
// left operand of a join before the right one. Get-predicate functions are
// not numbered.

#ifndef VAPL_TYPECHECK_H_
#define VAPL_TYPECHECK_H_

#include <map>
#include <string>
#include <vector>

#include "vapl/ast.h"
#include "vapl/error.h"
#include "vapl/library.h"

namespace vapl {

struct OutputInfo {
  std::string name;
  TypeExpr type;
  int source = -1;  // invocation index
};

struct TypecheckOptions {
  // Types of template placeholders that may appear as values.
  std::map<std::string, TypeExpr, std::less<>> placeholder_types;
};

struct TypedProgram {
  Program program;  // annotated copy
  std::vector<Diagnostic> warnings;
  int invocation_count = 0;
};

Checked<TypedProgram> Typecheck(const Program &program, const Library &library,
                                const TypecheckOptions &options = {});

// Checks a query on its own, as a template fragment. Output references
// may only point inside the fragment. On success `outputs` receives the
// query's visible outputs.
Checked<QueryPtr> TypecheckQuery(const QueryPtr &query, const Library &library,
                                 const TypecheckOptions &options = {},
                                 std::vector<OutputInfo> *outputs = nullptr);

// Output parameters visible to a consumer of the query: every output of
// every invocation (left to right), or the single aggregated value.
// Unknown functions contribute nothing.
std::vector<OutputInfo> QueryOutputs(const Query &query,
                                     const Library &library);
std::vector<OutputInfo> StreamOutputs(const Stream &stream,
                                      const Library &library);

// The rightmost entry with this name, or nullptr.
const OutputInfo *ResolveOutput(const std::vector<OutputInfo> &scope,
                                std::string_view name);

// Every invocation of the query is a monitorable function.
bool IsMonitorableQuery(const Query &query, const Library &library);
// The query returns a list: it contains a list function outside any
// aggregation.
bool IsListQuery(const Query &query, const Library &library);

// Whether a value of `from` may be passed into a parameter of type `to`.
bool IsPassable(const TypeExpr &from, const TypeExpr &to);

}  // namespace vapl

#endif  // VAPL_TYPECHECK_H_
