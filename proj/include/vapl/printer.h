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

// Single-line human-readable rendering of programs. The output parses back
// with ParseProgram to a structurally equal program.

#ifndef VAPL_PRINTER_H_
#define VAPL_PRINTER_H_

#include <string>

#include "vapl/ast.h"
#include "vapl/library.h"
#include "vapl/value.h"

namespace vapl {

std::string Pretty(const Program &program);
std::string PrettyStream(const Stream &stream);
std::string PrettyQuery(const Query &query);
std::string PrettyAction(const Action &action);
std::string PrettyPredicate(const Predicate &predicate);
std::string PrettyInvocation(const Invocation &invocation);
std::string PrettyValue(const Value &value);

// Renders a signature as it appears in a class file.
std::string PrettySignature(const FunctionSignature &fn);

}  // namespace vapl

#endif  // VAPL_PRINTER_H_
