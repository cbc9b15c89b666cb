// Copyright 2026 The mpbt Authors.
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

// Minimal linear-program container with a writer and reader for the LP text
// format understood by common MILP solvers (CPLEX, Gurobi, HiGHS, SCIP).
//
// Grammar emitted and accepted:
//
//   \ comment lines
//   Minimize
//    obj: <terms>
//   Subject To
//    <name>: <terms> (<= | >= | =) <rhs>
//   Bounds
//    <lo> <= <var> <= <hi>        (also "<var> = <v>", "<var> free")
//   Binary
//    <var> ...
//   End
//
// <terms> is a sequence of "+ <coef> <var>" / "- <coef> <var>" and may wrap
// over several lines. Variables are nonnegative and continuous unless listed
// under Bounds or Binary.

#ifndef MPBT_LP_FORMAT_H_
#define MPBT_LP_FORMAT_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace mpbt {

struct LinearTerm {
  std::string variable;
  double coefficient = 0.0;
  bool operator==(const LinearTerm&) const = default;
};

enum class Sense { kLessEqual, kGreaterEqual, kEqual };

struct LinearConstraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  bool operator==(const LinearConstraint&) const = default;
};

enum class VariableType { kContinuous, kBinary };

struct Variable {
  std::string name;
  VariableType type = VariableType::kContinuous;
  double lower = 0.0;
  double upper = 0.0;  // ignored unless has_upper
  bool has_upper = false;
  bool operator==(const Variable&) const = default;
};

struct LinearProgram {
  std::vector<Variable> variables;  // declaration order
  std::vector<LinearTerm> objective;
  std::vector<LinearConstraint> constraints;
  bool operator==(const LinearProgram&) const = default;
};

void WriteLp(std::ostream& out, const LinearProgram& program);
// Throws ParseError on malformed input.
LinearProgram ReadLp(std::istream& in);

// File variants; throw IoError when the path cannot be opened.
void WriteLpFile(const std::string& path, const LinearProgram& program);
LinearProgram ReadLpFile(const std::string& path);

}  // namespace mpbt

#endif  // MPBT_LP_FORMAT_H_
