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

#include "mpbt/lp_format.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "mpbt/error.h"

namespace mpbt {

namespace {

constexpr int kTermsPerLine = 6;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void WriteTerms(std::ostream& out, const std::vector<LinearTerm>& terms) {
  int on_line = 0;
  for (const LinearTerm& t : terms) {
    if (on_line == kTermsPerLine) {
      out << "\n   ";
      on_line = 0;
    }
    out << ' ' << (t.coefficient < 0 ? "- " : "+ ") << Num(std::abs(t.coefficient)) << ' '
        << t.variable;
    ++on_line;
  }
  if (terms.empty()) out << " 0";
}

const char* SenseText(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return "<=";
    case Sense::kGreaterEqual: return ">=";
    case Sense::kEqual: return "=";
  }
  return "=";
}

[[noreturn]] void Fail(const std::string& what) {
  throw Error(ErrorCode::kParseError, what);
}

bool IsNumber(const std::string& tok, double* value) {
  if (tok.empty()) return false;
  const char c = tok[0];
  if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '+' || c == '-')) {
    return false;
  }
  if (tok == "inf" || tok == "+inf") {
    *value = std::numeric_limits<double>::infinity();
    return true;
  }
  if (tok == "-inf") {
    *value = -std::numeric_limits<double>::infinity();
    return true;
  }
  std::size_t used = 0;
  try {
    *value = std::stod(tok, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == tok.size();
}

bool IsSense(const std::string& tok, Sense* sense) {
  if (tok == "<=" || tok == "<" || tok == "=<") {
    *sense = Sense::kLessEqual;
  } else if (tok == ">=" || tok == ">" || tok == "=>") {
    *sense = Sense::kGreaterEqual;
  } else if (tok == "=") {
    *sense = Sense::kEqual;
  } else {
    return false;
  }
  return true;
}

enum class Section { kNone, kObjective, kConstraints, kBounds, kBinary, kGeneral, kEnd };

Section SectionOf(const std::string& line) {
  std::string lower;
  for (char c : line) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (lower == "minimize" || lower == "minimum" || lower == "min") return Section::kObjective;
  if (lower == "subject to" || lower == "such that" || lower == "st" || lower == "s.t.")
    return Section::kConstraints;
  if (lower == "bounds" || lower == "bound") return Section::kBounds;
  if (lower == "binary" || lower == "binaries" || lower == "bin") return Section::kBinary;
  if (lower == "general" || lower == "generals") return Section::kGeneral;
  if (lower == "end") return Section::kEnd;
  return Section::kNone;
}

std::vector<std::string> Tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(cur);
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string op(1, c);
      if (i + 1 < text.size() && (text[i + 1] == '=' || text[i + 1] == '<' || text[i + 1] == '>')) {
        op.push_back(text[++i]);
      }
      tokens.push_back(op);
    } else if ((c == '+' || c == '-') && cur.empty()) {
      // Sign glued to a number stays with it; a lone sign is its own token.
      if (i + 1 < text.size() && !std::isspace(static_cast<unsigned char>(text[i + 1]))) {
        cur.push_back(c);
      } else {
        tokens.push_back(std::string(1, c));
      }
    } else if (c == ':') {
      cur.push_back(c);
      flush();
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return tokens;
}

// Parses "<terms>" from tokens[pos..end) until a sense token or the end.
std::vector<LinearTerm> ParseTerms(const std::vector<std::string>& tokens, std::size_t& pos,
                                   std::size_t end) {
  std::vector<LinearTerm> terms;
  double sign = 1.0;
  double coef = 1.0;
  bool have_coef = false;
  Sense ignored;
  while (pos < end && !IsSense(tokens[pos], &ignored)) {
    const std::string& tok = tokens[pos++];
    double value;
    if (tok == "+") {
      sign = 1.0;
    } else if (tok == "-") {
      sign = -1.0;
    } else if (IsNumber(tok, &value)) {
      coef = value;
      have_coef = true;
    } else {
      terms.push_back({tok, sign * (have_coef ? coef : 1.0)});
      sign = 1.0;
      coef = 1.0;
      have_coef = false;
    }
  }
  if (have_coef && coef != 0.0) Fail("constant terms are not supported");
  return terms;
}

}  // namespace

void WriteLp(std::ostream& out, const LinearProgram& program) {
  out << "\\ written by mpbt\n";
  out << "Minimize\n obj:";
  WriteTerms(out, program.objective);
  out << "\nSubject To\n";
  for (const LinearConstraint& c : program.constraints) {
    out << ' ' << c.name << ':';
    WriteTerms(out, c.terms);
    out << ' ' << SenseText(c.sense) << ' ' << Num(c.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const Variable& v : program.variables) {
    if (v.has_upper && v.lower == v.upper) {
      out << ' ' << v.name << " = " << Num(v.lower) << '\n';
    } else if (v.has_upper) {
      out << ' ' << Num(v.lower) << " <= " << v.name << " <= " << Num(v.upper) << '\n';
    } else if (v.lower == -std::numeric_limits<double>::infinity()) {
      out << ' ' << v.name << " free\n";
    } else {
      out << ' ' << v.name << " >= " << Num(v.lower) << '\n';
    }
  }
  bool any_binary = false;
  int on_line = 0;
  for (const Variable& v : program.variables) {
    if (v.type != VariableType::kBinary) continue;
    if (!any_binary) out << "Binary\n";
    any_binary = true;
    out << ' ' << v.name;
    if (++on_line == 10) {
      out << '\n';
      on_line = 0;
    }
  }
  if (any_binary && on_line != 0) out << '\n';
  out << "End\n";
}

LinearProgram ReadLp(std::istream& in) {
  std::map<Section, std::string> text;
  std::vector<std::string> constraint_lines;
  Section section = Section::kNone;
  std::string line;
  std::string pending;
  auto flush_constraint = [&] {
    if (!pending.empty()) constraint_lines.push_back(pending);
    pending.clear();
  };
  while (std::getline(in, line)) {
    if (const auto bs = line.find('\\'); bs != std::string::npos) line.erase(bs);
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t\r"));
    trimmed.erase(trimmed.find_last_not_of(" \t\r") + 1);
    if (trimmed.empty()) continue;
    const Section next = SectionOf(trimmed);
    if (next != Section::kNone) {
      flush_constraint();
      section = next;
      if (section == Section::kEnd) break;
      continue;
    }
    if (section == Section::kNone) Fail("content before the objective section");
    if (section == Section::kConstraints) {
      // A label starts a new row; otherwise the line continues the row.
      const auto colon = trimmed.find(':');
      if (colon != std::string::npos && !pending.empty()) flush_constraint();
      pending += ' ' + trimmed;
    } else {
      text[section] += ' ' + trimmed;
    }
  }
  flush_constraint();
  if (section != Section::kEnd) Fail("missing End");

  LinearProgram program;
  std::unordered_map<std::string, std::size_t> index;
  auto declare = [&](const std::string& name) -> Variable& {
    auto [it, inserted] = index.emplace(name, program.variables.size());
    if (inserted) program.variables.push_back(Variable{name});
    return program.variables[it->second];
  };

  {
    const std::vector<std::string> tokens = Tokenize(text[Section::kObjective]);
    std::size_t pos = 0;
    if (pos < tokens.size() && tokens[pos].back() == ':') ++pos;
    program.objective = ParseTerms(tokens, pos, tokens.size());
    if (pos != tokens.size()) Fail("unexpected token in objective");
    for (const LinearTerm& t : program.objective) declare(t.variable);
  }

  for (const std::string& row : constraint_lines) {
    const std::vector<std::string> tokens = Tokenize(row);
    std::size_t pos = 0;
    LinearConstraint c;
    if (!tokens.empty() && tokens[0].back() == ':') {
      c.name = tokens[0].substr(0, tokens[0].size() - 1);
      pos = 1;
    } else {
      c.name = "c" + std::to_string(program.constraints.size() + 1);
    }
    c.terms = ParseTerms(tokens, pos, tokens.size());
    if (pos + 2 != tokens.size() || !IsSense(tokens[pos], &c.sense) ||
        !IsNumber(tokens[pos + 1], &c.rhs)) {
      Fail("malformed constraint '" + c.name + "'");
    }
    for (const LinearTerm& t : c.terms) declare(t.variable);
    program.constraints.push_back(std::move(c));
  }

  std::vector<std::string> bound_order;
  {
    const std::vector<std::string> tokens = Tokenize(text[Section::kBounds]);
    std::size_t pos = 0;
    while (pos < tokens.size()) {
      double lo;
      Sense s;
      if (IsNumber(tokens[pos], &lo)) {
        // lo <= var [<= hi]
        if (pos + 2 >= tokens.size() || !IsSense(tokens[pos + 1], &s)) Fail("malformed bound");
        Variable& v = declare(tokens[pos + 2]);
        bound_order.push_back(v.name);
        v.lower = lo;
        pos += 3;
        double hi;
        if (pos + 1 < tokens.size() && IsSense(tokens[pos], &s) && IsNumber(tokens[pos + 1], &hi)) {
          v.upper = hi;
          v.has_upper = true;
          pos += 2;
        }
        continue;
      }
      Variable& v = declare(tokens[pos]);
      bound_order.push_back(v.name);
      ++pos;
      if (pos < tokens.size() && tokens[pos] == "free") {
        v.lower = -std::numeric_limits<double>::infinity();
        ++pos;
        continue;
      }
      double value;
      if (pos + 1 >= tokens.size() || !IsSense(tokens[pos], &s) || !IsNumber(tokens[pos + 1], &value)) {
        Fail("malformed bound for " + v.name);
      }
      pos += 2;
      if (s == Sense::kEqual) {
        v.lower = v.upper = value;
        v.has_upper = true;
      } else if (s == Sense::kGreaterEqual) {
        v.lower = value;
      } else {
        v.upper = value;
        v.has_upper = true;
      }
    }
  }
  for (const std::string& name : Tokenize(text[Section::kBinary])) {
    Variable& v = declare(name);
    v.type = VariableType::kBinary;
  }
  for (const std::string& name : Tokenize(text[Section::kGeneral])) declare(name);

  // Variables listed under Bounds define the declaration order.
  std::unordered_map<std::string, std::size_t> rank;
  for (const std::string& name : bound_order) rank.emplace(name, rank.size());
  std::stable_sort(program.variables.begin(), program.variables.end(),
                   [&](const Variable& a, const Variable& b) {
                     const auto ra = rank.find(a.name), rb = rank.find(b.name);
                     const std::size_t ka = ra == rank.end() ? rank.size() : ra->second;
                     const std::size_t kb = rb == rank.end() ? rank.size() : rb->second;
                     return ka < kb;
                   });
  return program;
}

void WriteLpFile(const std::string& path, const LinearProgram& program) {
  if (path.empty()) throw Error(ErrorCode::kIoError, "empty output path");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path);
  WriteLp(out, program);
  if (!out) throw Error(ErrorCode::kIoError, "write failed for " + path);
}

LinearProgram ReadLpFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  return ReadLp(in);
}

}  // namespace mpbt
