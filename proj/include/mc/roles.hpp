/*  Copyright 2026 The mclang authors.

    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License. */

#pragma once

#include <cctype>
#include <limits>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mc/diag.hpp"
#include "mc/grammar.hpp"

namespace mc {

enum class Multiplicity { One, Optional, List };

inline const char* to_string(Multiplicity m) {
  switch (m) {
    case Multiplicity::One: return "one";
    case Multiplicity::Optional: return "optional";
    default: return "list";
  }
}

inline std::string lower_first(std::string s) {
  if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

namespace roles {

enum class Kind { StringAttr, BoolAttr, Composition };

// One occurrence of a role-producing element inside a production body,
// together with the multiplicity implied by its position: list under any
// Repetition, optional under Optional or Alternation, else one.
struct Occurrence {
  std::string role;
  Kind kind = Kind::StringAttr;
  std::string target;  // child class for compositions
  Multiplicity mult = Multiplicity::One;
  Span span;
};

namespace detail {

inline void collect(const SyntaxExpr& e, bool under_rep, bool under_opt_or_alt,
                    std::vector<Occurrence>& out) {
  auto position_mult = [&]() {
    if (under_rep) return Multiplicity::List;
    if (under_opt_or_alt) return Multiplicity::Optional;
    return Multiplicity::One;
  };
  if (auto* tr = std::get_if<TokenRef>(&e.node)) {
    if (tr->label) {
      out.push_back({*tr->label, Kind::StringAttr, "", position_mult(), e.span});
    }
  } else if (auto* nt = std::get_if<NonterminalRef>(&e.node)) {
    std::string role = nt->label ? *nt->label : lower_first(nt->target);
    out.push_back({std::move(role), Kind::Composition, nt->target, position_mult(), e.span});
  } else if (auto* cf = std::get_if<ConstantFlag>(&e.node)) {
    // Booleans default to false and matches set true idempotently, so the
    // positional multiplicity is irrelevant; they always derive a plain flag.
    out.push_back({cf->label, Kind::BoolAttr, "", Multiplicity::One, e.span});
  } else if (auto* seq = std::get_if<Sequence>(&e.node)) {
    for (const auto& item : seq->items) collect(*item, under_rep, under_opt_or_alt, out);
  } else if (auto* alt = std::get_if<Alternation>(&e.node)) {
    for (const auto& a : alt->alts) collect(*a, under_rep, true, out);
  } else if (auto* rep = std::get_if<Repetition>(&e.node)) {
    collect(*rep->inner, true, under_opt_or_alt, out);
  } else if (auto* opt = std::get_if<OptionalExpr>(&e.node)) {
    collect(*opt->inner, under_rep, true, out);
  }
}

constexpr int kUnbounded = std::numeric_limits<int>::max();

// Maximum number of times `role` can be bound along any single parse of the
// expression: sums over sequences, maxima over alternatives.
inline int max_count(const SyntaxExpr& e, const std::string& role) {
  if (auto* tr = std::get_if<TokenRef>(&e.node)) {
    return (tr->label && *tr->label == role) ? 1 : 0;
  }
  if (auto* nt = std::get_if<NonterminalRef>(&e.node)) {
    std::string r = nt->label ? *nt->label : lower_first(nt->target);
    return r == role ? 1 : 0;
  }
  if (std::get_if<ConstantFlag>(&e.node)) {
    return 0;  // flag writes are idempotent
  }
  if (auto* seq = std::get_if<Sequence>(&e.node)) {
    int total = 0;
    for (const auto& item : seq->items) {
      int c = max_count(*item, role);
      if (c == kUnbounded || total == kUnbounded) return kUnbounded;
      total += c;
    }
    return total;
  }
  if (auto* alt = std::get_if<Alternation>(&e.node)) {
    int best = 0;
    for (const auto& a : alt->alts) best = std::max(best, max_count(*a, role));
    return best;
  }
  if (auto* rep = std::get_if<Repetition>(&e.node)) {
    return max_count(*rep->inner, role) > 0 ? kUnbounded : 0;
  }
  const auto& opt = std::get<OptionalExpr>(e.node);
  return max_count(*opt.inner, role);
}

}  // namespace detail

inline std::vector<Occurrence> collect_occurrences(const Production& p) {
  std::vector<Occurrence> out;
  detail::collect(*p.body, false, false, out);
  return out;
}

// A role after merging all of its occurrences. Multiple references merge into
// a single role: list if any occurrence is list, else optional.
struct Binding {
  std::string role;
  Kind kind = Kind::StringAttr;
  std::string target;
  Multiplicity mult = Multiplicity::One;
  Span span;  // first occurrence
};

struct MergeResult {
  std::vector<Binding> bindings;        // role declaration order (first occurrence)
  std::vector<Diagnostic> diagnostics;  // E-GRM-014 incompatibilities
};

inline MergeResult merge_roles(const Production& p) {
  MergeResult result;
  auto occurrences = collect_occurrences(p);
  std::map<std::string, size_t> by_role;
  std::map<std::string, int> occurrence_count;
  for (const auto& occ : occurrences) {
    ++occurrence_count[occ.role];
    auto it = by_role.find(occ.role);
    if (it == by_role.end()) {
      by_role[occ.role] = result.bindings.size();
      result.bindings.push_back({occ.role, occ.kind, occ.target, occ.mult, occ.span});
      continue;
    }
    Binding& b = result.bindings[it->second];
    if (b.kind != occ.kind || (b.kind == Kind::Composition && b.target != occ.target)) {
      result.diagnostics.push_back(Diagnostic::error(
          "E-GRM-014",
          "conflicting uses of role '" + occ.role + "' in production '" + p.name + "'",
          occ.span));
      continue;
    }
    if (b.kind != Kind::BoolAttr) {
      b.mult = (b.mult == Multiplicity::List || occ.mult == Multiplicity::List)
                   ? Multiplicity::List
                   : Multiplicity::Optional;
    }
  }
  // A role that can be bound more than once in a single parse needs list
  // multiplicity; anything else would overflow its storage.
  for (auto& b : result.bindings) {
    if (b.kind == Kind::BoolAttr || b.mult == Multiplicity::List) continue;
    if (detail::max_count(*p.body, b.role) > 1) {
      result.diagnostics.push_back(Diagnostic::error(
          "E-GRM-014",
          "role '" + b.role + "' in production '" + p.name +
              "' can match more than once on a single path but is not a list",
          b.span));
    }
  }
  return result;
}

}  // namespace roles
}  // namespace mc
