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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mc/diag.hpp"
#include "mc/grammar.hpp"
#include "mc/roles.hpp"

namespace mc {
namespace check_detail {

// The effective rule environment: gm's productions plus inherited ones, with
// the most-derived definition winning on name clashes.
struct Env {
  std::vector<const Production*> productions;  // override-resolved, gm first
  std::set<std::string> classes;               // production and external names
  std::set<std::string> externals;
};

inline Env build_env(const GrammarModel& gm, const std::vector<GrammarModel>& supers) {
  Env env;
  std::set<std::string> seen;
  auto add = [&](const GrammarModel& g) {
    for (const auto& p : g.productions) {
      env.classes.insert(p.name);
      if (seen.insert(p.name).second) env.productions.push_back(&p);
    }
    for (const auto& e : g.externals) {
      env.classes.insert(e);
      if (!seen.count(e)) env.externals.insert(e);
    }
  };
  add(gm);
  for (const auto& s : supers) add(s);
  return env;
}

inline bool expr_nullable(const SyntaxExpr& e, const std::map<std::string, bool>& nullable) {
  if (std::get_if<Terminal>(&e.node) || std::get_if<TokenRef>(&e.node) ||
      std::get_if<ConstantFlag>(&e.node)) {
    return false;
  }
  if (auto* nt = std::get_if<NonterminalRef>(&e.node)) {
    auto it = nullable.find(nt->target);
    return it != nullable.end() && it->second;  // externals and unknowns: opaque
  }
  if (auto* seq = std::get_if<Sequence>(&e.node)) {
    for (const auto& item : seq->items) {
      if (!expr_nullable(*item, nullable)) return false;
    }
    return true;
  }
  if (auto* alt = std::get_if<Alternation>(&e.node)) {
    for (const auto& a : alt->alts) {
      if (expr_nullable(*a, nullable)) return true;
    }
    return false;
  }
  if (auto* rep = std::get_if<Repetition>(&e.node)) {
    return rep->min == 0 || expr_nullable(*rep->inner, nullable);
  }
  return true;  // OptionalExpr
}

inline std::map<std::string, bool> compute_nullable(const Env& env) {
  std::map<std::string, bool> nullable;
  for (const auto* p : env.productions) nullable[p->name] = false;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto* p : env.productions) {
      if (!nullable[p->name] && expr_nullable(*p->body, nullable)) {
        nullable[p->name] = true;
        changed = true;
      }
    }
  }
  return nullable;
}

// Nonterminals that can occur at the leftmost position of the expression,
// i.e. before any input is necessarily consumed.
inline void leftmost_targets(const SyntaxExpr& e, const std::map<std::string, bool>& nullable,
                             std::set<std::string>& out) {
  if (auto* nt = std::get_if<NonterminalRef>(&e.node)) {
    out.insert(nt->target);
  } else if (auto* seq = std::get_if<Sequence>(&e.node)) {
    for (const auto& item : seq->items) {
      leftmost_targets(*item, nullable, out);
      if (!expr_nullable(*item, nullable)) break;
    }
  } else if (auto* alt = std::get_if<Alternation>(&e.node)) {
    for (const auto& a : alt->alts) leftmost_targets(*a, nullable, out);
  } else if (auto* rep = std::get_if<Repetition>(&e.node)) {
    leftmost_targets(*rep->inner, nullable, out);
  } else if (auto* opt = std::get_if<OptionalExpr>(&e.node)) {
    leftmost_targets(*opt->inner, nullable, out);
  }
}

inline void collect_refs(const SyntaxExpr& e,
                         std::vector<const NonterminalRef*>& refs,
                         std::vector<Span>& spans) {
  if (auto* nt = std::get_if<NonterminalRef>(&e.node)) {
    refs.push_back(nt);
    spans.push_back(e.span);
  } else if (auto* seq = std::get_if<Sequence>(&e.node)) {
    for (const auto& item : seq->items) collect_refs(*item, refs, spans);
  } else if (auto* alt = std::get_if<Alternation>(&e.node)) {
    for (const auto& a : alt->alts) collect_refs(*a, refs, spans);
  } else if (auto* rep = std::get_if<Repetition>(&e.node)) {
    collect_refs(*rep->inner, refs, spans);
  } else if (auto* opt = std::get_if<OptionalExpr>(&e.node)) {
    collect_refs(*opt->inner, refs, spans);
  }
}

}  // namespace check_detail

// Well-formedness gate before schema derivation. resolvedSupers must supply
// all transitively named super grammars. Returns every violation found:
//   E-GRM-010 undefined nonterminal reference
//   E-GRM-011 duplicate production within one file
//   E-GRM-012 left recursion (unsupported by the PEG engine)
//   E-GRM-013 association / simplereference declaration errors
//   E-GRM-014 label collision within a production
inline std::vector<Diagnostic> check_grammar(const GrammarModel& gm,
                                             const std::vector<GrammarModel>& supers = {}) {
  using namespace check_detail;
  std::vector<Diagnostic> diags;
  Env env = build_env(gm, supers);

  // Duplicate definitions, per file.
  auto check_duplicates = [&](const GrammarModel& g) {
    std::set<std::string> names;
    for (const auto& p : g.productions) {
      if (!names.insert(p.name).second) {
        diags.push_back(Diagnostic::error(
            "E-GRM-011", "duplicate production '" + p.name + "'", p.span));
      }
    }
    for (const auto& e : g.externals) {
      if (names.count(e)) {
        diags.push_back(Diagnostic::error(
            "E-GRM-011", "'" + e + "' is declared as both a production and an external",
            g.span));
      }
    }
  };
  check_duplicates(gm);
  for (const auto& s : supers) check_duplicates(s);

  // Label collisions within each effective production.
  for (const auto* p : env.productions) {
    auto merged = roles::merge_roles(*p);
    for (auto& d : merged.diagnostics) diags.push_back(std::move(d));
  }

  // Undefined nonterminal references.
  for (const auto* p : env.productions) {
    std::vector<const NonterminalRef*> refs;
    std::vector<Span> spans;
    collect_refs(*p->body, refs, spans);
    for (size_t i = 0; i < refs.size(); ++i) {
      if (!env.classes.count(refs[i]->target)) {
        diags.push_back(Diagnostic::error(
            "E-GRM-010", "reference to undefined nonterminal '" + refs[i]->target + "'",
            spans[i]));
      }
    }
  }

  // Left recursion: a production that can reach itself through leftmost
  // positions would make the PEG interpreter loop, so it is rejected.
  auto nullable = compute_nullable(env);
  std::map<std::string, std::set<std::string>> left_edges;
  for (const auto* p : env.productions) {
    leftmost_targets(*p->body, nullable, left_edges[p->name]);
  }
  for (const auto* p : env.productions) {
    // DFS from p's leftmost targets, looking for a path back to p.
    std::set<std::string> visited;
    std::vector<std::string> stack(left_edges[p->name].begin(), left_edges[p->name].end());
    bool recursive = false;
    while (!stack.empty() && !recursive) {
      std::string cur = stack.back();
      stack.pop_back();
      if (cur == p->name) {
        recursive = true;
        break;
      }
      if (!visited.insert(cur).second) continue;
      auto it = left_edges.find(cur);
      if (it == left_edges.end()) continue;
      for (const auto& next : it->second) stack.push_back(next);
    }
    if (recursive) {
      diags.push_back(Diagnostic::error(
          "E-GRM-012", "left recursion through production '" + p->name + "'", p->span));
    }
  }

  // Association and simplereference declarations, across the whole chain.
  std::vector<const AssociationDecl*> assocs;
  std::vector<const SimpleReferenceDecl*> simple_refs;
  auto gather = [&](const GrammarModel& g) {
    for (const auto& a : g.associations) assocs.push_back(&a);
    for (const auto& r : g.simple_refs) simple_refs.push_back(&r);
  };
  gather(gm);
  for (const auto& s : supers) gather(s);

  std::set<std::pair<std::string, std::string>> roles_seen;
  for (const auto* a : assocs) {
    for (const auto& cls : {a->left_class, a->right_class}) {
      if (!env.classes.count(cls)) {
        diags.push_back(Diagnostic::error(
            "E-GRM-013", "association references unknown class '" + cls + "'", a->span));
      }
    }
    for (const auto& card : {a->left_card, a->right_card}) {
      if (card.max && *card.max < card.min) {
        diags.push_back(Diagnostic::error(
            "E-GRM-013", "cardinality " + card.to_text() + " has an empty range", a->span));
      }
    }
    if (!roles_seen.insert({a->left_class, a->left_role}).second) {
      diags.push_back(Diagnostic::error(
          "E-GRM-013",
          "role '" + a->left_role + "' declared more than once on class '" + a->left_class + "'",
          a->span));
    }
    if (!roles_seen.insert({a->right_class, a->right_role}).second) {
      diags.push_back(Diagnostic::error(
          "E-GRM-013",
          "role '" + a->right_role + "' declared more than once on class '" + a->right_class +
              "'",
          a->span));
    }
  }
  std::set<std::string> ref_roles_seen;
  for (const auto* r : simple_refs) {
    bool classes_ok = true;
    for (const auto& cls : {r->source_class, r->target_class}) {
      if (!env.classes.count(cls)) {
        diags.push_back(Diagnostic::error(
            "E-GRM-013", "simplereference references unknown class '" + cls + "'", r->span));
        classes_ok = false;
      }
    }
    if (!ref_roles_seen.insert(r->role).second) {
      diags.push_back(Diagnostic::error(
          "E-GRM-013", "simplereference role '" + r->role + "' declared more than once",
          r->span));
    }
    if (!classes_ok) continue;
    bool navigates = false;
    for (const auto* a : assocs) {
      if ((a->left_class == r->source_class && a->left_role == r->role &&
           a->right_class == r->target_class) ||
          (a->right_class == r->source_class && a->right_role == r->role &&
           a->left_class == r->target_class)) {
        navigates = true;
        break;
      }
    }
    if (!navigates) {
      diags.push_back(Diagnostic::error(
          "E-GRM-013",
          "no association role '" + r->role + "' navigating from '" + r->source_class +
              "' to '" + r->target_class + "'",
          r->span));
    }
  }
  return diags;
}

}  // namespace mc
