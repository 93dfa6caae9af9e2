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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mc/diag.hpp"

namespace mc {

// Association end bound: min..max instances, max absent meaning unbounded.
struct Cardinality {
  uint32_t min = 0;
  std::optional<uint32_t> max;

  bool operator==(const Cardinality&) const = default;

  static Cardinality exactly(uint32_t n) { return {n, n}; }
  static Cardinality at_most_one() { return {0, 1}; }
  static Cardinality many() { return {0, std::nullopt}; }
  static Cardinality at_least_one() { return {1, std::nullopt}; }

  bool unbounded() const { return !max.has_value(); }

  // Canonical grammar-syntax form: "*", a bare integer, or "m..n" / "m..*".
  std::string to_text() const {
    if (min == 0 && !max) return "*";
    if (max && *max == min) return std::to_string(min);
    return std::to_string(min) + ".." + (max ? std::to_string(*max) : std::string("*"));
  }
};

enum class TokenKind { Ident, String, Int };

inline const char* to_string(TokenKind k) {
  switch (k) {
    case TokenKind::Ident: return "IDENT";
    case TokenKind::String: return "STRING";
    default: return "INT";
  }
}

inline std::optional<TokenKind> token_kind_from_name(std::string_view name) {
  if (name == "IDENT") return TokenKind::Ident;
  if (name == "STRING") return TokenKind::String;
  if (name == "INT") return TokenKind::Int;
  return std::nullopt;
}

// One node of a production body. Variants mirror the grammar notation:
// terminals, token references, nonterminal references, boolean constant
// flags, sequences, ordered alternations, repetitions (* and +) and options.
struct SyntaxExpr;
using SyntaxExprPtr = std::shared_ptr<const SyntaxExpr>;

struct Terminal {
  std::string text;
};
struct TokenRef {
  TokenKind kind = TokenKind::Ident;
  std::optional<std::string> label;
};
struct NonterminalRef {
  std::string target;
  std::optional<std::string> label;
};
struct ConstantFlag {
  std::string label;
  std::string keyword;
};
struct Sequence {
  std::vector<SyntaxExprPtr> items;
};
struct Alternation {
  std::vector<SyntaxExprPtr> alts;  // ordered; first match wins
};
struct Repetition {
  SyntaxExprPtr inner;
  int min = 0;  // 0 for '*', 1 for '+'
};
struct OptionalExpr {
  SyntaxExprPtr inner;
};

struct SyntaxExpr {
  std::variant<Terminal, TokenRef, NonterminalRef, ConstantFlag, Sequence, Alternation,
               Repetition, OptionalExpr>
      node;
  Span span;
};

template <typename T, typename... Args>
SyntaxExprPtr make_expr(Span span, Args&&... args) {
  return std::make_shared<SyntaxExpr>(SyntaxExpr{T{std::forward<Args>(args)...}, std::move(span)});
}

// A named grammar rule. The name doubles as the derived AST class name.
struct Production {
  std::string name;
  SyntaxExprPtr body;
  Span span;
};

// Declared as `L.leftRole leftCard <-> rightCard R.rightRole`.
struct AssociationDecl {
  std::string left_class;
  std::string left_role;
  Cardinality left_card;
  std::string right_class;
  std::string right_role;
  Cardinality right_card;
  Span span;
};

// Declared as `role : Src.attr -> Tgt.attr` inside `concept simplereference`.
struct SimpleReferenceDecl {
  std::string role;
  std::string source_class;
  std::string source_attr;
  std::string target_class;
  std::string target_attr;
  Span span;
};

// Parsed form of one grammar definition file. Structure mirrors the file;
// semantic well-formedness is established separately by check_grammar.
struct GrammarModel {
  std::string name;
  std::string file;
  std::vector<std::string> super_grammars;
  std::vector<Production> productions;
  std::vector<std::string> externals;          // declaration order
  std::vector<AssociationDecl> associations;
  std::vector<SimpleReferenceDecl> simple_refs;
  // Hole-to-start-production bindings established by composition. Empty for
  // grammars that were parsed from source.
  std::map<std::string, std::string> bindings;
  Span span;

  const Production* find_production(std::string_view n) const {
    for (const auto& p : productions) {
      if (p.name == n) return &p;
    }
    return nullptr;
  }
  bool has_external(std::string_view n) const {
    for (const auto& e : externals) {
      if (e == n) return true;
    }
    return false;
  }
  // Productions and externals together form the class namespace.
  bool has_class(std::string_view n) const {
    return find_production(n) != nullptr || has_external(n);
  }
};

namespace detail {

inline std::string escape_string_literal(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

// Precedence levels for printing: alternation < sequence < unary operand.
enum class PrintLevel { Alt = 0, Seq = 1, Prim = 2 };

inline void print_expr(const SyntaxExpr& e, PrintLevel ctx, std::string& out) {
  if (auto* t = std::get_if<Terminal>(&e.node)) {
    out += escape_string_literal(t->text);
  } else if (auto* tr = std::get_if<TokenRef>(&e.node)) {
    if (tr->label) {
      out += *tr->label;
      out += ':';
    }
    out += to_string(tr->kind);
  } else if (auto* nt = std::get_if<NonterminalRef>(&e.node)) {
    if (nt->label) {
      out += *nt->label;
      out += ':';
    }
    out += nt->target;
  } else if (auto* cf = std::get_if<ConstantFlag>(&e.node)) {
    out += cf->label;
    out += ":[";
    out += escape_string_literal(cf->keyword);
    out += ']';
  } else if (auto* seq = std::get_if<Sequence>(&e.node)) {
    bool parens = ctx > PrintLevel::Seq || seq->items.size() == 1;
    if (parens) out += '(';
    for (size_t i = 0; i < seq->items.size(); ++i) {
      if (i > 0) out += ' ';
      print_expr(*seq->items[i], PrintLevel::Prim, out);
    }
    if (parens) out += ')';
  } else if (auto* alt = std::get_if<Alternation>(&e.node)) {
    bool parens = ctx > PrintLevel::Alt;
    if (parens) out += '(';
    for (size_t i = 0; i < alt->alts.size(); ++i) {
      if (i > 0) out += " | ";
      print_expr(*alt->alts[i], PrintLevel::Seq, out);
    }
    if (parens) out += ')';
  } else if (auto* rep = std::get_if<Repetition>(&e.node)) {
    print_expr(*rep->inner, PrintLevel::Prim, out);
    out += rep->min == 0 ? '*' : '+';
  } else if (auto* opt = std::get_if<OptionalExpr>(&e.node)) {
    print_expr(*opt->inner, PrintLevel::Prim, out);
    out += '?';
  }
}

}  // namespace detail

// Renders a GrammarModel back to grammar syntax. Re-parsing the output yields
// a structurally equal model (spans aside).
inline std::string print_grammar(const GrammarModel& gm) {
  std::string out = "grammar " + gm.name;
  for (size_t i = 0; i < gm.super_grammars.size(); ++i) {
    out += i == 0 ? " extends " : ", ";
    out += gm.super_grammars[i];
  }
  out += " {\n";
  for (const auto& p : gm.productions) {
    out += "  " + p.name + " = ";
    detail::print_expr(*p.body, detail::PrintLevel::Alt, out);
    out += " ;\n";
  }
  for (const auto& e : gm.externals) {
    out += "  external " + e + " ;\n";
  }
  if (!gm.associations.empty()) {
    out += "  associations {\n";
    for (const auto& a : gm.associations) {
      out += "    " + a.left_class + "." + a.left_role + " " + a.left_card.to_text() + " <-> " +
             a.right_card.to_text() + " " + a.right_class + "." + a.right_role + " ;\n";
    }
    out += "  }\n";
  }
  if (!gm.simple_refs.empty()) {
    out += "  concept simplereference {\n";
    for (const auto& r : gm.simple_refs) {
      out += "    " + r.role + " : " + r.source_class + "." + r.source_attr + " -> " +
             r.target_class + "." + r.target_attr + " ;\n";
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

// Structural equality ignoring spans and source file names.
inline bool expr_equal(const SyntaxExpr& a, const SyntaxExpr& b) {
  if (a.node.index() != b.node.index()) return false;
  if (auto* t = std::get_if<Terminal>(&a.node)) {
    return t->text == std::get<Terminal>(b.node).text;
  }
  if (auto* tr = std::get_if<TokenRef>(&a.node)) {
    const auto& o = std::get<TokenRef>(b.node);
    return tr->kind == o.kind && tr->label == o.label;
  }
  if (auto* nt = std::get_if<NonterminalRef>(&a.node)) {
    const auto& o = std::get<NonterminalRef>(b.node);
    return nt->target == o.target && nt->label == o.label;
  }
  if (auto* cf = std::get_if<ConstantFlag>(&a.node)) {
    const auto& o = std::get<ConstantFlag>(b.node);
    return cf->label == o.label && cf->keyword == o.keyword;
  }
  if (auto* seq = std::get_if<Sequence>(&a.node)) {
    const auto& o = std::get<Sequence>(b.node);
    if (seq->items.size() != o.items.size()) return false;
    for (size_t i = 0; i < seq->items.size(); ++i) {
      if (!expr_equal(*seq->items[i], *o.items[i])) return false;
    }
    return true;
  }
  if (auto* alt = std::get_if<Alternation>(&a.node)) {
    const auto& o = std::get<Alternation>(b.node);
    if (alt->alts.size() != o.alts.size()) return false;
    for (size_t i = 0; i < alt->alts.size(); ++i) {
      if (!expr_equal(*alt->alts[i], *o.alts[i])) return false;
    }
    return true;
  }
  if (auto* rep = std::get_if<Repetition>(&a.node)) {
    const auto& o = std::get<Repetition>(b.node);
    return rep->min == o.min && expr_equal(*rep->inner, *o.inner);
  }
  const auto& opt = std::get<OptionalExpr>(a.node);
  return expr_equal(*opt.inner, *std::get<OptionalExpr>(b.node).inner);
}

inline bool grammar_equal(const GrammarModel& a, const GrammarModel& b) {
  if (a.name != b.name || a.super_grammars != b.super_grammars ||
      a.externals != b.externals || a.bindings != b.bindings ||
      a.productions.size() != b.productions.size() ||
      a.associations.size() != b.associations.size() ||
      a.simple_refs.size() != b.simple_refs.size()) {
    return false;
  }
  for (size_t i = 0; i < a.productions.size(); ++i) {
    if (a.productions[i].name != b.productions[i].name ||
        !expr_equal(*a.productions[i].body, *b.productions[i].body)) {
      return false;
    }
  }
  for (size_t i = 0; i < a.associations.size(); ++i) {
    const auto& x = a.associations[i];
    const auto& y = b.associations[i];
    if (x.left_class != y.left_class || x.left_role != y.left_role ||
        x.left_card != y.left_card || x.right_class != y.right_class ||
        x.right_role != y.right_role || x.right_card != y.right_card) {
      return false;
    }
  }
  for (size_t i = 0; i < a.simple_refs.size(); ++i) {
    const auto& x = a.simple_refs[i];
    const auto& y = b.simple_refs[i];
    if (x.role != y.role || x.source_class != y.source_class ||
        x.source_attr != y.source_attr || x.target_class != y.target_class ||
        x.target_attr != y.target_attr) {
      return false;
    }
  }
  return true;
}

}  // namespace mc
