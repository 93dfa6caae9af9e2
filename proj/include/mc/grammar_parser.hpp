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
#include <string>
#include <string_view>
#include <vector>

#include "mc/diag.hpp"
#include "mc/grammar.hpp"

namespace mc {

namespace meta {

// Token of the grammar-definition language itself.
struct MetaToken {
  enum class Kind { Ident, String, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;   // cooked value for strings, lexeme otherwise
  size_t begin = 0;   // byte offsets into the source
  size_t end = 0;
};

struct MetaError {
  std::string message;
  size_t begin = 0;
  size_t end = 0;
};

// Multi-character punctuation first so that longest match wins.
inline const std::vector<std::string>& meta_puncts() {
  static const std::vector<std::string> puncts = {
      "<->", "->", "..", "{", "}", "=", ";", "|", "*", "+", "?",
      "(",   ")",  ":",  "[", "]", ".", ",",
  };
  return puncts;
}

inline bool is_ident_start(char c) {
  return c == '_' || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
inline bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

// Shared lexical core: the meta language and every model language use the
// same IDENT/STRING/INT shapes, escapes, and comment/whitespace skipping.
// Returns the offset after skipping, or an error for an unterminated comment.
inline Result<size_t> skip_trivia(std::string_view text, size_t pos) {
  while (pos < text.size()) {
    char c = text[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
    } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
      pos += 2;
      while (pos < text.size() && text[pos] != '\n') ++pos;
    } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '*') {
      size_t start = pos;
      pos += 2;
      while (pos + 1 < text.size() && !(text[pos] == '*' && text[pos + 1] == '/')) ++pos;
      if (pos + 1 >= text.size()) {
        Result<size_t> r;
        r.diags.push_back(Diagnostic::error("", "unterminated block comment"));
        r.diags.back().span.start_line = static_cast<int>(start);      // byte offsets, fixed up
        r.diags.back().span.end_line = static_cast<int>(text.size());  // by the caller
        return r;
      }
      pos += 2;
    } else {
      break;
    }
  }
  return Result<size_t>::success(pos);
}

// Lexes one string literal starting at the opening quote. On success the
// cooked value is appended to `out` and the offset past the closing quote is
// returned. Errors report byte offsets in the span line fields.
inline Result<size_t> lex_string_literal(std::string_view text, size_t pos, std::string& out) {
  size_t start = pos;
  ++pos;  // opening quote
  while (pos < text.size()) {
    char c = text[pos];
    if (c == '"') return Result<size_t>::success(pos + 1);
    if (c == '\n') break;
    if (c == '\\') {
      if (pos + 1 >= text.size()) break;
      char e = text[pos + 1];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: {
          Result<size_t> r;
          r.diags.push_back(Diagnostic::error("", std::string("unknown escape '\\") + e + "'"));
          r.diags.back().span.start_line = static_cast<int>(pos);
          r.diags.back().span.end_line = static_cast<int>(pos + 2);
          return r;
        }
      }
      pos += 2;
    } else {
      out += c;
      ++pos;
    }
  }
  Result<size_t> r;
  r.diags.push_back(Diagnostic::error("", "unterminated string literal"));
  r.diags.back().span.start_line = static_cast<int>(start);
  r.diags.back().span.end_line = static_cast<int>(std::min(pos + 1, text.size()));
  return r;
}

namespace detail {

class MetaLexer {
 public:
  explicit MetaLexer(std::string_view text) : text_(text) {}

  // Tokenizes the whole input. On failure returns one MetaError.
  bool tokenize(std::vector<MetaToken>& out, MetaError& err) {
    size_t pos = 0;
    for (;;) {
      auto skipped = skip_trivia(text_, pos);
      if (!skipped.ok()) {
        err = {skipped.diags[0].message, static_cast<size_t>(skipped.diags[0].span.start_line),
               static_cast<size_t>(skipped.diags[0].span.end_line)};
        return false;
      }
      pos = *skipped.value;
      if (pos >= text_.size()) break;
      char c = text_[pos];
      size_t start = pos;
      if (is_ident_start(c)) {
        while (pos < text_.size() && is_ident_char(text_[pos])) ++pos;
        out.push_back({MetaToken::Kind::Ident, std::string(text_.substr(start, pos - start)),
                       start, pos});
      } else if (c >= '0' && c <= '9') {
        while (pos < text_.size() && text_[pos] >= '0' && text_[pos] <= '9') ++pos;
        out.push_back({MetaToken::Kind::Int, std::string(text_.substr(start, pos - start)),
                       start, pos});
      } else if (c == '"') {
        std::string cooked;
        auto end = lex_string_literal(text_, pos, cooked);
        if (!end.ok()) {
          err = {end.diags[0].message, static_cast<size_t>(end.diags[0].span.start_line),
                 static_cast<size_t>(end.diags[0].span.end_line)};
          return false;
        }
        pos = *end.value;
        out.push_back({MetaToken::Kind::String, std::move(cooked), start, pos});
      } else {
        bool matched = false;
        for (const auto& p : meta_puncts()) {
          if (text_.substr(pos, p.size()) == p) {
            pos += p.size();
            out.push_back({MetaToken::Kind::Punct, p, start, pos});
            matched = true;
            break;
          }
        }
        if (!matched) {
          err = {"unexpected character", pos, pos + 1};
          return false;
        }
      }
    }
    out.push_back({MetaToken::Kind::End, "", text_.size(), text_.size()});
    return true;
  }

 private:
  std::string_view text_;
};

class MetaParser {
 public:
  MetaParser(std::vector<MetaToken> tokens, const LineIndex& index, std::string file)
      : tokens_(std::move(tokens)), index_(index), file_(std::move(file)) {}

  Result<GrammarModel> parse_file() {
    GrammarModel gm;
    gm.file = file_;
    size_t file_begin = cur().begin;
    expect_ident("grammar");
    gm.name = expect_any_ident("grammar name");
    if (at_ident("extends")) {
      advance();
      gm.super_grammars.push_back(expect_any_ident("super grammar name"));
      while (at_punct(",")) {
        advance();
        gm.super_grammars.push_back(expect_any_ident("super grammar name"));
      }
    }
    expect_punct("{");
    while (!failed_ && !at_punct("}") && cur().kind != MetaToken::Kind::End) {
      parse_decl(gm);
    }
    expect_punct("}");
    if (!failed_ && cur().kind != MetaToken::Kind::End) {
      fail("expected end of file");
    }
    if (failed_) return Result<GrammarModel>::failure(error_);
    gm.span = make_span(file_begin, prev_end_);
    return Result<GrammarModel>::success(std::move(gm));
  }

 private:
  const MetaToken& cur() const { return tokens_[pos_]; }

  void advance() {
    prev_end_ = cur().end;
    if (pos_ + 1 < tokens_.size()) ++pos_;
  }

  bool at_punct(std::string_view p) const {
    return cur().kind == MetaToken::Kind::Punct && cur().text == p;
  }
  bool at_ident(std::string_view name) const {
    return cur().kind == MetaToken::Kind::Ident && cur().text == name;
  }

  Span make_span(size_t begin, size_t end) const { return index_.span(file_, begin, end); }
  Span token_span(const MetaToken& t) const { return make_span(t.begin, t.end); }

  void fail(const std::string& message) {
    if (failed_) return;
    failed_ = true;
    std::string found;
    switch (cur().kind) {
      case MetaToken::Kind::End: found = "end of file"; break;
      case MetaToken::Kind::String: found = "string literal"; break;
      default: found = "'" + cur().text + "'";
    }
    error_ = Diagnostic::error("E-GRM-001", message + ", found " + found, token_span(cur()));
  }

  void expect_punct(std::string_view p) {
    if (failed_) return;
    if (!at_punct(p)) {
      fail("expected '" + std::string(p) + "'");
      return;
    }
    advance();
  }

  void expect_ident(std::string_view name) {
    if (failed_) return;
    if (!at_ident(name)) {
      fail("expected '" + std::string(name) + "'");
      return;
    }
    advance();
  }

  std::string expect_any_ident(const std::string& what) {
    if (failed_) return "";
    if (cur().kind != MetaToken::Kind::Ident) {
      fail("expected " + what);
      return "";
    }
    std::string s = cur().text;
    advance();
    return s;
  }

  // Decl := Prod | "external" IDENT ";" | AssocBlk | ConceptBlk
  void parse_decl(GrammarModel& gm) {
    if (at_ident("external")) {
      advance();
      const MetaToken& name_tok = cur();
      std::string name = expect_any_ident("external nonterminal name");
      if (!failed_ && !std::isupper(static_cast<unsigned char>(name[0]))) {
        failed_ = true;
        error_ = Diagnostic::error("E-GRM-001",
                                   "external name must start with an uppercase letter",
                                   token_span(name_tok));
        return;
      }
      expect_punct(";");
      if (!failed_) gm.externals.push_back(std::move(name));
      return;
    }
    if (at_ident("associations")) {
      parse_assoc_block(gm);
      return;
    }
    if (at_ident("concept")) {
      parse_concept_block(gm);
      return;
    }
    parse_production(gm);
  }

  void parse_production(GrammarModel& gm) {
    const MetaToken& name_tok = cur();
    std::string name = expect_any_ident("production name");
    if (failed_) return;
    if (!std::isupper(static_cast<unsigned char>(name[0]))) {
      failed_ = true;
      error_ = Diagnostic::error("E-GRM-001",
                                 "production name must start with an uppercase letter",
                                 token_span(name_tok));
      return;
    }
    expect_punct("=");
    SyntaxExprPtr body = parse_alt();
    expect_punct(";");
    if (failed_) return;
    Production p;
    p.name = std::move(name);
    p.body = std::move(body);
    p.span = make_span(name_tok.begin, prev_end_);
    gm.productions.push_back(std::move(p));
  }

  // Alt := Seq ("|" Seq)*
  SyntaxExprPtr parse_alt() {
    size_t begin = cur().begin;
    SyntaxExprPtr first = parse_seq();
    if (failed_) return nullptr;
    if (!at_punct("|")) return first;
    std::vector<SyntaxExprPtr> alts;
    alts.push_back(std::move(first));
    while (at_punct("|")) {
      advance();
      SyntaxExprPtr next = parse_seq();
      if (failed_) return nullptr;
      alts.push_back(std::move(next));
    }
    return make_expr<Alternation>(make_span(begin, prev_end_), std::move(alts));
  }

  // Seq := Unary+  (a single element collapses to the element itself)
  SyntaxExprPtr parse_seq() {
    size_t begin = cur().begin;
    std::vector<SyntaxExprPtr> items;
    for (;;) {
      if (cur().kind == MetaToken::Kind::String || cur().kind == MetaToken::Kind::Ident ||
          at_punct("(")) {
        SyntaxExprPtr item = parse_unary();
        if (failed_) return nullptr;
        items.push_back(std::move(item));
      } else {
        break;
      }
    }
    if (items.empty()) {
      fail("expected expression");
      return nullptr;
    }
    if (items.size() == 1) return items[0];
    return make_expr<Sequence>(make_span(begin, prev_end_), std::move(items));
  }

  SyntaxExprPtr parse_unary() {
    size_t begin = cur().begin;
    SyntaxExprPtr prim = parse_prim();
    if (failed_) return nullptr;
    if (at_punct("*") || at_punct("+")) {
      int min = at_punct("+") ? 1 : 0;
      advance();
      return make_expr<Repetition>(make_span(begin, prev_end_), std::move(prim), min);
    }
    if (at_punct("?")) {
      advance();
      return make_expr<OptionalExpr>(make_span(begin, prev_end_), std::move(prim));
    }
    return prim;
  }

  // Prim := STRING | IDENT ":" "[" STRING "]" | IDENT ":" IDENT | IDENT | "(" Alt ")"
  SyntaxExprPtr parse_prim() {
    size_t begin = cur().begin;
    if (cur().kind == MetaToken::Kind::String) {
      std::string text = cur().text;
      if (text.empty()) {
        failed_ = true;
        error_ = Diagnostic::error("E-GRM-001", "terminal must not be empty", token_span(cur()));
        return nullptr;
      }
      advance();
      return make_expr<Terminal>(make_span(begin, prev_end_), std::move(text));
    }
    if (at_punct("(")) {
      advance();
      SyntaxExprPtr inner = parse_alt();
      expect_punct(")");
      return inner;
    }
    if (cur().kind != MetaToken::Kind::Ident) {
      fail("expected expression");
      return nullptr;
    }
    std::string first = cur().text;
    advance();
    if (!at_punct(":")) {
      // A lone token-kind name is an unlabeled token reference.
      if (auto kind = token_kind_from_name(first)) {
        return make_expr<TokenRef>(make_span(begin, prev_end_), *kind, std::nullopt);
      }
      return make_expr<NonterminalRef>(make_span(begin, prev_end_), std::move(first),
                                       std::nullopt);
    }
    advance();  // ':'
    if (at_punct("[")) {
      advance();
      if (cur().kind != MetaToken::Kind::String) {
        fail("expected keyword string");
        return nullptr;
      }
      std::string keyword = cur().text;
      if (keyword.empty()) {
        failed_ = true;
        error_ =
            Diagnostic::error("E-GRM-001", "constant keyword must not be empty", token_span(cur()));
        return nullptr;
      }
      advance();
      expect_punct("]");
      if (failed_) return nullptr;
      return make_expr<ConstantFlag>(make_span(begin, prev_end_), std::move(first),
                                     std::move(keyword));
    }
    std::string second = expect_any_ident("token kind or nonterminal");
    if (failed_) return nullptr;
    if (auto kind = token_kind_from_name(second)) {
      return make_expr<TokenRef>(make_span(begin, prev_end_), *kind, std::move(first));
    }
    return make_expr<NonterminalRef>(make_span(begin, prev_end_), std::move(second),
                                     std::move(first));
  }

  // Card := "*" | INT | INT ".." (INT | "*")
  Cardinality parse_card() {
    if (at_punct("*")) {
      advance();
      return Cardinality::many();
    }
    if (cur().kind != MetaToken::Kind::Int) {
      fail("expected cardinality");
      return {};
    }
    uint32_t lo = static_cast<uint32_t>(std::stoul(cur().text));
    advance();
    if (!at_punct("..")) return Cardinality::exactly(lo);
    advance();
    if (at_punct("*")) {
      advance();
      return {lo, std::nullopt};
    }
    if (cur().kind != MetaToken::Kind::Int) {
      fail("expected upper cardinality bound");
      return {};
    }
    uint32_t hi = static_cast<uint32_t>(std::stoul(cur().text));
    advance();
    return {lo, hi};
  }

  void parse_assoc_block(GrammarModel& gm) {
    advance();  // 'associations'
    expect_punct("{");
    while (!failed_ && !at_punct("}") && cur().kind != MetaToken::Kind::End) {
      AssociationDecl a;
      size_t begin = cur().begin;
      a.left_class = expect_any_ident("class name");
      expect_punct(".");
      a.left_role = expect_any_ident("role name");
      a.left_card = parse_card();
      expect_punct("<->");
      a.right_card = parse_card();
      a.right_class = expect_any_ident("class name");
      expect_punct(".");
      a.right_role = expect_any_ident("role name");
      expect_punct(";");
      if (failed_) return;
      a.span = make_span(begin, prev_end_);
      gm.associations.push_back(std::move(a));
    }
    expect_punct("}");
  }

  void parse_concept_block(GrammarModel& gm) {
    advance();  // 'concept'
    expect_ident("simplereference");
    expect_punct("{");
    while (!failed_ && !at_punct("}") && cur().kind != MetaToken::Kind::End) {
      SimpleReferenceDecl r;
      size_t begin = cur().begin;
      r.role = expect_any_ident("reference role");
      expect_punct(":");
      r.source_class = expect_any_ident("source class");
      expect_punct(".");
      r.source_attr = expect_any_ident("source attribute");
      expect_punct("->");
      r.target_class = expect_any_ident("target class");
      expect_punct(".");
      r.target_attr = expect_any_ident("target attribute");
      expect_punct(";");
      if (failed_) return;
      r.span = make_span(begin, prev_end_);
      gm.simple_refs.push_back(std::move(r));
    }
    expect_punct("}");
  }

  std::vector<MetaToken> tokens_;
  const LineIndex& index_;
  std::string file_;
  size_t pos_ = 0;
  size_t prev_end_ = 0;
  bool failed_ = false;
  Diagnostic error_;
};

}  // namespace detail
}  // namespace meta

// Parses grammar-definition source into a GrammarModel. Purely structural:
// no semantic checks beyond the meta syntax are performed here.
//
// Errors: E-GRM-001 meta-syntax error, E-GRM-002 invalid UTF-8.
inline Result<GrammarModel> parse_grammar(std::string_view text,
                                          std::string file = "<input>") {
  LineIndex index(text);
  if (auto bad = find_invalid_utf8(text)) {
    return Result<GrammarModel>::failure(Diagnostic::error(
        "E-GRM-002", "input is not valid UTF-8", index.span(file, *bad, *bad + 1)));
  }
  meta::detail::MetaLexer lexer(text);
  std::vector<meta::MetaToken> tokens;
  meta::MetaError lex_err;
  if (!lexer.tokenize(tokens, lex_err)) {
    return Result<GrammarModel>::failure(Diagnostic::error(
        "E-GRM-001", lex_err.message, index.span(file, lex_err.begin, lex_err.end)));
  }
  meta::detail::MetaParser parser(std::move(tokens), index, std::move(file));
  return parser.parse_file();
}

}  // namespace mc
