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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mc {

// A source region. Lines and columns are 1-based; end columns are exclusive.
// Columns count Unicode code points, not bytes.
struct Span {
  std::string file;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool operator==(const Span&) const = default;
};

enum class Severity { Error, Warning };

inline const char* to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

// A coded, span-carrying error or warning. Codes are stable across releases.
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string message;
  Span span;

  static Diagnostic error(std::string code, std::string message, Span span = {}) {
    return {std::move(code), Severity::Error, std::move(message), std::move(span)};
  }
  static Diagnostic warning(std::string code, std::string message, Span span = {}) {
    return {std::move(code), Severity::Warning, std::move(message), std::move(span)};
  }
};

inline bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

// Outcome of an operation that either produces a value or reports diagnostics.
// A Result may carry warnings alongside a value; it is ok() as long as no
// diagnostic has error severity and a value is present.
template <typename T>
struct Result {
  std::optional<T> value;
  std::vector<Diagnostic> diags;

  bool ok() const { return value.has_value() && !has_errors(diags); }

  static Result success(T v) {
    Result r;
    r.value = std::move(v);
    return r;
  }
  static Result failure(Diagnostic d) {
    Result r;
    r.diags.push_back(std::move(d));
    return r;
  }
  static Result failure(std::vector<Diagnostic> ds) {
    Result r;
    r.diags = std::move(ds);
    return r;
  }
};

// Maps byte offsets in a UTF-8 buffer to 1-based line/column positions.
// Columns advance once per code point (a UTF-8 lead or ASCII byte).
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {
    line_starts_.push_back(0);
    for (size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '\n') line_starts_.push_back(i + 1);
    }
  }

  std::pair<int, int> position(size_t offset) const {
    offset = std::min(offset, text_.size());
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    size_t line = static_cast<size_t>(it - line_starts_.begin()) - 1;
    size_t col = 1;
    for (size_t i = line_starts_[line]; i < offset; ++i) {
      if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) ++col;
    }
    return {static_cast<int>(line + 1), static_cast<int>(col)};
  }

  Span span(std::string file, size_t begin, size_t end) const {
    auto [sl, sc] = position(begin);
    auto [el, ec] = position(end);
    return {std::move(file), sl, sc, el, ec};
  }

 private:
  std::string_view text_;
  std::vector<size_t> line_starts_;
};

// Validates that a byte buffer is well-formed UTF-8. Returns the offset of the
// first invalid byte, or nullopt when the buffer is valid.
inline std::optional<size_t> find_invalid_utf8(std::string_view text) {
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    unsigned char b = static_cast<unsigned char>(text[i]);
    size_t len;
    uint32_t cp;
    if (b < 0x80) {
      i += 1;
      continue;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    } else {
      return i;
    }
    if (i + len > n) return i;
    for (size_t k = 1; k < len; ++k) {
      unsigned char c = static_cast<unsigned char>(text[i + k]);
      if ((c & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (c & 0x3F);
    }
    // Overlong encodings, surrogates, and out-of-range points are invalid.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return i;
    }
    i += len;
  }
  return std::nullopt;
}

}  // namespace mc
