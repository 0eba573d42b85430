#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "wrcomm/solver.hpp"

// Concrete syntax for portraits and witnesses.
//
//   elem     := 's' INT children?
//   children := '(' elem (',' elem)* ')'
//
// INT is the vertex label and must already lie in [0, arity); child count
// must equal the level arity; missing children denote all-identity
// subtrees; whitespace between tokens is ignored. The signature is supplied
// out of band (a flag or the header line "sig: p1,p2,...,pk"), never
// inferred from the text. Serialization is canonical: no whitespace, fixed
// child order, and identity subtrees below the deepest nontrivial label are
// elided. A depth-0 portrait serializes to the empty string.

namespace wrcomm::wrformat {

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, const AritySignature& sig)
      : text_(text), sig_(sig) {}

  TreeAut run() {
    TreeAut out(sig_);
    skip_ws();
    if (sig_.depth() == 0) {
      if (pos_ != text_.size())
        throw ParseError("expected end of input for a depth-0 signature",
                         pos_);
      return out;
    }
    parse_elem(out, 0, 0);
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("trailing input after element", pos_);
    return out;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
            text_[pos_] == '\r'))
      ++pos_;
  }

  void parse_elem(TreeAut& out, uint32_t level, uint64_t j) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != 's')
      throw ParseError("expected 's'", pos_);
    ++pos_;
    const size_t label_at = pos_;
    if (pos_ >= text_.size() || !is_digit(text_[pos_]))
      throw ParseError("expected a label after 's'", pos_);
    uint64_t v = 0;
    while (pos_ < text_.size() && is_digit(text_[pos_])) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 0xFFFFFFFFull) throw ParseError("label too large", label_at);
      ++pos_;
    }
    const uint32_t p = sig_.arity(level);
    if (v >= p)
      throw ParseError("label " + std::to_string(v) +
                           " out of range for arity " + std::to_string(p),
                       label_at);
    out.set_label(level, j, static_cast<uint32_t>(v));
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      const size_t open_at = pos_;
      if (level + 1 >= sig_.depth())
        throw ParseError("children below leaf level for signature (" +
                             sig_.to_string() + ")",
                         open_at);
      ++pos_;
      uint32_t count = 0;
      for (;;) {
        if (count == p)
          throw ParseError("expected " + std::to_string(p) +
                               " children, found more",
                           pos_);
        parse_elem(out, level + 1, j * p + count);
        ++count;
        skip_ws();
        if (pos_ >= text_.size())
          throw ParseError("unterminated child list", open_at);
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        throw ParseError("expected ',' or ')'", pos_);
      }
      if (count != p)
        throw ParseError("expected " + std::to_string(p) + " children, got " +
                             std::to_string(count),
                         pos_ - 1);
    }
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  std::string_view text_;
  const AritySignature& sig_;
  size_t pos_ = 0;
};

inline bool subtree_nontrivial_below(const TreeAut& g, uint32_t level,
                                     uint64_t j) {
  const AritySignature& sig = g.signature();
  uint64_t lo = j, hi = j + 1;
  for (uint32_t l = level + 1; l < sig.depth(); ++l) {
    const uint32_t p = sig.arity(l - 1);
    lo *= p;
    hi *= p;
    for (uint64_t jj = lo; jj < hi; ++jj)
      if (g.label(l, jj) != 0) return true;
  }
  return false;
}

inline void serialize_rec(std::string& out, const TreeAut& g, uint32_t level,
                          uint64_t j) {
  out += 's';
  out += std::to_string(g.label(level, j));
  if (subtree_nontrivial_below(g, level, j)) {
    const uint32_t p = g.signature().arity(level);
    out += '(';
    for (uint32_t c = 0; c < p; ++c) {
      if (c) out += ',';
      serialize_rec(out, g, level + 1, j * p + c);
    }
    out += ')';
  }
}

}  // namespace detail

inline TreeAut parse_element(std::string_view text, const AritySignature& sig) {
  return detail::Parser(text, sig).run();
}

inline std::string serialize_element(const TreeAut& g) {
  if (g.signature().depth() == 0) return "";
  std::string out;
  detail::serialize_rec(out, g, 0, 0);
  return out;
}

/// "p1,p2,...,pk" <-> AritySignature (empty string = depth 0).
inline AritySignature parse_signature_csv(std::string_view text) {
  std::vector<uint32_t> arities;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  };
  skip_ws();
  while (pos < text.size()) {
    uint64_t v = 0;
    const size_t at = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      v = v * 10 + (text[pos] - '0');
      if (v > 0xFFFFFFFFull) throw ParseError("arity too large", at);
      ++pos;
    }
    if (pos == at) throw ParseError("expected an arity", pos);
    arities.push_back(static_cast<uint32_t>(v));
    skip_ws();
    if (pos < text.size()) {
      if (text[pos] != ',') throw ParseError("expected ','", pos);
      ++pos;
      skip_ws();
    }
  }
  return AritySignature(std::move(arities));
}

/// An element file: an optional "sig: ..." header line followed by the
/// element text.
struct ElementDocument {
  std::optional<AritySignature> sig;
  std::string body;
};

inline ElementDocument split_element_document(std::string_view text) {
  ElementDocument doc;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
      pos = eol == text.size() ? eol : eol + 1;
      continue;  // blank line
    }
    if (line.substr(b).rfind("sig:", 0) == 0) {
      if (doc.sig) throw ParseError("duplicate sig header", pos + b);
      std::string_view rest = line.substr(b + 4);
      if (size_t e = rest.find('\r'); e != std::string_view::npos)
        rest = rest.substr(0, e);
      doc.sig = parse_signature_csv(rest);
      pos = eol == text.size() ? eol : eol + 1;
      continue;
    }
    break;  // first non-header, non-blank line starts the body
  }
  doc.body.assign(text.substr(pos));
  return doc;
}

inline std::string format_element_document(const TreeAut& g) {
  return "sig: " + g.signature().to_string() + "\n" + serialize_element(g) +
         "\n";
}

/// Witness document: a key-value record. The "verified" stamp is recomputed
/// at export time by multiplying the pair back out; exporting an inconsistent
/// witness is a hard error.
inline std::string export_witness(const solver::CommutatorWitness& w) {
  if (commutator(w.a, w.b) != w.target)
    throw VerificationError("export_witness: [a,b] != target");
  bool a_flag = false, b_flag = false;
  if (w.target.signature().all_binary()) {
    a_flag = groups::is_in_Gk(w.a);
    b_flag = groups::is_in_Gk(w.b);
  }
  std::string out;
  out += "sig: " + w.target.signature().to_string() + "\n";
  out += "target: " + serialize_element(w.target) + "\n";
  out += "a: " + serialize_element(w.a) + "\n";
  out += "b: " + serialize_element(w.b) + "\n";
  out += std::string("a_in_sylow_alt: ") + (a_flag ? "true" : "false") + "\n";
  out += std::string("b_in_sylow_alt: ") + (b_flag ? "true" : "false") + "\n";
  out += "recursion_depth: " + std::to_string(w.recursion_depth) + "\n";
  out += "verified: true\n";
  return out;
}

inline solver::CommutatorWitness import_witness(std::string_view text) {
  std::optional<AritySignature> sig;
  std::optional<std::string> target_s, a_s, b_s;
  int recursion_depth = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    const size_t line_at = pos;
    pos = eol == text.size() ? eol : eol + 1;
    if (size_t e = line.find('\r'); e != std::string_view::npos)
      line = line.substr(0, e);
    const size_t colon = line.find(':');
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (colon == std::string_view::npos)
      throw ParseError("expected 'key: value'", line_at);
    std::string_view key = line.substr(0, colon);
    std::string_view val = line.substr(colon + 1);
    while (!val.empty() && (val.front() == ' ' || val.front() == '\t'))
      val.remove_prefix(1);
    if (key == "sig") sig = parse_signature_csv(val);
    else if (key == "target") target_s = std::string(val);
    else if (key == "a") a_s = std::string(val);
    else if (key == "b") b_s = std::string(val);
    else if (key == "recursion_depth")
      recursion_depth = std::atoi(std::string(val).c_str());
    // membership flags and the verified stamp are recomputed, not trusted
  }
  if (!sig || !target_s || !a_s || !b_s)
    throw ParseError("witness document is missing a required field", 0);
  solver::CommutatorWitness w;
  w.target = parse_element(*target_s, *sig);
  w.a = parse_element(*a_s, *sig);
  w.b = parse_element(*b_s, *sig);
  w.recursion_depth = recursion_depth;
  if (commutator(w.a, w.b) != w.target)
    throw VerificationError("import_witness: [a,b] != target");
  if (w.target.signature().all_binary()) {
    w.a_in_sylow_alt = groups::is_in_Gk(w.a);
    w.b_in_sylow_alt = groups::is_in_Gk(w.b);
  }
  return w;
}

}  // namespace wrcomm::wrformat
