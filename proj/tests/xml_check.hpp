#pragma once

#include <cctype>
#include <string>
#include <vector>

namespace rfsom::testing {

struct XmlCheck {
  bool ok = true;
  std::string error;
};

/// Minimal well-formedness check for the SVGs this project emits: balanced
/// and properly nested tags, quoted attribute values, exactly one root
/// element, sane entity references. Not a general XML parser.
inline XmlCheck check_xml(const std::string& text) {
  auto fail = [](std::string msg) { return XmlCheck{false, std::move(msg)}; };
  std::vector<std::string> stack;
  std::size_t i = 0;
  const std::size_t n = text.size();
  int roots = 0;
  bool seen_root = false;

  auto is_name_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
           c == ':' || c == '.';
  };

  while (i < n) {
    char c = text[i];
    if (c == '<') {
      if (i + 1 >= n) return fail("dangling '<' at end of input");
      if (text[i + 1] == '?') {  // declaration
        auto end = text.find("?>", i + 2);
        if (end == std::string::npos) return fail("unterminated declaration");
        i = end + 2;
        continue;
      }
      if (text.compare(i, 4, "<!--") == 0) {
        auto end = text.find("-->", i + 4);
        if (end == std::string::npos) return fail("unterminated comment");
        i = end + 3;
        continue;
      }
      if (text[i + 1] == '!') {  // doctype etc.
        auto end = text.find('>', i);
        if (end == std::string::npos) return fail("unterminated '<!' section");
        i = end + 1;
        continue;
      }
      bool closing = text[i + 1] == '/';
      std::size_t p = i + (closing ? 2 : 1);
      std::size_t name_start = p;
      while (p < n && is_name_char(text[p])) ++p;
      if (p == name_start) return fail("missing tag name near offset " + std::to_string(i));
      std::string name = text.substr(name_start, p - name_start);
      if (closing) {
        while (p < n && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
        if (p >= n || text[p] != '>') return fail("malformed closing tag </" + name);
        if (stack.empty()) return fail("closing tag </" + name + "> with empty stack");
        if (stack.back() != name)
          return fail("mismatched tag: expected </" + stack.back() + ">, got </" + name + ">");
        stack.pop_back();
        i = p + 1;
        continue;
      }
      // attributes
      bool self_closing = false;
      while (p < n) {
        while (p < n && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
        if (p >= n) return fail("unterminated tag <" + name);
        if (text[p] == '>') {
          ++p;
          break;
        }
        if (text[p] == '/') {
          if (p + 1 >= n || text[p + 1] != '>') return fail("stray '/' in tag <" + name);
          self_closing = true;
          p += 2;
          break;
        }
        std::size_t attr_start = p;
        while (p < n && is_name_char(text[p])) ++p;
        if (p == attr_start) return fail("bad attribute name in <" + name);
        if (p >= n || text[p] != '=') return fail("attribute without '=' in <" + name);
        ++p;
        if (p >= n || (text[p] != '"' && text[p] != '\''))
          return fail("unquoted attribute value in <" + name);
        char quote = text[p++];
        while (p < n && text[p] != quote) {
          if (text[p] == '<') return fail("raw '<' inside attribute value in <" + name);
          ++p;
        }
        if (p >= n) return fail("unterminated attribute value in <" + name);
        ++p;
      }
      if (stack.empty()) {
        if (seen_root && !self_closing) ++roots;
        if (seen_root && self_closing) ++roots;
        if (!seen_root) seen_root = true;
        else if (roots > 0) return fail("multiple root elements");
      }
      if (!self_closing) stack.push_back(name);
      i = p;
      continue;
    }
    if (c == '&') {
      std::size_t p = i + 1;
      if (p < n && text[p] == '#') {
        ++p;
        while (p < n && std::isdigit(static_cast<unsigned char>(text[p]))) ++p;
      } else {
        while (p < n && std::isalpha(static_cast<unsigned char>(text[p]))) ++p;
      }
      if (p >= n || text[p] != ';' || p == i + 1)
        return fail("bare '&' at offset " + std::to_string(i));
      i = p + 1;
      continue;
    }
    ++i;
  }
  if (!stack.empty()) return fail("unclosed tag <" + stack.back() + ">");
  if (!seen_root) return fail("no root element");
  return {};
}

inline std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

}  // namespace rfsom::testing
