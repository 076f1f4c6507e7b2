// Minimal XML well-formedness check for the generated SVG output: balanced
// and properly nested tags, quoted attributes, sane entities. Not a general
// XML parser.
#ifndef FLUSCAN_TESTS_XML_CHECK_HPP
#define FLUSCAN_TESTS_XML_CHECK_HPP

#include <cctype>
#include <string>
#include <vector>

namespace fluscan::testing {

inline bool xml_well_formed(const std::string& doc, std::string* error = nullptr) {
  auto fail = [&](const std::string& msg) {
    if (error) *error = msg;
    return false;
  };
  std::vector<std::string> stack;
  std::size_t i = 0;
  const std::size_t n = doc.size();
  bool seen_root = false;
  while (i < n) {
    const char c = doc[i];
    if (c == '<') {
      if (i + 1 >= n) return fail("dangling '<'");
      if (doc[i + 1] == '?') {  // declaration
        const auto end = doc.find("?>", i);
        if (end == std::string::npos) return fail("unterminated declaration");
        i = end + 2;
        continue;
      }
      if (doc.compare(i, 4, "<!--") == 0) {
        const auto end = doc.find("-->", i);
        if (end == std::string::npos) return fail("unterminated comment");
        i = end + 3;
        continue;
      }
      const bool closing = doc[i + 1] == '/';
      std::size_t j = i + (closing ? 2 : 1);
      std::string name;
      while (j < n && (std::isalnum(static_cast<unsigned char>(doc[j])) ||
                       doc[j] == ':' || doc[j] == '-' || doc[j] == '_'))
        name.push_back(doc[j++]);
      if (name.empty()) return fail("empty tag name");
      // attributes
      bool self_closing = false;
      while (j < n && doc[j] != '>') {
        if (doc[j] == '/' && j + 1 < n && doc[j + 1] == '>') {
          self_closing = true;
          j += 1;
          break;
        }
        if (doc[j] == '"') {
          const auto end = doc.find('"', j + 1);
          if (end == std::string::npos) return fail("unterminated attribute");
          j = end + 1;
          continue;
        }
        if (doc[j] == '<') return fail("'<' inside tag " + name);
        ++j;
      }
      if (j >= n || doc[j] != '>') return fail("unterminated tag " + name);
      i = j + 1;
      if (closing) {
        if (self_closing) return fail("malformed closing tag " + name);
        if (stack.empty() || stack.back() != name)
          return fail("mismatched closing tag " + name);
        stack.pop_back();
      } else if (!self_closing) {
        if (stack.empty() && seen_root) return fail("multiple roots");
        stack.push_back(name);
        seen_root = true;
      }
      continue;
    }
    if (c == '&') {
      const auto end = doc.find(';', i);
      if (end == std::string::npos || end - i > 8)
        return fail("bad entity");
      i = end + 1;
      continue;
    }
    if (c == '>') return fail("stray '>'");
    ++i;
  }
  if (!stack.empty()) return fail("unclosed tag " + stack.back());
  return seen_root;
}

}  // namespace fluscan::testing

#endif
