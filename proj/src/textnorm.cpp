#include "fluscan/textnorm.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace fluscan::textnorm {

namespace {

struct CpPair {
  char32_t from, to;
};
struct CpRange {
  char32_t lo, hi;
};

#include "unicode_tables.inc"

template <std::size_t N>
const CpPair* find_pair(const CpPair (&table)[N], char32_t cp) {
  auto it = std::lower_bound(
      std::begin(table), std::end(table), cp,
      [](const CpPair& p, char32_t c) { return p.from < c; });
  return (it != std::end(table) && it->from == cp) ? it : nullptr;
}

template <std::size_t N>
bool in_ranges(const CpRange (&table)[N], char32_t cp) {
  auto it = std::lower_bound(
      std::begin(table), std::end(table), cp,
      [](const CpRange& r, char32_t c) { return r.hi < c; });
  return it != std::end(table) && cp >= it->lo;
}

char32_t base_letter(char32_t cp) {
  // full canonical decomposition keeping the base character only
  for (;;) {
    const CpPair* p = find_pair(kBaseOfPrecomposed, cp);
    if (!p) return cp;
    cp = p->to;
  }
}

char32_t lower(char32_t cp) {
  const CpPair* p = find_pair(kLowercase, cp);
  return p ? p->to : cp;
}

bool is_mark(char32_t cp) { return in_ranges(kMarkRanges, cp); }

bool is_letter(char32_t cp) { return in_ranges(kLetterRanges, cp); }

constexpr char32_t kReplacement = 0xFFFD;
constexpr char32_t kFinalSigma = 0x3C2;
constexpr char32_t kMedialSigma = 0x3C3;

// Decodes one codepoint starting at s[i]; advances i. Invalid sequences
// consume one byte and yield U+FFFD.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++i;
    return kReplacement;
  }
  if (i + len > s.size()) {
    ++i;
    return kReplacement;
  }
  for (int k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(s[i + k]);
    if ((b & 0xC0) != 0x80) {
      ++i;
      return kReplacement;
    }
    cp = (cp << 6) | (b & 0x3F);
  }
  // reject overlong encodings and surrogates
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
      (len == 4 && cp < 0x10000) || (cp >= 0xD800 && cp <= 0xDFFF) ||
      cp > 0x10FFFF) {
    ++i;
    return kReplacement;
  }
  i += len;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

char32_t fold(char32_t cp) {
  char32_t c = lower(base_letter(cp));
  if (c == kFinalSigma) c = kMedialSigma;
  return c;
}

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

}  // namespace

std::string normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  std::size_t i = 0;
  while (i < raw.size()) {
    const char32_t cp = decode_utf8(raw, i);
    if (is_mark(cp)) continue;
    append_utf8(out, fold(cp));
  }
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t i = 0;
  bool in_token = false;
  auto flush = [&] {
    if (in_token && !current.empty()) tokens.push_back(current);
    current.clear();
    in_token = false;
  };
  while (i < text.size()) {
    const char32_t cp = decode_utf8(text, i);
    if (is_letter(cp)) {
      const char32_t c = fold(cp);
      append_utf8(current, c);
      in_token = true;
    } else if (is_mark(cp) && in_token) {
      // combining marks continue the current token and fold away
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& stopwords) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens)
    if (!stopwords.count(t)) out.push_back(t);
  return out;
}

TermLexicon TermLexicon::from_entries(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& raw,
    std::string source_tag) {
  TermLexicon lex;
  lex.source_tag_ = std::move(source_tag);
  for (const auto& [base_raw, variants_raw] : raw) {
    Entry e;
    e.base = normalize(base_raw);
    if (e.base.empty())
      throw std::invalid_argument("lexicon entry with empty base term");
    e.variants.push_back(e.base);
    for (const auto& v : variants_raw) {
      std::string nv = normalize(v);
      if (nv.empty()) continue;
      if (std::find(e.variants.begin(), e.variants.end(), nv) ==
          e.variants.end())
        e.variants.push_back(nv);
    }
    const int id = static_cast<int>(lex.entries_.size());
    for (const auto& v : e.variants) {
      auto [it, inserted] = lex.index_.try_emplace(v, id);
      if (!inserted && it->second != id)
        throw std::invalid_argument(
            "lexicon variant '" + v + "' is claimed by two entries ('" +
            lex.entries_[it->second].base + "' and '" + e.base + "')");
    }
    lex.entries_.push_back(std::move(e));
  }
  return lex;
}

TermLexicon TermLexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open lexicon file " + path);
  std::vector<std::pair<std::string, std::vector<std::string>>> raw;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::string base, rest;
    const auto tab = t.find('\t');
    if (tab == std::string::npos) {
      base = t;
    } else {
      base = trim(t.substr(0, tab));
      rest = trim(t.substr(tab + 1));
    }
    std::vector<std::string> variants;
    std::size_t pos = 0;
    while (pos <= rest.size() && !rest.empty()) {
      const auto comma = rest.find(',', pos);
      const auto piece =
          comma == std::string::npos ? rest.substr(pos) : rest.substr(pos, comma - pos);
      const std::string v = trim(piece);
      if (!v.empty()) variants.push_back(v);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    raw.emplace_back(std::move(base), std::move(variants));
  }
  return from_entries(raw, path);
}

std::vector<std::string> TermLexicon::base_terms() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.base);
  return out;
}

std::optional<int> TermLexicon::lookup(std::string_view normalized_token) const {
  auto it = index_.find(std::string(normalized_token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::map<int, int> match_terms(std::string_view text,
                               const TermLexicon& lexicon) {
  std::map<int, int> counts;
  for (const auto& token : tokenize(text))
    if (auto id = lexicon.lookup(token)) ++counts[*id];
  return counts;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open stopword file " + path);
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    words.insert(normalize(t));
  }
  return words;
}

}  // namespace fluscan::textnorm
