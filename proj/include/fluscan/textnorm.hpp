#ifndef FLUSCAN_TEXTNORM_HPP
#define FLUSCAN_TEXTNORM_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace fluscan::textnorm {

// Canonical fold of a UTF-8 string: precomposed letters are reduced to
// their base letter (canonical decomposition with combining marks
// stripped), combining marks are removed, letters are lowercased and the
// Greek final sigma is mapped to the medial form. Idempotent. Invalid
// UTF-8 bytes are replaced with U+FFFD.
std::string normalize(std::string_view raw);

// Splits on maximal runs of non-letter characters and normalizes each
// token; empty tokens are dropped.
std::vector<std::string> tokenize(std::string_view text);

// Keeps tokens not present in the (already-normalized) stopword set;
// preserves order, exact matches only.
std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& stopwords);

// Keyword set: base terms plus explicit morphological variants. Case and
// accent variation is absorbed by normalize(); declensions and
// conjugations must be listed in the lexicon file. Term ids are dense
// from 0 in entry order.
class TermLexicon {
 public:
  struct Entry {
    std::string base;                   // normalized
    std::vector<std::string> variants;  // normalized; includes base
  };

  TermLexicon() = default;

  // One entry per (base, extra variants) pair; everything is normalized
  // here. Throws if a variant maps to two different entries.
  static TermLexicon from_entries(
      const std::vector<std::pair<std::string, std::vector<std::string>>>& raw,
      std::string source_tag = {});

  // File format: one entry per line, base<TAB>variant1,variant2,...
  // (the tab and variant list are optional); '#' starts a comment line.
  static TermLexicon load(const std::string& path);

  int size() const { return static_cast<int>(entries_.size()); }
  const Entry& entry(int id) const { return entries_[id]; }
  const std::string& base(int id) const { return entries_[id].base; }
  const std::string& source_tag() const { return source_tag_; }
  std::vector<std::string> base_terms() const;

  // id of the entry owning this normalized token, if any
  std::optional<int> lookup(std::string_view normalized_token) const;

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, int> index_;
  std::string source_tag_;
};

// Occurrences of lexicon terms in the text: term id -> count, one count
// per matching token (exact match on normalized forms, no substrings).
std::map<int, int> match_terms(std::string_view text, const TermLexicon& lexicon);

// One normalized word per line, '#' comments, UTF-8.
std::unordered_set<std::string> load_stopwords(const std::string& path);

}  // namespace fluscan::textnorm

#endif
