#ifndef FLUSCAN_INGEST_HPP
#define FLUSCAN_INGEST_HPP

#include <cstdint>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>

#include "fluscan/core.hpp"
#include "fluscan/textnorm.hpp"

namespace fluscan::ingest {

struct TweetRecord {
  std::string id;
  std::int64_t epoch_seconds = 0;  // UTC instant
  DayStamp day;                    // UTC date of the instant
  std::string user;
  std::string text;
  std::optional<std::string> location;
};

// Yields records in timestamp order until exhausted. Implementations must
// throw on out-of-order timestamps and count (and skip) malformed input.
class StreamSource {
 public:
  virtual ~StreamSource() = default;
  virtual std::optional<TweetRecord> next() = 0;
  virtual std::uint64_t malformed_count() const { return 0; }
};

// Replay source over a newline-delimited file of flat JSON objects with
// fields id, timestamp (ISO-8601), user, text and optional location.
// Stands in for the live stream API; a live adapter would implement the
// same interface.
class ReplayFileSource : public StreamSource {
 public:
  explicit ReplayFileSource(const std::string& path);
  explicit ReplayFileSource(std::unique_ptr<std::istream> stream,
                            std::string name = "<stream>");
  ~ReplayFileSource() override;

  std::optional<TweetRecord> next() override;
  std::uint64_t malformed_count() const override { return malformed_; }

 private:
  std::unique_ptr<std::istream> in_;
  std::string name_;
  std::uint64_t malformed_ = 0;
  std::int64_t last_epoch_ = INT64_MIN;
};

struct IngestSummary {
  std::uint64_t tweets_seen = 0;      // distinct ids processed
  std::uint64_t tweets_matched = 0;   // tweets with at least one match
  std::uint64_t counts_added = 0;     // total matched occurrences
  std::uint64_t duplicates = 0;       // records dropped by id dedup
  std::uint64_t malformed = 0;        // records the source skipped
};

struct IngestResult {
  DailyCounters counters;
  IngestSummary summary;
};

// Accumulates counts across one or more source drains. Ids are deduped
// for the lifetime of the session, so consuming the same records again
// (a restart, a replayed file) cannot double-count.
class IngestSession {
 public:
  explicit IngestSession(const textnorm::TermLexicon& lexicon);

  // Drains the source, matching each record against the lexicon and
  // incrementing the (day, term) counter per matched occurrence.
  void consume(StreamSource& source);

  const DailyCounters& counters() const { return counters_; }
  const IngestSummary& summary() const { return summary_; }
  IngestResult take();

 private:
  const textnorm::TermLexicon& lexicon_;
  DailyCounters counters_;
  IngestSummary summary_;
  std::unordered_set<std::string> seen_ids_;
};

// Single-source convenience wrapper around IngestSession.
IngestResult run_ingest(StreamSource& source, const textnorm::TermLexicon& lexicon);

// Dense count matrix over the inclusive day range: rows in calendar
// order, columns in the given term order, missing counters are 0.
// Throws on an empty term list or an inverted range.
Matrix counters_to_features(const DailyCounters& counters,
                            const std::vector<int>& terms, DayStamp from,
                            DayStamp to);

// ISO-8601 instant: YYYY-MM-DD with optional Thh:mm:ss[.frac][Z|±hh:mm].
// Returns UTC epoch seconds.
std::optional<std::int64_t> parse_instant(std::string_view iso);

}  // namespace fluscan::ingest

#endif
