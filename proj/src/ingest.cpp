#include "fluscan/ingest.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace fluscan::ingest {

namespace {

bool parse_two(std::string_view s, std::size_t pos, int& out) {
  if (pos + 2 > s.size()) return false;
  auto [p, ec] = std::from_chars(s.data() + pos, s.data() + pos + 2, out);
  return ec == std::errc() && p == s.data() + pos + 2;
}

}  // namespace

std::optional<std::int64_t> parse_instant(std::string_view iso) {
  if (iso.size() < 10) return std::nullopt;
  const auto date = DayStamp::parse(iso.substr(0, 10));
  if (!date) return std::nullopt;
  std::int64_t secs = date->to_days() * 86400;
  if (iso.size() == 10) return secs;
  if (iso[10] != 'T' && iso[10] != ' ') return std::nullopt;
  int hh = 0, mm = 0, ss = 0;
  if (!parse_two(iso, 11, hh) || iso.size() < 16 || iso[13] != ':' ||
      !parse_two(iso, 14, mm))
    return std::nullopt;
  std::size_t pos = 16;
  if (pos < iso.size() && iso[pos] == ':') {
    if (!parse_two(iso, pos + 1, ss)) return std::nullopt;
    pos += 3;
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  secs += hh * 3600 + mm * 60 + ss;
  // optional fractional seconds, ignored
  if (pos < iso.size() && iso[pos] == '.') {
    ++pos;
    while (pos < iso.size() && iso[pos] >= '0' && iso[pos] <= '9') ++pos;
  }
  if (pos == iso.size()) return secs;  // no zone -> UTC
  if (iso[pos] == 'Z' && pos + 1 == iso.size()) return secs;
  if (iso[pos] == '+' || iso[pos] == '-') {
    const int sign = iso[pos] == '+' ? 1 : -1;
    int oh = 0, om = 0;
    if (!parse_two(iso, pos + 1, oh)) return std::nullopt;
    pos += 3;
    if (pos < iso.size() && iso[pos] == ':') ++pos;
    if (pos < iso.size()) {
      if (!parse_two(iso, pos, om)) return std::nullopt;
      pos += 2;
    }
    if (pos != iso.size() || oh > 23 || om > 59) return std::nullopt;
    return secs - sign * (oh * 3600 + om * 60);
  }
  return std::nullopt;
}

ReplayFileSource::ReplayFileSource(const std::string& path)
    : name_(path) {
  auto f = std::make_unique<std::ifstream>(path, std::ios::binary);
  if (!*f) throw std::runtime_error("cannot open stream file " + path);
  in_ = std::move(f);
}

ReplayFileSource::ReplayFileSource(std::unique_ptr<std::istream> stream,
                                   std::string name)
    : in_(std::move(stream)), name_(std::move(name)) {}

ReplayFileSource::~ReplayFileSource() = default;

std::optional<TweetRecord> ReplayFileSource::next() {
  std::string line;
  while (std::getline(*in_, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      ++malformed_;
      continue;
    }
    TweetRecord rec;
    if (!j.contains("id") || !j.contains("timestamp") || !j.contains("text") ||
        !j.contains("user")) {
      ++malformed_;
      continue;
    }
    if (j["id"].is_string())
      rec.id = j["id"].get<std::string>();
    else if (j["id"].is_number_integer())
      rec.id = std::to_string(j["id"].get<std::int64_t>());
    if (rec.id.empty() || !j["timestamp"].is_string() ||
        !j["text"].is_string() || !j["user"].is_string()) {
      ++malformed_;
      continue;
    }
    const auto epoch = parse_instant(j["timestamp"].get<std::string>());
    if (!epoch) {
      ++malformed_;
      continue;
    }
    rec.epoch_seconds = *epoch;
    rec.day = DayStamp::from_days(
        (rec.epoch_seconds >= 0 ? rec.epoch_seconds
                                : rec.epoch_seconds - 86399) /
        86400);
    rec.user = j["user"].get<std::string>();
    rec.text = j["text"].get<std::string>();
    if (j.contains("location") && j["location"].is_string())
      rec.location = j["location"].get<std::string>();
    if (rec.epoch_seconds < last_epoch_)
      throw std::runtime_error(name_ + ": record '" + rec.id +
                               "' is out of timestamp order");
    last_epoch_ = rec.epoch_seconds;
    return rec;
  }
  return std::nullopt;
}

IngestSession::IngestSession(const textnorm::TermLexicon& lexicon)
    : lexicon_(lexicon), counters_(lexicon.base_terms()) {}

void IngestSession::consume(StreamSource& source) {
  while (auto rec = source.next()) {
    if (!seen_ids_.insert(rec->id).second) {
      ++summary_.duplicates;
      continue;
    }
    ++summary_.tweets_seen;
    const auto matches = textnorm::match_terms(rec->text, lexicon_);
    if (matches.empty()) continue;
    ++summary_.tweets_matched;
    for (const auto& [term, n] : matches) {
      counters_.add(rec->day, term, n);
      summary_.counts_added += static_cast<std::uint64_t>(n);
    }
  }
  summary_.malformed += source.malformed_count();
}

IngestResult IngestSession::take() {
  return IngestResult{std::move(counters_), summary_};
}

IngestResult run_ingest(StreamSource& source,
                        const textnorm::TermLexicon& lexicon) {
  IngestSession session(lexicon);
  session.consume(source);
  return session.take();
}

Matrix counters_to_features(const DailyCounters& counters,
                            const std::vector<int>& terms, DayStamp from,
                            DayStamp to) {
  if (terms.empty())
    throw std::invalid_argument("counters_to_features: empty term list");
  const std::int64_t n_days = to.to_days() - from.to_days() + 1;
  if (n_days <= 0)
    throw std::invalid_argument("counters_to_features: empty day range");
  Matrix m(static_cast<std::size_t>(n_days), terms.size());
  for (std::int64_t d = 0; d < n_days; ++d) {
    const DayStamp day = add_days(from, d);
    for (std::size_t j = 0; j < terms.size(); ++j)
      m.at(static_cast<std::size_t>(d), j) =
          static_cast<double>(counters.at(day, terms[j]));
  }
  return m;
}

}  // namespace fluscan::ingest
