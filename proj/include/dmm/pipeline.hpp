#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmm/corpus.hpp"
#include "dmm/demographics.hpp"

namespace dmm {

struct RawMessage {
  std::string msg_id;
  std::string user_id;
  std::string text;
  std::array<double, 4> raw_demographics{};
  std::optional<int64_t> follower_count;
  std::optional<bool> is_retweet_flag;
};

// Reasons a message never reaches the corpus. The first five come from the
// casual-conversation filters; the last two come from later pipeline stages
// (unusable census row, nothing left after tokenization).
enum class DropReason {
  followers,
  hashtags,
  promo_string,
  retweet_flag,
  retweet_token,
  demographics,
  empty,
};

const char* drop_reason_name(DropReason r);

// Applies the casual-conversation filters in a fixed order and returns the
// first reason that fires, or nullopt to keep the message.
std::optional<DropReason> filter_message(const RawMessage& msg);

// Parses one JSON-lines record. Throws input_error on anything malformed.
RawMessage parse_raw_json(std::string_view line);

// A message that survived filtering, with normalized demographics and
// tokenized words, before vocabulary ids exist.
struct WordMessage {
  std::string msg_id;
  std::string user_id;
  DemographicVector demo;
  std::vector<std::string> words;
};

// Words used by at least min_users distinct users, sorted lexicographically
// and numbered from 1 (0 is the OOV symbol).
Vocabulary build_vocabulary(std::span<const WordMessage> messages, int min_users);

struct DroppedRecord {
  std::string msg_id;
  DropReason reason;
};

struct PreprocessStats {
  uint64_t lines_read = 0;
  uint64_t invalid_lines = 0;
  uint64_t kept_messages = 0;
  std::array<uint64_t, 7> dropped_by_reason{};  // indexed by DropReason

  uint64_t total_dropped() const;
};

// Filter + normalize + tokenize one raw message. Returns nullopt and
// records the reason when the message is dropped.
std::optional<WordMessage> prepare_message(const RawMessage& msg, PreprocessStats& stats,
                                           std::vector<DroppedRecord>* dropped_log);

// Full pipeline over parsed records: filter, normalize demographics,
// tokenize, build the vocabulary, map words to ids, average user priors.
Corpus build_corpus(std::span<const RawMessage> raw, int min_users,
                    PreprocessStats* stats = nullptr,
                    std::vector<DroppedRecord>* dropped_log = nullptr);

// Same pipeline reading JSON-lines from a stream. Invalid lines are counted
// and skipped.
Corpus preprocess_jsonl(std::istream& in, int min_users, PreprocessStats* stats = nullptr,
                        std::vector<DroppedRecord>* dropped_log = nullptr);

}  // namespace dmm
