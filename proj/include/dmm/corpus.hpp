#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dmm/demographics.hpp"
#include "dmm/vocabulary.hpp"

namespace dmm {

struct Message {
  std::string msg_id;
  uint32_t user;  // index into Corpus::users
  size_t first_token;
  uint32_t num_tokens;
};

struct UserRecord {
  std::string user_id;
  DemographicVector prior;
  std::vector<uint32_t> messages;  // indices into Corpus::messages
};

// Tokenized corpus with per-user demographic priors. Token ids for all
// messages live in one flat array; each message covers the half-open range
// [first_token, first_token + num_tokens).
struct Corpus {
  Vocabulary vocab;
  std::vector<UserRecord> users;
  std::vector<Message> messages;
  std::vector<uint32_t> tokens;

  std::span<const uint32_t> message_tokens(const Message& m) const {
    return {tokens.data() + m.first_token, m.num_tokens};
  }
  std::span<const uint32_t> message_tokens(size_t i) const {
    return message_tokens(messages[i]);
  }

  // Appends a message, creating the user on first sight. Duplicate msg_ids
  // are an input error.
  void add_message(std::string msg_id, std::string_view user_id,
                   const DemographicVector& message_demo,
                   std::vector<uint32_t> token_ids);

  // Recomputes each user's prior as the mean of its messages' demographics
  // recorded via add_message. Only needed when building incrementally.
  void finalize_priors();

  uint32_t user_index(std::string_view user_id) const;  // throws if missing
  bool has_message(std::string_view msg_id) const;

  size_t total_tokens() const { return tokens.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  template <typename V>
  using StrMap = std::unordered_map<std::string, V, Hash, std::equal_to<>>;

  StrMap<uint32_t> user_index_;
  StrMap<uint32_t> message_index_;
  // Per-user running demographic sums used by finalize_priors.
  std::vector<std::array<double, kNumCategories>> prior_sums_;

  friend Corpus read_corpus(std::istream& in);
};

// DMMCORPUS v1 serialization. Text-based, deterministic: users are written
// sorted by user_id, messages in corpus order.
void write_corpus(const Corpus& corpus, std::ostream& out);
void write_corpus_file(const Corpus& corpus, const std::string& path);
Corpus read_corpus(std::istream& in);
Corpus read_corpus_file(const std::string& path);

}  // namespace dmm
