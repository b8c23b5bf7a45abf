#include "dmm/pipeline.hpp"

#include <algorithm>
#include <istream>
#include <unordered_map>

#include <json.hpp>

#include "dmm/common.hpp"
#include "dmm/text_normalize.hpp"
#include "dmm/tokenize.hpp"

namespace dmm {

const char* drop_reason_name(DropReason r) {
  switch (r) {
    case DropReason::followers: return "followers";
    case DropReason::hashtags: return "hashtags";
    case DropReason::promo_string: return "promo_string";
    case DropReason::retweet_flag: return "retweet_flag";
    case DropReason::retweet_token: return "retweet_token";
    case DropReason::demographics: return "demographics";
    case DropReason::empty: return "empty";
  }
  return "?";
}

namespace {

std::vector<std::string_view> whitespace_split(std::string_view text) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  size_t token_start = 0;
  bool in_token = false;
  while (pos < text.size()) {
    size_t start = pos;
    char32_t cp = utf8::decode_next(text, pos);
    if (is_unicode_space(cp)) {
      if (in_token) {
        out.push_back(text.substr(token_start, start - token_start));
        in_token = false;
      }
    } else if (!in_token) {
      in_token = true;
      token_start = start;
    }
  }
  if (in_token) out.push_back(text.substr(token_start));
  return out;
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

}  // namespace

std::optional<DropReason> filter_message(const RawMessage& msg) {
  if (msg.follower_count && *msg.follower_count >= 1000) return DropReason::followers;

  auto raw_tokens = whitespace_split(msg.text);
  int hashtags = 0;
  for (auto t : raw_tokens) {
    if (t.size() >= 1 && t[0] == '#') hashtags++;
  }
  if (hashtags >= 3) return DropReason::hashtags;

  std::string lowered = ascii_lower(msg.text);
  if (lowered.find("http") != std::string::npos ||
      lowered.find("follow") != std::string::npos ||
      lowered.find("mention") != std::string::npos) {
    return DropReason::promo_string;
  }

  if (msg.is_retweet_flag && *msg.is_retweet_flag) return DropReason::retweet_flag;

  // "rt" must be a standalone token; substring matching would drop most of
  // English ("start", "shirt", ...).
  for (auto t : whitespace_split(lowered)) {
    if (t == "rt") return DropReason::retweet_token;
  }
  return std::nullopt;
}

RawMessage parse_raw_json(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("bad JSON record: ") + e.what());
  }
  if (!j.is_object()) throw input_error("record is not a JSON object");

  RawMessage msg;
  try {
    msg.msg_id = j.at("msg_id").get<std::string>();
    msg.user_id = j.at("user_id").get<std::string>();
    msg.text = j.at("text").get<std::string>();
    const auto& demo = j.at("demographics");
    if (!demo.is_array() || demo.size() != 4)
      throw input_error("demographics must be an array of 4 numbers");
    for (size_t k = 0; k < 4; k++) msg.raw_demographics[k] = demo[k].get<double>();
    if (j.contains("followers")) msg.follower_count = j["followers"].get<int64_t>();
    if (j.contains("retweet")) msg.is_retweet_flag = j["retweet"].get<bool>();
  } catch (const nlohmann::json::exception& e) {
    throw input_error(std::string("bad JSON record: ") + e.what());
  }
  if (msg.msg_id.empty()) throw input_error("empty msg_id");
  if (msg.user_id.empty()) throw input_error("empty user_id");
  if (msg.follower_count && *msg.follower_count < 0)
    throw input_error("negative follower count");
  return msg;
}

std::optional<WordMessage> prepare_message(const RawMessage& msg, PreprocessStats& stats,
                                           std::vector<DroppedRecord>* dropped_log) {
  auto drop = [&](DropReason r) -> std::optional<WordMessage> {
    stats.dropped_by_reason[static_cast<size_t>(r)]++;
    if (dropped_log) dropped_log->push_back({msg.msg_id, r});
    return std::nullopt;
  };

  if (auto reason = filter_message(msg)) return drop(*reason);

  auto demo = normalize_demographics(msg.raw_demographics);
  if (!demo) return drop(DropReason::demographics);

  auto words = tokenize(strip_mentions(strip_symbols(msg.text)));
  if (words.empty()) return drop(DropReason::empty);

  stats.kept_messages++;
  WordMessage out;
  out.msg_id = msg.msg_id;
  out.user_id = msg.user_id;
  out.demo = *demo;
  out.words = std::move(words);
  return out;
}

uint64_t PreprocessStats::total_dropped() const {
  uint64_t n = 0;
  for (uint64_t c : dropped_by_reason) n += c;
  return n;
}

Vocabulary build_vocabulary(std::span<const WordMessage> messages, int min_users) {
  if (min_users < 1) throw input_error("min_users must be at least 1");
  if (messages.empty()) throw input_error("cannot build a vocabulary from an empty corpus");

  std::unordered_map<std::string, uint32_t> user_ids;
  std::unordered_map<std::string, std::vector<uint32_t>> word_users;
  for (const auto& m : messages) {
    auto [uit, _] = user_ids.emplace(m.user_id, static_cast<uint32_t>(user_ids.size()));
    for (const auto& w : m.words) word_users[w].push_back(uit->second);
  }

  std::vector<std::string> kept;
  for (auto& [word, users] : word_users) {
    std::sort(users.begin(), users.end());
    users.erase(std::unique(users.begin(), users.end()), users.end());
    if (users.size() >= static_cast<size_t>(min_users)) kept.push_back(word);
  }
  std::sort(kept.begin(), kept.end());
  return Vocabulary(std::move(kept));
}

namespace {

Corpus assemble(std::vector<WordMessage>&& kept, int min_users) {
  Corpus corpus;
  corpus.vocab = build_vocabulary(kept, min_users);
  for (auto& m : kept) {
    std::vector<uint32_t> ids;
    ids.reserve(m.words.size());
    for (const auto& w : m.words) ids.push_back(corpus.vocab.id_of(w));
    corpus.add_message(std::move(m.msg_id), m.user_id, m.demo, std::move(ids));
  }
  corpus.finalize_priors();
  return corpus;
}

}  // namespace

Corpus build_corpus(std::span<const RawMessage> raw, int min_users, PreprocessStats* stats,
                    std::vector<DroppedRecord>* dropped_log) {
  PreprocessStats local;
  PreprocessStats& st = stats ? *stats : local;

  std::vector<WordMessage> kept;
  kept.reserve(raw.size());
  for (const auto& msg : raw) {
    st.lines_read++;
    if (auto wm = prepare_message(msg, st, dropped_log)) kept.push_back(std::move(*wm));
  }
  return assemble(std::move(kept), min_users);
}

Corpus preprocess_jsonl(std::istream& in, int min_users, PreprocessStats* stats,
                        std::vector<DroppedRecord>* dropped_log) {
  PreprocessStats local;
  PreprocessStats& st = stats ? *stats : local;

  std::vector<WordMessage> kept;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    st.lines_read++;
    RawMessage msg;
    try {
      msg = parse_raw_json(line);
    } catch (const input_error&) {
      st.invalid_lines++;
      continue;
    }
    if (auto wm = prepare_message(msg, st, dropped_log)) kept.push_back(std::move(*wm));
  }
  return assemble(std::move(kept), min_users);
}

}  // namespace dmm
