#include "dmm/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "dmm/common.hpp"

namespace dmm {

void Corpus::add_message(std::string msg_id, std::string_view user_id,
                         const DemographicVector& message_demo,
                         std::vector<uint32_t> token_ids) {
  if (token_ids.empty()) throw invariant_error("add_message: empty token list");
  for (uint32_t t : token_ids) {
    if (t >= vocab.size()) throw invariant_error("add_message: token id out of range");
  }
  if (!message_index_.emplace(msg_id, static_cast<uint32_t>(messages.size())).second)
    throw input_error("duplicate msg_id: " + msg_id);

  uint32_t u;
  auto it = user_index_.find(user_id);
  if (it == user_index_.end()) {
    u = static_cast<uint32_t>(users.size());
    user_index_.emplace(std::string(user_id), u);
    users.push_back({std::string(user_id), {}, {}});
    prior_sums_.emplace_back();
  } else {
    u = it->second;
  }
  users[u].messages.push_back(static_cast<uint32_t>(messages.size()));
  for (int k = 0; k < kNumCategories; k++) prior_sums_[u][static_cast<size_t>(k)] += message_demo[k];

  Message m;
  m.msg_id = std::move(msg_id);
  m.user = u;
  m.first_token = tokens.size();
  m.num_tokens = static_cast<uint32_t>(token_ids.size());
  tokens.insert(tokens.end(), token_ids.begin(), token_ids.end());
  messages.push_back(std::move(m));
}

void Corpus::finalize_priors() {
  for (size_t u = 0; u < users.size(); u++) {
    const double n = static_cast<double>(users[u].messages.size());
    for (int k = 0; k < kNumCategories; k++)
      users[u].prior[k] = prior_sums_[u][static_cast<size_t>(k)] / n;
  }
}

uint32_t Corpus::user_index(std::string_view user_id) const {
  auto it = user_index_.find(user_id);
  if (it == user_index_.end()) throw input_error("unknown user_id: " + std::string(user_id));
  return it->second;
}

bool Corpus::has_message(std::string_view msg_id) const {
  return message_index_.find(msg_id) != message_index_.end();
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  out << "DMMCORPUS v1 " << corpus.vocab.size() << ' ' << corpus.users.size()
      << ' ' << corpus.messages.size() << '\n';
  for (uint32_t i = 0; i < corpus.vocab.size(); i++) {
    out << i << '\t' << corpus.vocab.word_of(i) << '\n';
  }
  std::vector<uint32_t> order(corpus.users.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
    return corpus.users[a].user_id < corpus.users[b].user_id;
  });
  for (uint32_t u : order) {
    const UserRecord& rec = corpus.users[u];
    out << rec.user_id;
    for (int k = 0; k < kNumCategories; k++) out << (k ? ' ' : '\t') << format_double(rec.prior[k]);
    out << '\n';
  }
  for (const Message& m : corpus.messages) {
    out << m.msg_id << '\t' << corpus.users[m.user].user_id << '\t';
    auto toks = corpus.message_tokens(m);
    for (size_t i = 0; i < toks.size(); i++) out << (i ? " " : "") << toks[i];
    out << '\n';
  }
  if (!out) throw input_error("corpus write failed");
}

void write_corpus_file(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open for writing: " + path);
  write_corpus(corpus, out);
}

namespace {

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw input_error(std::string("corpus file truncated at ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, end - start));
    start = end + 1;
  }
}

uint64_t parse_count(std::string_view text, const char* what) {
  uint64_t v = 0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw input_error(std::string("bad corpus field (") + what + "): '" + std::string(text) + "'");
  return v;
}

}  // namespace

Corpus read_corpus(std::istream& in) {
  std::string header = next_line(in, "header");
  auto head = split(header, ' ');
  if (head.size() != 5 || head[0] != "DMMCORPUS" || head[1] != "v1")
    throw input_error("not a DMMCORPUS v1 file");
  const auto v = parse_count(head[2], "V");
  const auto num_users = parse_count(head[3], "num_users");
  const auto num_messages = parse_count(head[4], "num_messages");
  if (v == 0) throw input_error("corpus with empty vocabulary");

  std::vector<std::string> words;
  words.reserve(v > 0 ? v - 1 : 0);
  for (uint64_t i = 0; i < v; i++) {
    std::string line = next_line(in, "vocabulary");
    auto parts = split(line, '\t');
    if (parts.size() != 2 || parse_count(parts[0], "word id") != i)
      throw input_error("bad vocabulary line: '" + line + "'");
    if (i == 0) {
      if (parts[1] != kOovSymbol) throw input_error("vocabulary id 0 must be the OOV symbol");
    } else {
      words.emplace_back(parts[1]);
    }
  }

  Corpus corpus;
  corpus.vocab = Vocabulary(std::move(words));
  corpus.users.reserve(num_users);
  for (uint64_t i = 0; i < num_users; i++) {
    std::string line = next_line(in, "user table");
    auto parts = split(line, '\t');
    if (parts.size() != 2) throw input_error("bad user line: '" + line + "'");
    auto fields = split(parts[1], ' ');
    if (fields.size() != kNumCategories) throw input_error("bad user prior: '" + line + "'");
    UserRecord rec;
    rec.user_id = std::string(parts[0]);
    for (int k = 0; k < kNumCategories; k++) rec.prior[k] = parse_double(fields[static_cast<size_t>(k)]);
    if (!rec.prior.valid(1e-6))
      throw input_error("user prior is not a probability vector: '" + line + "'");
    if (!corpus.user_index_.emplace(rec.user_id, static_cast<uint32_t>(corpus.users.size())).second)
      throw input_error("duplicate user_id: " + rec.user_id);
    corpus.users.push_back(std::move(rec));
  }

  corpus.messages.reserve(num_messages);
  for (uint64_t i = 0; i < num_messages; i++) {
    std::string line = next_line(in, "messages");
    auto parts = split(line, '\t');
    if (parts.size() != 3) throw input_error("bad message line: '" + line + "'");
    Message m;
    m.msg_id = std::string(parts[0]);
    auto uit = corpus.user_index_.find(parts[1]);
    if (uit == corpus.user_index_.end())
      throw input_error("message references unknown user: '" + line + "'");
    m.user = uit->second;
    m.first_token = corpus.tokens.size();
    auto ids = split(parts[2], ' ');
    if (ids.size() == 1 && ids[0].empty()) throw input_error("message with no tokens: " + m.msg_id);
    for (auto id_text : ids) {
      uint64_t id = parse_count(id_text, "token id");
      if (id >= corpus.vocab.size()) throw input_error("token id out of range: " + m.msg_id);
      corpus.tokens.push_back(static_cast<uint32_t>(id));
    }
    m.num_tokens = static_cast<uint32_t>(corpus.tokens.size() - m.first_token);
    if (!corpus.message_index_.emplace(m.msg_id, static_cast<uint32_t>(corpus.messages.size())).second)
      throw input_error("duplicate msg_id: " + m.msg_id);
    corpus.users[m.user].messages.push_back(static_cast<uint32_t>(corpus.messages.size()));
    corpus.messages.push_back(std::move(m));
  }
  return corpus;
}

Corpus read_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open corpus: " + path);
  return read_corpus(in);
}

}  // namespace dmm
