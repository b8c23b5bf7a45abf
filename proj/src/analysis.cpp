#include "dmm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "dmm/common.hpp"
#include "dmm/rng.hpp"

namespace dmm {

double alignment_ratio(const TrainedModel& model, uint32_t w, int k, RatioDenominator denom) {
  const int K = model.hyper.K;
  if (w >= model.v()) throw input_error("word id outside the vocabulary");
  if (k < 0 || k >= K) throw input_error("topic index out of range");
  const double V = static_cast<double>(model.v());
  const double* row = model.nbar_wk.data() + static_cast<size_t>(w) * K;

  const double numerator = (row[k] + 1.0) / (model.nbar_k[static_cast<size_t>(k)] + V);

  double denominator;
  if (denom == RatioDenominator::pooled) {
    double other_w = 0.0, other_total = 0.0;
    for (int j = 0; j < K; j++) {
      if (j == k) continue;
      other_w += row[j];
      other_total += model.nbar_k[static_cast<size_t>(j)];
    }
    denominator = (other_w + 1.0) / (other_total + V);
  } else {
    double mass = 0.0;
    for (int j = 0; j < K; j++) {
      if (j != k) mass += model.nbar_k[static_cast<size_t>(j)];
    }
    if (mass <= 0.0) throw input_error("other topics hold no mass; mixture ratio undefined");
    denominator = 0.0;
    for (int j = 0; j < K; j++) {
      if (j == k) continue;
      denominator += model.nbar_k[static_cast<size_t>(j)] / mass * model.phi_at(w, j);
    }
  }
  return numerator / denominator;
}

std::vector<uint32_t> heavily_aligned_words(const TrainedModel& model, int k, double min_ratio,
                                            RatioDenominator denom) {
  std::vector<uint32_t> out;
  for (uint32_t w = 1; w < model.v(); w++) {
    if (alignment_ratio(model, w, k, denom) >= min_ratio) out.push_back(w);
  }
  return out;
}

std::unordered_set<std::string> load_dictionary(std::istream& in) {
  std::unordered_set<std::string> dict;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (char& c : line) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    dict.insert(line);
  }
  return dict;
}

std::unordered_set<std::string> load_dictionary_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open dictionary: " + path);
  return load_dictionary(in);
}

double dictionary_coverage(std::span<const std::string> words,
                           const std::unordered_set<std::string>& dictionary) {
  if (words.empty()) throw input_error("dictionary coverage of an empty word set");
  size_t out_of_dict = 0;
  for (const auto& w : words) {
    std::string lower = w;
    for (char& c : lower) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    if (dictionary.find(lower) == dictionary.end()) out_of_dict++;
  }
  return static_cast<double>(out_of_dict) / static_cast<double>(words.size());
}

bool PatternItem::matches(std::string_view word, std::string_view word_tag) const {
  if (is_tag()) return word_tag == tag;
  std::string lower(word);
  for (char& c : lower) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return std::find(literals.begin(), literals.end(), lower) != literals.end();
}

void PatternSpec::check() const {
  if (name.empty()) throw input_error("pattern without a name");
  if (items.size() < 2) throw input_error("pattern '" + name + "' needs at least 2 items");
  for (const auto& item : items) {
    if (!item.is_tag() && item.literals.empty())
      throw input_error("pattern '" + name + "' has an empty literal set");
  }
}

std::vector<PatternSpec> builtin_patterns() {
  std::vector<PatternSpec> out;
  out.push_back({"habitual_be", {{"O", {}}, {"", {"be", "b"}}, {"V", {}}}});
  out.push_back({"future_gone", {{"", {"gone", "gne", "gon"}}, {"V", {}}}});
  out.push_back({"completive_done", {{"", {"done", "dne"}}, {"V", {}}}});
  for (const auto& p : out) p.check();
  return out;
}

PatternSpec parse_pattern_line(std::string_view line) {
  size_t colon = line.find(':');
  if (colon == std::string_view::npos) throw input_error("pattern line missing ':'");
  PatternSpec spec;
  spec.name = std::string(line.substr(0, colon));
  while (!spec.name.empty() && spec.name.back() == ' ') spec.name.pop_back();

  std::string_view rest = line.substr(colon + 1);
  size_t pos = 0;
  while (pos < rest.size()) {
    while (pos < rest.size() && (rest[pos] == ' ' || rest[pos] == '\t')) pos++;
    size_t end = pos;
    while (end < rest.size() && rest[end] != ' ' && rest[end] != '\t') end++;
    if (end == pos) break;
    std::string_view item = rest.substr(pos, end - pos);
    pos = end;
    if (item.starts_with("TAG:")) {
      spec.items.push_back({std::string(item.substr(4)), {}});
      if (spec.items.back().tag.empty()) throw input_error("TAG: item with empty tag");
    } else if (item.starts_with("LIT:")) {
      PatternItem lit;
      std::string_view words = item.substr(4);
      size_t wpos = 0;
      while (wpos <= words.size()) {
        size_t bar = words.find('|', wpos);
        if (bar == std::string_view::npos) bar = words.size();
        if (bar > wpos) {
          std::string w(words.substr(wpos, bar - wpos));
          for (char& c : w) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
          }
          lit.literals.push_back(std::move(w));
        }
        wpos = bar + 1;
      }
      spec.items.push_back(std::move(lit));
    } else {
      throw input_error("pattern item must start with TAG: or LIT:, got '" + std::string(item) + "'");
    }
  }
  spec.check();
  return spec;
}

std::vector<PatternSpec> read_pattern_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open pattern file: " + path);
  std::vector<PatternSpec> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_pattern_line(line));
  }
  if (out.empty()) throw input_error("pattern file has no patterns: " + path);
  return out;
}

std::vector<TaggedMessage> read_tagged_messages(std::istream& in) {
  std::vector<TaggedMessage> out;
  TaggedMessage current;
  bool open = false;
  std::string line;
  auto flush = [&]() {
    if (open && !current.tokens.empty()) out.push_back(std::move(current));
    current = {};
    open = false;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      flush();
      size_t start = 1;
      while (start < line.size() && line[start] == ' ') start++;
      current.msg_id = line.substr(start);
      open = true;
      continue;
    }
    size_t tab = line.find('\t');
    if (tab == std::string::npos) throw input_error("tagged line missing tab: '" + line + "'");
    if (!open) {
      // Tokens before any header get an anonymous message.
      open = true;
    }
    current.tokens.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  flush();
  return out;
}

std::vector<TaggedMessage> read_tagged_messages_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open tagged corpus: " + path);
  return read_tagged_messages(in);
}

std::vector<PatternHits> pattern_search(std::span<const TaggedMessage> messages,
                                        std::span<const PatternSpec> patterns) {
  for (const auto& p : patterns) p.check();
  std::vector<PatternHits> hits(patterns.size());
  for (size_t p = 0; p < patterns.size(); p++) hits[p].name = patterns[p].name;

  for (const auto& msg : messages) {
    for (size_t p = 0; p < patterns.size(); p++) {
      const auto& items = patterns[p].items;
      if (msg.tokens.size() < items.size()) continue;
      bool matched = false;
      for (size_t start = 0; start + items.size() <= msg.tokens.size() && !matched; start++) {
        matched = true;
        for (size_t i = 0; i < items.size(); i++) {
          const auto& tok = msg.tokens[start + i];
          if (!items[i].matches(tok.word, tok.tag)) {
            matched = false;
            break;
          }
        }
      }
      if (matched) {
        hits[p].message_count++;
        hits[p].msg_ids.push_back(msg.msg_id);
      }
    }
  }
  return hits;
}

int decile_of(double p) {
  for (int d = 9; d >= 1; d--) {
    if (p >= static_cast<double>(d) / 10.0) return d;
  }
  return 0;
}

DecileReport decile_report(std::span<const double> posterior,
                           std::span<const uint32_t> token_counts,
                           std::span<const char> predicate, uint64_t sample_size,
                           uint64_t seed) {
  if (posterior.size() != token_counts.size() || posterior.size() != predicate.size())
    throw input_error("decile report inputs have mismatched lengths");
  if (sample_size == 0) throw input_error("sample_size must be positive");

  std::array<std::vector<uint32_t>, 10> bins;
  for (size_t i = 0; i < posterior.size(); i++) {
    bins[static_cast<size_t>(decile_of(posterior[i]))].push_back(static_cast<uint32_t>(i));
  }

  DecileReport report;
  for (int d = 0; d < 10; d++) {
    auto& bin = bins[static_cast<size_t>(d)];
    DecileRow& row = report.rows[static_cast<size_t>(d)];
    row.population = bin.size();
    if (bin.empty()) {
      row.proportion = std::numeric_limits<double>::quiet_NaN();
      row.mean_tokens = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const uint64_t take = std::min<uint64_t>(sample_size, bin.size());
    if (take < bin.size()) {
      Rng rng(derive_seed(seed, static_cast<uint64_t>(d)));
      for (uint64_t i = 0; i < take; i++) {
        uint64_t j = i + rng.next_below(bin.size() - i);
        std::swap(bin[i], bin[j]);
      }
    }
    row.sampled = take;
    uint64_t token_sum = 0;
    for (uint64_t i = 0; i < take; i++) {
      const uint32_t idx = bin[i];
      if (predicate[idx]) row.hits++;
      token_sum += token_counts[idx];
    }
    row.proportion = static_cast<double>(row.hits) / static_cast<double>(take);
    row.mean_tokens = static_cast<double>(token_sum) / static_cast<double>(take);
  }
  return report;
}

double construction_ratio(uint64_t matches_a, uint64_t size_a, uint64_t matches_b,
                          uint64_t size_b) {
  if (size_a == 0 || size_b == 0) throw input_error("construction ratio over an empty corpus");
  const double rate_a = static_cast<double>(matches_a) / static_cast<double>(size_a);
  const double rate_b = static_cast<double>(matches_b) / static_cast<double>(size_b);
  if (rate_b == 0.0) return std::numeric_limits<double>::infinity();
  return rate_a / rate_b;
}

}  // namespace dmm
