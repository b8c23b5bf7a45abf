#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dmm/model.hpp"

namespace dmm {

enum class RatioDenominator {
  pooled,   // pool the other topics' counts, smooth like phi
  mixture,  // topic-mass-weighted mixture of the other topics' phi columns
};

// Likelihood ratio p(w | z=k) / p(w | z != k) from the averaged count
// tables, the word-level alignment diagnostic.
double alignment_ratio(const TrainedModel& model, uint32_t w, int k,
                       RatioDenominator denom = RatioDenominator::pooled);

// Non-OOV words with alignment_ratio >= min_ratio, ascending word id.
std::vector<uint32_t> heavily_aligned_words(const TrainedModel& model, int k,
                                            double min_ratio = 2.0,
                                            RatioDenominator denom = RatioDenominator::pooled);

// Dictionary as a lowercased word set, one word per line.
std::unordered_set<std::string> load_dictionary(std::istream& in);
std::unordered_set<std::string> load_dictionary_file(const std::string& path);

// Fraction of words whose lowercase form is absent from the dictionary.
double dictionary_coverage(std::span<const std::string> words,
                           const std::unordered_set<std::string>& dictionary);

struct PatternItem {
  std::string tag;                    // set for a POS-tag item
  std::vector<std::string> literals;  // set for a literal-set item, lowercased

  bool is_tag() const { return !tag.empty(); }
  bool matches(std::string_view word, std::string_view word_tag) const;
};

struct PatternSpec {
  std::string name;
  std::vector<PatternItem> items;

  void check() const;  // length >= 2, literal sets non-empty
};

// The three aspectual constructions searched in the dialect analysis:
// habitual be (O be/b V), future gone (gone/gne/gon V), completive done
// (done/dne V).
std::vector<PatternSpec> builtin_patterns();

// One pattern per line: "name: TAG:O LIT:be|b TAG:V".
PatternSpec parse_pattern_line(std::string_view line);
std::vector<PatternSpec> read_pattern_file(const std::string& path);

struct TaggedToken {
  std::string word;
  std::string tag;
};

struct TaggedMessage {
  std::string msg_id;
  std::vector<TaggedToken> tokens;
};

// Two-column word<TAB>tag lines, one "# msg_id" header per message, blank
// line between messages.
std::vector<TaggedMessage> read_tagged_messages(std::istream& in);
std::vector<TaggedMessage> read_tagged_messages_file(const std::string& path);

struct PatternHits {
  std::string name;
  uint64_t message_count = 0;
  std::vector<std::string> msg_ids;  // each matching message once, input order
};

// Sliding-window search; a message counts once per pattern no matter how
// many windows match.
std::vector<PatternHits> pattern_search(std::span<const TaggedMessage> messages,
                                        std::span<const PatternSpec> patterns);

struct DecileRow {
  uint64_t population = 0;  // messages whose posterior lands in the decile
  uint64_t sampled = 0;
  uint64_t hits = 0;        // sampled messages satisfying the predicate
  double proportion = 0.0;  // NaN when the decile is empty
  double mean_tokens = 0.0; // NaN when the decile is empty
};

struct DecileReport {
  std::array<DecileRow, 10> rows;
};

// Decile index of a posterior: [d/10, (d+1)/10), last decile closed at 1.
int decile_of(double p);

// Bins messages by posterior, samples up to sample_size per decile without
// replacement (seeded), and reports the predicate proportion and mean
// message length per decile. All spans are parallel, indexed by message.
DecileReport decile_report(std::span<const double> posterior,
                           std::span<const uint32_t> token_counts,
                           std::span<const char> predicate, uint64_t sample_size,
                           uint64_t seed);

// Rate ratio (matches_a/size_a)/(matches_b/size_b); +infinity marks a zero
// rate on the B side.
double construction_ratio(uint64_t matches_a, uint64_t size_a, uint64_t matches_b,
                          uint64_t size_b);

}  // namespace dmm
