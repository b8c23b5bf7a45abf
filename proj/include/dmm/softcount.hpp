#pragma once

#include <cstdint>
#include <vector>

#include "dmm/corpus.hpp"

namespace dmm {

enum class SoftCountNormalize {
  average,  // divide by token occurrence count
  lm,       // divide by the summed priors, one unigram LM weight per category
};

struct SoftCountEntry {
  uint64_t count = 0;  // token occurrences across the corpus
  DemographicVector pi;
};

// Per-word demographic statistics: pi[w] is the average census prior of the
// authors of every token of w (or the LM-normalized variant), count[w] the
// number of token occurrences. Indexed by vocabulary id; words that never
// occur have count 0 and an all-zero pi.
struct SoftCountTable {
  std::vector<SoftCountEntry> entries;

  const SoftCountEntry& operator[](uint32_t word) const { return entries[word]; }
  uint32_t size() const { return static_cast<uint32_t>(entries.size()); }
};

SoftCountTable compute_soft_counts(const Corpus& corpus,
                                   SoftCountNormalize mode = SoftCountNormalize::average);

struct SeedlistSpec {
  int n = 100;           // top words kept
  uint64_t m = 3000;     // minimum token occurrences
  double p = 0.20;       // minimum fraction of a user's messages with a seed
  int min_tweets = 10;   // minimum messages per selected user
  int category = kAA;

  void check() const;
};

// Word ids with count >= m, sorted by pi[category] descending (ties by
// ascending id), truncated to n. OOV never qualifies.
std::vector<uint32_t> build_seedlist(const SoftCountTable& table, const SeedlistSpec& spec);

// User indices (into corpus.users) with >= min_tweets messages of which at
// least a p fraction contain a seed token. Sorted ascending.
std::vector<uint32_t> select_seedlist_users(const Corpus& corpus,
                                            const std::vector<uint32_t>& seeds,
                                            const SeedlistSpec& spec);

}  // namespace dmm
