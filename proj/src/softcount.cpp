#include "dmm/softcount.hpp"

#include <algorithm>

#include "dmm/common.hpp"

namespace dmm {

SoftCountTable compute_soft_counts(const Corpus& corpus, SoftCountNormalize mode) {
  if (corpus.messages.empty()) throw input_error("soft counts need a non-empty corpus");
  SoftCountTable table;
  table.entries.resize(corpus.vocab.size());
  for (const Message& m : corpus.messages) {
    const DemographicVector& prior = corpus.users[m.user].prior;
    for (uint32_t w : corpus.message_tokens(m)) {
      auto& e = table.entries[w];
      e.count++;
      for (int k = 0; k < kNumCategories; k++) e.pi[k] += prior[k];
    }
  }
  for (auto& e : table.entries) {
    if (e.count == 0) continue;
    double denom;
    if (mode == SoftCountNormalize::average) {
      denom = static_cast<double>(e.count);
    } else {
      denom = 0.0;
      for (int k = 0; k < kNumCategories; k++) denom += e.pi[k];
    }
    for (int k = 0; k < kNumCategories; k++) e.pi[k] /= denom;
  }
  return table;
}

void SeedlistSpec::check() const {
  if (n < 1) throw input_error("seedlist n must be >= 1");
  if (m < 1) throw input_error("seedlist m must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw input_error("seedlist p must be in [0, 1]");
  if (min_tweets < 1) throw input_error("seedlist min_tweets must be >= 1");
  if (category < 0 || category >= kNumCategories) throw input_error("bad seedlist category");
}

std::vector<uint32_t> build_seedlist(const SoftCountTable& table, const SeedlistSpec& spec) {
  spec.check();
  std::vector<uint32_t> qualifying;
  for (uint32_t w = 1; w < table.size(); w++) {
    if (table[w].count >= spec.m) qualifying.push_back(w);
  }
  std::sort(qualifying.begin(), qualifying.end(), [&](uint32_t a, uint32_t b) {
    double pa = table[a].pi[spec.category];
    double pb = table[b].pi[spec.category];
    if (pa != pb) return pa > pb;
    return a < b;
  });
  if (qualifying.size() > static_cast<size_t>(spec.n)) qualifying.resize(static_cast<size_t>(spec.n));
  return qualifying;
}

std::vector<uint32_t> select_seedlist_users(const Corpus& corpus,
                                            const std::vector<uint32_t>& seeds,
                                            const SeedlistSpec& spec) {
  spec.check();
  if (seeds.empty()) throw input_error("empty seedlist");
  std::vector<char> is_seed(corpus.vocab.size(), 0);
  for (uint32_t w : seeds) {
    if (w >= corpus.vocab.size()) throw input_error("seed word id out of range");
    is_seed[w] = 1;
  }
  std::vector<uint32_t> selected;
  for (uint32_t u = 0; u < corpus.users.size(); u++) {
    const UserRecord& rec = corpus.users[u];
    if (rec.messages.size() < static_cast<size_t>(spec.min_tweets)) continue;
    size_t with_seed = 0;
    for (uint32_t mi : rec.messages) {
      for (uint32_t w : corpus.message_tokens(mi)) {
        if (is_seed[w]) {
          with_seed++;
          break;
        }
      }
    }
    double frac = static_cast<double>(with_seed) / static_cast<double>(rec.messages.size());
    if (frac >= spec.p) selected.push_back(u);
  }
  return selected;
}

}  // namespace dmm
