#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dmm/corpus.hpp"
#include "dmm/model.hpp"

namespace dmm {

// Per-message averaged topic counts retained from training, row order equal
// to corpus message order.
struct MessagePosteriors {
  int K = kNumCategories;
  std::vector<std::string> msg_ids;
  std::vector<std::string> user_ids;
  std::vector<uint64_t> n_m;     // token count per message
  std::vector<double> nbar_mk;   // rows * K

  size_t rows() const { return msg_ids.size(); }
  const double* row(size_t i) const { return nbar_mk.data() + i * static_cast<size_t>(K); }
};

MessagePosteriors make_message_posteriors(const Corpus& corpus, const TrainResult& result);

// P(z = k | m): the message's averaged topic counts normalized by length.
DemographicVector message_posterior(const MessagePosteriors& post, size_t i);

struct UserPosterior {
  std::string user_id;
  DemographicVector p;  // P(z = k | u)
  uint64_t tokens = 0;
  std::vector<uint32_t> message_rows;  // rows in the MessagePosteriors table
};

// Token-weighted per-user topic shares, sorted by user_id.
std::vector<UserPosterior> user_posteriors(const MessagePosteriors& post);

struct AlignSpec {
  int category = kAA;
  double min_posterior = 0.8;  // inclusive
  double other_cap = 0.05;     // exclusive
  std::vector<int> other_categories = {kHispanic, kAsian};
};

// Users whose posterior share of the aligned topic is at least
// min_posterior and whose combined share of the other categories stays
// strictly under other_cap. Returns indices into the input.
std::vector<uint32_t> extract_aligned_users(std::span<const UserPosterior> users,
                                            const AlignSpec& spec);

double pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation between P(z=k|u) and the census prior pi_{u,k}
// across users present in the corpus.
double prior_posterior_correlation(std::span<const UserPosterior> users, const Corpus& corpus,
                                   int k);

// DMMPOST v1: header, then one row per message,
// msg_id<TAB>user_id<TAB>token count<TAB>K averaged counts.
void write_posteriors(const MessagePosteriors& post, std::ostream& out);
void write_posteriors_file(const MessagePosteriors& post, const std::string& path);
MessagePosteriors read_posteriors(std::istream& in);
MessagePosteriors read_posteriors_file(const std::string& path);

}  // namespace dmm
