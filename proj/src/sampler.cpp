#include "dmm/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "dmm/common.hpp"

namespace dmm {

void Hyperparams::check() const {
  if (K < 2) throw input_error("K must be at least 2");
  if (K != kNumCategories)
    throw input_error("training is anchored to the demographic prior, so K must be 4");
  if (!(alpha > 0.0)) throw input_error("alpha must be positive");
  if (!(beta > 0.0)) throw input_error("beta must be positive");
  if (iterations < 1) throw input_error("iterations must be at least 1");
  if (average_last < 1 || average_last > iterations)
    throw input_error("average_last must be in [1, iterations]");
}

std::vector<double> make_alpha_pi(const Corpus& corpus, const Hyperparams& hyper) {
  if (hyper.K != kNumCategories)
    throw input_error("demographic priors have 4 components; K must be 4");
  std::vector<double> alpha_pi(corpus.users.size() * static_cast<size_t>(hyper.K));
  for (size_t u = 0; u < corpus.users.size(); u++) {
    for (int k = 0; k < hyper.K; k++)
      alpha_pi[u * static_cast<size_t>(hyper.K) + static_cast<size_t>(k)] =
          hyper.alpha * corpus.users[u].prior[k];
  }
  return alpha_pi;
}

SamplerState init_state(const Corpus& corpus, std::span<const double> alpha_pi, int K,
                        Rng& rng) {
  if (corpus.messages.empty()) throw input_error("cannot initialize sampler on empty corpus");
  if (K < 1 || K > 255) throw input_error("K out of range");
  if (alpha_pi.size() != corpus.users.size() * static_cast<size_t>(K))
    throw invariant_error("alpha_pi table has wrong shape");

  SamplerState state;
  state.K = K;
  state.z.resize(corpus.tokens.size());
  state.n_wk.assign(static_cast<size_t>(corpus.vocab.size()) * K, 0);
  state.n_k.assign(static_cast<size_t>(K), 0);
  state.n_mk.assign(corpus.messages.size() * static_cast<size_t>(K), 0);

  for (size_t mi = 0; mi < corpus.messages.size(); mi++) {
    const Message& m = corpus.messages[mi];
    const double* prior = alpha_pi.data() + static_cast<size_t>(m.user) * K;
    uint32_t* mk = state.mk_row(static_cast<uint32_t>(mi));
    for (size_t t = m.first_token; t < m.first_token + m.num_tokens; t++) {
      int k = rng.categorical(prior, K);
      state.z[t] = static_cast<uint8_t>(k);
      state.wk_row(corpus.tokens[t])[k]++;
      state.n_k[static_cast<size_t>(k)]++;
      mk[k]++;
    }
  }
  return state;
}

namespace {

// Unnormalized sampling scores for one token, counts excluding it. The
// message-length factor 1/(N_m + sum alpha_pi) is constant in k and omitted.
inline void topic_scores(const uint32_t* wk, const uint64_t* nk, const uint32_t* mk,
                         const double* apk, double beta, double beta_w, int K, double* s) {
  for (int k = 0; k < K; k++) {
    s[k] = (static_cast<double>(wk[k]) + beta_w) / (static_cast<double>(nk[k]) + beta) *
           (static_cast<double>(mk[k]) + apk[k]);
  }
}

void sweep_range(SamplerState& state, const Corpus& corpus, std::span<const double> alpha_pi,
                 double beta, Rng& rng, size_t msg_begin, size_t msg_end, uint32_t* n_wk,
                 uint64_t* n_k) {
  const int K = state.K;
  const double beta_w = beta / static_cast<double>(corpus.vocab.size());
  double scores[256];
  for (size_t mi = msg_begin; mi < msg_end; mi++) {
    const Message& m = corpus.messages[mi];
    const double* apk = alpha_pi.data() + static_cast<size_t>(m.user) * K;
    uint32_t* mk = state.mk_row(static_cast<uint32_t>(mi));
    for (size_t t = m.first_token; t < m.first_token + m.num_tokens; t++) {
      const uint32_t w = corpus.tokens[t];
      uint32_t* wk = n_wk + static_cast<size_t>(w) * K;
      int k = state.z[t];
      wk[k]--;
      n_k[k]--;
      mk[k]--;
      topic_scores(wk, n_k, mk, apk, beta, beta_w, K, scores);
      k = rng.categorical(scores, K);
      state.z[t] = static_cast<uint8_t>(k);
      wk[k]++;
      n_k[k]++;
      mk[k]++;
    }
  }
}

}  // namespace

void gibbs_sweep(SamplerState& state, const Corpus& corpus, std::span<const double> alpha_pi,
                 double beta, Rng& rng) {
  sweep_range(state, corpus, alpha_pi, beta, rng, 0, corpus.messages.size(),
              state.n_wk.data(), state.n_k.data());
}

void gibbs_sweep_partitioned(SamplerState& state, const Corpus& corpus,
                             std::span<const double> alpha_pi, double beta, uint64_t seed,
                             int sweep_index, int partitions) {
  const size_t num_messages = corpus.messages.size();
  if (partitions < 1) throw input_error("partitions must be at least 1");
  size_t p_count = std::min<size_t>(static_cast<size_t>(partitions), num_messages);

  // Contiguous message ranges with roughly equal token mass.
  std::vector<size_t> bounds;
  bounds.push_back(0);
  const size_t total = corpus.total_tokens();
  size_t seen = 0;
  for (size_t mi = 0; mi < num_messages && bounds.size() < p_count; mi++) {
    seen += corpus.messages[mi].num_tokens;
    if (seen * p_count >= total * bounds.size() && mi + 1 < num_messages) {
      bounds.push_back(mi + 1);
    }
  }
  while (bounds.size() < p_count + 1) bounds.push_back(num_messages);

  const int num_parts = static_cast<int>(bounds.size() - 1);
  std::vector<std::vector<uint32_t>> local_wk(static_cast<size_t>(num_parts));
  std::vector<std::vector<uint64_t>> local_k(static_cast<size_t>(num_parts));

#pragma omp parallel for schedule(dynamic, 1)
  for (int p = 0; p < num_parts; p++) {
    auto& wk = local_wk[static_cast<size_t>(p)];
    auto& nk = local_k[static_cast<size_t>(p)];
    wk.assign(state.n_wk.begin(), state.n_wk.end());
    nk.assign(state.n_k.begin(), state.n_k.end());
    Rng rng = sweep_rng(seed, sweep_index, p);
    sweep_range(state, corpus, alpha_pi, beta, rng, bounds[static_cast<size_t>(p)],
                bounds[static_cast<size_t>(p) + 1], wk.data(), nk.data());
  }

  // Partitions sampled against stale snapshots; restore exact counts.
  retally(state, corpus, corpus.vocab.size());
}

void token_conditional(std::span<const uint32_t> n_wk_row, std::span<const uint64_t> n_k,
                       std::span<const uint32_t> n_mk_row, uint64_t n_m,
                       std::span<const double> alpha_pi_row, double beta, uint32_t v,
                       std::span<double> out) {
  const int K = static_cast<int>(out.size());
  const double beta_w = beta / static_cast<double>(v);
  double alpha_sum = 0.0;
  for (double a : alpha_pi_row) alpha_sum += a;
  const double msg_denom = static_cast<double>(n_m) + alpha_sum;
  double total = 0.0;
  for (int k = 0; k < K; k++) {
    double s = (static_cast<double>(n_wk_row[k]) + beta_w) /
               (static_cast<double>(n_k[k]) + beta) *
               (static_cast<double>(n_mk_row[k]) + alpha_pi_row[k]) / msg_denom;
    out[k] = s;
    total += s;
  }
  if (!(total > 0.0) || !std::isfinite(total))
    throw invariant_error("token conditional normalizer is not positive finite");
  for (int k = 0; k < K; k++) out[k] /= total;
}

double log_likelihood(const SamplerState& state, const Corpus& corpus,
                      std::span<const double> alpha_pi, double beta, uint32_t v) {
  const int K = state.K;
  const double beta_w = beta / static_cast<double>(v);
  double ll = 0.0;

  const double lg_beta_w = std::lgamma(beta_w);
  for (int k = 0; k < K; k++) {
    ll += std::lgamma(beta) - std::lgamma(static_cast<double>(state.n_k[k]) + beta);
  }
  for (size_t w = 0; w < v; w++) {
    const uint32_t* wk = state.wk_row(static_cast<uint32_t>(w));
    for (int k = 0; k < K; k++) {
      if (wk[k] == 0) continue;  // lgamma(x) - lgamma(x) = 0
      ll += std::lgamma(static_cast<double>(wk[k]) + beta_w) - lg_beta_w;
    }
  }

  for (size_t mi = 0; mi < corpus.messages.size(); mi++) {
    const Message& m = corpus.messages[mi];
    const double* apk = alpha_pi.data() + static_cast<size_t>(m.user) * K;
    const uint32_t* mk = state.mk_row(static_cast<uint32_t>(mi));
    double alpha_sum = 0.0;
    for (int k = 0; k < K; k++) alpha_sum += apk[k];
    ll += std::lgamma(alpha_sum) - std::lgamma(static_cast<double>(m.num_tokens) + alpha_sum);
    for (int k = 0; k < K; k++) {
      if (mk[k] == 0) continue;
      if (apk[k] <= 0.0)
        throw invariant_error("token assigned to a topic with zero prior mass");
      ll += std::lgamma(static_cast<double>(mk[k]) + apk[k]) - std::lgamma(apk[k]);
    }
  }
  return ll;
}

void retally(SamplerState& state, const Corpus& corpus, uint32_t v) {
  const int K = state.K;
  state.n_wk.assign(static_cast<size_t>(v) * K, 0u);
  state.n_k.assign(static_cast<size_t>(K), 0ull);
  state.n_mk.assign(corpus.messages.size() * static_cast<size_t>(K), 0u);
  for (size_t mi = 0; mi < corpus.messages.size(); mi++) {
    const Message& m = corpus.messages[mi];
    uint32_t* mk = state.mk_row(static_cast<uint32_t>(mi));
    for (size_t t = m.first_token; t < m.first_token + m.num_tokens; t++) {
      int k = state.z[t];
      state.wk_row(corpus.tokens[t])[k]++;
      state.n_k[static_cast<size_t>(k)]++;
      mk[k]++;
    }
  }
}

void check_consistency(const SamplerState& state, const Corpus& corpus, uint32_t v) {
  SamplerState fresh;
  fresh.K = state.K;
  fresh.z = state.z;
  fresh.n_wk.assign(static_cast<size_t>(v) * state.K, 0);
  fresh.n_k.assign(static_cast<size_t>(state.K), 0);
  fresh.n_mk.assign(corpus.messages.size() * static_cast<size_t>(state.K), 0);
  retally(fresh, corpus, v);
  if (fresh.n_wk != state.n_wk) throw invariant_error("word-topic table inconsistent with z");
  if (fresh.n_k != state.n_k) throw invariant_error("topic totals inconsistent with z");
  if (fresh.n_mk != state.n_mk) throw invariant_error("message-topic table inconsistent with z");
}

}  // namespace dmm
