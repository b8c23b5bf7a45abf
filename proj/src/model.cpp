#include "dmm/model.hpp"

#include <charconv>
#include <fstream>

#include "dmm/common.hpp"

namespace dmm {

void TrainedModel::derive_phi() {
  const int K = hyper.K;
  const size_t V = vocab.size();
  if (nbar_wk.size() != V * static_cast<size_t>(K))
    throw invariant_error("nbar_wk has wrong shape");
  nbar_k.assign(static_cast<size_t>(K), 0.0);
  for (size_t w = 0; w < V; w++) {
    for (int k = 0; k < K; k++) nbar_k[static_cast<size_t>(k)] += nbar_wk[w * K + k];
  }
  phi.resize(V * static_cast<size_t>(K));
  for (size_t w = 0; w < V; w++) {
    for (int k = 0; k < K; k++) {
      phi[w * K + k] = (nbar_wk[w * K + k] + 1.0) / (nbar_k[static_cast<size_t>(k)] + static_cast<double>(V));
    }
  }
}

TrainResult train(const Corpus& corpus, const Hyperparams& hyper, const TrainOptions& opts) {
  hyper.check();
  if (corpus.messages.empty()) throw input_error("cannot train on an empty corpus");
  if (opts.partitions < 0) throw input_error("partitions must be non-negative");

  const int K = hyper.K;
  const uint32_t V = corpus.vocab.size();
  const std::vector<double> alpha_pi = make_alpha_pi(corpus, hyper);

  Rng init_rng = sweep_rng(hyper.seed, 0, 0);
  SamplerState state = init_state(corpus, alpha_pi, K, init_rng);

  std::vector<uint64_t> sum_wk;
  std::vector<uint64_t> sum_mk;
  sum_wk.assign(state.n_wk.size(), 0);
  if (opts.retain_message_averages) sum_mk.assign(state.n_mk.size(), 0);

  const int first_averaged = hyper.iterations - hyper.average_last + 1;
  for (int s = 1; s <= hyper.iterations; s++) {
    if (opts.partitions == 0) {
      Rng rng = sweep_rng(hyper.seed, s, 0);
      gibbs_sweep(state, corpus, alpha_pi, hyper.beta, rng);
    } else {
      gibbs_sweep_partitioned(state, corpus, alpha_pi, hyper.beta, hyper.seed, s,
                              opts.partitions);
    }
    if (s >= first_averaged) {
      for (size_t i = 0; i < sum_wk.size(); i++) sum_wk[i] += state.n_wk[i];
      if (opts.retain_message_averages) {
        for (size_t i = 0; i < sum_mk.size(); i++) sum_mk[i] += state.n_mk[i];
      }
    }
    if (opts.loglik || opts.progress) {
      double ll = log_likelihood(state, corpus, alpha_pi, hyper.beta, V);
      if (opts.loglik) opts.loglik->push_back(ll);
      if (opts.progress) opts.progress(s, ll);
    }
  }

  TrainResult result;
  result.model.vocab = corpus.vocab;
  result.model.hyper = hyper;
  const double denom = static_cast<double>(hyper.average_last);
  result.model.nbar_wk.resize(sum_wk.size());
  for (size_t i = 0; i < sum_wk.size(); i++)
    result.model.nbar_wk[i] = static_cast<double>(sum_wk[i]) / denom;
  result.model.derive_phi();
  if (opts.retain_message_averages) {
    result.nbar_mk.resize(sum_mk.size());
    for (size_t i = 0; i < sum_mk.size(); i++)
      result.nbar_mk[i] = static_cast<double>(sum_mk[i]) / denom;
  }
  return result;
}

void write_model(const TrainedModel& model, std::ostream& out) {
  const int K = model.hyper.K;
  out << "DMM v1 " << K << ' ' << model.vocab.size() << ' '
      << format_double(model.hyper.alpha) << ' ' << format_double(model.hyper.beta) << ' '
      << model.hyper.iterations << ' ' << model.hyper.average_last << ' ' << model.hyper.seed
      << '\n';
  for (uint32_t w = 0; w < model.vocab.size(); w++) {
    out << w << '\t' << model.vocab.word_of(w) << '\n';
  }
  for (uint32_t w = 0; w < model.vocab.size(); w++) {
    const double* row = model.nbar_wk.data() + static_cast<size_t>(w) * K;
    for (int k = 0; k < K; k++) out << (k ? " " : "") << format_double(row[k]);
    out << '\n';
  }
  if (!out) throw input_error("model write failed");
}

void write_model_file(const TrainedModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open for writing: " + path);
  write_model(model, out);
}

namespace {

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) throw input_error(std::string("model file truncated at ") + what);
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
    throw input_error(std::string("bad model field (") + what + "): '" + std::string(text) + "'");
  return v;
}

}  // namespace

TrainedModel read_model(std::istream& in) {
  const std::string header = next_line(in, "header");
  auto head = split(header, ' ');
  if (head.size() != 9 || head[0] != "DMM" || head[1] != "v1")
    throw input_error("not a DMM v1 model file");
  TrainedModel model;
  model.hyper.K = static_cast<int>(parse_count(head[2], "K"));
  const uint64_t v = parse_count(head[3], "V");
  model.hyper.alpha = parse_double(head[4]);
  model.hyper.beta = parse_double(head[5]);
  model.hyper.iterations = static_cast<int>(parse_count(head[6], "iterations"));
  model.hyper.average_last = static_cast<int>(parse_count(head[7], "average_last"));
  model.hyper.seed = parse_count(head[8], "seed");
  if (model.hyper.K != kNumCategories)
    throw input_error("model K does not match the demographic category count");
  if (v == 0) throw input_error("model with empty vocabulary");

  std::vector<std::string> words;
  words.reserve(v - 1);
  for (uint64_t i = 0; i < v; i++) {
    const std::string line = next_line(in, "vocabulary");
    auto parts = split(line, '\t');
    if (parts.size() != 2 || parse_count(parts[0], "word id") != i)
      throw input_error("bad model vocabulary line");
    if (i == 0) {
      if (parts[1] != kOovSymbol) throw input_error("model vocabulary id 0 must be the OOV symbol");
    } else {
      words.emplace_back(parts[1]);
    }
  }
  model.vocab = Vocabulary(std::move(words));

  const int K = model.hyper.K;
  model.nbar_wk.resize(static_cast<size_t>(v) * K);
  for (uint64_t w = 0; w < v; w++) {
    const std::string line = next_line(in, "count table");
    auto fields = split(line, ' ');
    if (fields.size() != static_cast<size_t>(K)) throw input_error("bad model count row");
    for (int k = 0; k < K; k++) {
      double val = parse_double(fields[static_cast<size_t>(k)]);
      if (!(val >= 0.0)) throw input_error("negative averaged count in model");
      model.nbar_wk[static_cast<size_t>(w) * K + k] = val;
    }
  }
  model.derive_phi();
  return model;
}

TrainedModel read_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open model: " + path);
  return read_model(in);
}

}  // namespace dmm
