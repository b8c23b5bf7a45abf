// Command-line front end: preprocess -> train -> infer/classify/analyze
// pipeline over demographically annotated short-text corpora.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmm/analysis.hpp"
#include "dmm/common.hpp"
#include "dmm/corpus.hpp"
#include "dmm/cvb0.hpp"
#include "dmm/langid.hpp"
#include "dmm/manifest.hpp"
#include "dmm/model.hpp"
#include "dmm/pipeline.hpp"
#include "dmm/posteriors.hpp"
#include "dmm/softcount.hpp"
#include "dmm/synth.hpp"
#include "dmm/text_normalize.hpp"
#include "dmm/tokenize.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using dmm::input_error;

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open: " + path);
  return in;
}

void finish_manifest(dmm::Manifest& manifest, const std::string& primary_out,
                     const std::string& manifest_path) {
  if (!manifest_path.empty()) {
    manifest.write_file(manifest_path);
  } else if (!primary_out.empty()) {
    manifest.write_file(primary_out + ".manifest");
  }
}

std::string theta_text(const dmm::DemographicVector& v) {
  std::string out;
  for (int k = 0; k < dmm::kNumCategories; k++) {
    if (k) out.push_back(' ');
    out += dmm::format_double(v[k]);
  }
  return out;
}

// Tokens of a raw message as the model sees them.
std::vector<uint32_t> text_token_ids(std::string_view text, const dmm::Vocabulary& vocab) {
  std::vector<uint32_t> ids;
  for (const auto& word : dmm::tokenize(dmm::strip_mentions(dmm::strip_symbols(text)))) {
    ids.push_back(vocab.id_of(word));
  }
  return ids;
}

struct JsonlRecord {
  std::string msg_id;
  std::string text;
};

// Minimal msg_id/text reader for infer and classify inputs.
std::vector<JsonlRecord> read_jsonl_texts(const std::string& path, uint64_t& invalid) {
  auto in = open_in(path);
  std::vector<JsonlRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      records.push_back({j.at("msg_id").get<std::string>(), j.at("text").get<std::string>()});
    } catch (const nlohmann::json::exception&) {
      invalid++;
    }
  }
  return records;
}

std::set<std::string> read_id_set(const std::string& path) {
  auto in = open_in(path);
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) ids.insert(line);
  }
  return ids;
}

void cmd_preprocess(const std::string& input, const std::string& output, int min_users,
                    const std::string& dropped_log, const std::string& manifest_path) {
  dmm::Manifest manifest("preprocess");
  manifest.add_input("messages", input);
  manifest.set("flag.min_users", min_users);
  manifest.set("output", output);

  auto in = open_in(input);
  dmm::PreprocessStats stats;
  std::vector<dmm::DroppedRecord> dropped;
  dmm::Corpus corpus = dmm::preprocess_jsonl(in, min_users, &stats,
                                             dropped_log.empty() ? nullptr : &dropped);
  dmm::write_corpus_file(corpus, output);

  if (!dropped_log.empty()) {
    auto log = open_out(dropped_log);
    for (const auto& rec : dropped)
      log << rec.msg_id << '\t' << dmm::drop_reason_name(rec.reason) << '\n';
  }

  manifest.set("stat.lines_read", stats.lines_read);
  manifest.set("stat.invalid_lines", stats.invalid_lines);
  manifest.set("stat.kept_messages", stats.kept_messages);
  for (int r = 0; r < 7; r++) {
    manifest.set(std::string("stat.dropped.") +
                     dmm::drop_reason_name(static_cast<dmm::DropReason>(r)),
                 stats.dropped_by_reason[static_cast<size_t>(r)]);
  }
  manifest.set("stat.vocabulary_size", static_cast<uint64_t>(corpus.vocab.size()));
  manifest.set("stat.users", static_cast<uint64_t>(corpus.users.size()));
  finish_manifest(manifest, output, manifest_path);

  std::cerr << "kept " << stats.kept_messages << " of " << stats.lines_read << " messages ("
            << stats.invalid_lines << " invalid, " << stats.total_dropped() << " dropped); V="
            << corpus.vocab.size() << ", users=" << corpus.users.size() << "\n";
}

void cmd_normalize(const std::string& input, const std::string& output,
                   const std::string& manifest_path) {
  dmm::Manifest manifest("normalize");
  manifest.add_input("messages", input);
  manifest.set("output", output);

  auto in = open_in(input);
  auto out = open_out(output);
  std::string line;
  uint64_t invalid = 0, written = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      auto j = nlohmann::ordered_json::parse(line);
      std::string text = j.at("text").get<std::string>();
      j["text"] = dmm::strip_mentions(dmm::strip_symbols(text));
      out << j.dump() << '\n';
      written++;
    } catch (const nlohmann::json::exception&) {
      invalid++;
    }
  }
  manifest.set("stat.written", written);
  manifest.set("stat.invalid_lines", invalid);
  finish_manifest(manifest, output, manifest_path);
  if (invalid) std::cerr << "skipped " << invalid << " invalid lines\n";
}

void write_seedlist_file(const dmm::Corpus& corpus, const dmm::SoftCountTable& table,
                         const std::vector<uint32_t>& seeds, const std::string& path) {
  auto out = open_out(path);
  for (uint32_t w : seeds) {
    out << corpus.vocab.word_of(w) << '\t' << table[w].count << '\t';
    out << theta_text(table[w].pi) << '\n';
  }
}

void cmd_seedlist(const std::string& corpus_path, const dmm::SeedlistSpec& spec,
                  const std::string& normalize_mode, const std::string& output,
                  const std::string& manifest_path, bool emit_users) {
  dmm::Manifest manifest(emit_users ? "seedlist-users" : "seedlist");
  manifest.add_input("corpus", corpus_path);
  manifest.set("flag.n", spec.n);
  manifest.set("flag.m", spec.m);
  manifest.set("flag.p", spec.p);
  manifest.set("flag.min_tweets", spec.min_tweets);
  manifest.set("flag.category", dmm::category_name(spec.category));
  manifest.set("flag.normalize", normalize_mode);
  manifest.set("output", output);

  dmm::Corpus corpus = dmm::read_corpus_file(corpus_path);
  auto mode = normalize_mode == "lm" ? dmm::SoftCountNormalize::lm
                                     : dmm::SoftCountNormalize::average;
  dmm::SoftCountTable table = dmm::compute_soft_counts(corpus, mode);
  std::vector<uint32_t> seeds = dmm::build_seedlist(table, spec);

  if (emit_users) {
    std::vector<uint32_t> users = dmm::select_seedlist_users(corpus, seeds, spec);
    auto out = open_out(output);
    for (uint32_t u : users) out << corpus.users[u].user_id << '\n';
    manifest.set("stat.seed_words", static_cast<uint64_t>(seeds.size()));
    manifest.set("stat.selected_users", static_cast<uint64_t>(users.size()));
  } else {
    write_seedlist_file(corpus, table, seeds, output);
    manifest.set("stat.seed_words", static_cast<uint64_t>(seeds.size()));
  }
  finish_manifest(manifest, output, manifest_path);
}

void cmd_train(const std::string& corpus_path, dmm::Hyperparams hyper, double beta_per_word,
               bool beta_total_given, int partitions, int threads, const std::string& output,
               const std::string& posteriors_out, const std::string& loglik_out,
               const std::string& manifest_path) {
  dmm::Corpus corpus = dmm::read_corpus_file(corpus_path);
  if (!beta_total_given) hyper.beta = beta_per_word * static_cast<double>(corpus.vocab.size());

  dmm::Manifest manifest("train");
  manifest.add_input("corpus", corpus_path);
  manifest.set("flag.alpha", hyper.alpha);
  manifest.set("flag.beta", hyper.beta);
  manifest.set("flag.iterations", hyper.iterations);
  manifest.set("flag.average_last", hyper.average_last);
  manifest.set("flag.seed", hyper.seed);
  manifest.set("flag.partitions", partitions);
  manifest.set("output", output);

#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif

  dmm::TrainOptions opts;
  opts.partitions = partitions;
  opts.retain_message_averages = !posteriors_out.empty();
  std::vector<double> logliks;
  if (!loglik_out.empty()) opts.loglik = &logliks;

  dmm::TrainResult result = dmm::train(corpus, hyper, opts);
  dmm::write_model_file(result.model, output);

  if (!posteriors_out.empty()) {
    dmm::MessagePosteriors post = dmm::make_message_posteriors(corpus, result);
    dmm::write_posteriors_file(post, posteriors_out);
    manifest.set("output.posteriors", posteriors_out);
  }
  if (!loglik_out.empty()) {
    auto out = open_out(loglik_out);
    for (size_t s = 0; s < logliks.size(); s++)
      out << (s + 1) << '\t' << dmm::format_double(logliks[s]) << '\n';
    manifest.set("output.loglik", loglik_out);
  }
  manifest.set("stat.tokens", static_cast<uint64_t>(corpus.total_tokens()));
  finish_manifest(manifest, output, manifest_path);
}

void cmd_infer(const std::string& model_path, const std::string& input,
               const dmm::InferenceConfig& cfg, const std::string& output,
               const std::string& manifest_path) {
  dmm::Manifest manifest("infer");
  manifest.add_input("model", model_path);
  manifest.add_input("messages", input);
  manifest.set("flag.alpha_sym", cfg.alpha_sym);
  manifest.set("flag.iterations", cfg.iterations);
  manifest.set("flag.tol", cfg.convergence_tol);
  manifest.set("flag.oov", cfg.score_oov ? "score" : "drop");
  manifest.set("output", output);

  dmm::TrainedModel model = dmm::read_model_file(model_path);
  uint64_t invalid = 0;
  auto records = read_jsonl_texts(input, invalid);
  auto out = open_out(output);
  uint64_t skipped = 0, written = 0;
  for (const auto& rec : records) {
    std::vector<uint32_t> ids = text_token_ids(rec.text, model.vocab);
    if (!cfg.score_oov) std::erase(ids, dmm::kOovId);
    if (ids.empty()) {
      skipped++;
      continue;
    }
    dmm::InferenceResult inf = dmm::infer_theta(model, ids, cfg);
    out << rec.msg_id << '\t' << theta_text(inf.theta) << '\t'
        << (inf.converged ? "true" : "false") << '\n';
    written++;
  }
  manifest.set("stat.written", written);
  manifest.set("stat.skipped_no_vocab", skipped);
  manifest.set("stat.invalid_lines", invalid);
  finish_manifest(manifest, output, manifest_path);
  if (skipped)
    std::cerr << "skipped " << skipped << " messages with no in-vocabulary tokens\n";
  if (invalid) std::cerr << "skipped " << invalid << " invalid lines\n";
}

void cmd_extract(const std::string& posteriors_path, const std::string& model_path,
                 const dmm::AlignSpec& spec, const std::string& output,
                 const std::string& messages_out, const std::string& manifest_path) {
  dmm::Manifest manifest("extract");
  manifest.add_input("posteriors", posteriors_path);
  if (!model_path.empty()) manifest.add_input("model", model_path);
  manifest.set("flag.category", dmm::category_name(spec.category));
  manifest.set("flag.min_posterior", spec.min_posterior);
  manifest.set("flag.other_cap", spec.other_cap);
  manifest.set("output", output);

  if (!model_path.empty()) dmm::read_model_file(model_path);  // shape/version check only
  dmm::MessagePosteriors post = dmm::read_posteriors_file(posteriors_path);
  std::vector<dmm::UserPosterior> users = dmm::user_posteriors(post);
  std::vector<uint32_t> picked = dmm::extract_aligned_users(users, spec);

  auto out = open_out(output);
  for (uint32_t i : picked) out << users[i].user_id << '\n';
  if (!messages_out.empty()) {
    auto mout = open_out(messages_out);
    for (uint32_t i : picked) {
      for (uint32_t row : users[i].message_rows) mout << post.msg_ids[row] << '\n';
    }
    manifest.set("output.messages", messages_out);
  }
  manifest.set("stat.users_in", static_cast<uint64_t>(users.size()));
  manifest.set("stat.users_selected", static_cast<uint64_t>(picked.size()));
  finish_manifest(manifest, output, manifest_path);
  std::cerr << "selected " << picked.size() << " of " << users.size() << " users\n";
}

std::unique_ptr<dmm::BaselineLangId> make_baseline(const std::string& arg) {
  auto colon = arg.find(':');
  if (colon == std::string::npos)
    throw input_error("--baseline must be ngram:<path> or table:<path>");
  const std::string kind = arg.substr(0, colon);
  const std::string path = arg.substr(colon + 1);
  if (kind == "table") {
    return std::make_unique<dmm::TableBaseline>(dmm::TableBaseline::from_file(path));
  }
  if (kind == "ngram") {
    auto in = open_in(path);
    std::vector<std::pair<std::string, std::string>> labeled;  // text, lang
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
      lineno++;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      size_t tab = line.find('\t');
      if (tab == std::string::npos)
        throw input_error("ngram training line " + std::to_string(lineno) +
                          " must be lang<TAB>text");
      labeled.emplace_back(line.substr(tab + 1), line.substr(0, tab));
    }
    return std::make_unique<dmm::NgramBaseline>(labeled);
  }
  throw input_error("unknown baseline kind: " + kind);
}

void cmd_classify(const std::string& model_path, const std::string& baseline_arg,
                  double threshold, const dmm::InferenceConfig& cfg, const std::string& input,
                  const std::string& output, const std::string& manifest_path) {
  dmm::Manifest manifest("classify");
  manifest.add_input("model", model_path);
  manifest.add_input("messages", input);
  manifest.set("flag.baseline", baseline_arg);
  manifest.set("flag.threshold", threshold);
  manifest.set("output", output);

  dmm::TrainedModel model = dmm::read_model_file(model_path);
  auto baseline = make_baseline(baseline_arg);
  uint64_t invalid = 0;
  auto records = read_jsonl_texts(input, invalid);

  auto out = open_out(output);
  uint64_t overrides = 0;
  for (const auto& rec : records) {
    dmm::EnsembleDecision d =
        dmm::ensemble_classify(rec.msg_id, rec.text, *baseline, model, cfg, threshold);
    if (d.rule == dmm::EnsembleRule::posterior_override) overrides++;
    out << rec.msg_id << '\t' << d.final_lang << '\t' << d.baseline_lang << '\t'
        << dmm::ensemble_rule_name(d.rule) << '\t'
        << (d.theta ? theta_text(*d.theta) : std::string("-")) << '\n';
  }
  manifest.set("stat.messages", static_cast<uint64_t>(records.size()));
  manifest.set("stat.invalid_lines", invalid);
  manifest.set("stat.overrides", overrides);
  finish_manifest(manifest, output, manifest_path);
}

void cmd_recall(const std::string& decisions_path, double precision,
                const std::string& convention, const std::string& manifest_path) {
  auto in = open_in(decisions_path);
  const bool count_unknown = convention != "twitter1";
  dmm::RecallInputs r;
  r.precision_flip = precision;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cols;
    size_t start = 0;
    while (true) {
      size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        cols.push_back(line.substr(start));
        break;
      }
      cols.push_back(line.substr(start, tab - start));
      start = tab + 1;
    }
    if (cols.size() < 4) throw input_error("bad decisions row: '" + line + "'");
    const std::string& baseline = cols[2];
    const std::string& rule = cols[3];
    if (!count_unknown && baseline == dmm::kUnknownLang) continue;
    r.total++;
    if (baseline == "en") r.baseline_hits++;
    if (rule == dmm::ensemble_rule_name(dmm::EnsembleRule::posterior_override)) r.flips++;
  }
  dmm::RecallEstimate est = dmm::imputed_recall(r);
  std::cout << "messages\t" << r.total << '\n';
  std::cout << "baseline_english\t" << r.baseline_hits << '\n';
  std::cout << "ensemble_flips\t" << r.flips << '\n';
  std::cout << "flip_precision\t" << dmm::format_double(r.precision_flip) << '\n';
  std::cout << "baseline_recall\t" << dmm::format_double(est.baseline_recall) << '\n';
  std::cout << "ensemble_recall\t" << dmm::format_double(est.ensemble_recall) << '\n';

  if (!manifest_path.empty()) {
    dmm::Manifest manifest("recall");
    manifest.add_input("decisions", decisions_path);
    manifest.set("flag.precision", precision);
    manifest.set("flag.unknown", convention);
    manifest.set("stat.baseline_recall", est.baseline_recall);
    manifest.set("stat.ensemble_recall", est.ensemble_recall);
    manifest.write_file(manifest_path);
  }
}

void cmd_analyze_ratios(const std::string& model_path, int category, double min_ratio, int top,
                        const std::string& denom_mode, const std::string& output,
                        const std::string& manifest_path) {
  dmm::Manifest manifest("analyze-ratios");
  manifest.add_input("model", model_path);
  manifest.set("flag.category", dmm::category_name(category));
  manifest.set("flag.min_ratio", min_ratio);
  manifest.set("flag.denominator", denom_mode);
  manifest.set("output", output);

  dmm::TrainedModel model = dmm::read_model_file(model_path);
  auto denom = denom_mode == "mixture" ? dmm::RatioDenominator::mixture
                                       : dmm::RatioDenominator::pooled;
  std::vector<std::pair<double, uint32_t>> rows;
  for (uint32_t w = 1; w < model.v(); w++) {
    double r = dmm::alignment_ratio(model, w, category, denom);
    if (r >= min_ratio) rows.emplace_back(r, w);
  }
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  if (top > 0 && rows.size() > static_cast<size_t>(top)) rows.resize(static_cast<size_t>(top));

  auto out = open_out(output);
  for (const auto& [r, w] : rows)
    out << model.vocab.word_of(w) << '\t' << dmm::format_double(r) << '\n';
  manifest.set("stat.words", static_cast<uint64_t>(rows.size()));
  finish_manifest(manifest, output, manifest_path);
}

void cmd_analyze_coverage(const std::string& model_path, int category, double min_ratio,
                          const std::string& denom_mode, const std::string& dictionary,
                          const std::string& output, const std::string& manifest_path) {
  dmm::Manifest manifest("analyze-coverage");
  manifest.add_input("model", model_path);
  manifest.add_input("dictionary", dictionary);
  manifest.set("flag.category", dmm::category_name(category));
  manifest.set("flag.min_ratio", min_ratio);
  manifest.set("flag.denominator", denom_mode);

  dmm::TrainedModel model = dmm::read_model_file(model_path);
  auto denom = denom_mode == "mixture" ? dmm::RatioDenominator::mixture
                                       : dmm::RatioDenominator::pooled;
  std::vector<uint32_t> ids = dmm::heavily_aligned_words(model, category, min_ratio, denom);
  if (ids.empty()) throw input_error("no words reach the alignment threshold");
  std::vector<std::string> words;
  words.reserve(ids.size());
  for (uint32_t w : ids) words.push_back(model.vocab.word_of(w));
  auto dict = dmm::load_dictionary_file(dictionary);
  double frac = dmm::dictionary_coverage(words, dict);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!output.empty()) {
    file = open_out(output);
    out = &file;
  }
  *out << "aligned_words\t" << words.size() << '\n';
  *out << "out_of_dictionary\t" << dmm::format_double(frac) << '\n';
  manifest.set("stat.aligned_words", static_cast<uint64_t>(words.size()));
  manifest.set("stat.out_of_dictionary", frac);
  finish_manifest(manifest, output, manifest_path);
}

void cmd_analyze_patterns(const std::string& tagged_path, const std::string& tagged_b_path,
                          const std::string& pattern_path, const std::string& output,
                          const std::string& manifest_path, bool list_ids) {
  dmm::Manifest manifest("analyze-patterns");
  manifest.add_input("tagged", tagged_path);
  if (!tagged_b_path.empty()) manifest.add_input("tagged_b", tagged_b_path);
  if (!pattern_path.empty()) manifest.add_input("patterns", pattern_path);

  std::vector<dmm::PatternSpec> patterns =
      pattern_path.empty() ? dmm::builtin_patterns() : dmm::read_pattern_file(pattern_path);
  auto msgs_a = dmm::read_tagged_messages_file(tagged_path);
  auto hits_a = dmm::pattern_search(msgs_a, patterns);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!output.empty()) {
    file = open_out(output);
    out = &file;
  }
  if (tagged_b_path.empty()) {
    *out << "pattern\tmessages\tmatched" << (list_ids ? "\tmsg_ids" : "") << '\n';
    for (const auto& h : hits_a) {
      *out << h.name << '\t' << msgs_a.size() << '\t' << h.message_count;
      if (list_ids) {
        *out << '\t';
        for (size_t i = 0; i < h.msg_ids.size(); i++) *out << (i ? "," : "") << h.msg_ids[i];
      }
      *out << '\n';
    }
  } else {
    auto msgs_b = dmm::read_tagged_messages_file(tagged_b_path);
    auto hits_b = dmm::pattern_search(msgs_b, patterns);
    *out << "pattern\tmatched_a\tsize_a\tmatched_b\tsize_b\tratio\n";
    for (size_t p = 0; p < patterns.size(); p++) {
      double ratio = dmm::construction_ratio(hits_a[p].message_count, msgs_a.size(),
                                             hits_b[p].message_count, msgs_b.size());
      *out << patterns[p].name << '\t' << hits_a[p].message_count << '\t' << msgs_a.size()
           << '\t' << hits_b[p].message_count << '\t' << msgs_b.size() << '\t';
      if (std::isinf(ratio)) {
        *out << "inf";
      } else {
        *out << dmm::format_double(ratio);
      }
      *out << '\n';
    }
  }
  finish_manifest(manifest, output, manifest_path);
}

void cmd_analyze_deciles(const std::string& posteriors_path, int category,
                         const std::string& predicate_path, uint64_t sample_size, uint64_t seed,
                         const std::string& output, const std::string& manifest_path) {
  dmm::Manifest manifest("analyze-deciles");
  manifest.add_input("posteriors", posteriors_path);
  manifest.add_input("predicate_ids", predicate_path);
  manifest.set("flag.category", dmm::category_name(category));
  manifest.set("flag.sample", sample_size);
  manifest.set("flag.seed", seed);
  manifest.set("output", output);

  dmm::MessagePosteriors post = dmm::read_posteriors_file(posteriors_path);
  std::set<std::string> predicate_ids = read_id_set(predicate_path);

  std::vector<double> posterior(post.rows());
  std::vector<uint32_t> tokens(post.rows());
  std::vector<char> predicate(post.rows());
  for (size_t i = 0; i < post.rows(); i++) {
    posterior[i] = dmm::message_posterior(post, i)[category];
    tokens[i] = static_cast<uint32_t>(post.n_m[i]);
    predicate[i] = predicate_ids.count(post.msg_ids[i]) ? 1 : 0;
  }
  dmm::DecileReport report =
      dmm::decile_report(posterior, tokens, predicate, sample_size, seed);

  auto out = open_out(output);
  out << "decile\tlow\thigh\tpopulation\tsampled\thits\tproportion\tmean_tokens\n";
  for (int d = 0; d < 10; d++) {
    const auto& row = report.rows[static_cast<size_t>(d)];
    out << d << '\t' << dmm::format_double(d / 10.0) << '\t'
        << dmm::format_double(d == 9 ? 1.0 : (d + 1) / 10.0) << '\t' << row.population << '\t'
        << row.sampled << '\t' << row.hits << '\t';
    if (row.sampled == 0) {
      out << "-\t-\n";
    } else {
      out << dmm::format_double(row.proportion) << '\t' << dmm::format_double(row.mean_tokens)
          << '\n';
    }
  }
  finish_manifest(manifest, output, manifest_path);
}

void cmd_synth(const dmm::SynthSpec& spec, const std::string& priors_path,
               const std::string& output, const std::string& phi_out,
               const std::string& manifest_path) {
  dmm::Manifest manifest("synth");
  manifest.set("flag.vocab", static_cast<uint64_t>(spec.vocab_words));
  manifest.set("flag.users", static_cast<uint64_t>(spec.num_users));
  manifest.set("flag.msgs_per_user", static_cast<uint64_t>(spec.msgs_per_user));
  manifest.set("flag.tokens_per_msg", static_cast<uint64_t>(spec.tokens_per_msg));
  manifest.set("flag.alpha", spec.alpha);
  manifest.set("flag.beta_per_word", spec.beta_per_word);
  manifest.set("flag.seed", spec.seed);
  manifest.set("output", output);

  dmm::SynthSpec full = spec;
  if (!priors_path.empty()) {
    manifest.add_input("priors", priors_path);
    auto in = open_in(priors_path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      std::array<double, 4> raw{};
      size_t start = 0;
      for (int k = 0; k < 4; k++) {
        size_t sp = line.find(' ', start);
        std::string_view field(line.data() + start,
                               (sp == std::string::npos ? line.size() : sp) - start);
        raw[static_cast<size_t>(k)] = dmm::parse_double(field);
        start = sp == std::string::npos ? line.size() : sp + 1;
      }
      auto norm = dmm::normalize_demographics(raw);
      if (!norm) throw input_error("unusable prior line: '" + line + "'");
      full.user_priors.push_back(*norm);
    }
  }

  dmm::SynthResult result = dmm::generate_synthetic(full);
  dmm::write_corpus_file(result.corpus, output);
  if (!phi_out.empty()) {
    dmm::write_phi_file(result.phi_star, full.K, full.vocab_words + 1, phi_out);
    manifest.set("output.phi", phi_out);
  }
  manifest.set("stat.tokens", static_cast<uint64_t>(result.corpus.total_tokens()));
  finish_manifest(manifest, output, manifest_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"demographically aligned language model toolkit"};
  app.require_subcommand(1);

  std::string manifest_path;
  app.add_option("--manifest", manifest_path,
                 "manifest path (default: <out>.manifest next to the primary output)")
      ->configurable(false);

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "filter and tokenize a JSONL corpus");
  std::string pre_in, pre_out, pre_dropped;
  int pre_min_users = 20;
  pre->add_option("--input", pre_in)->required()->check(CLI::ExistingFile);
  pre->add_option("--output", pre_out)->required();
  pre->add_option("--min-users", pre_min_users, "vocabulary user threshold")
      ->capture_default_str();
  pre->add_option("--keep-dropped-log", pre_dropped, "write msg_id + drop reason here");
  pre->callback(
      [&] { cmd_preprocess(pre_in, pre_out, pre_min_users, pre_dropped, manifest_path); });

  // normalize
  auto* norm = app.add_subcommand("normalize", "strip symbol codepoints and @-mentions");
  std::string norm_in, norm_out;
  norm->add_option("--input", norm_in)->required()->check(CLI::ExistingFile);
  norm->add_option("--output", norm_out)->required();
  norm->callback([&] { cmd_normalize(norm_in, norm_out, manifest_path); });

  // seedlist / seedlist-users
  std::string seed_corpus, seed_out, seed_category = "aa", seed_normalize = "average";
  dmm::SeedlistSpec seed_spec;
  for (auto [name, emit_users] :
       {std::pair<const char*, bool>{"seedlist", false}, {"seedlist-users", true}}) {
    auto* sub = app.add_subcommand(
        name, emit_users ? "select users by seed-term coverage" : "rank seed terms");
    sub->add_option("--corpus", seed_corpus)->required()->check(CLI::ExistingFile);
    sub->add_option("--n", seed_spec.n, "top words kept")->capture_default_str();
    sub->add_option("--m", seed_spec.m, "min token occurrences")->capture_default_str();
    sub->add_option("--p", seed_spec.p, "min fraction of messages with a seed")
        ->capture_default_str();
    sub->add_option("--min-tweets", seed_spec.min_tweets)->capture_default_str();
    sub->add_option("--category", seed_category)->capture_default_str();
    sub->add_option("--normalize", seed_normalize)
        ->check(CLI::IsMember({"average", "lm"}))
        ->capture_default_str();
    sub->add_option("--out", seed_out)->required();
    const bool emit = emit_users;
    sub->callback([&, emit] {
      dmm::SeedlistSpec spec = seed_spec;
      spec.category = dmm::category_from_name(seed_category);
      cmd_seedlist(seed_corpus, spec, seed_normalize, seed_out, manifest_path, emit);
    });
  }

  // train
  auto* tr = app.add_subcommand("train", "collapsed Gibbs training");
  std::string tr_corpus, tr_out, tr_post, tr_loglik;
  dmm::Hyperparams tr_hyper;
  double tr_beta_per_word = 0.01;
  double tr_beta_total = 0.0;
  int tr_partitions = 0, tr_threads = 0;
  tr->add_option("--corpus", tr_corpus)->required()->check(CLI::ExistingFile);
  tr->add_option("--alpha", tr_hyper.alpha)->capture_default_str();
  tr->add_option("--beta-per-word", tr_beta_per_word, "per-word smoothing, scaled by V")
      ->capture_default_str();
  auto* beta_opt = tr->add_option("--beta", tr_beta_total, "total smoothing mass (overrides)");
  tr->add_option("--iters", tr_hyper.iterations)->capture_default_str();
  tr->add_option("--avg-last", tr_hyper.average_last)->capture_default_str();
  tr->add_option("--seed", tr_hyper.seed)->capture_default_str();
  tr->add_option("--partitions", tr_partitions,
                 "approximate data-parallel sampling over this many blocks (0 = exact serial)")
      ->capture_default_str();
  tr->add_option("--threads", tr_threads, "OpenMP threads for partitioned sweeps")
      ->capture_default_str();
  tr->add_option("--out", tr_out)->required();
  tr->add_option("--retain-message-posteriors", tr_post,
                 "also write per-message averaged topic counts here");
  tr->add_option("--loglik-log", tr_loglik, "write per-sweep log-likelihood here");
  tr->callback([&] {
    dmm::Hyperparams hyper = tr_hyper;
    if (*beta_opt) hyper.beta = tr_beta_total;
    cmd_train(tr_corpus, hyper, tr_beta_per_word, static_cast<bool>(*beta_opt), tr_partitions,
              tr_threads, tr_out, tr_post, tr_loglik, manifest_path);
  });

  // infer
  auto* inf = app.add_subcommand("infer", "held-out topic inference per message");
  std::string inf_model, inf_in, inf_out, inf_oov = "drop";
  dmm::InferenceConfig inf_cfg;
  inf->add_option("--model", inf_model)->required()->check(CLI::ExistingFile);
  inf->add_option("--input", inf_in)->required()->check(CLI::ExistingFile);
  inf->add_option("--alpha-sym", inf_cfg.alpha_sym)->capture_default_str();
  inf->add_option("--iterations", inf_cfg.iterations)->capture_default_str();
  inf->add_option("--tol", inf_cfg.convergence_tol)->capture_default_str();
  inf->add_option("--oov", inf_oov, "drop OOV tokens or score them under the OOV entry")
      ->check(CLI::IsMember({"drop", "score"}))
      ->capture_default_str();
  inf->add_option("--out", inf_out)->required();
  inf->callback([&] {
    dmm::InferenceConfig cfg = inf_cfg;
    cfg.score_oov = inf_oov == "score";
    cmd_infer(inf_model, inf_in, cfg, inf_out, manifest_path);
  });

  // extract
  auto* ext = app.add_subcommand("extract", "select demographically aligned users");
  std::string ext_post, ext_model, ext_out, ext_msgs, ext_category = "aa";
  dmm::AlignSpec ext_spec;
  ext->add_option("--posteriors", ext_post)->required()->check(CLI::ExistingFile);
  ext->add_option("--model", ext_model)->check(CLI::ExistingFile);
  ext->add_option("--category", ext_category)->capture_default_str();
  ext->add_option("--min-posterior", ext_spec.min_posterior)->capture_default_str();
  ext->add_option("--other-cap", ext_spec.other_cap)->capture_default_str();
  ext->add_option("--out", ext_out)->required();
  ext->add_option("--messages-out", ext_msgs, "also write the users' message ids");
  ext->callback([&] {
    dmm::AlignSpec spec = ext_spec;
    spec.category = dmm::category_from_name(ext_category);
    cmd_extract(ext_post, ext_model, spec, ext_out, ext_msgs, manifest_path);
  });

  // classify
  auto* cls = app.add_subcommand("classify", "ensemble language identification");
  std::string cls_model, cls_baseline, cls_in, cls_out;
  double cls_threshold = 0.9;
  dmm::InferenceConfig cls_cfg;
  cls->add_option("--model", cls_model)->required()->check(CLI::ExistingFile);
  cls->add_option("--baseline", cls_baseline, "ngram:<lang-TAB-text file> or table:<msg_id-TAB-code file>")
      ->required();
  cls->add_option("--threshold", cls_threshold)->capture_default_str();
  cls->add_option("--input", cls_in)->required()->check(CLI::ExistingFile);
  cls->add_option("--out", cls_out)->required();
  cls->callback([&] {
    cmd_classify(cls_model, cls_baseline, cls_threshold, cls_cfg, cls_in, cls_out,
                 manifest_path);
  });

  // recall
  auto* rec = app.add_subcommand("recall", "imputed recall from a decisions file");
  std::string rec_decisions, rec_unknown = "twitter2";
  double rec_precision = 1.0;
  rec->add_option("--decisions", rec_decisions)->required()->check(CLI::ExistingFile);
  rec->add_option("--precision", rec_precision, "P(English | flip)")->capture_default_str();
  rec->add_option("--unknown", rec_unknown,
                  "twitter1 drops unknown-baseline rows, twitter2 counts them as non-English")
      ->check(CLI::IsMember({"twitter1", "twitter2"}))
      ->capture_default_str();
  rec->callback([&] { cmd_recall(rec_decisions, rec_precision, rec_unknown, manifest_path); });

  // analyze
  auto* ana = app.add_subcommand("analyze", "model and corpus reports");
  ana->require_subcommand(1);

  auto* ratios = ana->add_subcommand("ratios", "ranked alignment ratios per word");
  std::string rat_model, rat_out, rat_category = "aa", rat_denom = "pooled";
  double rat_min = 2.0;
  int rat_top = 0;
  ratios->add_option("--model", rat_model)->required()->check(CLI::ExistingFile);
  ratios->add_option("--category", rat_category)->capture_default_str();
  ratios->add_option("--min-ratio", rat_min)->capture_default_str();
  ratios->add_option("--top", rat_top, "keep only the top N words (0 = all)")
      ->capture_default_str();
  ratios->add_option("--denominator", rat_denom)
      ->check(CLI::IsMember({"pooled", "mixture"}))
      ->capture_default_str();
  ratios->add_option("--out", rat_out)->required();
  ratios->callback([&] {
    cmd_analyze_ratios(rat_model, dmm::category_from_name(rat_category), rat_min, rat_top,
                       rat_denom, rat_out, manifest_path);
  });

  auto* cov = ana->add_subcommand("coverage", "out-of-dictionary share of aligned words");
  std::string cov_model, cov_dict, cov_out, cov_category = "aa", cov_denom = "pooled";
  double cov_min = 2.0;
  cov->add_option("--model", cov_model)->required()->check(CLI::ExistingFile);
  cov->add_option("--dictionary", cov_dict)->required()->check(CLI::ExistingFile);
  cov->add_option("--category", cov_category)->capture_default_str();
  cov->add_option("--min-ratio", cov_min)->capture_default_str();
  cov->add_option("--denominator", cov_denom)
      ->check(CLI::IsMember({"pooled", "mixture"}))
      ->capture_default_str();
  cov->add_option("--out", cov_out, "write the report here instead of stdout");
  cov->callback([&] {
    cmd_analyze_coverage(cov_model, dmm::category_from_name(cov_category), cov_min, cov_denom,
                         cov_dict, cov_out, manifest_path);
  });

  auto* pat = ana->add_subcommand("patterns", "tag-sequence construction search");
  std::string pat_tagged, pat_tagged_b, pat_file, pat_out;
  bool pat_ids = false;
  pat->add_option("--tagged", pat_tagged)->required()->check(CLI::ExistingFile);
  pat->add_option("--tagged-b", pat_tagged_b, "second corpus: emit A vs B rate ratios")
      ->check(CLI::ExistingFile);
  pat->add_option("--patterns", pat_file, "pattern spec file (default: built-in three)")
      ->check(CLI::ExistingFile);
  pat->add_flag("--list-ids", pat_ids, "include matching msg_ids");
  pat->add_option("--out", pat_out, "output file (default: stdout)");
  pat->callback([&] {
    cmd_analyze_patterns(pat_tagged, pat_tagged_b, pat_file, pat_out, manifest_path, pat_ids);
  });

  auto* dec = ana->add_subcommand("deciles", "predicate share by posterior decile");
  std::string dec_post, dec_pred, dec_out, dec_category = "aa";
  uint64_t dec_sample = 200000, dec_seed = 1;
  dec->add_option("--posteriors", dec_post)->required()->check(CLI::ExistingFile);
  dec->add_option("--predicate-ids", dec_pred, "msg_ids satisfying the predicate")
      ->required()
      ->check(CLI::ExistingFile);
  dec->add_option("--category", dec_category)->capture_default_str();
  dec->add_option("--sample", dec_sample)->capture_default_str();
  dec->add_option("--seed", dec_seed)->capture_default_str();
  dec->add_option("--out", dec_out)->required();
  dec->callback([&] {
    cmd_analyze_deciles(dec_post, dmm::category_from_name(dec_category), dec_pred, dec_sample,
                        dec_seed, dec_out, manifest_path);
  });

  // synth
  auto* syn = app.add_subcommand("synth", "sample a corpus from the generative process");
  dmm::SynthSpec syn_spec;
  std::string syn_out, syn_phi, syn_priors;
  syn->add_option("--vocab", syn_spec.vocab_words)->capture_default_str();
  syn->add_option("--users", syn_spec.num_users)->capture_default_str();
  syn->add_option("--msgs-per-user", syn_spec.msgs_per_user)->capture_default_str();
  syn->add_option("--tokens-per-msg", syn_spec.tokens_per_msg)->capture_default_str();
  syn->add_option("--alpha", syn_spec.alpha)->capture_default_str();
  syn->add_option("--beta-per-word", syn_spec.beta_per_word)->capture_default_str();
  syn->add_option("--seed", syn_spec.seed)->capture_default_str();
  syn->add_option("--priors", syn_priors, "fixed user priors, 4 reals per line")
      ->check(CLI::ExistingFile);
  syn->add_option("--out", syn_out)->required();
  syn->add_option("--phi-out", syn_phi, "write ground-truth topic-word table here");
  syn->callback([&] { cmd_synth(syn_spec, syn_priors, syn_out, syn_phi, manifest_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dmm::input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const dmm::invariant_error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
