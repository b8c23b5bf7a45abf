#include "dmm/langid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "dmm/common.hpp"
#include "dmm/text_normalize.hpp"
#include "dmm/tokenize.hpp"

namespace dmm {

NgramBaseline::NgramBaseline(std::span<const std::pair<std::string, std::string>> labeled_texts,
                             int max_n)
    : max_n_(max_n) {
  if (labeled_texts.empty()) throw input_error("empty language training set");
  if (max_n < 1) throw input_error("max_n must be at least 1");

  std::map<std::string, size_t> lang_index;  // ordered: langs_ comes out sorted
  for (const auto& [text, lang] : labeled_texts) {
    lang_index.emplace(lang, lang_index.size());
  }
  if (lang_index.size() < 2) throw input_error("need at least 2 distinct language labels");
  langs_.reserve(lang_index.size());
  for (auto& [lang, idx] : lang_index) {
    idx = langs_.size();
    langs_.push_back(lang);
  }
  stats_.resize(langs_.size());

  std::unordered_map<std::string, char> seen;
  for (const auto& [text, lang] : labeled_texts) {
    LangStats& st = stats_[lang_index[lang]];
    st.docs++;
    total_docs_++;
    for (auto& g : grams(text)) {
      seen.emplace(g, 0);
      st.gram_counts[g]++;
      st.total_grams++;
    }
  }
  distinct_grams_ = seen.size();
  if (distinct_grams_ == 0) throw input_error("language training set has no text");
}

std::vector<std::string> NgramBaseline::grams(std::string_view text) const {
  // Codepoint boundaries, so multi-byte characters are whole units.
  std::vector<size_t> bounds;
  size_t pos = 0;
  bounds.push_back(0);
  while (pos < text.size()) {
    utf8::decode_next(text, pos);
    bounds.push_back(pos);
  }
  const size_t n_cp = bounds.size() - 1;
  std::vector<std::string> out;
  for (int n = 1; n <= max_n_; n++) {
    for (size_t i = 0; i + static_cast<size_t>(n) <= n_cp; i++) {
      out.emplace_back(text.substr(bounds[i], bounds[i + static_cast<size_t>(n)] - bounds[i]));
    }
  }
  return out;
}

std::string NgramBaseline::predict(std::string_view, std::string_view text) const {
  auto gs = grams(text);
  double best = -std::numeric_limits<double>::infinity();
  size_t best_i = 0;
  for (size_t i = 0; i < langs_.size(); i++) {
    const LangStats& st = stats_[i];
    double score = std::log(static_cast<double>(st.docs) / static_cast<double>(total_docs_));
    const double denom = static_cast<double>(st.total_grams + distinct_grams_);
    for (const auto& g : gs) {
      auto it = st.gram_counts.find(g);
      const uint64_t c = it == st.gram_counts.end() ? 0 : it->second;
      score += std::log(static_cast<double>(c + 1) / denom);
    }
    if (score > best) {  // strict: ties keep the lexicographically first language
      best = score;
      best_i = i;
    }
  }
  return langs_[best_i];
}

TableBaseline::TableBaseline(std::unordered_map<std::string, std::string> table)
    : table_(std::move(table)) {}

TableBaseline TableBaseline::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open prediction table: " + path);
  std::unordered_map<std::string, std::string> table;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw input_error("prediction table line " + std::to_string(lineno) + " has no tab");
    table[line.substr(0, tab)] = line.substr(tab + 1);
  }
  return TableBaseline(std::move(table));
}

std::string TableBaseline::predict(std::string_view msg_id, std::string_view) const {
  auto it = table_.find(std::string(msg_id));
  if (it == table_.end() || it->second.empty() || it->second == kUnknownLang)
    return std::string(kUnknownLang);
  return it->second;
}

const char* ensemble_rule_name(EnsembleRule r) {
  switch (r) {
    case EnsembleRule::baseline_english: return "baseline_english";
    case EnsembleRule::posterior_override: return "posterior_override";
    case EnsembleRule::baseline_kept: return "baseline_kept";
    case EnsembleRule::no_vocab_tokens: return "no_vocab_tokens";
  }
  return "?";
}

EnsembleRule ensemble_rule_from_name(std::string_view name) {
  for (EnsembleRule r : {EnsembleRule::baseline_english, EnsembleRule::posterior_override,
                         EnsembleRule::baseline_kept, EnsembleRule::no_vocab_tokens}) {
    if (name == ensemble_rule_name(r)) return r;
  }
  throw input_error("unknown ensemble rule: " + std::string(name));
}

EnsembleDecision ensemble_classify(std::string_view msg_id, std::string_view text,
                                   const BaselineLangId& baseline, const TrainedModel& model,
                                   const InferenceConfig& cfg, double threshold) {
  const std::string normalized = strip_mentions(strip_symbols(text));

  EnsembleDecision decision;
  decision.baseline_lang = baseline.predict(msg_id, normalized);
  if (decision.baseline_lang == "en") {
    decision.final_lang = "en";
    decision.rule = EnsembleRule::baseline_english;
    return decision;
  }

  std::vector<uint32_t> in_vocab;
  for (const auto& word : tokenize(normalized)) {
    uint32_t id = model.vocab.id_of(word);
    if (id != kOovId) in_vocab.push_back(id);
  }
  if (in_vocab.empty()) {
    decision.final_lang = decision.baseline_lang;
    decision.rule = EnsembleRule::no_vocab_tokens;
    return decision;
  }

  InferenceConfig infer_cfg = cfg;
  infer_cfg.score_oov = false;
  infer_cfg.q_out = nullptr;
  try {
    InferenceResult inf = infer_theta(model, in_vocab, infer_cfg);
    decision.theta = inf.theta;
  } catch (const std::exception& e) {
    std::cerr << "warning: inference failed for message " << msg_id << ": " << e.what()
              << "; keeping baseline\n";
    decision.final_lang = decision.baseline_lang;
    decision.rule = EnsembleRule::baseline_kept;
    return decision;
  }

  const DemographicVector& theta = *decision.theta;
  const double english_mass = theta[kWhite] + theta[kAA] + theta[kHispanic];
  if (english_mass >= threshold) {
    decision.final_lang = "en";
    decision.rule = EnsembleRule::posterior_override;
  } else {
    decision.final_lang = decision.baseline_lang;
    decision.rule = EnsembleRule::baseline_kept;
  }
  return decision;
}

void RecallInputs::check() const {
  if (total == 0) throw input_error("recall needs at least one message");
  if (baseline_hits > total) throw input_error("baseline count exceeds total");
  if (flips > total - baseline_hits) throw input_error("flip count exceeds non-English count");
  if (!(precision_flip >= 0.0 && precision_flip <= 1.0))
    throw input_error("flip precision must be in [0, 1]");
}

RecallEstimate imputed_recall(const RecallInputs& r) {
  r.check();
  RecallEstimate est;
  const double n = static_cast<double>(r.total);
  est.baseline_recall = static_cast<double>(r.baseline_hits) / n;
  est.ensemble_recall =
      (static_cast<double>(r.baseline_hits) + static_cast<double>(r.flips) * r.precision_flip) / n;
  return est;
}

}  // namespace dmm
