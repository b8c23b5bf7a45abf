#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dmm/cvb0.hpp"
#include "dmm/model.hpp"

namespace dmm {

// Marker for a baseline that produced no usable prediction.
inline constexpr std::string_view kUnknownLang = "unk";

// External language identifier abstraction. Implementations must be
// deterministic and safe for concurrent reads after construction.
class BaselineLangId {
 public:
  virtual ~BaselineLangId() = default;
  // Returns a short language code, or kUnknownLang. msg_id is provided for
  // table-backed baselines that replay stored predictions.
  virtual std::string predict(std::string_view msg_id, std::string_view text) const = 0;
};

// Character n-gram multinomial naive Bayes over codepoint n-grams of
// lengths 1..max_n with add-one smoothing. Minimal but self-contained, so
// the ensemble is testable without external identifiers.
class NgramBaseline : public BaselineLangId {
 public:
  NgramBaseline(std::span<const std::pair<std::string, std::string>> labeled_texts,
                int max_n = 4);

  std::string predict(std::string_view msg_id, std::string_view text) const override;

  const std::vector<std::string>& languages() const { return langs_; }

 private:
  struct LangStats {
    std::unordered_map<std::string, uint64_t> gram_counts;
    uint64_t total_grams = 0;
    uint64_t docs = 0;
  };

  std::vector<std::string> grams(std::string_view text) const;

  int max_n_;
  std::vector<std::string> langs_;  // sorted, so argmax ties break low
  std::vector<LangStats> stats_;
  uint64_t distinct_grams_ = 0;  // smoothing base
  uint64_t total_docs_ = 0;
};

// How a replayed identifier's missing values are treated in downstream
// reports: the first convention leaves unknowns out of the non-English
// side, the second counts them as non-English predictions.
enum class UnknownConvention { twitter1, twitter2 };

// Replays stored per-message predictions. Empty or "unk" values and
// missing msg_ids are Unknown.
class TableBaseline : public BaselineLangId {
 public:
  explicit TableBaseline(std::unordered_map<std::string, std::string> table);
  static TableBaseline from_file(const std::string& path);

  std::string predict(std::string_view msg_id, std::string_view text) const override;

 private:
  std::unordered_map<std::string, std::string> table_;
};

enum class EnsembleRule {
  baseline_english,
  posterior_override,
  baseline_kept,
  no_vocab_tokens,
};

const char* ensemble_rule_name(EnsembleRule r);
EnsembleRule ensemble_rule_from_name(std::string_view name);

struct EnsembleDecision {
  std::string final_lang;
  std::string baseline_lang;
  EnsembleRule rule = EnsembleRule::baseline_kept;
  std::optional<DemographicVector> theta;
};

// The override procedure: keep a baseline English answer; otherwise, when
// at least one token is in the model vocabulary, call the message English
// if the combined white+AA+Hispanic posterior reaches the threshold. The
// Asian topic is left out of the sum (it soaks up non-English text).
// Unknown baseline output counts as non-English and enters the override
// path. Inference failures fall back to the baseline answer.
EnsembleDecision ensemble_classify(std::string_view msg_id, std::string_view text,
                                   const BaselineLangId& baseline, const TrainedModel& model,
                                   const InferenceConfig& cfg = {}, double threshold = 0.9);

struct RecallInputs {
  uint64_t total = 0;           // N: messages assumed English
  uint64_t baseline_hits = 0;   // n: messages the baseline already called English
  uint64_t flips = 0;           // n_flip: non-English decisions the ensemble overrode
  double precision_flip = 1.0;  // P(English | flip)

  void check() const;
};

struct RecallEstimate {
  double baseline_recall = 0.0;
  double ensemble_recall = 0.0;
};

// Recall under the imputation that flipped messages are English with the
// given precision: baseline n/N, ensemble (n + flips*precision)/N.
RecallEstimate imputed_recall(const RecallInputs& r);

}  // namespace dmm
