#include "dmm/vocabulary.hpp"

#include "dmm/common.hpp"

namespace dmm {

Vocabulary::Vocabulary() : words_{std::string(kOovSymbol)} {
  index_.emplace(words_[0], kOovId);
}

Vocabulary::Vocabulary(std::vector<std::string> words) {
  words_.reserve(words.size() + 1);
  words_.emplace_back(kOovSymbol);
  for (auto& w : words) words_.push_back(std::move(w));
  index_.reserve(words_.size());
  for (uint32_t i = 0; i < words_.size(); i++) {
    if (i > 0 && words_[i] == kOovSymbol)
      throw input_error("vocabulary contains the reserved OOV symbol");
    if (!index_.emplace(words_[i], i).second)
      throw input_error("duplicate word in vocabulary: " + words_[i]);
  }
}

uint32_t Vocabulary::id_of(std::string_view word) const {
  auto it = index_.find(word);
  return it == index_.end() ? kOovId : it->second;
}

bool Vocabulary::contains(std::string_view word) const {
  return index_.find(word) != index_.end();
}

}  // namespace dmm
