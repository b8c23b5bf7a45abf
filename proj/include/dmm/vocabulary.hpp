#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dmm {

inline constexpr std::string_view kOovSymbol = "<OOV>";
inline constexpr uint32_t kOovId = 0;

class Vocabulary {
 public:
  Vocabulary();

  // Words must be distinct and must not contain the OOV symbol; ids are
  // assigned 1..n in the order given.
  explicit Vocabulary(std::vector<std::string> words);

  uint32_t size() const { return static_cast<uint32_t>(words_.size()); }

  // Returns kOovId for unknown words.
  uint32_t id_of(std::string_view word) const;
  const std::string& word_of(uint32_t id) const { return words_.at(id); }
  bool contains(std::string_view word) const;

  const std::vector<std::string>& words() const { return words_; }

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> words_;  // id -> word, [0] is the OOV symbol
  std::unordered_map<std::string, uint32_t, Hash, std::equal_to<>> index_;
};

}  // namespace dmm
