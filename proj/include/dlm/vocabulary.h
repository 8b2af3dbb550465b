// Copyright 2026 The DLM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DLM_VOCABULARY_H_
#define DLM_VOCABULARY_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dlm::text {

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

// Word-level vocabulary. Ids are dense; PAD and UNK are reserved and the
// remaining tokens are ordered lexicographically.
class Vocabulary {
 public:
  Vocabulary();

  // One id per distinct whitespace token of the corpus.
  static Vocabulary Build(std::span<const std::string> corpus);
  // Rebuilds from an id-ordered token list (checkpoint payload). The first
  // two entries must be the reserved tokens.
  static Vocabulary FromTokens(std::vector<std::string> tokens);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // Id of `token`, or kUnkId.
  int Id(std::string_view token) const;
  const std::string& Token(int id) const;

  // Throws kEmptyCommand on empty input.
  std::vector<int> Tokenize(std::string_view standardized) const;
  std::string Detokenize(std::span<const int> ids) const;

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace dlm::text

#endif  // DLM_VOCABULARY_H_
