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

#include "dlm/vocabulary.h"

#include <set>

#include "dlm/error.h"
#include "dlm/standardize.h"

namespace dlm::text {

Vocabulary::Vocabulary()
    : tokens_{std::string(kPadToken), std::string(kUnkToken)},
      ids_{{std::string(kPadToken), kPadId}, {std::string(kUnkToken), kUnkId}} {}

Vocabulary Vocabulary::Build(std::span<const std::string> corpus) {
  std::set<std::string> distinct;
  for (const auto& line : corpus) {
    for (auto& w : SplitWords(line)) distinct.insert(std::move(w));
  }
  distinct.erase(std::string(kPadToken));
  distinct.erase(std::string(kUnkToken));
  std::vector<std::string> tokens = {std::string(kPadToken),
                                     std::string(kUnkToken)};
  tokens.insert(tokens.end(), distinct.begin(), distinct.end());
  return FromTokens(std::move(tokens));
}

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  if (tokens.size() < 2 || tokens[kPadId] != kPadToken ||
      tokens[kUnkId] != kUnkToken) {
    Fail(ErrorCode::kSchema, "vocabulary must start with <pad>, <unk>");
  }
  Vocabulary vocab;
  vocab.tokens_ = std::move(tokens);
  vocab.ids_.clear();
  for (int i = 0; i < static_cast<int>(vocab.tokens_.size()); ++i) {
    if (!vocab.ids_.emplace(vocab.tokens_[i], i).second) {
      Fail(ErrorCode::kSchema, "duplicate vocabulary token " + vocab.tokens_[i]);
    }
  }
  return vocab;
}

int Vocabulary::Id(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::Token(int id) const {
  if (id < 0 || id >= size()) {
    Fail(ErrorCode::kInvalidArgument, "token id out of range");
  }
  return tokens_[id];
}

std::vector<int> Vocabulary::Tokenize(std::string_view standardized) const {
  std::vector<int> ids;
  for (const auto& w : SplitWords(standardized)) ids.push_back(Id(w));
  if (ids.empty()) Fail(ErrorCode::kEmptyCommand, "nothing to tokenize");
  return ids;
}

std::string Vocabulary::Detokenize(std::span<const int> ids) const {
  std::vector<std::string> words;
  for (int id : ids) words.push_back(Token(id));
  return JoinWords(words);
}

}  // namespace dlm::text
