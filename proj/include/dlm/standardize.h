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

#ifndef DLM_STANDARDIZE_H_
#define DLM_STANDARDIZE_H_

#include <string>
#include <string_view>
#include <vector>

namespace dlm::text {

// Ordered alias => canonical rewrite rules over whitespace tokens.
class SynonymTable {
 public:
  struct Rule {
    std::vector<std::string> alias;
    std::vector<std::string> canonical;
  };

  // Parses "alias=>canonical" lines; '#' starts a comment. A repeated alias
  // keeps its first definition. Throws kParse naming the offending line.
  static SynonymTable Parse(std::string_view contents);
  static SynonymTable Load(const std::string& path);
  // The table packaged with the library (data/synonyms.txt).
  static const SynonymTable& Default();

  const std::vector<Rule>& rules() const { return rules_; }
  size_t max_alias_len() const { return max_alias_len_; }

 private:
  std::vector<Rule> rules_;
  size_t max_alias_len_ = 0;
};

struct StandardizeOptions {
  bool map_numbers = true;    // "five" -> "5", "twenty five" -> "25"
  bool fold_synonyms = true;  // apply the synonym table
};

// Lowercase ASCII words and digits separated by single spaces. With both
// options disabled only the lexical cleanup (case, punctuation, spacing)
// runs, which is the "no standardization" ablation.
class Standardizer {
 public:
  Standardizer() : Standardizer(SynonymTable::Default(), {}) {}
  Standardizer(SynonymTable table, StandardizeOptions options)
      : table_(std::move(table)), options_(options) {}

  // Throws kEmptyCommand when nothing survives cleanup.
  std::string operator()(std::string_view raw) const;

  const StandardizeOptions& options() const { return options_; }

 private:
  SynonymTable table_;
  StandardizeOptions options_;
};

// Standardizes with the packaged table and all rules enabled.
std::string Standardize(std::string_view raw);

// Case and punctuation cleanup only.
std::string BasicNormalize(std::string_view raw);

std::vector<std::string> SplitWords(std::string_view text);
std::string JoinWords(const std::vector<std::string>& words);

// True for digit strings such as "5" or "2.5".
bool IsNumber(std::string_view token);
// Value of a number word ("zero" .. "twenty", tens), or -1.
int NumberWordValue(std::string_view word);

}  // namespace dlm::text

#endif  // DLM_STANDARDIZE_H_
