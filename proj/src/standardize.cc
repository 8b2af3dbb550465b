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

#include "dlm/standardize.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "dlm/error.h"
#include "synonyms_data.h"

namespace dlm::text {

namespace {

constexpr std::array<std::string_view, 21> kUnits = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
    "twenty"};
constexpr std::array<std::string_view, 8> kTens = {
    "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty",
    "ninety"};

bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsLower(char c) { return c >= 'a' && c <= 'z'; }

// Lowercase, drop apostrophes, turn everything outside [a-z0-9] into
// spaces (keeping decimal points), and split letter/digit runs.
std::string Clean(std::string_view raw) {
  std::string lowered;
  lowered.reserve(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) {
    const auto c = static_cast<unsigned char>(raw[i]);
    // U+2019 RIGHT SINGLE QUOTATION MARK is treated like an apostrophe.
    if (c == 0xE2 && i + 2 < raw.size() &&
        static_cast<unsigned char>(raw[i + 1]) == 0x80 &&
        static_cast<unsigned char>(raw[i + 2]) == 0x99) {
      i += 2;
      continue;
    }
    if (c == '\'') continue;
    if (c >= 0x80) {
      lowered.push_back(' ');
      continue;
    }
    lowered.push_back(static_cast<char>(std::tolower(c)));
  }

  std::string out;
  out.reserve(lowered.size() + 8);
  for (size_t i = 0; i < lowered.size(); ++i) {
    const char c = lowered[i];
    const bool keep_point = c == '.' && i > 0 && i + 1 < lowered.size() &&
                            IsDigit(lowered[i - 1]) && IsDigit(lowered[i + 1]);
    if (!(IsLower(c) || IsDigit(c) || keep_point)) {
      out.push_back(' ');
      continue;
    }
    if (!out.empty()) {
      const char prev = out.back();
      if ((IsDigit(prev) && IsLower(c)) || (IsLower(prev) && IsDigit(c))) {
        out.push_back(' ');
      }
    }
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> MapNumbers(const std::vector<std::string>& words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (size_t i = 0; i < words.size(); ++i) {
    const auto tens = std::find(kTens.begin(), kTens.end(), words[i]);
    if (tens != kTens.end() && i + 1 < words.size()) {
      const int unit = NumberWordValue(words[i + 1]);
      if (unit >= 1 && unit <= 9) {
        const int value = 20 + 10 * static_cast<int>(tens - kTens.begin());
        out.push_back(std::to_string(value + unit));
        ++i;
        continue;
      }
    }
    const int value = NumberWordValue(words[i]);
    out.push_back(value >= 0 ? std::to_string(value) : words[i]);
  }
  return out;
}

std::vector<std::string> FoldOnce(const SynonymTable& table,
                                  const std::vector<std::string>& words,
                                  bool* changed) {
  std::vector<std::string> out;
  out.reserve(words.size());
  size_t i = 0;
  while (i < words.size()) {
    const SynonymTable::Rule* best = nullptr;
    for (const auto& rule : table.rules()) {
      const size_t n = rule.alias.size();
      if (i + n > words.size()) continue;
      if (best != nullptr && n <= best->alias.size()) continue;
      if (std::equal(rule.alias.begin(), rule.alias.end(), words.begin() + i)) {
        best = &rule;
      }
    }
    if (best == nullptr) {
      out.push_back(words[i]);
      ++i;
      continue;
    }
    out.insert(out.end(), best->canonical.begin(), best->canonical.end());
    i += best->alias.size();
    *changed = *changed || best->alias != best->canonical;
  }
  return out;
}

}  // namespace

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

bool IsNumber(std::string_view token) {
  if (token.empty() || !IsDigit(token.front()) || !IsDigit(token.back())) {
    return false;
  }
  int points = 0;
  for (char c : token) {
    if (c == '.') {
      ++points;
    } else if (!IsDigit(c)) {
      return false;
    }
  }
  return points <= 1;
}

int NumberWordValue(std::string_view word) {
  const auto unit = std::find(kUnits.begin(), kUnits.end(), word);
  if (unit != kUnits.end()) return static_cast<int>(unit - kUnits.begin());
  const auto tens = std::find(kTens.begin(), kTens.end(), word);
  if (tens != kTens.end()) {
    return 20 + 10 * static_cast<int>(tens - kTens.begin());
  }
  return -1;
}

SynonymTable SynonymTable::Parse(std::string_view contents) {
  SynonymTable table;
  std::set<std::vector<std::string>> seen;
  std::istringstream in{std::string(contents)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    if (SplitWords(line).empty()) continue;
    const auto arrow = line.find("=>");
    if (arrow == std::string::npos) {
      Fail(ErrorCode::kParse, "synonym table line " + std::to_string(line_no) +
                                  ": missing '=>'");
    }
    Rule rule{SplitWords(line.substr(0, arrow)),
              SplitWords(line.substr(arrow + 2))};
    if (rule.alias.empty() || rule.canonical.empty()) {
      Fail(ErrorCode::kParse, "synonym table line " + std::to_string(line_no) +
                                  ": empty alias or canonical form");
    }
    if (!seen.insert(rule.alias).second) continue;
    table.max_alias_len_ = std::max(table.max_alias_len_, rule.alias.size());
    table.rules_.push_back(std::move(rule));
  }
  return table;
}

SynonymTable SynonymTable::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open synonym table " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

const SynonymTable& SynonymTable::Default() {
  static const SynonymTable table = Parse(kPackagedSynonymTable);
  return table;
}

std::string Standardizer::operator()(std::string_view raw) const {
  std::vector<std::string> words = SplitWords(Clean(raw));
  if (words.empty()) {
    Fail(ErrorCode::kEmptyCommand, "command is empty after cleanup");
  }
  if (options_.map_numbers) words = MapNumbers(words);
  if (options_.fold_synonyms) {
    // Iterate to a fixed point so the result is idempotent even when a
    // rewrite exposes another alias.
    for (int pass = 0; pass < 8; ++pass) {
      bool changed = false;
      words = FoldOnce(table_, words, &changed);
      if (!changed) break;
    }
  }
  return JoinWords(words);
}

std::string Standardize(std::string_view raw) {
  static const Standardizer standardizer;
  return standardizer(raw);
}

std::string BasicNormalize(std::string_view raw) {
  static const Standardizer basic(SynonymTable{}, {false, false});
  return basic(raw);
}

}  // namespace dlm::text
