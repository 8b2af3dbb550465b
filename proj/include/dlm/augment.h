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

#ifndef DLM_AUGMENT_H_
#define DLM_AUGMENT_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dlm/dataset.h"
#include "dlm/synth.h"

namespace dlm::augment {

// Paraphrases per command when augmenting; the desk-scale pipeline uses 8.
inline constexpr int kDefaultParaphrases = 30;

// Which command family a paraphrase pattern applies to.
enum class RuleScope {
  kLongitudinal,  // move forward / backward
  kLateral,       // move left / right
  kTurnSlight,
  kTurnPlain,
  kTurnSharp,
  kLocate,        // implicit_locate
};

// Surface pattern with slots:
//   {verb} motion verb         {turn} rotation verb
//   {d}    direction phrase     {dadj} direction adjective
//   {dir}  left / right        {rel} speaker relation phrase
//   {n}    magnitude           {u} unit word
struct ParaphraseRule {
  RuleScope scope;
  std::string pattern;
};

struct ParaphraseGrammar {
  std::vector<ParaphraseRule> rules;
  std::vector<std::string> verbs;
  std::vector<std::string> turn_verbs;
  std::vector<std::string> forward_words;
  std::vector<std::string> backward_words;
  std::vector<std::string> behind_words;
  std::vector<std::string> front_words;
  std::vector<std::string> unit_words;  // plural forms
  bool number_words = true;             // also spell numbers out

  // Phrasings used to augment training data.
  static const ParaphraseGrammar& Training();
  // Disjoint phrasings (Table-style rewrites with rarer synonyms) reserved
  // for held-out evaluation.
  static const ParaphraseGrammar& HeldOut();
};

struct ParaphraseResult {
  std::vector<std::string> texts;
  bool shortfall = false;  // fewer than k distinct rewrites exist
};

// Every candidate rewrite of `spec` under `grammar`, in a fixed order, each
// verified to parse back to `spec`.
std::vector<std::string> EnumerateParaphrases(const synth::CommandSpec& spec,
                                              const ParaphraseGrammar& grammar);

// k distinct intent-preserving rewrites of `command`, chosen by `rng`.
// Throws kParse (with the unmatched span) when the command has no
// recoverable intent, kInvalidArgument when k < 1.
ParaphraseResult Paraphrase(std::string_view command, int k,
                            std::mt19937_64& rng,
                            const ParaphraseGrammar& grammar =
                                ParaphraseGrammar::Training());

// Prompt sent to an external paraphrase generator.
std::string ParaphrasePrompt(std::string_view command, int k);

// Splits a generator reply into candidate lines, stripping list markers such
// as "1.", "2)" or "-".
std::vector<std::string> ParseParaphraseReply(std::string_view reply);

struct ExternalResult {
  std::vector<std::string> texts;
  int dropped = 0;             // lines that failed the intent check
  bool used_fallback = false;  // rule-based output replaced the reply
};

// Posts the prompt as text/plain to `endpoint` ("http://host:port/path")
// and keeps at most k reply lines that preserve the intent. Network errors
// or an unusable reply fall back to the rule-based paraphraser.
ExternalResult ExternalParaphrase(std::string_view command, int k,
                                  const std::string& endpoint,
                                  std::mt19937_64& rng,
                                  double timeout_seconds = 5.0);

enum class CorruptionMode { kWordDropout, kTruncation, kMixedSpeaker };

std::string_view CorruptionModeName(CorruptionMode mode);
// Accepts "dropout"/"word_dropout", "truncate"/"truncation",
// "mixed"/"mixed_speaker".
CorruptionMode ParseCorruptionMode(std::string_view name);

// Packaged distractor lexicon (data/distractors.txt).
const std::vector<std::string>& DistractorLexicon();

// Word-level corruption of a command with at least two tokens:
//   word dropout  - removes one non-numeric content token
//   truncation    - keeps a strict, non-empty prefix
//   mixed speaker - inserts one or two distractor tokens
// Throws kInvalidArgument for shorter commands.
std::string Corrupt(std::string_view command, CorruptionMode mode,
                    std::mt19937_64& rng);

struct AugmentReport {
  io::Dataset dataset;
  std::vector<std::string> rejects;  // "line N: reason"
  int shortfalls = 0;
};

// Each source sample is kept and followed by k paraphrases carrying its
// trajectory, its family_id and source "augmented"; with no rejects the
// output has size N(k+1). Per-sample generators derive from `seed`.
AugmentReport AugmentDataset(const io::Dataset& source, int k, uint64_t seed,
                             const std::string& external_endpoint = "");

}  // namespace dlm::augment

#endif  // DLM_AUGMENT_H_
