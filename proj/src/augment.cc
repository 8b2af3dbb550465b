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

#include "dlm/augment.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <sstream>

#include "dlm/error.h"
#include "dlm/standardize.h"
#include "distractors_data.h"
#include "httplib.h"

namespace dlm::augment {

namespace {

using synth::CommandSpec;
using synth::Direction;
using synth::Intent;
using synth::Relation;

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string Capitalize(std::string s) {
  if (!s.empty()) {
    s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  }
  return s;
}

RuleScope ScopeOf(const CommandSpec& spec) {
  switch (spec.intent) {
    case Intent::kMove:
      return spec.direction == Direction::kForward ||
                     spec.direction == Direction::kBackward
                 ? RuleScope::kLongitudinal
                 : RuleScope::kLateral;
    case Intent::kTurn:
      if (spec.magnitude == synth::kSlightTurnDeg) return RuleScope::kTurnSlight;
      if (spec.magnitude == synth::kSharpTurnDeg) return RuleScope::kTurnSharp;
      return RuleScope::kTurnPlain;
    case Intent::kImplicitLocate:
      return RuleScope::kLocate;
  }
  return RuleScope::kLongitudinal;
}

std::string SingularUnit(const std::string& unit) {
  if (unit == "meters") return "meter";
  if (unit == "metres") return "metre";
  return unit;
}

std::vector<std::string> NumberForms(double magnitude, bool words) {
  std::vector<std::string> forms;
  const bool integral = magnitude == static_cast<long long>(magnitude);
  std::ostringstream digits;
  digits << magnitude;
  forms.push_back(digits.str());
  if (words && integral && magnitude >= 0 && magnitude < 100) {
    static constexpr std::array<std::string_view, 20> kSmall = {
        "zero",    "one",     "two",       "three",    "four",
        "five",    "six",     "seven",     "eight",    "nine",
        "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
        "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
    static constexpr std::array<std::string_view, 8> kTens = {
        "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty",
        "ninety"};
    const int n = static_cast<int>(magnitude);
    std::string w = n < 20 ? std::string(kSmall[n])
                           : std::string(kTens[n / 10 - 2]) +
                                 (n % 10 ? " " + std::string(kSmall[n % 10])
                                         : std::string());
    forms.push_back(std::move(w));
  }
  return forms;
}

// Replaces `key` with every alternate, multiplying the candidate list.
void Expand(std::vector<std::string>& candidates, std::string_view key,
            const std::vector<std::string>& alternates) {
  std::vector<std::string> out;
  for (const std::string& c : candidates) {
    const auto pos = c.find(key);
    if (pos == std::string::npos) {
      out.push_back(c);
      continue;
    }
    for (const std::string& alt : alternates) {
      std::string filled = c;
      for (auto p = filled.find(key); p != std::string::npos;
           p = filled.find(key, p + alt.size())) {
        filled.replace(p, key.size(), alt);
      }
      out.push_back(std::move(filled));
    }
  }
  candidates = std::move(out);
}

std::vector<std::string> ParseLexicon(std::string_view contents) {
  std::vector<std::string> words;
  std::istringstream in{std::string(contents)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string word = Trim(line);
    if (!word.empty()) words.push_back(word);
  }
  return words;
}

// Lowercase alphanumerics of a surface token.
std::string Bare(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

bool IsNumericToken(std::string_view token) {
  const std::string bare = Bare(token);
  return !bare.empty() &&
         (text::IsNumber(bare) || text::NumberWordValue(bare) >= 0);
}

bool IsContentToken(std::string_view token) {
  static const std::set<std::string, std::less<>> kStop = {
      "to", "the", "a",  "an", "of",  "you", "your", "in",      "at",
      "by", "me",  "i",  "am", "im",  "and", "for",  "towards", "toward",
      "please"};
  const std::string bare = Bare(token);
  return !bare.empty() && !kStop.contains(bare);
}

}  // namespace

const ParaphraseGrammar& ParaphraseGrammar::Training() {
  static const ParaphraseGrammar grammar = [] {
    ParaphraseGrammar g;
    g.verbs = {"move", "go", "advance", "proceed", "head", "travel", "drive"};
    g.turn_verbs = {"turn", "rotate", "veer"};
    g.forward_words = {"forward", "ahead", "frontward", "forwards"};
    g.backward_words = {"backward", "back", "backwards", "in reverse"};
    g.behind_words = {"behind you", "at your back"};
    g.front_words = {"in front of you", "ahead of you"};
    g.unit_words = {"meters", "metres"};
    g.rules = {
        {RuleScope::kLongitudinal, "{verb} {d} {n} {u}"},
        {RuleScope::kLongitudinal, "{verb} {n} {u} {d}"},
        {RuleScope::kLongitudinal, "make a {dadj} movement of {n} {u}"},
        {RuleScope::kLongitudinal, "{verb} {d} a distance of {n} {u}"},
        {RuleScope::kLongitudinal, "cover {n} {u} {d}"},
        {RuleScope::kLateral, "{verb} {n} {u} to the {dir}"},
        {RuleScope::kLateral, "{verb} {n} {u} towards your {dir}"},
        {RuleScope::kLateral, "take a {n} {u} step to the {dir}"},
        {RuleScope::kLateral, "{verb} {dir} {n} {u}"},
        {RuleScope::kLateral, "position yourself {n} {u} to the {dir}"},
        {RuleScope::kLateral, "make a {dir}ward movement of {n} {u}"},
        {RuleScope::kTurnSlight, "{turn} slightly {dir}"},
        {RuleScope::kTurnSlight, "shift a smidge to the {dir}"},
        {RuleScope::kTurnSlight, "adjust your position a bit to the {dir}"},
        {RuleScope::kTurnSlight, "make a slight {dir}ward adjustment"},
        {RuleScope::kTurnSlight, "{turn} a little to the {dir}"},
        {RuleScope::kTurnSlight, "{turn} {dir} gently"},
        {RuleScope::kTurnPlain, "{turn} {dir}"},
        {RuleScope::kTurnPlain, "{turn} to the {dir}"},
        {RuleScope::kTurnPlain, "make a {dir} turn"},
        {RuleScope::kTurnPlain, "{turn} {dir} {n} degrees"},
        {RuleScope::kTurnSharp, "{turn} sharply {dir}"},
        {RuleScope::kTurnSharp, "make a sharp {dir} turn"},
        {RuleScope::kTurnSharp, "{turn} hard to the {dir}"},
        {RuleScope::kTurnSharp, "{turn} {dir} {n} degrees"},
        {RuleScope::kLocate, "i am standing {rel} {n} {u}"},
        {RuleScope::kLocate, "i am {n} {u} {rel}"},
        {RuleScope::kLocate, "i'm {n} {u} {rel}"},
        {RuleScope::kLocate, "come to me, i am {n} {u} {rel}"},
    };
    return g;
  }();
  return grammar;
}

const ParaphraseGrammar& ParaphraseGrammar::HeldOut() {
  static const ParaphraseGrammar grammar = [] {
    ParaphraseGrammar g;
    g.verbs = {"march", "progress", "traverse", "walk", "roll"};
    g.turn_verbs = {"pivot", "spin", "bear"};
    g.forward_words = {"straight ahead", "onward", "onwards", "straight onward"};
    g.backward_words = {"rearward", "rearwards", "backwards"};
    g.behind_words = {"behind you"};
    g.front_words = {"in front of you"};
    g.unit_words = {"meters", "m"};
    g.rules = {
        {RuleScope::kLongitudinal, "{verb} {n} {u} {d}"},
        {RuleScope::kLongitudinal, "{verb} {d} for {n} {u}"},
        {RuleScope::kLongitudinal, "travel {n} {u} in a {dadj} path"},
        {RuleScope::kLongitudinal, "keep going {dadj} for {n} {u}"},
        {RuleScope::kLateral, "traverse {n} {u} to the {dir}"},
        {RuleScope::kLateral, "{verb} {n} {u} in a {dir}ward direction"},
        {RuleScope::kLateral, "travel {n} {u} to the {dir} hand side"},
        {RuleScope::kLateral, "advance {n} {u} to the {dir} side"},
        {RuleScope::kLateral, "proceed {n} {u} towards the {dir}"},
        {RuleScope::kLateral, "{verb} {dir}wards for {n} {u}"},
        {RuleScope::kTurnSlight, "move a tiny bit {dir}"},
        {RuleScope::kTurnSlight, "go a little bit {dir}"},
        {RuleScope::kTurnSlight, "bent a little to the {dir}"},
        {RuleScope::kTurnSlight, "move subtly {dir}"},
        {RuleScope::kTurnSlight, "move slightly {dir}ward"},
        {RuleScope::kTurnSlight, "shift a small amount to the {dir}"},
        {RuleScope::kTurnSlight, "{turn} somewhat to the {dir}"},
        {RuleScope::kTurnPlain, "{turn} {dir}"},
        {RuleScope::kTurnPlain, "{turn} towards the {dir}"},
        {RuleScope::kTurnPlain, "do a {dir} turn"},
        {RuleScope::kTurnSharp, "{turn} sharply to the {dir}"},
        {RuleScope::kTurnSharp, "{turn} a lot to the {dir}"},
        {RuleScope::kTurnSharp, "{turn} {dir} strongly"},
        {RuleScope::kLocate, "i am standing about {n} {u} {rel}"},
        {RuleScope::kLocate, "im waiting {n} {u} {rel}"},
        {RuleScope::kLocate, "find me, i am {n} {u} {rel}"},
    };
    return g;
  }();
  return grammar;
}

std::vector<std::string> EnumerateParaphrases(const CommandSpec& spec,
                                              const ParaphraseGrammar& grammar) {
  const RuleScope scope = ScopeOf(spec);
  const std::string dir(synth::DirectionName(spec.direction));
  std::vector<std::string> units = grammar.unit_words;
  if (spec.magnitude == 1.0) {
    for (auto& u : units) u = SingularUnit(u);
  }
  std::vector<std::string> rel;
  switch (spec.relation) {
    case Relation::kBehind: rel = grammar.behind_words; break;
    case Relation::kInFront: rel = grammar.front_words; break;
    case Relation::kLeft: rel = {"to your left", "on your left"}; break;
    case Relation::kRight: rel = {"to your right", "on your right"}; break;
  }
  const bool backward = spec.direction == Direction::kBackward;

  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const ParaphraseRule& rule : grammar.rules) {
    if (rule.scope != scope) continue;
    std::vector<std::string> candidates = {rule.pattern};
    Expand(candidates, "{verb}", grammar.verbs);
    Expand(candidates, "{turn}", grammar.turn_verbs);
    Expand(candidates, "{d}",
           backward ? grammar.backward_words : grammar.forward_words);
    Expand(candidates, "{dadj}", {backward ? "backward" : "forward"});
    Expand(candidates, "{dir}", {dir});
    Expand(candidates, "{rel}", rel);
    Expand(candidates, "{n}", NumberForms(spec.magnitude, grammar.number_words));
    Expand(candidates, "{u}", units);
    for (std::string& c : candidates) {
      if (!seen.insert(c).second) continue;
      try {
        if (!(synth::ParseCommand(c) == spec)) continue;
      } catch (const Error&) {
        continue;
      }
      out.push_back(Capitalize(std::move(c)));
    }
  }
  return out;
}

ParaphraseResult Paraphrase(std::string_view command, int k,
                            std::mt19937_64& rng,
                            const ParaphraseGrammar& grammar) {
  if (k < 1) Fail(ErrorCode::kInvalidArgument, "paraphrase count must be >= 1");
  const CommandSpec spec = synth::ParseCommand(command);
  std::vector<std::string> candidates = EnumerateParaphrases(spec, grammar);
  const std::string source = Lower(Trim(command));
  std::erase_if(candidates,
                [&](const std::string& c) { return Lower(c) == source; });
  std::shuffle(candidates.begin(), candidates.end(), rng);
  ParaphraseResult result;
  result.shortfall = static_cast<int>(candidates.size()) < k;
  if (!result.shortfall) candidates.resize(k);
  result.texts = std::move(candidates);
  return result;
}

std::string ParaphrasePrompt(std::string_view command, int k) {
  return "Generate " + std::to_string(k) +
         " variations of the following command: " + std::string(command);
}

std::vector<std::string> ParseParaphraseReply(std::string_view reply) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(reply)};
  std::string line;
  while (std::getline(in, line)) {
    std::string s = Trim(line);
    // Leading list markers: "1.", "12)", "-", "*".
    size_t i = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')')) {
      s = Trim(s.substr(i + 1));
    } else if (!s.empty() && (s[0] == '-' || s[0] == '*')) {
      s = Trim(s.substr(1));
    }
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') &&
        s.back() == s.front()) {
      s = s.substr(1, s.size() - 2);
    }
    if (!s.empty()) lines.push_back(std::move(s));
  }
  return lines;
}

ExternalResult ExternalParaphrase(std::string_view command, int k,
                                  const std::string& endpoint,
                                  std::mt19937_64& rng,
                                  double timeout_seconds) {
  const CommandSpec spec = synth::ParseCommand(command);
  ExternalResult result;
  std::string reply;
  std::string failure;
  try {
    const auto scheme_end = endpoint.find("://");
    const auto path_begin = endpoint.find(
        '/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    const std::string base = endpoint.substr(0, path_begin);
    const std::string path =
        path_begin == std::string::npos ? "/" : endpoint.substr(path_begin);
    httplib::Client client(base);
    const auto secs = static_cast<time_t>(timeout_seconds);
    const auto usecs =
        static_cast<time_t>((timeout_seconds - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    const auto response =
        client.Post(path, ParaphrasePrompt(command, k), "text/plain");
    if (!response) {
      failure = "request failed: " + httplib::to_string(response.error());
    } else if (response->status != 200) {
      failure = "status " + std::to_string(response->status);
    } else {
      reply = response->body;
    }
  } catch (const std::exception& e) {
    failure = e.what();
  }

  if (failure.empty()) {
    for (const std::string& line : ParseParaphraseReply(reply)) {
      if (static_cast<int>(result.texts.size()) >= k) break;
      bool keep = false;
      try {
        keep = synth::ParseCommand(line) == spec;
      } catch (const Error&) {
      }
      if (keep) {
        result.texts.push_back(line);
      } else {
        ++result.dropped;
        spdlog::warn("dropping paraphrase '{}': intent differs from '{}'", line,
                     command);
      }
    }
    if (result.texts.empty()) failure = "no usable paraphrases in reply";
  }
  if (!failure.empty()) {
    spdlog::info("external paraphraser at {} unavailable ({}); using rules",
                 endpoint, failure);
    result.texts = Paraphrase(command, k, rng).texts;
    result.used_fallback = true;
  }
  return result;
}

std::string_view CorruptionModeName(CorruptionMode mode) {
  switch (mode) {
    case CorruptionMode::kWordDropout: return "word_dropout";
    case CorruptionMode::kTruncation: return "truncation";
    case CorruptionMode::kMixedSpeaker: return "mixed_speaker";
  }
  return "word_dropout";
}

CorruptionMode ParseCorruptionMode(std::string_view name) {
  if (name == "dropout" || name == "word_dropout") {
    return CorruptionMode::kWordDropout;
  }
  if (name == "truncate" || name == "truncation") {
    return CorruptionMode::kTruncation;
  }
  if (name == "mixed" || name == "mixed_speaker") {
    return CorruptionMode::kMixedSpeaker;
  }
  Fail(ErrorCode::kInvalidArgument,
       "unknown corruption mode '" + std::string(name) + "'");
}

const std::vector<std::string>& DistractorLexicon() {
  static const std::vector<std::string> lexicon =
      ParseLexicon(kPackagedDistractors);
  return lexicon;
}

std::string Corrupt(std::string_view command, CorruptionMode mode,
                    std::mt19937_64& rng) {
  std::vector<std::string> tokens = text::SplitWords(command);
  if (tokens.size() < 2) {
    Fail(ErrorCode::kInvalidArgument,
         "corruption needs at least 2 tokens: '" + std::string(command) + "'");
  }
  switch (mode) {
    case CorruptionMode::kWordDropout: {
      std::vector<size_t> eligible;
      for (size_t i = 0; i < tokens.size(); ++i) {
        if (IsContentToken(tokens[i]) && !IsNumericToken(tokens[i])) {
          eligible.push_back(i);
        }
      }
      if (eligible.empty()) {
        Fail(ErrorCode::kInvalidArgument,
             "no droppable content token in '" + std::string(command) + "'");
      }
      tokens.erase(tokens.begin() + eligible[std::uniform_int_distribution<size_t>(
                                        0, eligible.size() - 1)(rng)]);
      break;
    }
    case CorruptionMode::kTruncation: {
      const size_t keep =
          std::uniform_int_distribution<size_t>(1, tokens.size() - 1)(rng);
      tokens.resize(keep);
      break;
    }
    case CorruptionMode::kMixedSpeaker: {
      const auto& lexicon = DistractorLexicon();
      const int count = std::uniform_int_distribution<int>(1, 2)(rng);
      for (int i = 0; i < count; ++i) {
        const std::string& word = lexicon[std::uniform_int_distribution<size_t>(
            0, lexicon.size() - 1)(rng)];
        const size_t pos =
            std::uniform_int_distribution<size_t>(0, tokens.size())(rng);
        tokens.insert(tokens.begin() + pos, word);
      }
      break;
    }
  }
  return text::JoinWords(tokens);
}

AugmentReport AugmentDataset(const io::Dataset& source, int k, uint64_t seed,
                             const std::string& external_endpoint) {
  if (k < 0) Fail(ErrorCode::kInvalidArgument, "k must be >= 0");
  AugmentReport report;
  report.dataset.samples.reserve(source.size() * (k + 1));
  for (size_t i = 0; i < source.size(); ++i) {
    const io::Sample& original = source.samples[i];
    report.dataset.samples.push_back(original);
    if (k == 0) continue;
    std::mt19937_64 rng = synth::DerivedRng(seed, i);
    std::vector<std::string> texts;
    try {
      if (external_endpoint.empty()) {
        ParaphraseResult r = Paraphrase(original.command, k, rng);
        if (r.shortfall) ++report.shortfalls;
        texts = std::move(r.texts);
      } else {
        texts = ExternalParaphrase(original.command, k, external_endpoint, rng)
                    .texts;
        if (static_cast<int>(texts.size()) < k) ++report.shortfalls;
      }
    } catch (const Error& e) {
      report.rejects.push_back("line " + std::to_string(i + 1) + ": " +
                               e.what());
      continue;
    }
    for (std::string& t : texts) {
      io::Sample s = original;
      s.command = std::move(t);
      s.source = io::SampleSource::kAugmented;
      report.dataset.samples.push_back(std::move(s));
    }
  }
  return report;
}

}  // namespace dlm::augment
