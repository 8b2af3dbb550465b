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

#include "dlm/synth.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include "dlm/error.h"
#include "dlm/standardize.h"

namespace dlm::synth {

namespace {

constexpr std::array<std::string_view, 60> kFillers = {
    "to",       "the",      "a",         "an",      "of",     "you",
    "your",     "in",       "at",        "by",      "please", "robot",
    "now",      "then",     "and",       "towards", "toward", "direction",
    "path",     "distance", "make",      "take",    "step",   "position",
    "yourself", "adjust",   "adjustment", "standing", "stand", "me",
    "come",     "over",     "here",      "on",      "from",   "for",
    "is",       "are",      "be",        "up",      "amount", "again",
    "get",      "it",       "this",      "that",    "way",    "just",
    "can",      "could",    "will",      "hey",     "okay",   "ok",
    "so",       "do",       "some",      "along",   "into",   "side"};

bool IsFiller(std::string_view w) {
  return std::find(kFillers.begin(), kFillers.end(), w) != kFillers.end();
}

[[noreturn]] void ParseFailure(std::string_view text, const std::string& why,
                               const std::vector<std::string>& unknown) {
  std::string msg = "cannot parse '" + std::string(text) + "': " + why;
  msg += "; unmatched span: '" +
         (unknown.empty() ? std::string(text) : text::JoinWords(unknown)) + "'";
  Fail(ErrorCode::kParse, msg);
}

std::string NumberToWords(int n) {
  static constexpr std::array<std::string_view, 20> kSmall = {
      "zero",    "one",     "two",       "three",    "four",
      "five",    "six",     "seven",     "eight",    "nine",
      "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
      "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
  static constexpr std::array<std::string_view, 8> kTens = {
      "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty",
      "ninety"};
  if (n >= 0 && n < 20) return std::string(kSmall[n]);
  if (n >= 20 && n < 100) {
    std::string out(kTens[n / 10 - 2]);
    if (n % 10 != 0) out += " " + std::string(kSmall[n % 10]);
    return out;
  }
  return std::to_string(n);
}

std::string FormatNumber(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e9) {
    return std::to_string(static_cast<long long>(v));
  }
  std::string s = std::to_string(v);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string Fill(std::string_view pattern, std::string_view key,
                 std::string_view value) {
  std::string out(pattern);
  for (size_t pos = out.find(key); pos != std::string::npos;
       pos = out.find(key, pos + value.size())) {
    out.replace(pos, key.size(), value);
  }
  return out;
}

template <typename Seq>
const auto& Pick(const Seq& options, std::mt19937_64& rng) {
  std::uniform_int_distribution<size_t> pick(0, options.size() - 1);
  return options[pick(rng)];
}

bool CoinFlip(std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(0, 1)(rng) == 1;
}

double Normal(std::mt19937_64& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

std::string_view IntentName(Intent intent) {
  switch (intent) {
    case Intent::kMove: return "move";
    case Intent::kTurn: return "turn";
    case Intent::kImplicitLocate: return "implicit_locate";
  }
  return "move";
}

std::string_view DirectionName(Direction direction) {
  switch (direction) {
    case Direction::kForward: return "forward";
    case Direction::kBackward: return "backward";
    case Direction::kLeft: return "left";
    case Direction::kRight: return "right";
  }
  return "forward";
}

std::string_view RelationName(Relation relation) {
  switch (relation) {
    case Relation::kBehind: return "behind";
    case Relation::kInFront: return "in_front";
    case Relation::kLeft: return "left";
    case Relation::kRight: return "right";
  }
  return "behind";
}

std::string Describe(const CommandSpec& spec) {
  const std::string n = FormatNumber(spec.magnitude);
  switch (spec.intent) {
    case Intent::kMove:
      return "move " + std::string(DirectionName(spec.direction)) + " " + n +
             " meters";
    case Intent::kTurn: {
      const std::string dir(DirectionName(spec.direction));
      if (spec.magnitude == kSlightTurnDeg) return "turn slightly " + dir;
      if (spec.magnitude == kPlainTurnDeg) return "turn " + dir;
      if (spec.magnitude == kSharpTurnDeg) return "turn sharply " + dir;
      return "turn " + dir + " " + n + " degrees";
    }
    case Intent::kImplicitLocate:
      switch (spec.relation) {
        case Relation::kBehind: return "i am " + n + " meters behind you";
        case Relation::kInFront: return "i am " + n + " meters in front of you";
        case Relation::kLeft: return "i am " + n + " meters to your left";
        case Relation::kRight: return "i am " + n + " meters to your right";
      }
  }
  return "";
}

CommandSpec ParseIntent(std::string_view standardized) {
  const std::vector<std::string> words = text::SplitWords(standardized);
  if (words.empty()) Fail(ErrorCode::kEmptyCommand, "empty command");

  std::set<double> numbers;
  std::set<Direction> dirs;
  bool turn = false, slightly = false, sharply = false;
  bool degrees = false, meters = false;
  bool speaker = false, behind = false, front = false;
  std::vector<std::string> unknown;
  for (size_t i = 0; i < words.size(); ++i) {
    const std::string& w = words[i];
    if (text::IsNumber(w)) {
      numbers.insert(std::stod(w));
    } else if (w == "forward") {
      dirs.insert(Direction::kForward);
    } else if (w == "backward") {
      dirs.insert(Direction::kBackward);
    } else if (w == "left") {
      dirs.insert(Direction::kLeft);
    } else if (w == "right") {
      dirs.insert(Direction::kRight);
    } else if (w == "turn") {
      turn = true;
    } else if (w == "slightly") {
      slightly = true;
    } else if (w == "sharply") {
      sharply = true;
    } else if (w == "degrees") {
      degrees = true;
    } else if (w == "meters") {
      meters = true;
    } else if (w == "behind") {
      behind = true;
    } else if (w == "front") {
      front = true;
    } else if (w == "i" && i + 1 < words.size() && words[i + 1] == "am") {
      speaker = true;
      ++i;
    } else if (w == "move" || IsFiller(w)) {
      continue;
    } else {
      unknown.push_back(w);
    }
  }
  if (numbers.size() > 1) {
    ParseFailure(standardized, "conflicting magnitudes", unknown);
  }
  const bool has_number = !numbers.empty();
  const double number = has_number ? *numbers.begin() : 0.0;
  if (has_number && !(number > 0.0)) {
    ParseFailure(standardized, "magnitude must be positive", unknown);
  }

  CommandSpec spec;
  if (speaker || behind || front) {
    spec.intent = Intent::kImplicitLocate;
    if (!has_number) ParseFailure(standardized, "missing distance", unknown);
    if (degrees) ParseFailure(standardized, "distance in degrees", unknown);
    int relations = (behind ? 1 : 0) + (front ? 1 : 0);
    if (behind) spec.relation = Relation::kBehind;
    if (front) spec.relation = Relation::kInFront;
    for (Direction d : dirs) {
      ++relations;
      switch (d) {
        case Direction::kLeft: spec.relation = Relation::kLeft; break;
        case Direction::kRight: spec.relation = Relation::kRight; break;
        case Direction::kForward: spec.relation = Relation::kInFront; break;
        case Direction::kBackward: spec.relation = Relation::kBehind; break;
      }
    }
    if (relations != 1) {
      ParseFailure(standardized,
                   relations == 0 ? "missing relation" : "conflicting relations",
                   unknown);
    }
    spec.magnitude = number;
    return spec;
  }

  const bool is_turn = turn || degrees || (!has_number && (slightly || sharply));
  if (is_turn) {
    spec.intent = Intent::kTurn;
    dirs.erase(Direction::kForward);
    if (dirs.size() != 1 || *dirs.begin() == Direction::kBackward) {
      ParseFailure(standardized,
                   dirs.empty() ? "missing turn direction"
                                : "conflicting turn directions",
                   unknown);
    }
    if (slightly && sharply) {
      ParseFailure(standardized, "conflicting turn amounts", unknown);
    }
    if (has_number && meters) {
      ParseFailure(standardized, "turn given in meters", unknown);
    }
    spec.direction = *dirs.begin();
    spec.magnitude = has_number ? number
                     : slightly ? kSlightTurnDeg
                     : sharply  ? kSharpTurnDeg
                                : kPlainTurnDeg;
    return spec;
  }

  spec.intent = Intent::kMove;
  if (dirs.size() != 1) {
    ParseFailure(standardized,
                 dirs.empty() ? "missing direction" : "conflicting directions",
                 unknown);
  }
  if (!has_number) ParseFailure(standardized, "missing distance", unknown);
  spec.direction = *dirs.begin();
  spec.magnitude = number;
  return spec;
}

CommandSpec ParseCommand(std::string_view raw) {
  return ParseIntent(text::Standardize(raw));
}

CommandSpec SampleSpec(std::mt19937_64& rng) {
  CommandSpec spec;
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::uniform_int_distribution<int> meters(1, kMaxMoveMeters);
  if (u < 0.6) {
    spec.intent = Intent::kMove;
    spec.direction = static_cast<Direction>(
        std::uniform_int_distribution<int>(0, 3)(rng));
    spec.magnitude = meters(rng);
  } else if (u < 0.9) {
    spec.intent = Intent::kTurn;
    spec.direction = CoinFlip(rng) ? Direction::kRight : Direction::kLeft;
    static constexpr std::array<double, 3> kAngles = {
        kSlightTurnDeg, kPlainTurnDeg, kSharpTurnDeg};
    spec.magnitude = Pick(kAngles, rng);
  } else {
    spec.intent = Intent::kImplicitLocate;
    spec.relation = static_cast<Relation>(
        std::uniform_int_distribution<int>(0, 3)(rng));
    spec.magnitude = meters(rng);
  }
  return spec;
}

std::string Render(const CommandSpec& spec, std::mt19937_64& rng) {
  static const std::vector<std::string_view> kForward = {
      "move forward {n} {u}", "go {n} {u} ahead", "move {n} {u} forward",
      "drive forward {n} {u}", "go forward {n} {u}"};
  static const std::vector<std::string_view> kBackward = {
      "go back {n} {u}", "move backward {n} {u}", "back up {n} {u}",
      "move {n} {u} back", "reverse {n} {u}"};
  static const std::vector<std::string_view> kSideways = {
      "go {dir} {n} {u}", "move {n} {u} to the {dir}", "move {dir} {n} {u}",
      "go {n} {u} to your {dir}", "slide {dir} {n} {u}"};
  static const std::vector<std::string_view> kSlight = {
      "turn slightly {dir}", "turn a little to the {dir}",
      "rotate slightly {dir}", "turn {dir} a bit", "turn {dir} {n} degrees"};
  static const std::vector<std::string_view> kPlain = {
      "turn {dir}", "rotate {dir}", "turn to the {dir}", "make a {dir} turn",
      "turn {dir} {n} degrees"};
  static const std::vector<std::string_view> kSharp = {
      "turn sharply {dir}", "make a sharp {dir} turn", "turn hard {dir}",
      "turn {dir} {n} degrees", "rotate sharply to the {dir}"};
  static const std::vector<std::string_view> kLocate = {
      "i am standing {rel} {n} {u}", "i'm {n} {u} {rel}", "i am {n} {u} {rel}",
      "come to me, i am {n} {u} {rel}", "i am standing {n} {u} {rel}"};

  const std::vector<std::string_view>* templates = nullptr;
  std::string dir(DirectionName(spec.direction));
  std::string rel;
  switch (spec.intent) {
    case Intent::kMove:
      templates = spec.direction == Direction::kForward    ? &kForward
                  : spec.direction == Direction::kBackward ? &kBackward
                                                           : &kSideways;
      break;
    case Intent::kTurn:
      templates = spec.magnitude == kSlightTurnDeg  ? &kSlight
                  : spec.magnitude == kSharpTurnDeg ? &kSharp
                                                    : &kPlain;
      break;
    case Intent::kImplicitLocate:
      templates = &kLocate;
      switch (spec.relation) {
        case Relation::kBehind: rel = "behind you"; break;
        case Relation::kInFront: rel = "in front of you"; break;
        case Relation::kLeft: rel = "to your left"; break;
        case Relation::kRight: rel = "to your right"; break;
      }
      break;
  }
  std::string out(Pick(*templates, rng));
  const bool words = CoinFlip(rng);
  const bool integral = spec.magnitude == std::floor(spec.magnitude);
  const std::string n = words && integral
                            ? NumberToWords(static_cast<int>(spec.magnitude))
                            : FormatNumber(spec.magnitude);
  out = Fill(out, "{n}", n);
  out = Fill(out, "{u}", spec.magnitude == 1.0 ? "meter" : "meters");
  out = Fill(out, "{dir}", dir);
  out = Fill(out, "{rel}", rel);
  out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

Trajectory OracleTrajectory(const CommandSpec& spec, const DriverNoise& noise,
                            std::mt19937_64& rng) {
  // Draws happen unconditionally so the stream position does not depend on
  // the noise settings.
  double scale = 1.0 + noise.distance_scale_sigma * Normal(rng);
  for (int tries = 0; tries < 64 && (scale < 0.8 || scale > 1.2); ++tries) {
    scale = 1.0 + noise.distance_scale_sigma * Normal(rng);
  }
  scale = std::clamp(scale, 0.8, 1.2);
  const double jitter = noise.heading_jitter_sigma * Normal(rng);

  std::vector<Pose2> poses;
  if (spec.intent == Intent::kTurn) {
    const double sign = spec.direction == Direction::kRight ? -1.0 : 1.0;
    const double total = sign * spec.magnitude * scale * std::numbers::pi / 180;
    for (int i = 0; i < kTurnPoses; ++i) {
      poses.emplace_back(0.0, 0.0, total * i / (kTurnPoses - 1));
    }
    return Trajectory(std::move(poses)).Padded(kHorizon);
  }

  // Translations: direction of travel and body heading after the start pose.
  double travel = 0.0;
  double heading = 0.0;
  if (spec.intent == Intent::kMove) {
    switch (spec.direction) {
      case Direction::kForward: travel = 0.0; break;
      case Direction::kBackward: travel = std::numbers::pi; break;
      case Direction::kLeft: travel = std::numbers::pi / 2; break;
      case Direction::kRight: travel = -std::numbers::pi / 2; break;
    }
  } else {
    switch (spec.relation) {
      case Relation::kInFront: travel = 0.0; break;
      case Relation::kBehind: travel = std::numbers::pi; break;
      case Relation::kLeft: travel = std::numbers::pi / 2; break;
      case Relation::kRight: travel = -std::numbers::pi / 2; break;
    }
    heading = travel;
  }
  travel += jitter;
  heading += jitter;

  const double distance = spec.magnitude * scale;
  const int len =
      std::min(static_cast<int>(std::ceil(distance / kStepSpacing - 1e-9)) + 1,
               kHorizon);
  const double spacing =
      len == kHorizon ? distance / (kHorizon - 1) : kStepSpacing;
  const double c = std::cos(travel);
  const double s = std::sin(travel);
  double lateral = 0.0;
  double prev_along = 0.0;
  poses.emplace_back(0.0, 0.0, 0.0);
  for (int i = 1; i < len; ++i) {
    const double along = i == len - 1 ? distance : std::min(i * spacing, distance);
    lateral += noise.lateral_drift_sigma * (along - prev_along) * Normal(rng);
    prev_along = along;
    poses.emplace_back(c * along - s * lateral, s * along + c * lateral,
                       heading);
  }
  return Trajectory(std::move(poses)).Padded(kHorizon);
}

Trajectory IdealTrajectory(const CommandSpec& spec) {
  std::mt19937_64 rng(0);
  return OracleTrajectory(spec, DriverNoise::Zero(), rng);
}

std::mt19937_64 DerivedRng(uint64_t seed, uint64_t index) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(index),
                    static_cast<uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

io::Dataset GenerateDataset(int n, const DriverNoise& noise, uint64_t seed) {
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "dataset size must be >= 1");
  io::Dataset ds;
  ds.samples.reserve(n);
  for (int i = 0; i < n; ++i) {
    std::mt19937_64 rng = DerivedRng(seed, static_cast<uint64_t>(i));
    const CommandSpec spec = SampleSpec(rng);
    io::Sample sample;
    sample.command = Render(spec, rng);
    sample.trajectory = OracleTrajectory(spec, noise, rng);
    sample.source = io::SampleSource::kHumanSim;
    sample.family_id = i;
    ds.samples.push_back(std::move(sample));
  }
  return ds;
}

}  // namespace dlm::synth
