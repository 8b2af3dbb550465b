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

#ifndef DLM_SYNTH_H_
#define DLM_SYNTH_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "dlm/dataset.h"
#include "dlm/geometry.h"

namespace dlm::synth {

enum class Intent { kMove, kTurn, kImplicitLocate };
enum class Direction { kForward, kBackward, kLeft, kRight };
// Where the speaker stands relative to the robot.
enum class Relation { kBehind, kInFront, kLeft, kRight };

inline constexpr double kSlightTurnDeg = 15.0;
inline constexpr double kPlainTurnDeg = 45.0;
inline constexpr double kSharpTurnDeg = 90.0;
inline constexpr int kMaxMoveMeters = 6;
inline constexpr double kStepSpacing = 0.3;  // meters between poses
inline constexpr int kTurnPoses = 8;

// Intent slots of one directive. `direction` is meaningful for move and
// turn (left/right only), `relation` for implicit_locate; unused slots keep
// their defaults so equality compares intents.
struct CommandSpec {
  Intent intent = Intent::kMove;
  Direction direction = Direction::kForward;
  Relation relation = Relation::kBehind;
  double magnitude = 1.0;  // meters, or degrees for turns

  bool operator==(const CommandSpec&) const = default;
};

std::string_view IntentName(Intent intent);
std::string_view DirectionName(Direction direction);
std::string_view RelationName(Relation relation);

// Canonical standardized phrasing, e.g. "move forward 5 meters".
std::string Describe(const CommandSpec& spec);

// Recovers the intent slots from a standardized command. Throws kParse with
// the unrecognized span when the slots are missing or contradictory.
CommandSpec ParseIntent(std::string_view standardized);

// Standardizes then parses.
CommandSpec ParseCommand(std::string_view raw);

// "Subjective driver" execution noise.
struct DriverNoise {
  double distance_scale_sigma = 0.05;
  double heading_jitter_sigma = 0.035;  // radians
  double lateral_drift_sigma = 0.01;    // meters per meter traveled

  static DriverNoise Zero() { return {0.0, 0.0, 0.0}; }
};

// intent ~ {move 0.6, turn 0.3, implicit 0.1}, slots uniform.
CommandSpec SampleSpec(std::mt19937_64& rng);

// Free-form surface text for a spec, from several templates per intent.
// Numbers are written as digits or words by coin flip.
std::string Render(const CommandSpec& spec, std::mt19937_64& rng);

// Demonstrated trajectory in the start frame, padded to kHorizon poses.
Trajectory OracleTrajectory(const CommandSpec& spec, const DriverNoise& noise,
                            std::mt19937_64& rng);

// Zero-noise oracle.
Trajectory IdealTrajectory(const CommandSpec& spec);

// Per-index generator seeded from (seed, index).
std::mt19937_64 DerivedRng(uint64_t seed, uint64_t index);

// n labeled samples; family_id = sample index.
io::Dataset GenerateDataset(int n, const DriverNoise& noise, uint64_t seed);

}  // namespace dlm::synth

#endif  // DLM_SYNTH_H_
