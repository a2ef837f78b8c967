/*
 * Copyright 2026 The datackpt Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "datackpt/types.hpp"

namespace datackpt {

enum class CheckpointKind : std::uint8_t { kInitial, kBasic, kForced };

const char* to_string(CheckpointKind kind);
std::optional<CheckpointKind> parse_checkpoint_kind(std::string_view s);

/// One data checkpoint taken during a protocol run.
struct CheckpointRecord {
  ObjectId object{};
  std::uint32_t index = 0;  // protocol index i_x
  CheckpointKind kind = CheckpointKind::kInitial;
  Version version = 0;  // local state saved

  friend bool operator==(const CheckpointRecord&, const CheckpointRecord&) = default;
};

/// S_n: per object, the log position of the checkpoint with protocol index n.
/// With `gap_fill`, an object lacking index n contributes its first
/// checkpoint with index > n instead. nullopt when some object has nothing
/// suitable.
std::optional<std::vector<std::size_t>> assemble_indexed_gc(std::uint32_t n, std::span<const CheckpointRecord> log,
                                                            std::uint32_t num_objects, bool gap_fill = true);

}  // namespace datackpt
