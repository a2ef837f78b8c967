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

#include <compare>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

namespace datackpt {

/// Index of a data object in the object universe [0, m).
enum class ObjectId : std::uint32_t {};
/// Identifier of a committed transaction.
enum class TxnId : std::uint32_t {};

constexpr std::uint32_t raw(ObjectId o) { return static_cast<std::uint32_t>(o); }
constexpr std::uint32_t raw(TxnId t) { return static_cast<std::uint32_t>(t); }
constexpr ObjectId object_id(std::uint32_t v) { return static_cast<ObjectId>(v); }
constexpr TxnId txn_id(std::uint32_t v) { return static_cast<TxnId>(v); }

using Version = std::uint32_t;
using Tick = std::uint64_t;

/// sigma^version of an object. Version 0 is the initial state.
struct LocalStateId {
  ObjectId object{};
  Version version = 0;

  friend auto operator<=>(const LocalStateId&, const LocalStateId&) = default;
};

/// The rank-th data checkpoint of an object within a checkpoint pattern.
struct CheckpointId {
  ObjectId object{};
  std::uint32_t rank = 0;

  friend auto operator<=>(const CheckpointId&, const CheckpointId&) = default;
};

inline std::ostream& operator<<(std::ostream& os, ObjectId o) { return os << raw(o); }
inline std::ostream& operator<<(std::ostream& os, TxnId t) { return os << 'T' << raw(t); }
inline std::ostream& operator<<(std::ostream& os, const LocalStateId& s) {
  return os << '(' << raw(s.object) << ',' << s.version << ')';
}
inline std::ostream& operator<<(std::ostream& os, const CheckpointId& c) {
  return os << 'C' << raw(c.object) << '^' << c.rank;
}

/// Malformed input: bad file, invariant violation, unknown identifier.
/// `field()` names the offending location, e.g. "transactions[2].writes[0]".
class InputError : public std::runtime_error {
 public:
  InputError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace datackpt

template <>
struct std::hash<datackpt::LocalStateId> {
  std::size_t operator()(const datackpt::LocalStateId& s) const noexcept {
    return (static_cast<std::size_t>(datackpt::raw(s.object)) << 32) ^ s.version;
  }
};
