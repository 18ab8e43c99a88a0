#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace slowvary {

/// 1-based timestep index in [1, T].
using Timestep = std::int64_t;

/// The two arms of the bandit. Underlying values match the 1-based ids used
/// in every file format.
enum class Arm : std::uint8_t { first = 1, second = 2 };

constexpr std::size_t index_of(Arm a) noexcept { return a == Arm::first ? 0 : 1; }
constexpr Arm other(Arm a) noexcept { return a == Arm::first ? Arm::second : Arm::first; }
constexpr int id_of(Arm a) noexcept { return static_cast<int>(a); }

inline Arm arm_from_id(int id) {
  if (id == 1) return Arm::first;
  if (id == 2) return Arm::second;
  throw std::invalid_argument("arm id must be 1 or 2, got " + std::to_string(id));
}

/// Raised when a caller breaks an operation's preconditions (out-of-range
/// timestep, observation that does not match the preceding act, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace slowvary
