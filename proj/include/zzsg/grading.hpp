#pragma once

// Z2 x Z2 degree bookkeeping and Lorentz boost weights.

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>

namespace zzsg {

/// A Z2 x Z2 degree, stored as two explicit bits.
struct Degree {
  std::uint8_t d1 = 0;
  std::uint8_t d2 = 0;

  constexpr Degree() = default;
  constexpr Degree(int a, int b)
      : d1(static_cast<std::uint8_t>(a & 1)), d2(static_cast<std::uint8_t>(b & 1)) {}

  constexpr bool is_zero() const { return d1 == 0 && d2 == 0; }
  constexpr auto operator<=>(const Degree&) const = default;

  std::string str() const {
    return "(" + std::to_string(d1) + "," + std::to_string(d2) + ")";
  }
};

inline constexpr Degree kDeg00{0, 0};
inline constexpr Degree kDeg01{0, 1};
inline constexpr Degree kDeg10{1, 0};
inline constexpr Degree kDeg11{1, 1};

/// <a, b> = a1 b1 + a2 b2 mod 2.
constexpr int pairing(Degree a, Degree b) { return (a.d1 * b.d1 + a.d2 * b.d2) & 1; }

/// (-1)^<a, b>: the sign picked up when two homogeneous elements are swapped.
constexpr int commutation_sign(Degree a, Degree b) { return pairing(a, b) ? -1 : 1; }

constexpr Degree degree_add(Degree a, Degree b) { return Degree(a.d1 ^ b.d1, a.d2 ^ b.d2); }

constexpr Degree operator+(Degree a, Degree b) { return degree_add(a, b); }

inline std::ostream& operator<<(std::ostream& os, Degree d) { return os << d.str(); }

/// Boost weight in half-units: a quantity scaling as e^{w beta / 2} has half_units == w.
struct BoostWeight {
  int half_units = 0;

  constexpr auto operator<=>(const BoostWeight&) const = default;
  constexpr BoostWeight operator+(BoostWeight o) const { return {half_units + o.half_units}; }
  constexpr BoostWeight operator-(BoostWeight o) const { return {half_units - o.half_units}; }

  std::string str() const {
    if (half_units % 2 == 0) return std::to_string(half_units / 2);
    return std::to_string(half_units) + "/2";
  }
};

inline std::ostream& operator<<(std::ostream& os, BoostWeight w) { return os << w.str(); }

}  // namespace zzsg
