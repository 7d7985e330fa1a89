#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace mmsim {

// Fluctuation vector layout: [X1 Y1 X2 Y2 | x1 y1 x2 y2 | q1 p1 q2 p2].
enum class Quadrature {
  X1, Y1, X2, Y2,  // cavity photons
  x1, y1, x2, y2,  // magnons
  q1, p1, q2, p2,  // phonons
};

inline constexpr std::size_t n_quadratures = 12;

using ModeOrder = std::array<Quadrature, n_quadratures>;

constexpr ModeOrder canonical_order() {
  using Q = Quadrature;
  return {Q::X1, Q::Y1, Q::X2, Q::Y2, Q::x1, Q::y1, Q::x2, Q::y2, Q::q1, Q::p1, Q::q2, Q::p2};
}

std::string_view label(Quadrature q);

/// Bosonic modes in canonical enumeration order.
enum class Mode { c1, c2, m1, m2, b1, b2 };

inline constexpr std::size_t n_modes = 6;

std::string_view name(Mode m);
Mode parse_mode(std::string_view id);  // throws ConfigError

/// Index of the first quadrature of `m` in canonical order; the second
/// quadrature sits right after it.
constexpr std::size_t quadrature_offset(Mode m) { return 2 * static_cast<std::size_t>(m); }

/// Unordered pair of distinct modes, stored canonically (a < b).
class ModePair {
 public:
  ModePair(Mode a, Mode b);  // throws ConfigError if a == b
  Mode a() const { return a_; }
  Mode b() const { return b_; }
  std::string id() const;
  /// Position in the 15-entry catalogue.
  std::size_t index() const;
  bool cross_cavity() const;
  friend bool operator==(const ModePair&, const ModePair&) = default;

 private:
  Mode a_, b_;
};

inline constexpr std::size_t n_pairs = 15;

/// c1-c2, c1-m1, c1-m2, c1-b1, c1-b2, c2-m1, ... , b1-b2
const std::array<ModePair, n_pairs>& pair_catalog();

/// Parses "c1-m2" (either order).
ModePair parse_pair(std::string_view id);

}  // namespace mmsim
