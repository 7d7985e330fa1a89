#include "mmsim/modes.hpp"

#include <utility>

#include "mmsim/params.hpp"

namespace mmsim {

std::string_view label(Quadrature q) {
  static constexpr std::array<std::string_view, n_quadratures> labels = {
      "X1", "Y1", "X2", "Y2", "x1", "y1", "x2", "y2", "q1", "p1", "q2", "p2"};
  return labels[static_cast<std::size_t>(q)];
}

std::string_view name(Mode m) {
  static constexpr std::array<std::string_view, n_modes> names = {"c1", "c2", "m1",
                                                                  "m2", "b1", "b2"};
  return names[static_cast<std::size_t>(m)];
}

Mode parse_mode(std::string_view id) {
  for (std::size_t i = 0; i < n_modes; ++i)
    if (name(static_cast<Mode>(i)) == id) return static_cast<Mode>(i);
  throw ConfigError("unknown mode id '" + std::string(id) + "' (expected c1 c2 m1 m2 b1 b2)");
}

ModePair::ModePair(Mode a, Mode b) : a_(a), b_(b) {
  if (a == b) throw ConfigError("mode pair needs two distinct modes");
  if (b_ < a_) std::swap(a_, b_);
}

std::string ModePair::id() const { return std::string(name(a_)) + "-" + std::string(name(b_)); }

std::size_t ModePair::index() const {
  const auto a = static_cast<std::size_t>(a_);
  const auto b = static_cast<std::size_t>(b_);
  // rows of the strict upper triangle, row a holds (n_modes - 1 - a) entries
  return a * (2 * n_modes - a - 1) / 2 + (b - a - 1);
}

bool ModePair::cross_cavity() const {
  auto side = [](Mode m) { return static_cast<int>(m) % 2; };
  return side(a_) != side(b_);
}

const std::array<ModePair, n_pairs>& pair_catalog() {
  using M = Mode;
  static const std::array<ModePair, n_pairs> catalog = {
      ModePair(M::c1, M::c2), ModePair(M::c1, M::m1), ModePair(M::c1, M::m2),
      ModePair(M::c1, M::b1), ModePair(M::c1, M::b2), ModePair(M::c2, M::m1),
      ModePair(M::c2, M::m2), ModePair(M::c2, M::b1), ModePair(M::c2, M::b2),
      ModePair(M::m1, M::m2), ModePair(M::m1, M::b1), ModePair(M::m1, M::b2),
      ModePair(M::m2, M::b1), ModePair(M::m2, M::b2), ModePair(M::b1, M::b2)};
  return catalog;
}

ModePair parse_pair(std::string_view id) {
  const auto dash = id.find('-');
  if (dash == std::string_view::npos)
    throw ConfigError("pair id '" + std::string(id) + "' must look like c1-c2");
  return ModePair(parse_mode(id.substr(0, dash)), parse_mode(id.substr(dash + 1)));
}

}  // namespace mmsim
