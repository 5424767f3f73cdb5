#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace stepstress {

// Progressive Type-II censoring scheme: n units on test, removals R_1..R_r
// (R_k survivors withdrawn at the k-th failure). Covers the complete sample
// (all zero, r = n) and conventional Type-II (R = (0,...,0, n-r)).
struct CensoringScheme {
  std::size_t n = 0;
  std::vector<int> removals;

  CensoringScheme(std::size_t n_, std::vector<int> removals_);

  std::size_t r() const { return removals.size(); }
  bool is_type2() const;
  bool is_complete() const;
};

// Compact scheme notation: comma-separated items, each `v`, `c*v` or
// `c*(v1,...,vk)`; e.g. "7,27*0" -> (7,0 x27), "7*(0,0,1,0)" -> 28 entries.
CensoringScheme parse_scheme(const std::string& text, std::size_t n);

// Inverse of parse_scheme up to run compression; parse(render(s)) == s.
std::string render_scheme(const CensoringScheme& scheme);

// log C with C = prod_{j=1..r} sum_{k=j..r} (R_k + 1); equals
// log(n!/(n-r)!) for a Type-II scheme. Constant in theta, so it is
// excluded from optimization objectives.
double normalization_constant_log(const CensoringScheme& scheme);

}  // namespace stepstress
