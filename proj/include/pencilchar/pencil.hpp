#pragma once

#include "pencilchar/arrangement.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pc {

// Fiber over b = (b0 : b1) is b1 * P - b0 * Q.
struct Pencil {
  TernaryForm P, Q;
  // Checks equal degree, non-proportionality and coprimality.
  static Pencil make(TernaryForm P, TernaryForm Q);
  int degree() const { return P.degree(); }
  TernaryForm fiber(const P1Point &b) const { return fiber_form(P, Q, b); }
  std::uint64_t seed() const;
};

// A block lists arrangement components with multiplicities. Galois orbits
// must appear whole with one multiplicity. The first two blocks span the
// pencil; any further block must lie in that span.
using Block = std::vector<std::pair<std::size_t, int>>;
Pencil pencil_from_blocks(const Arrangement &arr, const std::vector<Block> &blocks);

struct FiberDivisor {
  P1Point b;
  std::vector<std::pair<std::size_t, int>> members;  // component index, multiplicity
};

struct SpecialFiber {
  P1Point c;
  std::vector<std::pair<std::size_t, int>> arrangement_part;  // Type 2 members
  std::vector<ProfileEntry> new_part;                         // multiplicity profile on probe lines
  Int m_prime;                                                // 0 when no arrangement member
  Int m_double_prime;
  bool multiple() const { return gcd(m_prime, m_double_prime) > 1; }
};

struct PencilClassification {
  std::vector<ComponentPlacement> placements;
  std::vector<FiberDivisor> B;           // increasing order of points
  std::vector<SpecialFiber> special;     // C(f), increasing order of points
  bool minimal = false;
  bool special_flag = false;
  bool special_fibers_detected = false;  // set by detect_special_fibers
  bool conditional = false;              // irrational special parameters may exist
  std::vector<std::string> warnings;

  std::size_t k() const { return B.size(); }
  const FiberDivisor *fiber_at(const P1Point &b) const;
};

PencilClassification classify(const Arrangement &arr, const Pencil &pencil);
void detect_special_fibers(const Arrangement &arr, const Pencil &pencil, PencilClassification &cls);
// classify followed by detect_special_fibers.
PencilClassification analyze(const Arrangement &arr, const Pencil &pencil);

ExponentSubtorus pullback_subtorus(const Arrangement &arr, const PencilClassification &cls);

struct BasePoint {
  CycloPoint point;
  std::vector<int> fiber_multiplicity;  // n_p for each b in B
  int curve_multiplicity = 0;           // lines of the arrangement through the point
};

struct BaseLocusReport {
  std::vector<BasePoint> points;
  int D = 0;
  std::size_t k = 0;
  bool constant_multiplicity = false;  // n_p independent of b
  Int multiplicity_sum;                // sum of n_p
  // Two fibers meet at p with intersection number n_p^2, so this must be D^2.
  Int intersection_sum;
  bool sum_matches = false;
  Int component_multiplicity_sum;      // sum of m(C_j), compared with k D
  bool component_sum_matches = false;
  bool passed() const { return constant_multiplicity && sum_matches && component_sum_matches; }
};

BaseLocusReport base_locus_identities(const Arrangement &arr, const Pencil &pencil, const PencilClassification &cls);

// (deg C)^2 minus the squared multiplicities of the blown-up clusters.
Int self_intersection(const Arrangement &arr, const std::vector<int> &clusters);
// Clusters read off the base points; line arrangements with a minimal pencil only.
Int self_intersection_auto(const Arrangement &arr, const Pencil &pencil, const PencilClassification &cls);

struct SearchCaps {
  int max_multiplicity = 3;
  std::size_t max_blocks = 4;
  std::size_t min_blocks = 2;
  // Applied to the exponent vector of each k = 2 candidate before exact work.
  std::function<bool(const std::vector<int> &)> ray_filter;
};

struct FoundPencil {
  Pencil pencil;
  PencilClassification classification;
};

// Pencils whose fibers over B are products of arrangement components: every
// k >= 3 pencil of degree at least 2, and k = 2 pencils having a Type 2 member.
std::vector<FoundPencil> pencil_search(const Arrangement &arr, const SearchCaps &caps);

// Canonical key of the span <P, Q>.
std::vector<Rat> span_key(const Pencil &pencil);

}  // namespace pc
