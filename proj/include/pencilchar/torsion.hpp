#pragma once

#include "pencilchar/pencil.hpp"

#include <string>
#include <vector>

namespace pc {

// Homology data of f in the affine chart: the designated line of the
// arrangement is removed from the plane and the last B point is moved to
// infinity on P^1. Coordinates alpha are over `affine`.
struct ThetaData {
  std::vector<std::size_t> affine;  // component indices, infinity line omitted
  P1Point reference;                // B point sent to infinity
  std::string mobius;               // the recorded coordinate change on P^1
  IntMatrix relations;              // one row per B point other than the reference
  IntMatrix kernel;                 // columns: basis of ker f_*
  std::vector<P1Point> special_points;
  std::vector<Int> moduli;          // m''(c) >= 1, one per special point
  IntMatrix theta_rows;             // theta on every affine loop, rows indexed by c
  IntMatrix theta;                  // theta on the kernel basis, reduced mod m''(c)
  bool conditional = false;

  std::vector<Int> theta_of(std::span<const Int> alpha) const;  // reduced mod m''(c)
};

// Requires a designated infinity line.
IntMatrix kernel_fstar(const Arrangement &arr, const PencilClassification &cls);
ThetaData theta(const Arrangement &arr, const PencilClassification &cls);

// im theta inside G(f) = sum Z/m''(c).
struct TfGroup {
  FinAbelianGroup group;
  std::vector<Int> orders;               // orders of the generators, invariant factors >= 2
  std::vector<std::vector<Int>> generators;  // images in G(f) coordinates
  bool conditional = false;

  // Coordinates of x in im theta along the generators; x must lie in the image.
  std::vector<Int> coordinates(std::span<const Int> x) const;

  IntMatrix hermite;  // columns: basis of the lattice theta(ker) + diag(m'') Z^C
  IntMatrix smith_U;  // y = hermite^-1 x maps to U y in sum Z/d_i
  std::vector<Int> all_invariants;  // diagonal of the Smith form, ones included
};

TfGroup compute_Tf(const ThetaData &data);
// Trivial whenever every special fiber is reduced.
bool reduced_fast_path_applies(const PencilClassification &cls);
// For minimal arrangements: the cyclic subgroup of G(f) generated by (m(f), ..., m(f)).
FinAbelianGroup minimal_fast_path(const Arrangement &arr, const PencilClassification &cls, const ThetaData &data);
// m(f) = lcm over B of the gcd of affine multiplicities; 0 when some fiber is only the infinity line.
Int fiber_multiplicity_lcm(const Arrangement &arr, const PencilClassification &cls);

// A character of T(f): k_i / d_i on the i-th generator.
using TfCharacter = std::vector<QmodZ>;
std::vector<TfCharacter> characters_of_Tf(const TfGroup &tf);
bool is_trivial(const TfCharacter &chi);
QmodZ evaluate(const TfGroup &tf, const TfCharacter &chi, std::span<const Int> x);

struct LiftedCharacter {
  TorsionCharacter rho;  // full coordinates, infinity line included
  TfCharacter rho_tilde;
};

// rho vanishes on im i_* and restricts to rho_tilde o theta on ker f_*;
// returned in the canonical coset representative.
LiftedCharacter lift_character(const Arrangement &arr, const PencilClassification &cls, const ThetaData &data,
                               const TfGroup &tf, const TfCharacter &chi);

// Reduces rho modulo the pullback subtorus against the Hermite rows of E^T.
TorsionCharacter canonical_representative(const TorsionCharacter &rho, const ExponentSubtorus &sub);

// The coset member taking the prescribed values at the given positions; throws
// MathError when no member does.
TorsionCharacter representative_with(const TorsionCharacter &rho, const ExponentSubtorus &sub,
                                     const std::vector<std::pair<std::size_t, QmodZ>> &targets);

// Special points c at which rho is nontrivial on a loop around a Type 2 member.
int epsilon(const PencilClassification &cls, const TorsionCharacter &rho);

}  // namespace pc
