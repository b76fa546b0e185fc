#pragma once

#include "pencilchar/pencil.hpp"

#include <string>
#include <vector>

namespace pc {

// One rational entry a_j per component, standing for sum a_j df_j / f_j.
using ResidueVector = std::vector<Rat>;

// Orlik-Solomon algebra of a line arrangement in degrees <= 2, in the affine
// chart of the designated infinity line. H^2 is the exterior square of H^1
// modulo the relation rows, kept in reduced row echelon form.
struct CupStructure {
  std::vector<std::size_t> affine;                      // component indices
  std::vector<std::vector<std::size_t>> concurrent;     // affine positions through one affine point, size >= 3
  std::vector<std::vector<std::size_t>> parallel;       // affine positions meeting on the infinity line, size >= 2
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // basis e_a e_b of the exterior square, a < b
  RatMatrix relations;                                  // rref
  std::vector<std::size_t> pivots;

  std::size_t pair_index(std::size_t a, std::size_t b) const;
  // Normal form of an exterior-square vector modulo the relations.
  std::vector<Rat> reduce(std::vector<Rat> w) const;
  std::size_t h2_dimension() const { return pairs.size() - pivots.size(); }
};

// Throws MathError unless every component is a line and an infinity line is set.
CupStructure cup_structure(const Arrangement &arr);

// Reduced image of v ^ w; v and w are full residue vectors.
std::vector<Rat> cup_product(const CupStructure &cs, const ResidueVector &v, const ResidueVector &w);

struct IsotropyFlags {
  bool isotropic = false;
  bool maximal = false;
  std::size_t dimension = 0;
  std::size_t annihilator_dimension = 0;  // dim {v : v ^ E = 0}
};

// E is given by rows of full residue vectors.
IsotropyFlags is_maximal_isotropic(const CupStructure &cs, const RatMatrix &E);

// Pullbacks of the standard basis of H^1(S): one row per B point other than the reference.
RatMatrix subspace_from_pencil(const Arrangement &arr, const PencilClassification &cls);

struct ReconstructedPencil {
  Pencil pencil;
  std::vector<Block> blocks;  // fibers recovered from the residue functionals
};

// Groups the residue functionals of E into fiber blocks and rebuilds the pencil.
ReconstructedPencil pencil_from_subspace(const Arrangement &arr, const RatMatrix &E);

struct RayMap {
  std::vector<Int> exponents;  // coprime, first nonzero entry positive
  TernaryForm numerator, denominator;
  std::string formula;
  std::string connectivity_note;
  ExponentSubtorus subtorus;
};

RayMap ray_to_map(const Arrangement &arr, const ResidueVector &direction);

std::vector<Rat> to_rational(const std::vector<Int> &v);

}  // namespace pc
