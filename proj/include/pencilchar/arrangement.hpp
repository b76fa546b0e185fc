#pragma once

#include "pencilchar/exactalg.hpp"
#include "pencilchar/polyform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pc {

// Raised when input data violates a structural requirement of the model.
struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CurveComponent {
  std::string label;
  int degree = 1;
  std::optional<TernaryForm> form;  // primitive; absent for lines with irrational coefficients
  std::optional<CycloLine> line;    // every degree-1 component
  std::size_t unit = 0;             // index into Arrangement::units()
};

// A Galois orbit of components. Its product is rational and is what every
// divisibility test sees; all members share one placement in a pencil.
struct RationalUnit {
  std::vector<std::size_t> members;
  TernaryForm form;
  int degree() const { return form.degree(); }
};

struct ComponentInput {
  std::string label;
  std::string poly;
};

class Arrangement {
public:
  // root_order > 1 lets line equations use w, a primitive root of unity of that order.
  static Arrangement build(const std::vector<ComponentInput> &inputs, unsigned root_order = 1,
                           const std::optional<std::string> &infinity = std::nullopt);

  std::size_t size() const { return components_.size(); }
  const CurveComponent &operator[](std::size_t j) const { return components_[j]; }
  const std::vector<CurveComponent> &components() const { return components_; }
  const std::vector<RationalUnit> &units() const { return units_; }
  std::vector<int> degrees() const;
  int total_degree() const;
  bool is_line_arrangement() const;
  unsigned root_order() const { return root_order_; }

  std::optional<std::size_t> infinity() const { return infinity_; }
  // Picks the first component that is a rational line; false if none exists.
  bool designate_infinity();
  std::optional<std::size_t> index_of(const std::string &label) const;
  const std::vector<std::string> &warnings() const { return warnings_; }

private:
  std::vector<CurveComponent> components_;
  std::vector<RationalUnit> units_;
  std::optional<std::size_t> infinity_;
  unsigned root_order_ = 1;
  std::vector<std::string> warnings_;
};

struct H1Model {
  std::vector<int> relation;  // (d_1, ..., d_r)
  // With a line at infinity: loops of every other component.
  std::vector<std::size_t> free_basis;
  // Without one: rows of U give coordinates in which the relation becomes (D, 0, ..., 0).
  std::optional<IntMatrix> smith_coordinates;
  Int torsion_order;  // gcd of the degrees; the character torus has this many components
  std::size_t rank() const { return relation.size() - 1; }
};

H1Model h1_model(const Arrangement &arr);

struct MultiplePoint {
  CycloPoint point;
  std::vector<std::size_t> incident;
  int degree = 1;
  std::size_t span_dim = 0;
  std::size_t k() const { return incident.size(); }
  bool gives_local_component() const { return incident.size() > 2 && span_dim == 2; }
};

// Intersection points of pairs of lines plus the given extra points, one
// entry per point and degree class.
std::vector<MultiplePoint> local_pencil_points(const Arrangement &arr, const std::vector<ProjPoint> &extra_points);

enum class PlacementKind { type1, type2, horizontal };

struct ComponentPlacement {
  PlacementKind kind = PlacementKind::horizontal;
  P1Point point{1, 0};
  int multiplicity = 0;
};

// Image of a parameter torus: rho_j = prod_i lambda_i^E(j, i).
struct ExponentSubtorus {
  IntMatrix E;
  std::size_t dimension() const { return E.cols(); }
  // Row Hermite form of E^T; equal keys mean equal subtori.
  IntMatrix lattice_key() const { return hermite_rows(E.transpose()); }
  bool in_character_torus(const std::vector<int> &degrees) const;
  std::string to_string(const std::string &param = "t") const;
};

// The B points in increasing order; the last one is eliminated.
std::vector<P1Point> fiber_points(const std::vector<ComponentPlacement> &placements);
ExponentSubtorus pullback_subtorus(const Arrangement &arr, const std::vector<ComponentPlacement> &placements);

struct TorsionCharacter {
  std::vector<QmodZ> exponents;
  bool is_trivial() const;
  bool in_character_torus(const std::vector<int> &degrees) const;
  // Values as roots of unity: 1, -1, or e(p/q) for exp(2 pi i p/q).
  std::string values_string() const;
  std::string exponents_string() const;
  friend bool operator==(const TorsionCharacter &, const TorsionCharacter &) = default;
};

}  // namespace pc
