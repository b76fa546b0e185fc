#pragma once

#include "pencilchar/resonance.hpp"
#include "pencilchar/torsion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pc {

enum class ComponentKind { local, global, translated };
std::string to_string(ComponentKind kind);

struct ComponentRecord {
  ComponentKind kind = ComponentKind::local;
  std::size_t dimension = 0;  // |B| - 1
  std::string source;

  std::optional<MultiplePoint> point;               // local records
  std::optional<Pencil> pencil;                     // global and translated records
  std::optional<PencilClassification> classification;

  ExponentSubtorus subtorus;
  TorsionCharacter torsion;  // trivial unless translated
  TfCharacter rho_tilde;
  FinAbelianGroup tf;        // T(f) of the source pencil, translated records only

  bool coordinate = false;
  std::optional<std::size_t> coordinate_witness;  // component index
  bool essential = true;
  std::string flag;  // "essential", "coordinate component" or "translated coordinate component"

  bool certified = false;
  std::string certification;  // reason, or the failing hypothesis for candidates

  int epsilon = 0;
  int expected_generic_h1 = 0;
  std::string exceptional_note;
  bool conditional = false;
  std::vector<std::string> notes;
};

struct CatalogCaps {
  int max_multiplicity = 2;
  std::size_t max_blocks = 4;
};

struct Catalog {
  std::vector<ComponentRecord> records;
  std::vector<std::string> notes;
  // Every translated record of dimension >= 2 has its subtorus among the global records.
  bool cross_reference_ok = true;

  std::size_t count(ComponentKind kind) const;
};

Catalog build_catalog(const Arrangement &arr, const CatalogCaps &caps, const std::vector<ProjPoint> &extra_points);

ComponentRecord local_record(const Arrangement &arr, const MultiplePoint &mp);
ComponentRecord global_record(const Arrangement &arr, const Pencil &pencil, const PencilClassification &cls);
// One record per character; the trivial character is accepted so that every
// element of the dual group can be inspected.
ComponentRecord translated_record(const Arrangement &arr, const Pencil &pencil, const PencilClassification &cls,
                                  const ThetaData &data, const TfGroup &tf, const TfCharacter &chi);

void classify_flags(ComponentRecord &record, const Arrangement &arr);
// Generic dim H^1 along the component: dimension - 1 through the trivial
// character, k - 2 + epsilon for translated records. Also fills the note.
int expected_h1(ComponentRecord &record);

}  // namespace pc
