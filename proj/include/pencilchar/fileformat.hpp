#pragma once

#include "pencilchar/pencil.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pc {

struct ArrangementFile {
  Arrangement arr;
  std::vector<ProjPoint> extra_points;
  bool infinity_auto = false;  // the infinity line was picked by designate_infinity
};

// Malformed JSON or schema violations raise ParseError; structural problems
// with the curves raise InvariantError.
ArrangementFile parse_arrangement(const std::string &json_text);
ArrangementFile load_arrangement(const std::filesystem::path &path);

// Either {"P", "Q"} or {"blocks": [{"members", "multiplicities"}...]}.
Pencil parse_pencil(const Arrangement &arr, const std::string &json_text);
Pencil load_pencil(const Arrangement &arr, const std::filesystem::path &path);

// A list of rows; each row has one rational entry (string or integer) per component.
RatMatrix parse_subspace(const std::string &json_text, std::size_t components);
RatMatrix load_subspace(const std::filesystem::path &path, std::size_t components);

std::string read_text_file(const std::filesystem::path &path);

}  // namespace pc
