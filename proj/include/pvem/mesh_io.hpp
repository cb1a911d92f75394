#pragma once

#include <filesystem>
#include <iosfwd>

#include "pvem/geometry.hpp"

namespace pvem {

// Plain-text mesh format, one record per line:
//
//   pvem-mesh 1 <xmin> <ymin> <xmax> <ymax>
//   <n_vertices>
//   <x> <y> <boundary_flag>        (n_vertices lines, 17 significant digits)
//   <n_cells>
//   <k> <v1> ... <vk>              (n_cells lines, 0-based, counterclockwise)
//
// Lines starting with '#' and blank lines are ignored by the reader.

void write_mesh(const PolygonalMesh& mesh, std::ostream& out);
void write_mesh(const PolygonalMesh& mesh, const std::filesystem::path& path);

/// Throws ParseError carrying the offending line number.
PolygonalMesh read_mesh(std::istream& in);
PolygonalMesh read_mesh(const std::filesystem::path& path);

}  // namespace pvem
