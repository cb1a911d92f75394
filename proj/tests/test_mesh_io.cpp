#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "pvem/errors.hpp"
#include "pvem/mesh_generators.hpp"
#include "pvem/mesh_io.hpp"

namespace pvem {
namespace {

TEST(MeshIo, RoundTripIsExact) {
  for (const auto& mesh : {generate_distorted_quad_mesh(5, 0.3, 4), generate_nonconvex_mesh(3),
                           generate_voronoi_mesh(30, 5, 2)}) {
    std::stringstream buf;
    write_mesh(mesh, buf);
    const auto back = read_mesh(buf);
    EXPECT_TRUE(back == mesh);
    EXPECT_EQ(back.mesh_size(), mesh.mesh_size());
  }
}

TEST(MeshIo, CommentsAndBlankLinesIgnored) {
  std::istringstream in(
      "# square\npvem-mesh 1 -1 -1 1 1\n\n4\n-1 -1 1\n1 -1 1\n# top\n1 1 1\n-1 1 1\n1\n4 0 1 2 3\n");
  const auto mesh = read_mesh(in);
  EXPECT_EQ(mesh.num_cells(), 1u);
  EXPECT_EQ(mesh.num_vertices(), 4u);
}

ParseError parse_failure(const std::string& text) {
  std::istringstream in(text);
  try {
    read_mesh(in);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError(0, "");
}

TEST(MeshIo, DanglingIndexNamesTheIndex) {
  const auto e = parse_failure("pvem-mesh 1 -1 -1 1 1\n4\n-1 -1 1\n1 -1 1\n1 1 1\n-1 1 1\n1\n4 0 1 2 17\n");
  EXPECT_NE(std::string(e.what()).find("17"), std::string::npos) << e.what();
  EXPECT_EQ(e.line(), 8u);
}

TEST(MeshIo, EmptyFile) { parse_failure(""); }

TEST(MeshIo, MalformedRecords) {
  parse_failure("not-a-mesh\n");
  parse_failure("pvem-mesh 1 -1 -1 1 1\n2\n0 0 1\n");
  parse_failure("pvem-mesh 1 -1 -1 1 1\n4\n-1 -1 1\n1 -1 x\n1 1 1\n-1 1 1\n1\n4 0 1 2 3\n");
  // Topologically invalid (clockwise) cell is reported as a parse error too.
  parse_failure("pvem-mesh 1 -1 -1 1 1\n4\n-1 -1 1\n1 -1 1\n1 1 1\n-1 1 1\n1\n4 0 3 2 1\n");
}

}  // namespace
}  // namespace pvem
