#include "pvem/mesh_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pvem/errors.hpp"

namespace pvem {

namespace {

constexpr std::string_view kMagic = "pvem-mesh";

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  /// Next non-empty, non-comment line split into tokens.
  std::vector<std::string_view> next(const char* expecting) {
    while (std::getline(in_, line_)) {
      ++number_;
      const auto first = line_.find_first_not_of(" \t\r");
      if (first == std::string::npos || line_[first] == '#') continue;
      std::vector<std::string_view> tokens;
      std::string_view rest(line_);
      while (!rest.empty()) {
        const auto b = rest.find_first_not_of(" \t\r");
        if (b == std::string_view::npos) break;
        rest.remove_prefix(b);
        const auto e = rest.find_first_of(" \t\r");
        tokens.push_back(rest.substr(0, e));
        rest.remove_prefix(e == std::string_view::npos ? rest.size() : e);
      }
      return tokens;
    }
    throw ParseError(number_ + 1, std::string("unexpected end of file, expecting ") + expecting);
  }

  std::size_t line() const { return number_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t number_ = 0;
};

double parse_real(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "invalid real '" + std::string(tok) + "'");
  return v;
}

std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, "invalid integer '" + std::string(tok) + "'");
  return v;
}

}  // namespace

void write_mesh(const PolygonalMesh& mesh, std::ostream& out) {
  const auto& d = mesh.domain();
  out << kMagic << " 1 " << format_real(d.lower.x) << ' ' << format_real(d.lower.y) << ' '
      << format_real(d.upper.x) << ' ' << format_real(d.upper.y) << '\n';
  out << mesh.num_vertices() << '\n';
  for (std::size_t i = 0; i < mesh.num_vertices(); ++i) {
    const auto& p = mesh.vertex(i);
    out << format_real(p.x) << ' ' << format_real(p.y) << ' ' << (mesh.is_boundary_vertex(i) ? 1 : 0) << '\n';
  }
  out << mesh.num_cells() << '\n';
  for (const auto& cell : mesh.cells()) {
    out << cell.size();
    for (auto id : cell.vertex_ids) out << ' ' << id;
    out << '\n';
  }
}

void write_mesh(const PolygonalMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_mesh(mesh, out);
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

PolygonalMesh read_mesh(std::istream& in) {
  LineReader reader(in);

  auto header = reader.next("header");
  if (header.size() != 6 || header[0] != kMagic)
    throw ParseError(reader.line(), "expected header 'pvem-mesh 1 xmin ymin xmax ymax'");
  if (header[1] != "1") throw ParseError(reader.line(), "unsupported format version " + std::string(header[1]));
  Domain domain;
  domain.lower = {parse_real(header[2], reader.line()), parse_real(header[3], reader.line())};
  domain.upper = {parse_real(header[4], reader.line()), parse_real(header[5], reader.line())};
  if (!(domain.width() > 0.0 && domain.height() > 0.0)) throw ParseError(reader.line(), "empty domain");

  auto count = reader.next("vertex count");
  if (count.size() != 1) throw ParseError(reader.line(), "expected vertex count");
  const std::size_t nv = parse_index(count[0], reader.line());

  std::vector<Point2> vertices(nv);
  std::vector<bool> flags(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    auto tok = reader.next("vertex line");
    if (tok.size() != 3) throw ParseError(reader.line(), "expected 'x y boundary_flag'");
    vertices[i] = {parse_real(tok[0], reader.line()), parse_real(tok[1], reader.line())};
    if (tok[2] != "0" && tok[2] != "1") throw ParseError(reader.line(), "boundary flag must be 0 or 1");
    flags[i] = tok[2] == "1";
  }

  count = reader.next("cell count");
  if (count.size() != 1) throw ParseError(reader.line(), "expected cell count");
  const std::size_t nc = parse_index(count[0], reader.line());

  std::vector<PolygonalCell> cells(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    auto tok = reader.next("cell line");
    if (tok.empty()) throw ParseError(reader.line(), "empty cell line");
    const std::size_t k = parse_index(tok[0], reader.line());
    if (tok.size() != k + 1)
      throw ParseError(reader.line(), "cell declares " + std::to_string(k) + " vertices but lists " +
                                          std::to_string(tok.size() - 1));
    for (std::size_t j = 0; j < k; ++j) {
      const std::size_t id = parse_index(tok[j + 1], reader.line());
      if (id >= nv)
        throw ParseError(reader.line(), "vertex index " + std::to_string(id) + " out of range (" +
                                            std::to_string(nv) + " vertices)");
      cells[c].vertex_ids.push_back(id);
    }
  }

  try {
    return PolygonalMesh(std::move(vertices), std::move(cells), std::move(flags), domain);
  } catch (const MeshError& e) {
    throw ParseError(reader.line(), std::string("invalid mesh: ") + e.what());
  }
}

PolygonalMesh read_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_mesh(in);
}

}  // namespace pvem
