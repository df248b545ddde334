#include "stentsim/vtk_writer.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace stentsim {

namespace {

void append_num(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void append_point_block(std::string& out, const std::vector<Vec3>& ref,
                        const std::vector<Vec3>& x) {
  out += "POINTS " + std::to_string(x.size()) + " double\n";
  for (const Vec3& p : x) {
    append_num(out, p.x());
    out += ' ';
    append_num(out, p.y());
    out += ' ';
    append_num(out, p.z());
    out += '\n';
  }
  out += "POINT_DATA " + std::to_string(x.size()) + "\n";
  out += "VECTORS displacement double\n";
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Vec3 u = x[i] - ref[i];
    append_num(out, u.x());
    out += ' ';
    append_num(out, u.y());
    out += ' ';
    append_num(out, u.z());
    out += '\n';
  }
}

void check_sizes(std::size_t ref, std::size_t cur, std::size_t cells,
                 std::size_t cell_values) {
  if (ref != cur)
    throw std::invalid_argument("vtk: position array does not match the mesh");
  if (cells != cell_values)
    throw std::invalid_argument("vtk: one cell value per element required");
}

}  // namespace

std::string solid_vtk_text(const SolidMesh& mesh, const std::vector<Vec3>& x,
                           const std::vector<double>& cell_sigma1) {
  check_sizes(mesh.x.size(), x.size(), mesh.hex.size(), cell_sigma1.size());
  std::string out;
  out.reserve(64 * x.size() + 64 * mesh.hex.size());
  out += "# vtk DataFile Version 3.0\nsolid body\nASCII\nDATASET UNSTRUCTURED_GRID\n";

  const std::size_t n_cells = mesh.hex.size();
  std::string cells = "CELLS " + std::to_string(n_cells) + " " +
                      std::to_string(9 * n_cells) + "\n";
  for (const auto& h : mesh.hex) {
    cells += '8';
    for (int a = 0; a < 8; ++a) cells += ' ' + std::to_string(h[a]);
    cells += '\n';
  }
  cells += "CELL_TYPES " + std::to_string(n_cells) + "\n";
  for (std::size_t e = 0; e < n_cells; ++e) cells += "12\n";

  append_point_block(out, mesh.x, x);
  // VTK wants the cell block between points and point/cell data; assemble in
  // the required order instead.
  std::string doc;
  doc.reserve(out.size() + cells.size() + 32 * n_cells);
  const std::size_t header_end = out.find("POINT_DATA");
  doc.append(out, 0, header_end);
  doc += cells;
  doc.append(out, header_end, std::string::npos);

  doc += "CELL_DATA " + std::to_string(n_cells) + "\n";
  doc += "SCALARS sigma1 double 1\nLOOKUP_TABLE default\n";
  for (double v : cell_sigma1) {
    append_num(doc, v);
    doc += '\n';
  }
  doc += "SCALARS layer int 1\nLOOKUP_TABLE default\n";
  for (std::size_t e = 0; e < n_cells; ++e)
    doc += std::to_string(mesh.layer[e]) + "\n";
  return doc;
}

std::string beam_vtk_text(const BeamMesh& mesh, const std::vector<Vec3>& x,
                          const std::vector<double>& cell_plastic) {
  check_sizes(mesh.x.size(), x.size(), mesh.elements.size(), cell_plastic.size());
  std::string out;
  out += "# vtk DataFile Version 3.0\nbeam body\nASCII\nDATASET UNSTRUCTURED_GRID\n";

  const std::size_t n_cells = mesh.elements.size();
  std::string cells = "CELLS " + std::to_string(n_cells) + " " +
                      std::to_string(3 * n_cells) + "\n";
  for (const auto& el : mesh.elements)
    cells += "2 " + std::to_string(el.n[0]) + ' ' + std::to_string(el.n[1]) + '\n';
  cells += "CELL_TYPES " + std::to_string(n_cells) + "\n";
  for (std::size_t e = 0; e < n_cells; ++e) cells += "3\n";

  std::string points;
  append_point_block(points, mesh.x, x);
  const std::size_t header_end = points.find("POINT_DATA");
  out.append(points, 0, header_end);
  out += cells;
  out.append(points, header_end, std::string::npos);

  out += "CELL_DATA " + std::to_string(n_cells) + "\n";
  out += "SCALARS plastic_curvature double 1\nLOOKUP_TABLE default\n";
  for (double v : cell_plastic) {
    append_num(out, v);
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace stentsim
