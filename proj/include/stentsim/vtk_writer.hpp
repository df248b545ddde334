#pragma once

#include "stentsim/meshes.hpp"

#include <string>
#include <vector>

// Legacy ASCII VTK unstructured-grid output with deterministic formatting:
// node and cell order follow the mesh, numbers are printed with %.17g, so
// identical states produce byte-identical files.

namespace stentsim {

// Hex mesh at current positions x; point data: displacement (x - reference);
// cell data: sigma1 (max principal Cauchy stress, one value per element) and
// the material layer tag.
std::string solid_vtk_text(const SolidMesh& mesh, const std::vector<Vec3>& x,
                           const std::vector<double>& cell_sigma1);

// Beam mesh as line cells; point data: displacement; cell data: accumulated
// plastic curvature magnitude per element.
std::string beam_vtk_text(const BeamMesh& mesh, const std::vector<Vec3>& x,
                          const std::vector<double>& cell_plastic);

// Write text to path, creating parent directories. Throws on I/O failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace stentsim
