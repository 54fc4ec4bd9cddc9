#pragma once

#include <string>
#include <vector>

#include "moldflux/solvers.hpp"

namespace moldflux {

/// Formats a double with 17 significant digits (lossless round-trip).
std::string format_double(double v);

/// Comma-separated, '.' decimal, header row. Deterministic byte output.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Reads a two-column (index, value) CSV written by write_csv; the header
/// row is skipped.
std::vector<double> read_value_csv(const std::string& path);

/// Legacy ASCII VTK structured-points file carrying one cell field.
void write_vtk_cell_field(const std::string& path, const StructuredGrid& grid,
                          const std::vector<double>& cells,
                          const std::string& name);

/// Legacy ASCII VTK 2D structured-grid over the SIn face midpoints carrying
/// one boundary face field.
void write_vtk_boundary_field(const std::string& path,
                              const StructuredGrid& grid,
                              const std::vector<double>& faces,
                              const std::string& name);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace moldflux
