#include "moldflux/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "moldflux/errors.hpp"

namespace moldflux {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << header[i];
  }
  out << '\n';
  for (const auto& row : rows) {
    require(row.size() == header.size(), ErrorCode::InvalidArgument,
            "csv row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_double(row[i]);
    }
    out << '\n';
  }
  write_text_file(path, out.str());
}

std::vector<double> read_value_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::Io, "cannot open " + path);
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::Io,
          path + ": missing header row");
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    require(comma != std::string::npos, ErrorCode::Io,
            path + ": expected two columns");
    try {
      values.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::Io, path + ": bad value '" + line + "'");
    }
  }
  return values;
}

void write_vtk_cell_field(const std::string& path, const StructuredGrid& grid,
                          const std::vector<double>& cells,
                          const std::string& name) {
  require(cells.size() == static_cast<std::size_t>(grid.cell_count()),
          ErrorCode::InvalidArgument, "cell field size does not match grid");
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n"
      << name << "\nASCII\nDATASET STRUCTURED_POINTS\n"
      << "DIMENSIONS " << grid.nx() + 1 << ' ' << grid.ny() + 1 << ' '
      << grid.nz() + 1 << '\n'
      << "ORIGIN 0 0 0\n"
      << "SPACING " << format_double(grid.dx()) << ' '
      << format_double(grid.dy()) << ' ' << format_double(grid.dz()) << '\n'
      << "CELL_DATA " << cells.size() << '\n'
      << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : cells) out << format_double(v) << '\n';
  write_text_file(path, out.str());
}

void write_vtk_boundary_field(const std::string& path,
                              const StructuredGrid& grid,
                              const std::vector<double>& faces,
                              const std::string& name) {
  require(faces.size() == static_cast<std::size_t>(grid.nx()) * grid.nz(),
          ErrorCode::InvalidArgument, "face field size does not match patch");
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n"
      << name << "\nASCII\nDATASET STRUCTURED_GRID\n"
      << "DIMENSIONS " << grid.nx() << " 1 " << grid.nz() << '\n'
      << "POINTS " << faces.size() << " double\n";
  for (int k = 0; k < grid.nz(); ++k)
    for (int i = 0; i < grid.nx(); ++i)
      out << format_double((i + 0.5) * grid.dx()) << " 0 "
          << format_double((k + 0.5) * grid.dz()) << '\n';
  out << "POINT_DATA " << faces.size() << '\n'
      << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : faces) out << format_double(v) << '\n';
  write_text_file(path, out.str());
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorCode::Io, "cannot open " + path + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  require(out.good(), ErrorCode::Io, "short write to " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::Io, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace moldflux
