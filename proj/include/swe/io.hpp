#pragma once

#include "swe/spaces.hpp"

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace swe {

struct NamedScalarField {
  std::string name;
  const ScalarField* field;
};

struct NamedVectorField {
  std::string name;
  const VectorField* field;
};

/**
 * ASCII VTK legacy UNSTRUCTURED_GRID.
 *
 * Points are the P2 nodes (vertices, then edge midpoints) followed by three
 * private copies of each triangle's vertices. Cells are one quadratic
 * triangle (type 22) per element over the P2 nodes, then one linear triangle
 * (type 5) per element over its private copies, so DG discontinuities
 * survive. CELL_DATA "piece" is 0 for the P2 cells and 1 for the DG cells.
 *
 * Scalars are exact on both pieces (the private copies take the continuous
 * vertex value). Vectors are exact on the DG piece; on the P2 nodes they
 * carry the mean of the adjacent element values.
 *
 * Values are printed with 9 significant digits.
 */
void write_vtk(const Mesh& mesh, const std::vector<NamedScalarField>& scalars,
               const std::vector<NamedVectorField>& vectors, const std::filesystem::path& path);

/// Header line then one row per entry, ',' separated, LF endings, values
/// printed with 17 significant digits.
void write_csv_timeseries(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows,
                          const std::filesystem::path& path);

/// printf("%.{digits}g") with a '.' decimal separator regardless of locale.
std::string format_double(double value, int digits = 17);

/// Numbered files `<dir>/<series>_0000.vtk`, `<series>_0001.vtk`, ...
class SnapshotWriter {
 public:
  SnapshotWriter(std::filesystem::path directory, std::string series);

  /// Path for the next snapshot; advances the counter.
  std::filesystem::path next_path();
  int count() const { return counter_; }

  std::filesystem::path write(const Mesh& mesh, const std::vector<NamedScalarField>& scalars,
                              const std::vector<NamedVectorField>& vectors);

 private:
  std::filesystem::path directory_;
  std::string series_;
  int counter_ = 0;
};

}  // namespace swe
