#pragma once

#include "koreg/model.hpp"

#include <iosfwd>
#include <string>

namespace koreg {

/// Reads a dataset: header row, one column named `y`, every other column a
/// covariate in file order. Errors carry the 1-based line and column.
Dataset read_dataset_csv(std::istream& in, const ModelFamily& family);
Dataset read_dataset_csv(const std::string& path, const ModelFamily& family);

void write_dataset_csv(std::ostream& out, const Dataset& data);

/// One row per grid point: lambda, intercepts, coefficients.
void write_path_csv(std::ostream& out, const LassoPath& path, const std::vector<std::string>& coef_names = {});

/// Shortest round-trip text form of a double; used for every numeric field
/// so that repeated runs emit identical bytes.
std::string format_number(double v);

}  // namespace koreg
