#pragma once

#include <cstddef>
#include <vector>

namespace gmlkm {

/// Rectangular linear assignment (Hungarian method with potentials).
/// `cost` is rows x cols with rows <= cols; returns, for every row, the
/// column it is assigned to, minimizing the total cost. Every row gets a
/// distinct column.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost);

double assignment_cost(const std::vector<std::vector<double>>& cost,
                       const std::vector<std::size_t>& columns);

}  // namespace gmlkm
