#pragma once

#include "manin/volume_constants.hpp"

#include <functional>
#include <vector>

namespace manin {

// Receives the cube point u and its complement 1 - u, both computed without
// cancellation so integrands can map endpoints to infinity safely.
using CubeIntegrand = std::function<double(const std::vector<double>& u, const std::vector<double>& complement)>;

// Integral of f over the open unit cube [0,1]^k. Nested Gauss-Kronrod for
// k <= 4 (outer axis split into fixed panels), randomized Sobol QMC for 5..8.
ConstantValue integrate_unit_cube(const CubeIntegrand& f, std::size_t k, const QuadratureConfig& cfg);

// Same, but always with the QMC engine; used by tests to cross-check.
ConstantValue integrate_unit_cube_qmc(const CubeIntegrand& f, std::size_t k, const QuadratureConfig& cfg);

}  // namespace manin
