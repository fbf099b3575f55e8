#pragma once

#include "koreg/datagen.hpp"
#include "koreg/model.hpp"

#include <cstdint>

namespace koreg::testing {

/// Columns with mean zero and <x_j, x_k>/n = delta_jk.
Matrix orthonormal_design(Eigen::Index n, Eigen::Index p, std::uint64_t seed);

/// Standard Gaussian matrix.
Matrix gaussian_matrix(Eigen::Index n, Eigen::Index p, std::uint64_t seed);

/// Standardized independent-Gaussian design with a response from the family.
Dataset simulated_dataset(const ModelFamily& family, Eigen::Index n, const Vector& beta, std::uint64_t seed);

}  // namespace koreg::testing
