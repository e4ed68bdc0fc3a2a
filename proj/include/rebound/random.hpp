#pragma once

// Seeded random generators for states, unitaries and channels. Used by the
// randomized searches and by the test suites.

#include <cstdint>
#include <random>
#include <vector>

#include "rebound/linalg.hpp"

namespace rebound {

using Rng = std::mt19937_64;

/// Matrix of i.i.d. standard complex Gaussians.
Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng &rng);

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
Matrix random_unitary(Eigen::Index d, Rng &rng);

Vector random_pure_vector(Eigen::Index d, Rng &rng);

/// Random density matrix G G^dagger / Tr(...) with G a d x rank Ginibre matrix.
Matrix random_density_matrix(Eigen::Index d, Eigen::Index rank, Rng &rng);

/// Random commuting pair: both diagonal in a common Haar-random basis.
std::pair<Matrix, Matrix> random_commuting_pair(Eigen::Index d, Rng &rng);

/// Kraus operators of a random channel from a Haar-random isometry
/// C^{d_in} -> C^{d_out} (x) C^{num_kraus}.
std::vector<Matrix> random_kraus(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index num_kraus,
                                 Rng &rng);

/// Uniformly random point of the probability simplex.
std::vector<double> random_probability(std::size_t n, Rng &rng);

} // namespace rebound
