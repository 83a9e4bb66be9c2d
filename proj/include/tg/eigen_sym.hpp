#pragma once

#include <cstddef>
#include <vector>

namespace tg {

/// Eigenvalues of a dense real symmetric n x n matrix (row-major), ascending.
/// Householder reduction to tridiagonal form followed by implicit QL.
/// The parallel variant splits the rank-2 updates across OpenMP threads.
std::vector<double> symmetric_eigenvalues_serial(std::vector<double> a, std::size_t n);
std::vector<double> symmetric_eigenvalues_parallel(std::vector<double> a, std::size_t n);

}  // namespace tg
