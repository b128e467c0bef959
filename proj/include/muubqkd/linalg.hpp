#pragma once

#include <cstddef>
#include <vector>

namespace muubqkd {

// Dense square real matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  static Matrix diagonal(const std::vector<double>& entries);

  std::size_t size() const { return n_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }

  double trace() const;
  bool is_symmetric(double tol) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

// Eigenvalues of a real symmetric matrix, ascending. Cyclic Jacobi sweeps;
// converges to ~1e-13 absolute error for the trace-one matrices used here.
std::vector<double> symmetric_eigenvalues(Matrix a);

}  // namespace muubqkd
