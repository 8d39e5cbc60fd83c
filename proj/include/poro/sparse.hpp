#pragma once

#include <Eigen/Sparse>
#include <vector>

namespace poro {

// Triplet-accumulating sparse matrix. add() may be called repeatedly for the
// same (row, col); finalize() sums duplicates into compressed column storage.
// After finalize() the stored pattern holds each (row, col) once.
class SparseMatrix {
 public:
  SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols) {}

  void add(int row, int col, double value) {
    triplets_.emplace_back(row, col, value);
  }

  void finalize();
  bool finalized() const { return finalized_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Eigen::SparseMatrix<double>& compressed() const;

 private:
  int rows_, cols_;
  bool finalized_ = false;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SparseMatrix<double> matrix_;
};

// Direct sparse solve A x = b (LU with column reordering).
// Throws DimensionMismatchError on shape mismatch, SingularMatrixError if the
// factorization fails.
Eigen::VectorXd sparse_solve(SparseMatrix& A, const Eigen::VectorXd& b);

}  // namespace poro
