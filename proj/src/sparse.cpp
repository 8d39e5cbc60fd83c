#include "poro/sparse.hpp"

#include <Eigen/SparseLU>

#include "poro/errors.hpp"

namespace poro {

void SparseMatrix::finalize() {
  matrix_.resize(rows_, cols_);
  matrix_.setFromTriplets(triplets_.begin(), triplets_.end());
  matrix_.makeCompressed();
  triplets_.clear();
  triplets_.shrink_to_fit();
  finalized_ = true;
}

const Eigen::SparseMatrix<double>& SparseMatrix::compressed() const {
  if (!finalized_)
    throw std::logic_error("SparseMatrix: compressed() before finalize()");
  return matrix_;
}

Eigen::VectorXd sparse_solve(SparseMatrix& A, const Eigen::VectorXd& b) {
  if (A.rows() != A.cols())
    throw DimensionMismatchError("sparse_solve: matrix must be square");
  if (A.rows() != b.size())
    throw DimensionMismatchError("sparse_solve: rhs size mismatch");
  if (!A.finalized()) A.finalize();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(A.compressed());
  lu.factorize(A.compressed());
  if (lu.info() != Eigen::Success)
    throw SingularMatrixError("sparse_solve: factorization failed (singular)");
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success)
    throw SingularMatrixError("sparse_solve: back substitution failed");
  return x;
}

}  // namespace poro
