#pragma once

#include <Eigen/Dense>

#include "poro/errors.hpp"
#include "poro/sparse.hpp"

namespace poro {

struct NewtonOptions {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  int max_iter = 25;
};

struct NewtonReport {
  int iterations = 0;
  double residual_norm = 0.0;
  double initial_norm = 0.0;
};

// Undamped Newton on r(x) = 0. `assemble` fills the residual and Jacobian at
// x. Converged when ||r|| <= max(abs_tol, rel_tol * ||r0||). Throws
// DivergenceError when the residual grows three times in a row or the
// iteration cap is hit, NonFiniteResidualError when r stops being finite.
template <class AssembleFn>
NewtonReport newton_solve(AssembleFn&& assemble, Eigen::VectorXd& x,
                          const NewtonOptions& opt = {}) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd r(n);
  NewtonReport report;
  double prev_norm = 0.0;
  int growth_streak = 0;
  for (int it = 0;; ++it) {
    SparseMatrix jac(n, n);
    assemble(x, r, jac);
    if (!r.allFinite())
      throw NonFiniteResidualError("newton_solve: non-finite residual");
    const double norm = r.norm();
    if (it == 0) report.initial_norm = norm;
    report.residual_norm = norm;
    report.iterations = it;
    if (norm <= std::max(opt.abs_tol, opt.rel_tol * report.initial_norm))
      return report;
    if (it > 0) {
      growth_streak = norm > prev_norm ? growth_streak + 1 : 0;
      if (growth_streak >= 3)
        throw DivergenceError("newton_solve: residual grew 3 iterations in a row");
    }
    if (it >= opt.max_iter)
      throw DivergenceError("newton_solve: iteration cap reached");
    prev_norm = norm;
    x += sparse_solve(jac, -r);
  }
}

}  // namespace poro
