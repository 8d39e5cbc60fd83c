#include "poro/stationary.hpp"

#include "poro/errors.hpp"

namespace poro {

Eigen::VectorXd anderson_update(const std::vector<Eigen::VectorXd>& xs,
                                const std::vector<Eigen::VectorXd>& gs,
                                int depth, Eigen::VectorXd* weights,
                                bool* fallback) {
  const int h = static_cast<int>(xs.size());
  if (h == 0 || gs.size() != xs.size())
    throw DimensionMismatchError("anderson_update: bad history");
  const long n = xs[0].size();
  for (int i = 0; i < h; ++i)
    if (xs[i].size() != n || gs[i].size() != n)
      throw DimensionMismatchError("anderson_update: inconsistent sizes");
  if (fallback) *fallback = false;
  if (weights) {
    weights->setZero(h);
    (*weights)[h - 1] = 1.0;
  }

  std::vector<Eigen::VectorXd> rs(h);
  for (int i = 0; i < h; ++i) rs[i] = gs[i] - xs[i];

  int m = std::min(depth, h - 1);
  while (m > 0) {
    Eigen::MatrixXd dR(n, m);
    for (int j = 0; j < m; ++j)
      dR.col(j) = rs[h - m + j] - rs[h - m + j - 1];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dR);
    if (qr.rank() < m) {
      --m;  // drop the oldest difference column and retry
      continue;
    }
    const Eigen::VectorXd gamma = qr.solve(rs[h - 1]);
    Eigen::MatrixXd dG(n, m);
    for (int j = 0; j < m; ++j)
      dG.col(j) = gs[h - m + j] - gs[h - m + j - 1];
    if (weights) {
      // alpha over the window [h-1-m, h-1]: alpha_0 = gamma_0,
      // alpha_j = gamma_j - gamma_{j-1}, alpha_m = 1 - gamma_{m-1}.
      (*weights)[h - 1 - m] = gamma[0];
      for (int j = 1; j < m; ++j)
        (*weights)[h - 1 - m + j] = gamma[j] - gamma[j - 1];
      (*weights)[h - 1] = 1.0 - gamma[m - 1];
    }
    return gs[h - 1] - dG * gamma;
  }
  if (fallback && depth > 0 && h > 1) *fallback = true;
  return gs[h - 1];
}

}  // namespace poro
