#pragma once

#include <Eigen/Dense>
#include <vector>

namespace poro {

// Anderson mixing step. Histories run oldest to newest with equal lengths
// h >= 1 and g[i] = T(x[i]); up to min(depth, h-1) difference columns are
// used. Rank-deficient difference matrices drop their oldest columns; if
// nothing usable remains the plain Picard iterate g.back() is returned and
// *fallback is set. *weights (length h, zero outside the active window,
// summing to one) are the combination coefficients alpha so that the
// proposed iterate is sum_i alpha_i g_i.
Eigen::VectorXd anderson_update(const std::vector<Eigen::VectorXd>& xs,
                                const std::vector<Eigen::VectorXd>& gs,
                                int depth, Eigen::VectorXd* weights,
                                bool* fallback);

// Rolling-history wrapper around anderson_update.
class AndersonAccelerator {
 public:
  explicit AndersonAccelerator(int depth) : depth_(depth) {}

  int depth() const { return depth_; }
  void reset() {
    xs_.clear();
    gs_.clear();
  }

  // Record a pair without proposing (used to seed history at activation).
  void observe(const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
    xs_.push_back(x);
    gs_.push_back(g);
    trim();
  }

  // Record (x, g) and propose the next iterate.
  Eigen::VectorXd propose(const Eigen::VectorXd& x, const Eigen::VectorXd& g,
                          bool* fallback) {
    observe(x, g);
    return anderson_update(xs_, gs_, depth_, nullptr, fallback);
  }

 private:
  void trim() {
    while (static_cast<int>(xs_.size()) > depth_ + 1) {
      xs_.erase(xs_.begin());
      gs_.erase(gs_.begin());
    }
  }
  int depth_;
  std::vector<Eigen::VectorXd> xs_, gs_;
};

// Normalized stationarity criterion ||R|| <= tol * R0. R0 is captured when
// the load ramp completes; R0 = 0 (no source) is stationary immediately.
struct StationarityMonitor {
  double tol = 1e-6;
  double r0 = -1.0;

  bool captured() const { return r0 >= 0.0; }
  void capture(double norm) { r0 = norm; }
  bool stationary(double norm) const { return captured() && norm <= tol * r0; }
};

}  // namespace poro
