#include "poro/oracle0d.hpp"

#include <cmath>
#include <cstdlib>

#include "poro/errors.hpp"
#include "poro/tensor.hpp"
#include "poro/time_stepper.hpp"

namespace poro {

namespace {

constexpr int kMaxUnknowns = 5;

struct SmallVec {
  std::array<double, kMaxUnknowns> a{};
  int n = 0;
  double& operator[](int i) { return a[static_cast<size_t>(i)]; }
  double operator[](int i) const { return a[static_cast<size_t>(i)]; }
};

Mat<double, 3> diag3(const std::array<double, 3>& d) {
  Mat<double, 3> m{};
  m(0, 0) = d[0];
  m(1, 1) = d[1];
  m(2, 2) = d[2];
  return m;
}

// Unknown layout: [a, b, (c), lambda, phi].
SmallVec residual(const OracleOptions& opt, const SmallVec& y, double phi_prev,
                  double ramp) {
  const MaterialParams& m = opt.params;
  const int dim = opt.dim;
  SmallVec r;
  r.n = y.n;

  std::array<double, 3> d{1.0, 1.0, 1.0};
  for (int i = 0; i < dim; ++i) d[static_cast<size_t>(i)] = y[i];
  const double lambda = y[dim];
  const double phi = y[dim + 1];

  if (opt.kind == ProblemKind::Forward) {
    Mat<double, 3> F = diag3(d);
    const double J = det(F);
    if (!(J > 0.0)) throw NonFiniteResidualError("oracle: nonpositive J");
    Mat<double, 3> P = piola(F, lambda, m);
    for (int i = 0; i < dim; ++i) r[i] = P(i, i);
    const double ptil = pore_pressure(phi, m.phi_bar, lambda, m);
    r[dim] = (J - phi) - (1.0 - m.phi_bar);
    r[dim + 1] =
        (phi - phi_prev) / opt.dt - source_theta(ptil, ramp, m) / m.rho_f;
  } else {
    Mat<double, 3> f = diag3(d);
    const double detf = det(f);
    if (!(detf > 0.0)) throw NonFiniteResidualError("oracle: nonpositive j");
    Mat<double, 3> F = inverse(f);
    const double J = 1.0 / detf;
    Mat<double, 3> sig = detf * (piola_mech(F, m) * transpose(F));
    for (int i = 0; i < 3; ++i) sig(i, i) += lambda;
    for (int i = 0; i < dim; ++i) r[i] = sig(i, i);
    const double ptil = pore_pressure(J * m.phi_bar, phi, lambda, m);
    r[dim] = detf * (1.0 - phi) - (1.0 - m.phi_bar);
    r[dim + 1] =
        -(phi - phi_prev) / opt.dt - source_theta(ptil, ramp, m) / m.rho_f;
  }
  return r;
}

// Partial-pivot elimination, in place; rhs enters as b, leaves as solution.
void dense_solve(std::array<std::array<double, kMaxUnknowns>, kMaxUnknowns>& A,
                 SmallVec& b) {
  const int n = b.n;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int row = col + 1; row < n; ++row) {
      if (std::abs(A[static_cast<size_t>(row)][static_cast<size_t>(col)]) >
          std::abs(A[static_cast<size_t>(piv)][static_cast<size_t>(col)])) {
        piv = row;
      }
    }
    if (std::abs(A[static_cast<size_t>(piv)][static_cast<size_t>(col)]) <
        1e-300) {
      throw SingularMatrixError("oracle: singular Jacobian");
    }
    if (piv != col) {
      std::swap(A[static_cast<size_t>(piv)], A[static_cast<size_t>(col)]);
      std::swap(b[piv], b[col]);
    }
    for (int row = col + 1; row < n; ++row) {
      const double fac = A[static_cast<size_t>(row)][static_cast<size_t>(col)] /
                         A[static_cast<size_t>(col)][static_cast<size_t>(col)];
      for (int k = col; k < n; ++k) {
        A[static_cast<size_t>(row)][static_cast<size_t>(k)] -=
            fac * A[static_cast<size_t>(col)][static_cast<size_t>(k)];
      }
      b[row] -= fac * b[col];
    }
  }
  for (int row = n - 1; row >= 0; --row) {
    double s = b[row];
    for (int k = row + 1; k < n; ++k) {
      s -= A[static_cast<size_t>(row)][static_cast<size_t>(k)] * b[k];
    }
    b[row] = s / A[static_cast<size_t>(row)][static_cast<size_t>(row)];
  }
}

void newton_small(const OracleOptions& opt, SmallVec& y, double phi_prev,
                  double ramp) {
  const int n = y.n;
  for (int iter = 0; iter < 50; ++iter) {
    SmallVec r = residual(opt, y, phi_prev, ramp);
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(r[i])) {
        throw NonFiniteResidualError("oracle: non-finite residual");
      }
    }
    std::array<std::array<double, kMaxUnknowns>, kMaxUnknowns> J{};
    for (int j = 0; j < n; ++j) {
      const double h = 1e-7 * std::max(std::abs(y[j]), 1.0);
      SmallVec yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      SmallVec rp = residual(opt, yp, phi_prev, ramp);
      SmallVec rm = residual(opt, ym, phi_prev, ramp);
      for (int i = 0; i < n; ++i) {
        J[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            (rp[i] - rm[i]) / (2.0 * h);
      }
    }
    SmallVec delta = r;
    for (int i = 0; i < n; ++i) delta[i] = -r[i];
    dense_solve(J, delta);
    bool done = true;
    for (int i = 0; i < n; ++i) {
      y[i] += delta[i];
      if (std::abs(delta[i]) > 1e-10 * std::max(1.0, std::abs(y[i]))) {
        done = false;
      }
    }
    if (done) return;
  }
  throw DivergenceError("oracle: newton did not converge in 50 iterations");
}

}  // namespace

OracleState oracle_initial(const OracleOptions& opt) {
  if (opt.dim != 2 && opt.dim != 3) {
    throw DimensionMismatchError("oracle dim must be 2 or 3");
  }
  if (opt.dt <= 0.0) throw ConfigError("oracle dt must be positive");
  OracleState st;
  st.phi = opt.params.phi_bar;
  return st;
}

void oracle_step(const OracleOptions& opt, OracleState& st) {
  const int n = opt.dim + 2;
  SmallVec y;
  y.n = n;
  for (int i = 0; i < opt.dim; ++i) y[i] = st.stretch[static_cast<size_t>(i)];
  y[opt.dim] = st.lambda;
  y[opt.dim + 1] = st.phi;

  const double t_next = st.t + opt.dt;
  newton_small(opt, y, st.phi, ramp_factor(t_next, opt.t_ramp));

  for (int i = 0; i < opt.dim; ++i) st.stretch[static_cast<size_t>(i)] = y[i];
  st.lambda = y[opt.dim];
  st.phi = y[opt.dim + 1];
  st.t = t_next;
}

std::vector<OracleState> oracle_run(const OracleOptions& opt, int max_steps,
                                    double stop_tol) {
  std::vector<OracleState> out;
  out.push_back(oracle_initial(opt));
  for (int step = 0; step < max_steps; ++step) {
    OracleState st = out.back();
    oracle_step(opt, st);
    const double dphi = std::abs(st.phi - out.back().phi);
    out.push_back(st);
    if (st.t >= opt.t_ramp && dphi <= stop_tol) break;
  }
  return out;
}

double oracle_pressure(const OracleOptions& opt, const OracleState& st) {
  const MaterialParams& m = opt.params;
  std::array<double, 3> d{1.0, 1.0, 1.0};
  for (int i = 0; i < opt.dim; ++i) d[static_cast<size_t>(i)] = st.stretch[static_cast<size_t>(i)];
  if (opt.kind == ProblemKind::Forward) {
    return pore_pressure(st.phi, m.phi_bar, st.lambda, m);
  }
  const double detf = d[0] * d[1] * d[2];
  return pore_pressure(m.phi_bar / detf, st.phi, st.lambda, m);
}

double oracle_avg_porosity(const OracleOptions& opt, const OracleState& st) {
  if (opt.kind == ProblemKind::Forward) {
    const double J = st.stretch[0] * st.stretch[1] * st.stretch[2];
    return st.phi / J;
  }
  return st.phi;
}

}  // namespace poro
