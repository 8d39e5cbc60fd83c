#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "poro/dual.hpp"
#include "poro/errors.hpp"
#include "poro/tensor.hpp"

namespace poro {

// Material and source data. Stress-like quantities are in Pa, permeability in
// m^2/(s Pa), source coefficients beta in 1/(s Pa).
struct MaterialParams {
  // Exponential solid energy psi_m = C (e^Q - 1) + (B/2)(J-1) ln J,
  // Q = sum of b_ab weighted squared Green-Lagrange strains of the isochoric
  // part, taken in the (f,s,n) fiber frame.
  double C = 880.0;
  double B = 5.0e4;
  double b_ff = 1.0, b_ss = 1.0, b_nn = 1.0;
  double b_fs = 1.0, b_fn = 1.0, b_sn = 1.0;
  std::array<double, 3> fiber_f = {1.0, 0.0, 0.0};
  std::array<double, 3> fiber_s = {0.0, 1.0, 0.0};
  std::array<double, 3> fiber_n = {0.0, 0.0, 1.0};

  // Porous energy psi_p(phi) = (q1/q3) e^(q3 phi) + q2 phi (ln(q3 phi) - 1).
  double q1 = 1.333;
  double q2 = 550.0;
  double q3 = 10.0;

  double k_perm = 2.0e-7;
  double rho_f = 1000.0;
  double p_ref = 0.0;
  double phi_bar = 0.1;

  // Pressure-driven sources: theta = ramp * sum_i -beta_i (p - p_i).
  std::vector<std::pair<double, double>> sources = {{1.0e-4, 1.0e4}};

  std::array<double, 3> gravity = {0.0, 0.0, 0.0};
};

// ---- solid energy ------------------------------------------------------

namespace detail {

// 2 R (W o E_frame) R^T with E_frame = R^T E R; identity frame short-circuit.
template <class T>
Mat<T, 3> strain_weight_contraction(const Mat<T, 3>& E,
                                    const MaterialParams& m, T* q_out) {
  Mat<double, 3> R;
  for (int i = 0; i < 3; ++i) {
    R(i, 0) = m.fiber_f[i];
    R(i, 1) = m.fiber_s[i];
    R(i, 2) = m.fiber_n[i];
  }
  const double W[3][3] = {{m.b_ff, m.b_fs, m.b_fn},
                          {m.b_fs, m.b_ss, m.b_sn},
                          {m.b_fn, m.b_sn, m.b_nn}};
  bool identity = true;
  for (int i = 0; i < 3 && identity; ++i)
    for (int j = 0; j < 3 && identity; ++j)
      identity = R(i, j) == (i == j ? 1.0 : 0.0);

  Mat<T, 3> Ef;
  if (identity) {
    Ef = E;
  } else {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T s = T(0.0);
        for (int a = 0; a < 3; ++a)
          for (int b = 0; b < 3; ++b) s += R(a, i) * E(a, b) * R(b, j);
        Ef(i, j) = s;
      }
  }
  T q = T(0.0);
  Mat<T, 3> Gf;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      q += W[i][j] * Ef(i, j) * Ef(i, j);
      Gf(i, j) = 2.0 * W[i][j] * Ef(i, j);
    }
  if (q_out) *q_out = q;
  if (identity) return Gf;
  Mat<T, 3> G;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      T s = T(0.0);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) s += R(i, a) * Gf(a, b) * R(j, b);
      G(i, j) = s;
    }
  return G;
}

template <class T>
void check_positive_jacobian(const T& J) {
  if (!(value(J) > 0.0))
    throw NonFiniteResidualError("deformation gradient has non-positive det");
}

}  // namespace detail

// Strain energy of the solid skeleton at (embedded 3D) deformation gradient F.
template <class T>
T psi_m(const Mat<T, 3>& F, const MaterialParams& m) {
  using std::exp;
  using std::log;
  using std::pow;
  const T J = det(F);
  detail::check_positive_jacobian(J);
  const T s = pow(J, -1.0 / 3.0);
  const Mat<T, 3> Fbar = s * F;
  const Mat<T, 3> E = 0.5 * (transpose(Fbar) * Fbar - Mat<T, 3>::identity());
  T q;
  detail::strain_weight_contraction(E, m, &q);
  return m.C * (exp(q) - 1.0) + 0.5 * m.B * (J - 1.0) * log(J);
}

// First Piola stress of psi_m (no multiplier term).
template <class T>
Mat<T, 3> piola_mech(const Mat<T, 3>& F, const MaterialParams& m) {
  using std::exp;
  using std::log;
  using std::pow;
  const T J = det(F);
  detail::check_positive_jacobian(J);
  const T s = pow(J, -1.0 / 3.0);
  const Mat<T, 3> Fbar = s * F;
  const Mat<T, 3> E = 0.5 * (transpose(Fbar) * Fbar - Mat<T, 3>::identity());
  T q;
  const Mat<T, 3> G = detail::strain_weight_contraction(E, m, &q);
  const Mat<T, 3> Pbar = (m.C * exp(q)) * (Fbar * G);
  const Mat<T, 3> Finvt = transpose(inverse(F));
  const T tracePF = ddot(Pbar, Fbar);
  Mat<T, 3> P = s * Pbar - (tracePF / 3.0) * Finvt;
  const T dvol = 0.5 * m.B * (log(J) + 1.0 - 1.0 / J);
  return P + (dvol * J) * Finvt;
}

// Full stress including the incompressibility multiplier: P + lambda J F^-T.
template <class T>
Mat<T, 3> piola(const Mat<T, 3>& F, const T& lambda, const MaterialParams& m) {
  const T J = det(F);
  return piola_mech(F, m) + (lambda * J) * transpose(inverse(F));
}

// ---- porous energy ------------------------------------------------------

template <class T>
T psi_p(const T& phi, const MaterialParams& m) {
  using std::exp;
  using std::log;
  if (!(value(phi) > 0.0))
    throw NonFiniteResidualError("porosity must stay positive");
  return (m.q1 / m.q3) * exp(m.q3 * phi) + m.q2 * phi * (log(m.q3 * phi) - 1.0);
}

template <class T>
T psi_p_d(const T& phi, const MaterialParams& m) {
  using std::exp;
  using std::log;
  if (!(value(phi) > 0.0))
    throw NonFiniteResidualError("porosity must stay positive");
  return m.q1 * exp(m.q3 * phi) + m.q2 * log(m.q3 * phi);
}

template <class T>
T psi_p_dd(const T& phi, const MaterialParams& m) {
  using std::exp;
  if (!(value(phi) > 0.0))
    throw NonFiniteResidualError("porosity must stay positive");
  return m.q1 * m.q3 * exp(m.q3 * phi) + m.q2 / phi;
}

// Pore pressure normalized so that p(phi0, phi0, 0) = p_ref.
template <class T>
T pore_pressure(const T& phi, const T& phi0, const T& lambda,
                const MaterialParams& m) {
  return psi_p_d(phi, m) - psi_p_d(phi0, m) + m.p_ref - lambda;
}

// ---- transport ----------------------------------------------------------

// Lagrangian pullback of the isotropic permeability: K = J k C^-1 with
// C = F^T F. In 2D, F is the in-plane block and J the embedded determinant
// (equal to det of the block).
template <class T, int DIM>
Mat<T, DIM> permeability_pullback(const Mat<T, DIM>& F,
                                  const MaterialParams& m) {
  const T J = det(F);
  detail::check_positive_jacobian(J);
  const Mat<T, DIM> C = transpose(F) * F;
  return (J * m.k_perm) * inverse(C);
}

// Ramped pressure-driven source.
template <class T>
T source_theta(const T& p, double ramp, const MaterialParams& m) {
  T theta = T(0.0);
  for (const auto& [beta, p_i] : m.sources) theta += -beta * (p - p_i);
  return ramp * theta;
}

}  // namespace poro
