#include <vector>

#include "poro/dual.hpp"
#include "poro/errors.hpp"
#include "poro/fem.hpp"
#include "poro/tensor.hpp"

// Element kernels for both problems (forward Lagrangian, refconf Eulerian)
// and all three mass formulations. A single residual routine is written
// against a generic scalar; instantiating it with Dual<NLOC> produces the
// element tangent rows in the same pass.

namespace poro {
namespace {

constexpr int kMaxQ = 24;
constexpr int kMaxN1 = 4;
constexpr int kMaxN2 = 10;

template <int DIM>
struct CellGeom {
  int nq = 0;
  double weight[kMaxQ];
  double val1[kMaxQ][kMaxN1];
  double val2[kMaxQ][kMaxN2];
  double grad1[kMaxQ][kMaxN1][DIM];
  double grad2[kMaxQ][kMaxN2][DIM];
};

template <int DIM>
void build_cell_geom(const Mesh& mesh, const QuadratureRule& rule,
                     const ElementTab& tab1, const ElementTab& tab2, int cell,
                     CellGeom<DIM>& g) {
  const auto& cv = mesh.cells[cell];
  const auto& p0 = mesh.vertices[cv[0]];
  Mat<double, DIM> A;
  for (int j = 0; j < DIM; ++j)
    for (int i = 0; i < DIM; ++i)
      A(i, j) = mesh.vertices[cv[j + 1]][i] - p0[i];
  const double detA = det(A);
  if (detA <= 0.0)
    throw NonFiniteResidualError("cell with non-positive Jacobian", cell);
  const Mat<double, DIM> Ainv = inverse(A);
  const int n1 = tab1.nbasis, n2 = tab2.nbasis;
  g.nq = rule.size();
  for (int q = 0; q < g.nq; ++q) {
    g.weight[q] = rule.weights[q] * detA;
    for (int a = 0; a < n1; ++a) {
      g.val1[q][a] = tab1.value(q, a);
      const double* ref = tab1.ref_grad(q, a);
      for (int d = 0; d < DIM; ++d) {
        double s = 0.0;
        for (int e = 0; e < DIM; ++e) s += Ainv(e, d) * ref[e];
        g.grad1[q][a][d] = s;
      }
    }
    for (int a = 0; a < n2; ++a) {
      g.val2[q][a] = tab2.value(q, a);
      const double* ref = tab2.ref_grad(q, a);
      for (int d = 0; d < DIM; ++d) {
        double s = 0.0;
        for (int e = 0; e < DIM; ++e) s += Ainv(e, d) * ref[e];
        g.grad2[q][a][d] = s;
      }
    }
  }
}

template <class T>
Mat<T, 3> to3(const Mat<T, 2>& m) {
  return embed3(m);
}
template <class T>
const Mat<T, 3>& to3(const Mat<T, 3>& m) {
  return m;
}

enum class KernelMode { Step, MassSteady };

// Local DoF layout: [displacement (n2*DIM) | porosity (n1) | multiplier (n1)
// | pressure (n1) or velocity (n2*DIM)]. In MassSteady mode only the steady
// mass rows are produced, written to rl[0..n1).
template <int DIM, class T>
void element_residual(const FemProblem& P, const StepData& sd, KernelMode mode,
                      const CellGeom<DIM>& g, int cell, const T* xl,
                      const double* phi_prev_loc, const double* phi_ref_loc,
                      T* rl, int nloc) {
  const MaterialParams& prm = P.params;
  const bool fwd = P.kind == ProblemKind::Forward;
  const bool steady = mode == KernelMode::MassSteady;
  const int n1 = p1_nbasis(DIM), n2 = p2_nbasis(DIM);
  const int ophi = n2 * DIM, olam = ophi + n1, oaux = olam + n1;
  const int nrows = steady ? n1 : nloc;
  for (int i = 0; i < nrows; ++i) rl[i] = T(0.0);

  for (int q = 0; q < g.nq; ++q) {
    const double w = g.weight[q];

    Mat<T, DIM> gd;
    for (int a = 0; a < n2; ++a)
      for (int i = 0; i < DIM; ++i) {
        const T& di = xl[a * DIM + i];
        for (int j = 0; j < DIM; ++j) gd(i, j) += di * g.grad2[q][a][j];
      }
    T phi(0.0), lam(0.0);
    Vec<T, DIM> gphi, glam;
    for (int i = 0; i < n1; ++i) {
      phi += xl[ophi + i] * g.val1[q][i];
      lam += xl[olam + i] * g.val1[q][i];
      for (int d = 0; d < DIM; ++d) {
        gphi[d] += xl[ophi + i] * g.grad1[q][i][d];
        glam[d] += xl[olam + i] * g.grad1[q][i][d];
      }
    }
    double phi_prev_q = 0.0, phi_ref_q = 0.0;
    double gphiref[DIM] = {};
    for (int i = 0; i < n1; ++i) {
      if (phi_prev_loc) phi_prev_q += phi_prev_loc[i] * g.val1[q][i];
      if (fwd) {
        phi_ref_q += phi_ref_loc[i] * g.val1[q][i];
        for (int d = 0; d < DIM; ++d)
          gphiref[d] += phi_ref_loc[i] * g.grad1[q][i][d];
      }
    }
    T mu(0.0), divu(0.0);
    Vec<T, DIM> gmu, uvel;
    if (P.formulation == Formulation::MixedP) {
      for (int i = 0; i < n1; ++i) {
        mu += xl[oaux + i] * g.val1[q][i];
        for (int d = 0; d < DIM; ++d) gmu[d] += xl[oaux + i] * g.grad1[q][i][d];
      }
    } else if (P.formulation == Formulation::MixedU) {
      for (int a = 0; a < n2; ++a)
        for (int i = 0; i < DIM; ++i) {
          uvel[i] += xl[oaux + a * DIM + i] * g.val2[q][a];
          divu += xl[oaux + a * DIM + i] * g.grad2[q][a][i];
        }
    }

    // Kinematics, stress, pore pressure, flux ingredients.
    Mat<T, DIM> stress2;       // contracted against grad of displacement tests
    Mat<T, DIM> Kperm;         // primal / mixed-p flux tensor
    Mat<T, DIM> Kinv;          // mixed-u resistance tensor
    Vec<T, DIM> gradp;         // primal pressure-gradient surrogate
    T ptil(0.0), incomp(0.0);
    if (fwd) {
      const Mat<T, DIM> Fb = Mat<T, DIM>::identity() + gd;
      const Mat<T, 3> F3 = to3(Fb);
      const T J = det(F3);
      if (!(value(J) > 0.0))
        throw NonFiniteResidualError("forward kernel: det F <= 0", cell);
      const Mat<T, 3> Ptot = piola(F3, lam, prm);
      for (int i = 0; i < DIM; ++i)
        for (int j = 0; j < DIM; ++j) stress2(i, j) = Ptot(i, j);
      const double ppd_ref = psi_p_d(phi_ref_q, prm);
      ptil = psi_p_d(phi, prm) - ppd_ref + prm.p_ref - lam;
      if (!steady && P.formulation == Formulation::MixedU) {
        // K^-1 = C / (J k) with C = F^T F (in-plane block in 2D).
        const Mat<T, DIM> C = transpose(Fb) * Fb;
        Kinv = (1.0 / (J * prm.k_perm)) * C;
      } else if (P.formulation != Formulation::MixedU) {
        Kperm = permeability_pullback(Fb, prm);
      }
      if (P.formulation == Formulation::Primal) {
        const T ppdd = psi_p_dd(phi, prm);
        const double ppdd_ref = psi_p_dd(phi_ref_q, prm);
        for (int d = 0; d < DIM; ++d)
          gradp[d] = ppdd * gphi[d] - ppdd_ref * gphiref[d] - glam[d];
      }
      incomp = (J - phi) - (1.0 - phi_ref_q);
    } else {
      const Mat<T, DIM> fb = Mat<T, DIM>::identity() + gd;
      const Mat<T, 3> f3 = to3(fb);
      const T detf = det(f3);
      if (!(value(detf) > 0.0))
        throw NonFiniteResidualError("refconf kernel: det f <= 0", cell);
      const Mat<T, 3> F3 = inverse(f3);
      const Mat<T, 3> Pm = piola_mech(F3, prm);
      const Mat<T, 3> sig = detf * (Pm * transpose(F3));
      for (int i = 0; i < DIM; ++i)
        for (int j = 0; j < DIM; ++j)
          stress2(i, j) = i == j ? sig(i, j) + lam : sig(i, j);
      const T J = 1.0 / detf;
      ptil = psi_p_d(J * prm.phi_bar, prm) - psi_p_d(phi, prm) + prm.p_ref - lam;
      if (P.formulation == Formulation::Primal) {
        // Inconsistent-primal gradient: the grad(J phi_bar) chain term is
        // dropped; only the phi0 and multiplier parts remain.
        const T ppdd = psi_p_dd(phi, prm);
        for (int d = 0; d < DIM; ++d) gradp[d] = -1.0 * ppdd * gphi[d] - glam[d];
      }
      for (int d = 0; d < DIM; ++d) {
        Kperm(d, d) = T(prm.k_perm);
        Kinv(d, d) = T(1.0 / prm.k_perm);
      }
      incomp = detf * (1.0 - phi) - (1.0 - prm.phi_bar);
    }

    const T p_src = P.formulation == Formulation::MixedP ? mu : ptil;
    const T theta = source_theta(p_src, sd.ramp, prm);
    const double tsign = fwd ? 1.0 : -1.0;
    const bool have_time = !steady && sd.phi_prev != nullptr;
    const T dphidt = have_time ? T(tsign / sd.dt) * (phi - phi_prev_q) : T(0.0);

    // Mass rows (tested with P1): primal and mixed-u write them to the
    // porosity block, mixed-p to the pressure block.
    Vec<T, DIM> flux;
    if (P.formulation == Formulation::Primal)
      flux = Kperm * gradp;
    else if (P.formulation == Formulation::MixedP)
      flux = Kperm * gmu;
    const int omass = steady ? 0
                      : P.formulation == Formulation::MixedP ? oaux
                                                             : ophi;
    for (int i = 0; i < n1; ++i) {
      T m = dphidt * g.val1[q][i] - (1.0 / prm.rho_f) * theta * g.val1[q][i];
      if (P.formulation == Formulation::MixedU) {
        m += divu * g.val1[q][i];
      } else {
        for (int d = 0; d < DIM; ++d) m += flux[d] * g.grad1[q][i][d];
      }
      rl[omass + i] += w * m;
    }
    if (steady) continue;

    // Momentum rows.
    for (int a = 0; a < n2; ++a)
      for (int i = 0; i < DIM; ++i) {
        T s(0.0);
        for (int j = 0; j < DIM; ++j) s += stress2(i, j) * g.grad2[q][a][j];
        s -= prm.gravity[i] * g.val2[q][a];
        rl[a * DIM + i] += w * s;
      }
    // Incompressibility rows.
    for (int i = 0; i < n1; ++i) rl[olam + i] += w * incomp * g.val1[q][i];
    // Auxiliary-field rows.
    if (P.formulation == Formulation::MixedP) {
      for (int i = 0; i < n1; ++i)
        rl[ophi + i] += w * (mu - ptil) * g.val1[q][i];
    } else if (P.formulation == Formulation::MixedU) {
      for (int a = 0; a < n2; ++a)
        for (int i = 0; i < DIM; ++i) {
          T s(0.0);
          for (int j = 0; j < DIM; ++j) s += Kinv(i, j) * uvel[j];
          rl[oaux + a * DIM + i] +=
              w * (s * g.val2[q][a] - ptil * g.grad2[q][a][i]);
        }
    }
  }
}

template <int DIM>
void gather_local_data(const FemProblem& P, int cell, int n1,
                       const StepData& sd, double* phi_prev_loc,
                       double* phi_ref_loc) {
  for (int v = 0; v < n1; ++v) {
    const int vid = P.mesh->cells[cell][v];
    phi_prev_loc[v] = sd.phi_prev ? (*sd.phi_prev)[vid] : 0.0;
    phi_ref_loc[v] =
        P.kind == ProblemKind::Forward ? P.phi_ref[vid] : 0.0;
  }
}

template <int DIM, int NLOC>
void assemble_impl(const FemProblem& P, const StepData& sd,
                   const Eigen::VectorXd& x, Eigen::VectorXd& r,
                   SparseMatrix* jac) {
  const Mesh& mesh = *P.mesh;
  const int total = P.dofmap.total();
  const int nloc = P.dofmap.dofs_per_cell();
  if (nloc != NLOC) throw std::logic_error("assemble_impl: layout mismatch");
  r.setZero(total);

  std::vector<char> is_constrained(total, 0);
  for (const auto& [dof, value] : P.constrained) is_constrained[dof] = 1;

  std::vector<int> dofs;
  CellGeom<DIM> geom;
  const int n1 = p1_nbasis(DIM);
  double phi_prev_loc[kMaxN1], phi_ref_loc[kMaxN1];
  std::vector<double> xl(NLOC), rd(NLOC);
  std::vector<Dual<NLOC>> xd(NLOC), rdual(NLOC);

  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    P.dofmap.cell_dofs(cell, dofs);
    build_cell_geom<DIM>(mesh, P.rule, P.tab_p1, P.tab_p2, cell, geom);
    gather_local_data<DIM>(P, cell, n1, sd, phi_prev_loc, phi_ref_loc);
    if (!jac) {
      for (int i = 0; i < NLOC; ++i) xl[i] = x[dofs[i]];
      element_residual<DIM, double>(P, sd, KernelMode::Step, geom, cell,
                                    xl.data(), phi_prev_loc, phi_ref_loc,
                                    rd.data(), NLOC);
      for (int i = 0; i < NLOC; ++i)
        if (!is_constrained[dofs[i]]) r[dofs[i]] += rd[i];
    } else {
      for (int i = 0; i < NLOC; ++i)
        xd[i] = Dual<NLOC>::seeded(x[dofs[i]], i);
      element_residual<DIM, Dual<NLOC>>(P, sd, KernelMode::Step, geom, cell,
                                        xd.data(), phi_prev_loc, phi_ref_loc,
                                        rdual.data(), NLOC);
      for (int i = 0; i < NLOC; ++i) {
        const int gi = dofs[i];
        if (is_constrained[gi]) continue;
        r[gi] += rdual[i].v;
        for (int j = 0; j < NLOC; ++j)
          if (rdual[i].d[j] != 0.0) jac->add(gi, dofs[j], rdual[i].d[j]);
      }
    }
  }
  for (const auto& [dof, value] : P.constrained) {
    r[dof] = x[dof] - value;
    if (jac) jac->add(dof, dof, 1.0);
  }
}

template <int DIM>
Eigen::VectorXd stationary_residual_impl(const FemProblem& P,
                                         const Eigen::VectorXd& x,
                                         double ramp) {
  const Mesh& mesh = *P.mesh;
  Eigen::VectorXd R = Eigen::VectorXd::Zero(P.dofmap.nodes(Field::Porosity));
  StepData sd;
  sd.ramp = ramp;
  sd.phi_prev = nullptr;
  std::vector<int> dofs;
  CellGeom<DIM> geom;
  const int n1 = p1_nbasis(DIM);
  const int nloc = P.dofmap.dofs_per_cell();
  double phi_prev_loc[kMaxN1], phi_ref_loc[kMaxN1];
  std::vector<double> xl(nloc), rl(nloc);
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    P.dofmap.cell_dofs(cell, dofs);
    build_cell_geom<DIM>(mesh, P.rule, P.tab_p1, P.tab_p2, cell, geom);
    gather_local_data<DIM>(P, cell, n1, sd, phi_prev_loc, phi_ref_loc);
    for (int i = 0; i < nloc; ++i) xl[i] = x[dofs[i]];
    element_residual<DIM, double>(P, sd, KernelMode::MassSteady, geom, cell,
                                  xl.data(), phi_prev_loc, phi_ref_loc,
                                  rl.data(), nloc);
    for (int v = 0; v < n1; ++v) R[mesh.cells[cell][v]] += rl[v];
  }
  return R;
}

template <int DIM>
double avg_porosity_impl(const FemProblem& P, const Eigen::VectorXd& x) {
  const Mesh& mesh = *P.mesh;
  const int n1 = p1_nbasis(DIM), n2 = p2_nbasis(DIM);
  const int ophi = n2 * DIM;
  std::vector<int> dofs;
  CellGeom<DIM> geom;
  std::vector<double> xl(P.dofmap.dofs_per_cell());
  double num = 0.0, den = 0.0;
  for (int cell = 0; cell < mesh.n_cells(); ++cell) {
    P.dofmap.cell_dofs(cell, dofs);
    build_cell_geom<DIM>(mesh, P.rule, P.tab_p1, P.tab_p2, cell, geom);
    for (size_t i = 0; i < dofs.size(); ++i) xl[i] = x[dofs[i]];
    for (int q = 0; q < geom.nq; ++q) {
      const double w = geom.weight[q];
      double phi = 0.0;
      for (int i = 0; i < n1; ++i) phi += xl[ophi + i] * geom.val1[q][i];
      if (P.kind == ProblemKind::Forward) {
        Mat<double, DIM> gd;
        for (int a = 0; a < n2; ++a)
          for (int i = 0; i < DIM; ++i)
            for (int j = 0; j < DIM; ++j)
              gd(i, j) += xl[a * DIM + i] * geom.grad2[q][a][j];
        const double J = det(to3(Mat<double, DIM>::identity() + gd));
        num += w * phi;
        den += w * J;
      } else {
        num += w * phi;
        den += w;
      }
    }
  }
  return num / den;
}

}  // namespace

void assemble_system(const FemProblem& p, const StepData& sd,
                     const Eigen::VectorXd& x, Eigen::VectorXd& r,
                     SparseMatrix* jac) {
  if (x.size() != p.dofmap.total())
    throw DimensionMismatchError("assemble_system: state size mismatch");
  if (p.mesh->dim == 2) {
    switch (p.formulation) {
      case Formulation::Primal: assemble_impl<2, 18>(p, sd, x, r, jac); break;
      case Formulation::MixedP: assemble_impl<2, 21>(p, sd, x, r, jac); break;
      case Formulation::MixedU: assemble_impl<2, 30>(p, sd, x, r, jac); break;
    }
  } else {
    switch (p.formulation) {
      case Formulation::Primal: assemble_impl<3, 38>(p, sd, x, r, jac); break;
      case Formulation::MixedP: assemble_impl<3, 42>(p, sd, x, r, jac); break;
      case Formulation::MixedU: assemble_impl<3, 68>(p, sd, x, r, jac); break;
    }
  }
}

Eigen::VectorXd stationary_residual(const FemProblem& p,
                                    const Eigen::VectorXd& x, double ramp) {
  return p.mesh->dim == 2 ? stationary_residual_impl<2>(p, x, ramp)
                          : stationary_residual_impl<3>(p, x, ramp);
}

double FemProblem::avg_eulerian_porosity(const Eigen::VectorXd& x) const {
  return mesh->dim == 2 ? avg_porosity_impl<2>(*this, x)
                        : avg_porosity_impl<3>(*this, x);
}

}  // namespace poro
