#pragma once

#include <vector>

#include "oflx/field.hpp"
#include "oflx/fit.hpp"
#include "oflx/mollifier.hpp"

namespace oflx {

// Every term of the mollified energy identity at one scale eps. Sign
// convention: defectTerm carries the minus sign it has in the identity
//   lhsBoundary - lhsTime = transport + rEpsTerm + defectTerm + identityResidual,
// so transport + rEpsTerm + defectTerm reassembles the mollified product
// integral exactly (commutator split).
struct BudgetRow {
  double epsilon = 0.0;
  double lhsBoundary = 0.0;   ///< <Ju, JuE>_D at t minus the same at 0
  double lhsTime = 0.0;       ///< int_0^t <Ju, d/dtau JuE>_D
  double crossTerm = 0.0;     ///< <Ju, JuR>_D at t minus the same at 0
  double transport = 0.0;     ///< int <JuE x Ju : grad JuE>_D
  double transportIBP = 0.0;  ///< -1/2 int (div Ju) |JuE|^2, the by-parts form
  double rEpsTerm = 0.0;      ///< int <r_eps(uE, u) : grad JuE>_D
  double defectTerm = 0.0;    ///< -int <(uE - JuE) x (u - Ju) : grad JuE>_D
  double identityResidual = 0.0;
  /// ||Ju(t)||^2 - ||Ju(0)||^2 - 2 int <Ju, d/dtau Ju>: exact (to roundoff)
  /// for the trapezoid rule with centered differences on uniform time grids;
  /// reported, not assumed.
  double timeSymmetryResidual = 0.0;
};

struct BudgetReport {
  std::vector<double> epsilons;  ///< strictly decreasing
  double horizon = 0.0;
  double energyGap = 0.0;  ///< (||u(t)||^2 - ||u(0)||^2) / 2 over the half slab
  double scale = 0.0;      ///< normalization for relative tolerance checks
  std::vector<BudgetRow> rows;
  FitResult rEpsSlope;    ///< log-log |rEpsTerm| vs eps; used == 0 if degenerate
  FitResult defectSlope;  ///< log-log |defectTerm| vs eps
};

/// Weak-solution residual against an admissible test function series:
/// <u(t),psi(t)> - <u(0),psi(0)> - int <u, dpsi/dtau> - int <u x u : grad psi>,
/// all over the half slab. psi must be discretely divergence-free
/// (weak_div_defect <= 1e-6) with psi3 = 0 on the boundary plane.
double weak_residual(const TimeSeries& u, const TimeSeries& psi, double t);

/// r_eps(x) = sum_y w(y) (uE(x-y) - uE(x)) x (u(x-y) - u(x)) * hx*hy*hz.
TensorField commutator_r(const VectorField& uE, const VectorField& u,
                         const MollKernel& k);

/// Full budget: u_E and u_R via the reflection ops, one kernel per eps,
/// every BudgetRow field, slopes fitted over the eps ladder.
BudgetReport budget(const TimeSeries& u, const std::vector<double>& epsilons,
                    double t);

/// max over snapshot pairs of ||JuE(t) - JuE(s)||_{L2(half slab)} / |t - s|.
/// Callers compare across eps to observe the growth of the Lipschitz
/// constant as eps shrinks; no rate is asserted.
double lipschitz_in_time_check(const TimeSeries& u, double epsilon);

}  // namespace oflx
