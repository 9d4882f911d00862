#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qanneal/hamiltonian.hpp"

namespace qanneal {

struct WaveState {
  double t = 0.0;
  std::vector<cplx> amplitudes;
};

/// Uniform superposition over the sector (ground state of the hopping term).
WaveState initial_state(const SpinSector& sector, double t0 = 1e-3);

struct Observables {
  std::optional<double> eta;         ///< mean accuracy; absent for odd N
  std::vector<double> polarization;  ///< <s_j^z>, j = 1..N
  std::vector<double> probabilities; ///< |a|^2 per basis state
};

Observables observables(const WaveState& state, const SpinSector& sector);

struct PropagationOptions {
  double t0 = 1e-3;
  double t1 = 1e3;
  double tol = 1e-8;        ///< budget for the accumulated norm drift over the whole run
  double step_cap = 0.05;   ///< h <= step_cap * t
  std::size_t samples = 200;  ///< log-spaced observable samples on [t0, t1]
  /// Also project the final state onto the instantaneous eigenbasis of H(t1).
  bool adiabatic_readout = true;
};

struct EvolutionResult {
  std::vector<double> sample_times;
  std::vector<double> eta_trace;                    ///< empty for odd N
  std::vector<std::vector<double>> polarization_trace;  ///< [sample][spin]
  /// |amplitude|^2 in the microstate basis at t1.
  std::vector<double> final_probs;
  /// Populations of the eigenstates of H(t1), each labelled by the microstate it
  /// connects to as t -> infinity (largest-overlap assignment). Empty when not requested.
  std::vector<double> adiabatic_probs;
  double norm_drift = 0.0;  ///< max | ||psi||^2 - 1 | over accepted steps
  std::size_t step_count = 0;
  std::size_t rejected_steps = 0;
};

/// Integrates i d psi/dt = H(t) psi from t0 to t1 with an embedded
/// Dormand-Prince 5(4) pair, starting from `initial_state`.
///
/// The state is never renormalized; the drift is reported and the run aborts with
/// InvariantError once it exceeds 100 * tol, or when the step size underflows.
EvolutionResult propagate(const DrivenHamiltonian& h, double g, const PropagationOptions& options = {});

/// Eigenbasis populations of `state` under H(t), keyed by microstate index.
std::vector<double> adiabatic_populations(const DrivenHamiltonian& h, double g, const WaveState& state);

}  // namespace qanneal
