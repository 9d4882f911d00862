#include "qanneal/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "qanneal/error.hpp"
#include "qanneal/spectrum.hpp"

namespace qanneal {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat (error weights); the seventh stage reuses the FSAL derivative.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using Vec = std::vector<cplx>;

constexpr double kPerStepFraction = 1e-4;

class Stepper {
 public:
  Stepper(const DrivenHamiltonian& h, double g) : h_(h), g_(g) {
    const std::size_t d = h.dimension();
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &tmp_, &y_new_}) v->assign(d, cplx{});
  }

  // dy/dt = -i H(t) y
  void derivative(double t, const Vec& y, Vec& out) const {
    h_.apply(t, g_, y, out);
    for (auto& z : out) z = cplx{z.imag(), -z.real()};
  }

  void prime(double t, const Vec& y) { derivative(t, y, k1_); }

  // Attempts one step of size dt from (t, y); returns the scaled error.
  double attempt(double t, const Vec& y, double dt, double atol, double rtol) {
    const std::size_t d = y.size();
    auto stage = [&](std::initializer_list<std::pair<double, const Vec*>> terms) {
      for (std::size_t i = 0; i < d; ++i) {
        cplx acc = y[i];
        for (const auto& [coef, k] : terms) acc += dt * coef * (*k)[i];
        tmp_[i] = acc;
      }
    };
    stage({{a21, &k1_}});
    derivative(t + c2 * dt, tmp_, k2_);
    stage({{a31, &k1_}, {a32, &k2_}});
    derivative(t + c3 * dt, tmp_, k3_);
    stage({{a41, &k1_}, {a42, &k2_}, {a43, &k3_}});
    derivative(t + c4 * dt, tmp_, k4_);
    stage({{a51, &k1_}, {a52, &k2_}, {a53, &k3_}, {a54, &k4_}});
    derivative(t + c5 * dt, tmp_, k5_);
    stage({{a61, &k1_}, {a62, &k2_}, {a63, &k3_}, {a64, &k4_}, {a65, &k5_}});
    derivative(t + dt, tmp_, k6_);
    for (std::size_t i = 0; i < d; ++i) {
      y_new_[i] = y[i] + dt * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
    }
    derivative(t + dt, y_new_, k7_);

    // Error of the whole state vector in the 2-norm: the quantity that feeds
    // the norm drift is the global state error, independent of the dimension.
    double err2 = 0.0, y2 = 0.0, y_new2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const cplx err =
          dt * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      err2 += std::norm(err);
      y2 += std::norm(y[i]);
      y_new2 += std::norm(y_new_[i]);
    }
    return std::sqrt(err2) / (atol + rtol * std::sqrt(std::max(y2, y_new2)));
  }

  void accept(Vec& y) {
    y.swap(y_new_);
    k1_.swap(k7_);
  }

 private:
  const DrivenHamiltonian& h_;
  double g_;
  Vec k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_;
};

double squared_norm(const Vec& y) {
  return std::accumulate(y.begin(), y.end(), 0.0, [](double s, cplx z) { return s + std::norm(z); });
}

}  // namespace

WaveState initial_state(const SpinSector& sector, double t0) {
  if (sector.dimension() == 0) throw ValidationError("sector is empty");
  const double a = 1.0 / std::sqrt(static_cast<double>(sector.dimension()));
  return {t0, Vec(sector.dimension(), cplx{a, 0.0})};
}

Observables observables(const WaveState& state, const SpinSector& sector) {
  if (state.amplitudes.size() != sector.dimension()) throw ValidationError("state does not match sector dimension");
  const int n = sector.n_spins();
  Observables out;
  out.polarization.assign(n, 0.0);
  out.probabilities.resize(sector.dimension());
  const bool even = n % 2 == 0;
  double eta = 0.0;
  for (std::size_t i = 0; i < sector.dimension(); ++i) {
    const double p = std::norm(state.amplitudes[i]);
    out.probabilities[i] = p;
    const Microstate ms = sector[i];
    for (int j = 0; j < n; ++j) out.polarization[j] += p * ms.sz(j);
    if (even) eta += p * eta_of(ms, n);
  }
  if (even) out.eta = eta;
  return out;
}

std::vector<double> adiabatic_populations(const DrivenHamiltonian& h, double g, const WaveState& state) {
  const std::size_t d = h.dimension();
  if (state.amplitudes.size() != d) throw ValidationError("state does not match Hamiltonian dimension");
  if (d > kDenseCapacity) throw CapacityError("adiabatic readout needs a dense eigendecomposition; sector too large");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.dense(state.t, g));
  if (solver.info() != Eigen::Success) throw InvariantError("eigensolver failed during adiabatic readout");
  const Eigen::MatrixXd& v = solver.eigenvectors();

  // Each eigenvector is labelled by the microstate carrying its largest weight.
  // Collisions only occur when the dressing is strong; then fall back to a
  // greedy assignment by descending overlap.
  std::vector<std::size_t> label(d);
  std::vector<char> taken(d, 0);
  bool collision = false;
  for (std::size_t k = 0; k < d; ++k) {
    Eigen::Index best = 0;
    v.col(static_cast<Eigen::Index>(k)).cwiseAbs().maxCoeff(&best);
    label[k] = static_cast<std::size_t>(best);
    if (taken[label[k]]) collision = true;
    taken[label[k]] = 1;
  }
  if (collision) {
    struct Pair {
      double w;
      std::size_t k, i;
    };
    std::vector<Pair> pairs;
    pairs.reserve(d * d);
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t i = 0; i < d; ++i) {
        pairs.push_back({std::abs(v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))), k, i});
      }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) { return a.w > b.w; });
    std::vector<char> used_k(d, 0);
    std::fill(taken.begin(), taken.end(), 0);
    for (const auto& p : pairs) {
      if (used_k[p.k] || taken[p.i]) continue;
      used_k[p.k] = taken[p.i] = 1;
      label[p.k] = p.i;
    }
  }

  std::vector<double> pop(d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    cplx overlap{};
    for (std::size_t i = 0; i < d; ++i) {
      overlap += v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * state.amplitudes[i];
    }
    pop[label[k]] = std::norm(overlap);
  }
  return pop;
}

EvolutionResult propagate(const DrivenHamiltonian& h, double g, const PropagationOptions& options) {
  const double t0 = options.t0, t1 = options.t1;
  if (!(t0 > 0.0) || !(t1 > t0) || !std::isfinite(t1)) throw ValidationError("require 0 < t0 < t1");
  if (!(options.tol > 0.0)) throw ValidationError("tolerance must be positive");
  if (!(options.step_cap > 0.0)) throw ValidationError("step cap must be positive");
  if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("coupling g must be finite and nonnegative");
  if (options.samples < 2) throw ValidationError("need at least two sample times");

  const SpinSector& sector = h.sector();
  WaveState state = initial_state(sector, t0);
  Vec& y = state.amplitudes;

  EvolutionResult res;
  res.sample_times = log_spaced(t0, t1, options.samples);
  auto record = [&] {
    Observables obs = observables(state, sector);
    if (obs.eta) res.eta_trace.push_back(*obs.eta);
    res.polarization_trace.push_back(std::move(obs.polarization));
  };
  record();

  Stepper stepper(h, g);
  stepper.prime(t0, y);
  // RK steps leak norm systematically, so the accumulated drift grows with the
  // step count (~1e5 at N = 12). Controlling each step to tol * 1e-4 keeps the
  // whole-run drift below tol.
  const double atol = options.tol * kPerStepFraction, rtol = atol;
  const double drift_limit = 100.0 * options.tol;
  double t = t0;
  double dt = options.step_cap * t0 * 0.1;
  std::size_t next_sample = 1;

  while (next_sample < res.sample_times.size()) {
    const double target = res.sample_times[next_sample];
    dt = std::min(dt, options.step_cap * t);
    const double planned = dt;
    bool hits_sample = false;
    if (t + dt >= target * (1.0 - 1e-14)) {
      dt = target - t;
      hits_sample = true;
    }
    if (dt <= 1e-14 * t) {
      throw InvariantError("step size underflow at t = " + std::to_string(t));
    }

    const double err = stepper.attempt(t, y, dt, atol, rtol);
    if (!std::isfinite(err)) throw InvariantError("non-finite error estimate at t = " + std::to_string(t));
    if (err <= 1.0) {
      stepper.accept(y);
      t = hits_sample ? target : t + dt;
      state.t = t;
      ++res.step_count;
      res.norm_drift = std::max(res.norm_drift, std::abs(squared_norm(y) - 1.0));
      if (res.norm_drift > drift_limit) {
        throw InvariantError("norm drift " + std::to_string(res.norm_drift) + " exceeds 100 x tol at t = " +
                             std::to_string(t));
      }
      if (hits_sample) {
        record();
        ++next_sample;
      }
      const double grow = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // A step shortened to land on a sample time keeps the planned size.
      dt = hits_sample && dt < planned ? planned : dt * grow;
    } else {
      ++res.rejected_steps;
      dt *= std::max(0.2, 0.9 * std::pow(err, -0.2));
    }
  }

  res.final_probs.resize(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) res.final_probs[i] = std::norm(y[i]);
  if (options.adiabatic_readout) res.adiabatic_probs = adiabatic_populations(h, g, state);
  return res;
}

}  // namespace qanneal
