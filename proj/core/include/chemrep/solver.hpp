#pragma once

#include <cstdint>
#include <functional>

#include "chemrep/grid.hpp"

namespace chemrep {

enum class FluxScheme {
    scharfetter_gummel, // exponential fitting: exact zero-flux equilibria u ~ e^{-sign*v}
    central_upwind,     // central diffusion + upwinded drift
};

struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    /// +1 evolves the repulsion system du/dt = div(grad u + u grad v);
    /// -1 flips the drift toward the chemical (aggregation stress mode).
    double sign = +1.0;
    FluxScheme flux_scheme = FluxScheme::scharfetter_gummel;
    double linear_tol = 1e-10;
    /// Sup-norm trigger for blow-up detection (plus a NaN trap).
    double blowup_threshold = 1e8;
    /// Clamp for sqrt(u) and log(u) evaluations in diagnostics only; the
    /// stepper itself never clamps the state. Contract: <= 1e-12.
    double positivity_floor = 1e-12;

    void validate() const;
    bool operator==(const SolverConfig&) const = default;
};

struct State {
    ScalarField u;
    ScalarField v;
    double t = 0.0;
};

/// Optional source terms (manufactured-solution harness); each callback
/// fills a cell-centered field with the source at the given time.
struct Forcing {
    std::function<void(double t, ScalarField& out)> u;
    std::function<void(double t, ScalarField& out)> v;
};

/// Largest step for which the explicit u-update stays a convex (M-matrix)
/// combination given the drift field v:
///   dt <= 1 / sum_a 2*(1 + Theta_a)/h_a^2,  Theta_a = max face |v_R - v_L|,
/// which reduces to h^2/(2*dim*(1 + max-face |grad v| h)) on uniform grids.
double stable_dt_bound(const ScalarField& v);

/// One IMEX step: backward-Euler v-update (1+dt)w - dt*Lap(w) = v + dt*u,
/// then an explicit flux-form u-update with face fluxes built from the
/// updated v, so total u-mass telescopes exactly. The requested dt is
/// capped adaptively at 0.9 * stable_dt_bound(updated v); the state's t
/// advances by the accepted dt.
State step(const State& s, const SolverConfig& cfg);
State step(const State& s, const SolverConfig& cfg, double dt_request, const Forcing* forcing);

enum class TerminationCause { reached_t_end, blow_up };

struct RunResult {
    TerminationCause cause = TerminationCause::reached_t_end;
    double final_time = 0.0;
    std::int64_t steps = 0;
    double blowup_time = 0.0; // meaningful only when cause == blow_up
    State final_state;
};

/// Called with the initial state (index 0) and after every accepted step.
using StepSink = std::function<void(const State& s, std::int64_t step_index)>;

/// Advances s0 until t_end or blow-up detection. The sink must not mutate
/// the state; faults (linear-solve failure, contract violations)
/// propagate as FaultError.
RunResult run(State s0, const SolverConfig& cfg, const StepSink& sink = {},
              const Forcing* forcing = nullptr);

} // namespace chemrep
