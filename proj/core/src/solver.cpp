#include "chemrep/solver.hpp"

#include <algorithm>
#include <cmath>

#include "chemrep/errors.hpp"
#include "chemrep/helmholtz.hpp"
#include "chemrep/operators.hpp"

namespace chemrep {

void SolverConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("solver.dt", "must be positive and finite");
    if (!(t_end > 0.0) || !std::isfinite(t_end)) throw ConfigError("solver.t_end", "must be positive and finite");
    if (sign != 1.0 && sign != -1.0) throw ConfigError("solver.sign", "must be +1 or -1");
    if (!(linear_tol > 0.0)) throw ConfigError("solver.linear_tol", "must be positive");
    if (!(blowup_threshold > 0.0)) throw ConfigError("solver.blowup_threshold", "must be positive");
    if (!(positivity_floor > 0.0) || positivity_floor > 1e-12)
        throw ConfigError("solver.positivity_floor", "must lie in (0, 1e-12]");
}

namespace {

// B(z) = z/(e^z - 1), the exponential-fitting weight. Both branches avoid
// catastrophic cancellation and overflow; the series kicks in where e^z-1
// loses digits.
double bernoulli_weight(double z) {
    const double az = std::abs(z);
    if (az < 1e-5) return 1.0 - 0.5 * z + z * z / 12.0;
    if (z > 0.0) {
        const double e = std::exp(-z);
        return z * e / (1.0 - e);
    }
    return -z / (1.0 - std::exp(z));
}

struct FaceWeights {
    double toward_left;  // multiplies u_R in F = (cR*u_R - cL*u_L)/h
    double toward_right; // multiplies u_L
};

inline FaceWeights face_weights(FluxScheme scheme, double theta) {
    if (scheme == FluxScheme::scharfetter_gummel)
        return {bernoulli_weight(-theta), bernoulli_weight(theta)};
    return {1.0 + std::max(theta, 0.0), 1.0 - std::min(theta, 0.0)};
}

struct StepScratch {
    ScalarField rhs, diag, acc;
};

// Explicit flux-form u-update written as a convex combination
//   u_new[i] = diag[i]*u[i] + sum_faces coeff*u[neighbor],
// with every coefficient nonnegative under the step restriction, so
// positivity survives in floating point, and the face terms telescope so
// total mass is conserved up to roundoff.
void advect_diffuse(const State& s, const ScalarField& w, const SolverConfig& cfg, double dt,
                    ScalarField& diag, ScalarField& acc, ScalarField& out) {
    const Grid& g = s.u.grid();
    for (std::int64_t i = 0; i < diag.size(); ++i) {
        diag[i] = 1.0;
        acc[i] = 0.0;
    }
    const int n[3] = {g.cells(0), g.cells(1), g.cells(2)};
    const std::int64_t strides[3] = {static_cast<std::int64_t>(n[1]) * n[2], n[2], 1};
    for (int a = 0; a < g.dim(); ++a) {
        const double k = dt / (g.spacing(a) * g.spacing(a));
        const std::int64_t stride = strides[a];
        std::int64_t idx = 0;
        for (int i0 = 0; i0 < n[0]; ++i0)
            for (int i1 = 0; i1 < n[1]; ++i1)
                for (int i2 = 0; i2 < n[2]; ++i2, ++idx) {
                    const int ia = a == 0 ? i0 : a == 1 ? i1 : i2;
                    if (ia == n[a] - 1) continue; // faces between ia and ia+1 only
                    const std::int64_t right = idx + stride;
                    const double theta = cfg.sign * (w[right] - w[idx]);
                    const FaceWeights fw = face_weights(cfg.flux_scheme, theta);
                    acc[idx] += k * fw.toward_left * s.u[right];
                    diag[idx] -= k * fw.toward_right;
                    acc[right] += k * fw.toward_right * s.u[idx];
                    diag[right] -= k * fw.toward_left;
                }
    }
    for (std::int64_t i = 0; i < out.size(); ++i)
        out[i] = std::max(diag[i], 0.0) * s.u[i] + acc[i];
}

State step_impl(const State& s, const SolverConfig& cfg, double dt_request, const Forcing* forcing,
                StepScratch& scratch) {
    const Grid& g = s.u.grid();
    if (!(s.v.grid() == g)) throw FaultError("step: u and v live on different grids");
    if (!(dt_request > 0.0)) throw FaultError("step: nonpositive step request");

    if (scratch.rhs.grid() == g && scratch.rhs.size() == g.cell_count()) {
        // reuse
    } else {
        scratch.rhs = ScalarField(g);
        scratch.diag = ScalarField(g);
        scratch.acc = ScalarField(g);
    }

    // Implicit v-update, redone if the stability cap shrinks the step. The
    // cap is evaluated on the *updated* v because that is the drift field
    // the explicit fluxes will see.
    double dt = dt_request;
    ScalarField w;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 12) throw FaultError("step: stability cap failed to settle");
        for (std::int64_t i = 0; i < scratch.rhs.size(); ++i)
            scratch.rhs[i] = s.v[i] / dt + s.u[i];
        if (forcing && forcing->v) {
            ScalarField fv(g);
            forcing->v(s.t + dt, fv);
            for (std::int64_t i = 0; i < scratch.rhs.size(); ++i) scratch.rhs[i] += fv[i];
        }
        w = solve_helmholtz(scratch.rhs, (1.0 + dt) / dt, cfg.linear_tol);
        const double bound = stable_dt_bound(w);
        if (dt <= bound) break;
        const double next = 0.9 * bound;
        if (!(next > 1e-15))
            throw FaultError("step: stable step underflow (drift gradients exceed grid resolution)");
        dt = next;
    }

    State out;
    out.u = ScalarField(g);
    out.v = std::move(w);
    out.t = s.t + dt;
    advect_diffuse(s, out.v, cfg, dt, scratch.diag, scratch.acc, out.u);

    if (forcing && forcing->u) {
        ScalarField fu(g);
        forcing->u(s.t, fu);
        for (std::int64_t i = 0; i < out.u.size(); ++i) out.u[i] += dt * fu[i];
    }

    if (!out.u.finite() || !out.v.finite()) throw BlowUpError(out.t);
    const double sup = std::max(sup_norm(out.u), sup_norm(out.v));
    if (sup > cfg.blowup_threshold) throw BlowUpError(out.t);
    if (!forcing && out.u.min() < -1e-13)
        throw FaultError("step: negative density beyond contract tolerance");
    return out;
}

} // anonymous namespace

double stable_dt_bound(const ScalarField& v) {
    const Grid& g = v.grid();
    const int n[3] = {g.cells(0), g.cells(1), g.cells(2)};
    const std::int64_t strides[3] = {static_cast<std::int64_t>(n[1]) * n[2], n[2], 1};
    double denom = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
        double theta = 0.0;
        const std::int64_t stride = strides[a];
        std::int64_t idx = 0;
        for (int i0 = 0; i0 < n[0]; ++i0)
            for (int i1 = 0; i1 < n[1]; ++i1)
                for (int i2 = 0; i2 < n[2]; ++i2, ++idx) {
                    const int ia = a == 0 ? i0 : a == 1 ? i1 : i2;
                    if (ia == n[a] - 1) continue;
                    theta = std::max(theta, std::abs(v[idx + stride] - v[idx]));
                }
        denom += 2.0 * (1.0 + theta) / (g.spacing(a) * g.spacing(a));
    }
    return 1.0 / denom;
}

State step(const State& s, const SolverConfig& cfg) {
    StepScratch scratch;
    return step_impl(s, cfg, cfg.dt, nullptr, scratch);
}

State step(const State& s, const SolverConfig& cfg, double dt_request, const Forcing* forcing) {
    StepScratch scratch;
    return step_impl(s, cfg, dt_request, forcing, scratch);
}

RunResult run(State s0, const SolverConfig& cfg, const StepSink& sink, const Forcing* forcing) {
    cfg.validate();
    if (!s0.u.finite() || !s0.v.finite()) throw FaultError("run: non-finite initial state");
    const double sup0 = std::max(sup_norm(s0.u), sup_norm(s0.v));
    if (!(cfg.blowup_threshold > sup0))
        throw ConfigError("solver.blowup_threshold",
                          "must exceed the initial sup norm (" + std::to_string(sup0) + ")");

    RunResult res;
    res.final_state = std::move(s0);
    if (sink) sink(res.final_state, 0);

    StepScratch scratch;
    const double t_tiny = 1e-12 * std::max(1.0, cfg.t_end);
    while (res.final_state.t < cfg.t_end - t_tiny) {
        const double dt_req = std::min(cfg.dt, cfg.t_end - res.final_state.t);
        State next;
        try {
            next = step_impl(res.final_state, cfg, dt_req, forcing, scratch);
        } catch (const BlowUpError& e) {
            res.cause = TerminationCause::blow_up;
            res.blowup_time = e.time();
            res.final_time = res.final_state.t;
            return res;
        }
        if (std::abs(next.t - cfg.t_end) <= t_tiny) next.t = cfg.t_end;
        res.final_state = std::move(next);
        ++res.steps;
        if (sink) sink(res.final_state, res.steps);
    }
    res.cause = TerminationCause::reached_t_end;
    res.final_time = res.final_state.t;
    return res;
}

} // namespace chemrep
