#pragma once

#include <cstdint>
#include <vector>

#include "chemrep/solver.hpp"

namespace chemrep {

struct DiagnosticsConfig {
    /// Floor applied inside sqrt(u) and log(u) integrands only; the state
    /// itself is never modified. Cells below the floor are counted in
    /// clamped_fraction.
    double positivity_floor = 1e-12;
};

/// One row of the energy-framework time series. All integrals are midpoint
/// quadrature; running integrals advance by the trapezoid rule between the
/// previous record's time and this one's.
struct DiagnosticsRecord {
    std::int64_t step = 0;
    double t = 0.0;

    double mass_u = 0.0; ///< integral of u
    double mass_v = 0.0; ///< integral of v
    /// integral of u log u  +  (1/2) integral of |grad v|^2
    double lyapunov = 0.0;
    /// integral of |lap v|^2 + |grad v|^2 + |grad u|^2/u; the negated time
    /// derivative of `lyapunov` along exact solutions
    double dissipation = 0.0;
    double fisher_u = 0.0;       ///< integral of |grad u|^2 / u
    double I = 0.0;              ///< alias of `dissipation` (monitored functional)
    double J = 0.0;              ///< 4*gradsqrt_L2sq + integral of |lap v|^2
    double gradsqrt_L2sq = 0.0;  ///< integral of |grad sqrt(u)|^2
    double crit_theorem1 = 0.0;  ///< running integral of gradsqrt_L2sq^2
    double crit_appendixB = 0.0; ///< running integral of (L^3 norm of u)^2
    double K_groenwall = 0.0;    ///< c1 * running integral of gradsqrt_L2sq^2, c1 = 1
    /// max over cells of the largest eigenvalue of the Hessian of v; <= 0
    /// certifies concavity of v on the sample
    double concavity_margin = 0.0;
    /// backward-difference slack of the J dissipation estimate:
    /// RHS - dJ/dt with RHS = -2*int u|Hess log u|^2 - 2*int |grad lap v|^2
    ///                        - 2*int |lap v|^2 + 8*int (grad sqrt u)^T Hess v (grad sqrt u);
    /// 0 at the first record (no time increment yet)
    double lemma43_residual = 0.0;
    double remark41_quantity = 0.0; ///< I * exp(-int_I), the monitored decay surrogate
    double int_I = 0.0;             ///< running trapezoid integral of I (exponent above)

    double sup_u = 0.0;
    double l3_u = 0.0; ///< L^3 norm of u
    double clamped_fraction = 0.0;
};

DiagnosticsRecord evaluate(const State& s, const DiagnosticsRecord* prev,
                           const DiagnosticsConfig& cfg = {});

/// Residuals of the discrete Lyapunov balance dL/dt = -dissipation, formed
/// by central differences at interior times of a uniform-dt series.
/// Relative residuals normalize by max(|dL/dt|, dissipation, 1e-30).
struct LyapunovResidualReport {
    double max_abs = 0.0;
    double mean_abs = 0.0;
    double max_rel = 0.0;
    double mean_rel = 0.0;
    std::int64_t count = 0; ///< number of interior times evaluated
};

/// Throws FaultError if the series has fewer than 3 records or the step
/// spacing is not uniform (relative spread > 1e-9).
LyapunovResidualReport lyapunov_dissipation_check(const std::vector<DiagnosticsRecord>& series);

/// Per-time slack RHS - dJ/dt of the J-functional differential estimate,
/// with dJ/dt central-differenced from the series and RHS quadratured from
/// the retained states. Slack should be bounded below by a small negative
/// discretization error.
struct MainEstimateReport {
    std::vector<double> t;     ///< interior evaluation times
    std::vector<double> slack; ///< RHS - dJ/dt at those times
    double min_slack = 0.0;
    double max_abs_slack = 0.0;
};

/// Throws FaultError unless states.size() == series.size() >= 3 and each
/// states[k] was taken at series[k].t.
MainEstimateReport main_estimate_residual(const std::vector<DiagnosticsRecord>& series,
                                          const std::vector<State>& states,
                                          const DiagnosticsConfig& cfg = {});

/// End-of-run summary of the blow-up criteria accumulators. The growth-rate
/// pair compares the mean accumulator slope over the first and last tenth of
/// the simulated interval; a last/first ratio >= 10 on either accumulator
/// (with nonnegligible final slope) raises the superlinear-growth flag, the
/// fingerprint of an approach to blow-up.
struct CriterionReport {
    double final_crit_theorem1 = 0.0;
    double final_crit_appendixB = 0.0;
    double final_K_groenwall = 0.0;
    double max_J = 0.0;
    double max_l3_u = 0.0;
    double max_sup_u = 0.0;
    double theorem1_rate_first = 0.0;
    double theorem1_rate_last = 0.0;
    double appendixB_rate_first = 0.0;
    double appendixB_rate_last = 0.0;
    bool superlinear_growth = false;
};

/// Throws FaultError if the series has fewer than 3 records.
CriterionReport criterion_report(const std::vector<DiagnosticsRecord>& series);

} // namespace chemrep
