#include "chemrep/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "chemrep/errors.hpp"
#include "chemrep/operators.hpp"

namespace chemrep {
namespace {

ScalarField clamped_sqrt(const ScalarField& u, double floor) {
    ScalarField s(u.grid());
    for (std::int64_t i = 0; i < u.size(); ++i) s[i] = std::sqrt(std::max(u[i], floor));
    return s;
}

ScalarField clamped_log(const ScalarField& u, double floor) {
    ScalarField s(u.grid());
    for (std::int64_t i = 0; i < u.size(); ++i) s[i] = std::log(std::max(u[i], floor));
    return s;
}

ScalarField squared(ScalarField f) {
    for (std::int64_t i = 0; i < f.size(); ++i) f[i] *= f[i];
    return f;
}

// RHS of the J-functional differential estimate:
//   -2 int u |Hess log u|^2 - 2 int |grad lap v|^2 - 2 int |lap v|^2
//   + 8 int (grad sqrt u)^T (Hess v) (grad sqrt u)
double estimate_rhs(const State& s, double floor) {
    const Grid& g = s.u.grid();
    const int d = g.dim();

    const TensorField h_logu = hessian(clamped_log(s.u, floor));
    ScalarField weighted(g);
    for (std::int64_t i = 0; i < weighted.size(); ++i)
        weighted[i] = s.u[i] * h_logu.frobenius_sq(i);
    const double term_logu = integrate(weighted);

    const double term_gradlap = integrate(magnitude_sq(grad_laplacian(s.v)));
    const double term_lap = integrate(squared(laplacian(s.v)));

    const VectorField gs = gradient(clamped_sqrt(s.u, floor));
    const TensorField h_v = hessian(s.v);
    ScalarField mixed(g);
    for (std::int64_t i = 0; i < mixed.size(); ++i) {
        double gvec[Grid::max_dim] = {0.0, 0.0, 0.0};
        for (int a = 0; a < d; ++a) gvec[a] = gs.component(a)[i];
        mixed[i] = h_v.quadratic_form(i, std::span<const double>(gvec, static_cast<std::size_t>(d)));
    }
    const double term_mixed = integrate(mixed);

    return -2.0 * term_logu - 2.0 * term_gradlap - 2.0 * term_lap + 8.0 * term_mixed;
}

} // anonymous namespace

DiagnosticsRecord evaluate(const State& s, const DiagnosticsRecord* prev,
                           const DiagnosticsConfig& cfg) {
    const Grid& g = s.u.grid();
    if (!(s.v.grid() == g)) throw FaultError("diagnostics: u and v live on different grids");
    const double floor = cfg.positivity_floor;

    DiagnosticsRecord r;
    r.t = s.t;
    r.step = prev ? prev->step + 1 : 0;
    r.mass_u = integrate(s.u);
    r.mass_v = integrate(s.v);

    std::int64_t clamped = 0;
    ScalarField entropy(g);
    for (std::int64_t i = 0; i < entropy.size(); ++i) {
        if (s.u[i] < floor) ++clamped;
        entropy[i] = s.u[i] > 0.0 ? s.u[i] * std::log(std::max(s.u[i], floor)) : 0.0;
    }
    r.clamped_fraction = static_cast<double>(clamped) / static_cast<double>(g.cell_count());

    const double int_gradv_sq = integrate(magnitude_sq(gradient(s.v)));
    const double int_lapv_sq = integrate(squared(laplacian(s.v)));
    r.lyapunov = integrate(entropy) + 0.5 * int_gradv_sq;

    ScalarField fisher_integrand = magnitude_sq(gradient(s.u));
    for (std::int64_t i = 0; i < fisher_integrand.size(); ++i)
        fisher_integrand[i] /= std::max(s.u[i], floor);
    r.fisher_u = integrate(fisher_integrand);
    r.dissipation = int_lapv_sq + int_gradv_sq + r.fisher_u;
    r.I = r.dissipation;

    r.gradsqrt_L2sq = integrate(magnitude_sq(gradient(clamped_sqrt(s.u, floor))));
    r.J = 4.0 * r.gradsqrt_L2sq + int_lapv_sq;

    r.sup_u = sup_norm(s.u);
    r.l3_u = lp_norm(s.u, 3.0);

    const TensorField h_v = hessian(s.v);
    double margin = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i < g.cell_count(); ++i)
        margin = std::max(margin, h_v.max_eigenvalue(i));
    r.concavity_margin = margin;

    if (prev) {
        const double dt = r.t - prev->t;
        if (!(dt > 0.0)) throw FaultError("diagnostics: record times must increase");
        const double g_now = r.gradsqrt_L2sq * r.gradsqrt_L2sq;
        const double g_prev = prev->gradsqrt_L2sq * prev->gradsqrt_L2sq;
        r.crit_theorem1 = prev->crit_theorem1 + 0.5 * (g_prev + g_now) * dt;
        r.K_groenwall = r.crit_theorem1; // c1 = 1
        const double l3_now = r.l3_u * r.l3_u;
        const double l3_prev = prev->l3_u * prev->l3_u;
        r.crit_appendixB = prev->crit_appendixB + 0.5 * (l3_prev + l3_now) * dt;
        r.int_I = prev->int_I + 0.5 * (prev->I + r.I) * dt;
        r.lemma43_residual = estimate_rhs(s, floor) - (r.J - prev->J) / dt;
    }
    r.remark41_quantity = r.I * std::exp(-r.int_I);
    return r;
}

LyapunovResidualReport lyapunov_dissipation_check(const std::vector<DiagnosticsRecord>& series) {
    const std::size_t n = series.size();
    if (n < 3) throw FaultError("lyapunov check: need at least 3 records");
    const double dt0 = series[1].t - series[0].t;
    if (!(dt0 > 0.0)) throw FaultError("lyapunov check: record times must increase");
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double dt = series[k + 1].t - series[k].t;
        if (std::abs(dt - dt0) > 1e-9 * dt0)
            throw FaultError("lyapunov check: series does not have uniform step spacing");
    }

    LyapunovResidualReport rep;
    double sum_abs = 0.0, sum_rel = 0.0;
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double dldt =
            (series[k + 1].lyapunov - series[k - 1].lyapunov) / (series[k + 1].t - series[k - 1].t);
        const double resid = dldt + series[k].dissipation;
        const double rel =
            std::abs(resid) / std::max({std::abs(dldt), series[k].dissipation, 1e-30});
        rep.max_abs = std::max(rep.max_abs, std::abs(resid));
        rep.max_rel = std::max(rep.max_rel, rel);
        sum_abs += std::abs(resid);
        sum_rel += rel;
        ++rep.count;
    }
    rep.mean_abs = sum_abs / static_cast<double>(rep.count);
    rep.mean_rel = sum_rel / static_cast<double>(rep.count);
    return rep;
}

MainEstimateReport main_estimate_residual(const std::vector<DiagnosticsRecord>& series,
                                          const std::vector<State>& states,
                                          const DiagnosticsConfig& cfg) {
    const std::size_t n = series.size();
    if (n < 3) throw FaultError("main estimate: need at least 3 records");
    if (states.size() != n) throw FaultError("main estimate: one retained state per record required");
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(states[k].t - series[k].t) > 1e-12 * std::max(1.0, std::abs(series[k].t)))
            throw FaultError("main estimate: state and record times disagree");

    MainEstimateReport rep;
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const double span = series[k + 1].t - series[k - 1].t;
        if (!(span > 0.0)) throw FaultError("main estimate: record times must increase");
        const double djdt = (series[k + 1].J - series[k - 1].J) / span;
        const double slack = estimate_rhs(states[k], cfg.positivity_floor) - djdt;
        rep.t.push_back(series[k].t);
        rep.slack.push_back(slack);
        rep.min_slack = std::min(rep.min_slack, slack);
        rep.max_abs_slack = std::max(rep.max_abs_slack, std::abs(slack));
    }
    return rep;
}

namespace {

// Mean slope of a nondecreasing accumulator over the first / last tenth of
// the simulated span; window degenerates to one step when dt is coarse.
void window_rates(const std::vector<DiagnosticsRecord>& series,
                  double DiagnosticsRecord::* field, double& first, double& last) {
    const std::size_t n = series.size();
    const double t0 = series.front().t, t1 = series.back().t;
    const double w = (t1 - t0) / 10.0;

    std::size_t a = 1;
    while (a + 1 < n && series[a + 1].t <= t0 + w) ++a;
    first = (series[a].*field - series[0].*field) / (series[a].t - t0);

    std::size_t b = n - 2;
    while (b > 0 && series[b - 1].t >= t1 - w) --b;
    last = (series[n - 1].*field - series[b].*field) / (t1 - series[b].t);
}

bool superlinear(double rate_first, double rate_last) {
    return rate_last > 1e-12 && rate_last >= 10.0 * std::max(rate_first, 1e-300);
}

} // anonymous namespace

CriterionReport criterion_report(const std::vector<DiagnosticsRecord>& series) {
    if (series.size() < 3) throw FaultError("criterion report: need at least 3 records");
    CriterionReport rep;
    rep.final_crit_theorem1 = series.back().crit_theorem1;
    rep.final_crit_appendixB = series.back().crit_appendixB;
    rep.final_K_groenwall = series.back().K_groenwall;
    for (const DiagnosticsRecord& r : series) {
        rep.max_J = std::max(rep.max_J, r.J);
        rep.max_l3_u = std::max(rep.max_l3_u, r.l3_u);
        rep.max_sup_u = std::max(rep.max_sup_u, r.sup_u);
    }
    window_rates(series, &DiagnosticsRecord::crit_theorem1, rep.theorem1_rate_first,
                 rep.theorem1_rate_last);
    window_rates(series, &DiagnosticsRecord::crit_appendixB, rep.appendixB_rate_first,
                 rep.appendixB_rate_last);
    rep.superlinear_growth = superlinear(rep.theorem1_rate_first, rep.theorem1_rate_last) ||
                             superlinear(rep.appendixB_rate_first, rep.appendixB_rate_last);
    return rep;
}

} // namespace chemrep
