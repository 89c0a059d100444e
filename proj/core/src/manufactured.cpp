#include "chemrep/manufactured.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "chemrep/errors.hpp"
#include "chemrep/operators.hpp"

namespace chemrep {
namespace {

constexpr double kPi = std::numbers::pi;

// Exact pair u = v = 2 + e^{-t} cos(pi x) on [0,1]. Both fields satisfy the
// Neumann condition, and the combined flux grad u + u grad v also vanishes at
// x = 0 and x = 1, so no boundary source is needed.
struct CosinePair {
    static double value(double x, double t) { return 2.0 + std::exp(-t) * std::cos(kPi * x); }

    // Closes the v equation: d_t v - lap v + v - u.
    static double source_v(double x, double t) {
        return (kPi * kPi - 1.0) * std::exp(-t) * std::cos(kPi * x);
    }

    // Closes the u equation: d_t u - div(grad u + u grad v).
    static double source_u(double x, double t) {
        const double decay = std::exp(-t);
        const double c = std::cos(kPi * x);
        const double s = std::sin(kPi * x);
        const double phi = 2.0 + decay * c;
        const double phi_t = -decay * c;
        const double phi_xx = -kPi * kPi * decay * c;
        const double phi_x_sq = kPi * kPi * decay * decay * s * s;
        return phi_t - phi_xx - (phi_x_sq + phi * phi_xx);
    }
};

ScalarField sample_cosine(const Grid& g, double t) {
    ScalarField f(g);
    for (int i = 0; i < g.cells(0); ++i) f[i] = CosinePair::value(g.center(0, i), t);
    return f;
}

Forcing cosine_forcing(const Grid& g) {
    Forcing fc;
    fc.v = [g](double t, ScalarField& out) {
        for (int i = 0; i < g.cells(0); ++i) out[i] = CosinePair::source_v(g.center(0, i), t);
    };
    fc.u = [g](double t, ScalarField& out) {
        for (int i = 0; i < g.cells(0); ++i) out[i] = CosinePair::source_u(g.center(0, i), t);
    };
    return fc;
}

double l2_error(const ScalarField& a, const ScalarField& b) {
    ScalarField d(a.grid());
    for (std::int64_t i = 0; i < d.size(); ++i) d[i] = a[i] - b[i];
    return l2_norm(d);
}

State run_to_end(State s0, const SolverConfig& cfg, const Forcing* forcing) {
    RunResult rr = run(std::move(s0), cfg, {}, forcing);
    if (rr.cause != TerminationCause::reached_t_end)
        throw FaultError("manufactured run terminated before t_end");
    return std::move(rr.final_state);
}

// Successive log2 error ratios; skipped entirely if any level already sits at
// machine level, where the ratio would be noise.
std::vector<double> observed_orders(const std::vector<ConvergenceRow>& rows) {
    std::vector<double> orders;
    for (const ConvergenceRow& r : rows)
        if (std::max(r.error_u, r.error_v) <= 1e-13) return orders;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const double coarse = std::max(rows[k - 1].error_u, rows[k - 1].error_v);
        const double fine = std::max(rows[k].error_u, rows[k].error_v);
        orders.push_back(std::log2(coarse / fine));
    }
    return orders;
}

ConvergenceReport cosine_case() {
    ConvergenceReport rep;
    rep.case_id = "manufactured-1d";

    // Spatial sweep: dt tied to h^2 so the first-order time error refines at
    // the same rate as the second-order space error.
    for (int n : {32, 64, 128}) {
        const Grid g = Grid::make_uniform(1, n);
        SolverConfig cfg;
        cfg.dt = 0.1 / (static_cast<double>(n) * n);
        cfg.t_end = 0.25;
        const Forcing fc = cosine_forcing(g);
        State s0{sample_cosine(g, 0.0), sample_cosine(g, 0.0), 0.0};
        const State fin = run_to_end(std::move(s0), cfg, &fc);
        rep.spatial.push_back({g.spacing(0), cfg.dt, l2_error(fin.u, sample_cosine(g, cfg.t_end)),
                               l2_error(fin.v, sample_cosine(g, cfg.t_end))});
    }
    rep.spatial_orders = observed_orders(rep.spatial);

    // Temporal sweep: one fixed grid, errors against a small-dt reference run
    // on the same grid so the (common) spatial error cancels.
    {
        const Grid g = Grid::make_uniform(1, 32);
        const Forcing fc = cosine_forcing(g);
        SolverConfig cfg;
        cfg.t_end = 0.25;
        cfg.dt = 6.25e-6;
        const State ref =
            run_to_end({sample_cosine(g, 0.0), sample_cosine(g, 0.0), 0.0}, cfg, &fc);
        for (double dt : {2e-4, 1e-4, 5e-5}) {
            cfg.dt = dt;
            const State fin =
                run_to_end({sample_cosine(g, 0.0), sample_cosine(g, 0.0), 0.0}, cfg, &fc);
            rep.temporal.push_back(
                {g.spacing(0), dt, l2_error(fin.u, ref.u), l2_error(fin.v, ref.v)});
        }
    }
    rep.temporal_orders = observed_orders(rep.temporal);
    return rep;
}

ConvergenceReport constant_case() {
    ConvergenceReport rep;
    rep.case_id = "constant-1d";
    const double level = 2.0;

    // A constant pair solves the system with no source, and the scheme keeps
    // it fixed up to the linear-solve tolerance, so every error column sits at
    // machine level and no order can (or should) be formed.
    auto constant_field = [&](const Grid& g) {
        ScalarField f(g);
        for (std::int64_t i = 0; i < f.size(); ++i) f[i] = level;
        return f;
    };
    for (int n : {32, 64, 128}) {
        const Grid g = Grid::make_uniform(1, n);
        SolverConfig cfg;
        cfg.dt = 0.1 / (static_cast<double>(n) * n);
        cfg.t_end = 0.25;
        const State fin = run_to_end({constant_field(g), constant_field(g), 0.0}, cfg, nullptr);
        rep.spatial.push_back({g.spacing(0), cfg.dt, l2_error(fin.u, constant_field(g)),
                               l2_error(fin.v, constant_field(g))});
    }
    {
        const Grid g = Grid::make_uniform(1, 32);
        SolverConfig cfg;
        cfg.t_end = 0.25;
        for (double dt : {2e-4, 1e-4, 5e-5}) {
            cfg.dt = dt;
            const State fin = run_to_end({constant_field(g), constant_field(g), 0.0}, cfg, nullptr);
            rep.temporal.push_back({g.spacing(0), dt, l2_error(fin.u, constant_field(g)),
                                    l2_error(fin.v, constant_field(g))});
        }
    }
    rep.spatial_orders = observed_orders(rep.spatial);
    rep.temporal_orders = observed_orders(rep.temporal);
    return rep;
}

double min_or_inf(const std::vector<double>& xs) {
    double m = std::numeric_limits<double>::infinity();
    for (double x : xs) m = std::min(m, x);
    return m;
}

} // anonymous namespace

double ConvergenceReport::min_spatial_order() const { return min_or_inf(spatial_orders); }
double ConvergenceReport::min_temporal_order() const { return min_or_inf(temporal_orders); }

bool is_convergence_case(std::string_view case_id) {
    return case_id == "manufactured-1d" || case_id == "constant-1d";
}

std::vector<std::string> convergence_case_ids() { return {"manufactured-1d", "constant-1d"}; }

ConvergenceReport manufactured_convergence(std::string_view case_id) {
    if (case_id == "manufactured-1d") return cosine_case();
    if (case_id == "constant-1d") return constant_case();
    throw ConfigError("convergence.case", "unknown case '" + std::string(case_id) +
                                              "'; known cases: manufactured-1d, constant-1d");
}

} // namespace chemrep
