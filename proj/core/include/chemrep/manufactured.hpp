#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "chemrep/solver.hpp"

namespace chemrep {

struct ConvergenceRow {
    double h = 0.0;
    double dt = 0.0;
    double error_u = 0.0;
    double error_v = 0.0;
};

struct ConvergenceReport {
    std::string case_id;
    std::vector<ConvergenceRow> spatial;  // dt tied to h^2, error vs analytic
    std::vector<ConvergenceRow> temporal; // fixed grid, error vs small-dt reference
    std::vector<double> spatial_orders;   // log2 ratios of successive u-errors
    std::vector<double> temporal_orders;

    double min_spatial_order() const;
    double min_temporal_order() const;
};

/// Case registry for the convergence harness (also the `convergence` CLI
/// subcommand's argument):
///   manufactured-1d  exact pair u = v = 2 + e^{-t} cos(pi x) with source
///                    terms on both equations; spatial and temporal tables
///   constant-1d      constant exact pair; errors vanish at all levels
bool is_convergence_case(std::string_view case_id);
std::vector<std::string> convergence_case_ids();

/// Throws ConfigError for an unknown case id.
ConvergenceReport manufactured_convergence(std::string_view case_id);

} // namespace chemrep
