#include <string>

#include <CLI11.hpp>

#include <chemrep/commands.hpp>

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the fully parabolic chemorepulsion system"};
    app.require_subcommand(1);

    std::string config_path, batch_path, case_id, run_dir;
    CLI::App* sim = app.add_subcommand("simulate", "run a configured simulation");
    sim->add_option("config", config_path, "run configuration file")->required();
    CLI::App* ver = app.add_subcommand("verify", "run a functional-inequality batch");
    ver->add_option("batch-spec", batch_path, "batch specification file")->required();
    CLI::App* conv = app.add_subcommand("convergence", "run a named convergence study");
    conv->add_option("case", case_id, "case id: manufactured-1d, constant-1d, bochner")
        ->required();
    CLI::App* rep = app.add_subcommand("report", "summarize a finished run directory");
    rep->add_option("run-dir", run_dir, "directory written by simulate")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : chemrep::exit_code::usage;
    }

    if (sim->parsed()) return chemrep::cmd_simulate(config_path);
    if (ver->parsed()) return chemrep::cmd_verify(batch_path);
    if (conv->parsed()) return chemrep::cmd_convergence(case_id);
    return chemrep::cmd_report(run_dir);
}
