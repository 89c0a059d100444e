#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "chemrep/diagnostics.hpp"
#include "chemrep/solver.hpp"

namespace chemrep {

/// Root under which relative output paths resolve: $CHEMREP_OUTPUT_ROOT when
/// set and nonempty, otherwise the current working directory.
std::filesystem::path output_root();

/// `dir` joined under output_root() when relative (absolute paths pass
/// through), with the directory tree created. Throws IoError on failure.
std::filesystem::path resolve_output_dir(const std::filesystem::path& dir);

/// Shortest text form that parses back to the identical double (%.17g).
std::string format_g17(double x);

inline constexpr const char* timeseries_schema = "# chemrep-timeseries v1";
inline constexpr const char* timeseries_header =
    "step,t,mass_u,mass_v,lyapunov,dissipation,fisher_u,I,J,gradsqrt_L2sq,"
    "crit_theorem1,crit_appendixB,K_groenwall,concavity_margin,lemma43_residual,"
    "remark41_quantity,int_I,sup_u,l3_u,clamped_fraction";

inline constexpr const char* batch_schema = "# chemrep-batch v1";
inline constexpr const char* batch_header = "seed,n,h,lhs,rhs,ratio,bound,pass";

inline constexpr const char* convergence_schema = "# chemrep-convergence v1";
inline constexpr const char* convergence_header = "phase,h,dt,error_u,error_v,order";

/// Streams diagnostics rows in the documented schema; all floating values in
/// %.17g so repeated runs are byte-identical. Throws IoError if the file
/// cannot be opened or a write fails.
class TimeSeriesWriter {
public:
    explicit TimeSeriesWriter(const std::filesystem::path& file);
    void write(const DiagnosticsRecord& r);
    void flush();

private:
    std::ofstream out_;
    std::filesystem::path path_;
};

/// Reads a timeseries CSV back into records; validates the schema line and
/// the header. Throws IoError on malformed input.
std::vector<DiagnosticsRecord> read_timeseries(const std::filesystem::path& file);

/// Self-describing little-endian snapshot of one State; layout documented
/// byte-for-byte in FORMATS.md. Round-trips bit-exactly.
void write_snapshot(const std::filesystem::path& file, const State& s);
State read_snapshot(const std::filesystem::path& file);

} // namespace chemrep
