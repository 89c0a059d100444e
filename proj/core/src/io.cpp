#include "chemrep/io.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <sstream>

#include "chemrep/errors.hpp"

namespace chemrep {
namespace fs = std::filesystem;

std::filesystem::path output_root() {
    if (const char* root = std::getenv("CHEMREP_OUTPUT_ROOT"); root && *root)
        return fs::path(root);
    return fs::current_path();
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& dir) {
    fs::path full = (dir.is_absolute() ? dir : output_root() / dir).lexically_normal();
    std::error_code ec;
    fs::create_directories(full, ec);
    if (ec) throw IoError("cannot create output directory " + full.string() + ": " + ec.message());
    return full;
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

TimeSeriesWriter::TimeSeriesWriter(const fs::path& file) : out_(file), path_(file) {
    if (!out_) throw IoError("cannot open timeseries file " + file.string());
    out_ << timeseries_schema << '\n' << timeseries_header << '\n';
}

void TimeSeriesWriter::write(const DiagnosticsRecord& r) {
    out_ << r.step;
    for (double v : {r.t, r.mass_u, r.mass_v, r.lyapunov, r.dissipation, r.fisher_u, r.I, r.J,
                     r.gradsqrt_L2sq, r.crit_theorem1, r.crit_appendixB, r.K_groenwall,
                     r.concavity_margin, r.lemma43_residual, r.remark41_quantity, r.int_I, r.sup_u,
                     r.l3_u, r.clamped_fraction})
        out_ << ',' << format_g17(v);
    out_ << '\n';
    if (!out_) throw IoError("write failed on " + path_.string());
}

void TimeSeriesWriter::flush() {
    out_.flush();
    if (!out_) throw IoError("flush failed on " + path_.string());
}

std::vector<DiagnosticsRecord> read_timeseries(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open timeseries file " + file.string());
    std::string line;
    if (!std::getline(in, line) || line != timeseries_schema)
        throw IoError(file.string() + ": missing schema line '" + timeseries_schema + "'");
    if (!std::getline(in, line) || line != timeseries_header)
        throw IoError(file.string() + ": header does not match the documented schema");

    std::vector<DiagnosticsRecord> series;
    std::int64_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::array<double, 19> f{};
        std::int64_t step = 0;
        const char* p = line.c_str();
        char* end = nullptr;
        step = std::strtoll(p, &end, 10);
        if (end == p) throw IoError(file.string() + ": bad step field on line " + std::to_string(lineno));
        p = end;
        for (double& slot : f) {
            if (*p != ',')
                throw IoError(file.string() + ": short row on line " + std::to_string(lineno));
            ++p;
            slot = std::strtod(p, &end);
            if (end == p)
                throw IoError(file.string() + ": bad numeric field on line " + std::to_string(lineno));
            p = end;
        }
        if (*p != '\0')
            throw IoError(file.string() + ": trailing characters on line " + std::to_string(lineno));

        DiagnosticsRecord r;
        r.step = step;
        r.t = f[0];
        r.mass_u = f[1];
        r.mass_v = f[2];
        r.lyapunov = f[3];
        r.dissipation = f[4];
        r.fisher_u = f[5];
        r.I = f[6];
        r.J = f[7];
        r.gradsqrt_L2sq = f[8];
        r.crit_theorem1 = f[9];
        r.crit_appendixB = f[10];
        r.K_groenwall = f[11];
        r.concavity_margin = f[12];
        r.lemma43_residual = f[13];
        r.remark41_quantity = f[14];
        r.int_I = f[15];
        r.sup_u = f[16];
        r.l3_u = f[17];
        r.clamped_fraction = f[18];
        series.push_back(r);
    }
    return series;
}

namespace {

constexpr char kMagic[8] = {'C', 'H', 'E', 'M', 'R', 'S', 'N', 'P'};
constexpr std::uint32_t kVersion = 1;

void put_bytes(std::ofstream& out, const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

void get_bytes(std::ifstream& in, void* p, std::size_t n, const fs::path& file) {
    in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (in.gcount() != static_cast<std::streamsize>(n))
        throw IoError(file.string() + ": truncated snapshot");
}

} // anonymous namespace

void write_snapshot(const fs::path& file, const State& s) {
    const Grid& g = s.u.grid();
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open snapshot file " + file.string());

    put_bytes(out, kMagic, sizeof kMagic);
    const std::uint32_t version = kVersion;
    const std::uint32_t dim = static_cast<std::uint32_t>(g.dim());
    put_bytes(out, &version, 4);
    put_bytes(out, &dim, 4);
    for (int a = 0; a < g.dim(); ++a) {
        const std::uint64_t n = static_cast<std::uint64_t>(g.cells(a));
        put_bytes(out, &n, 8);
    }
    for (int a = 0; a < g.dim(); ++a) {
        const double len = g.length(a);
        put_bytes(out, &len, 8);
    }
    put_bytes(out, &s.t, 8);
    put_bytes(out, s.u.values().data(), s.u.values().size_bytes());
    put_bytes(out, s.v.values().data(), s.v.values().size_bytes());
    if (!out) throw IoError("write failed on " + file.string());
}

State read_snapshot(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot file " + file.string());

    char magic[8];
    get_bytes(in, magic, sizeof magic, file);
    if (std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw IoError(file.string() + ": not a snapshot file (bad magic)");
    std::uint32_t version = 0, dim = 0;
    get_bytes(in, &version, 4, file);
    if (version != kVersion)
        throw IoError(file.string() + ": unsupported snapshot version " + std::to_string(version));
    get_bytes(in, &dim, 4, file);
    if (dim < 1 || dim > 3)
        throw IoError(file.string() + ": snapshot dim " + std::to_string(dim) + " out of range");

    std::array<int, 3> cells{};
    std::array<double, 3> lengths{};
    for (std::uint32_t a = 0; a < dim; ++a) {
        std::uint64_t n = 0;
        get_bytes(in, &n, 8, file);
        if (n < static_cast<std::uint64_t>(Grid::min_cells_per_axis) || n > (1u << 30))
            throw IoError(file.string() + ": snapshot cell count out of range");
        cells[a] = static_cast<int>(n);
    }
    for (std::uint32_t a = 0; a < dim; ++a) get_bytes(in, &lengths[a], 8, file);

    Grid g;
    try {
        g = Grid::make(static_cast<int>(dim), std::span<const int>(cells.data(), dim),
                       std::span<const double>(lengths.data(), dim));
    } catch (const ConfigError& e) {
        throw IoError(file.string() + ": invalid snapshot geometry: " + e.what());
    }

    State s;
    s.u = ScalarField(g);
    s.v = ScalarField(g);
    get_bytes(in, &s.t, 8, file);
    get_bytes(in, s.u.values().data(), s.u.values().size_bytes(), file);
    get_bytes(in, s.v.values().data(), s.v.values().size_bytes(), file);
    char extra;
    if (in.read(&extra, 1); in.gcount() != 0)
        throw IoError(file.string() + ": trailing bytes after snapshot payload");
    return s;
}

} // namespace chemrep
