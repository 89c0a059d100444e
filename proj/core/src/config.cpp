#include "chemrep/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "chemrep/errors.hpp"
#include "chemrep/io.hpp"
#include "chemrep/operators.hpp"
#include "chemrep/test_functions.hpp"

namespace chemrep {
namespace {

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

/// Flat-section parse: "[section]" lines switch sections, "key = value"
/// lines bind section.key, '#' starts a comment anywhere. Typed accessors
/// remove entries; finish() rejects whatever was never consumed, so a
/// misspelled key can never silently fall back to a default.
class KeyValues {
public:
    explicit KeyValues(const std::string& text) {
        std::istringstream in(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError("", "line " + std::to_string(lineno) +
                                              ": unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (section.empty())
                    throw ConfigError("", "line " + std::to_string(lineno) + ": empty section name");
                sections_.insert(section);
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError("", "line " + std::to_string(lineno) +
                                          ": expected 'key = value' or '[section]'");
            if (section.empty())
                throw ConfigError("", "line " + std::to_string(lineno) +
                                          ": key before any [section] header");
            const std::string key = section + "." + trim(line.substr(0, eq));
            if (!kv_.emplace(key, trim(line.substr(eq + 1))).second)
                throw ConfigError(key, "duplicate key");
        }
    }

    std::optional<std::string> take(const std::string& key) {
        const auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        std::string v = it->second;
        kv_.erase(it);
        return v;
    }

    std::string require(const std::string& key) {
        auto v = take(key);
        if (!v) throw ConfigError(key, "required key is missing");
        return *v;
    }

    double take_double(const std::string& key, double fallback) {
        const auto v = take(key);
        return v ? to_double(key, *v) : fallback;
    }

    std::int64_t take_int(const std::string& key, std::int64_t fallback) {
        const auto v = take(key);
        return v ? to_int(key, *v) : fallback;
    }

    std::uint64_t take_uint(const std::string& key, std::uint64_t fallback) {
        const auto v = take(key);
        if (!v) return fallback;
        const char* p = v->c_str();
        char* end = nullptr;
        const unsigned long long x = std::strtoull(p, &end, 10);
        if (end == p || *end != '\0' || v->front() == '-')
            throw ConfigError(key, "expected a nonnegative integer, got '" + *v + "'");
        return x;
    }

    bool take_bool(const std::string& key, bool fallback) {
        const auto v = take(key);
        if (!v) return fallback;
        if (*v == "true") return true;
        if (*v == "false") return false;
        throw ConfigError(key, "expected true or false, got '" + *v + "'");
    }

    std::string take_string(const std::string& key, std::string fallback) {
        auto v = take(key);
        return v ? *v : fallback;
    }

    static double to_double(const std::string& key, const std::string& v) {
        const char* p = v.c_str();
        char* end = nullptr;
        const double x = std::strtod(p, &end);
        if (end == p || *end != '\0')
            throw ConfigError(key, "expected a number, got '" + v + "'");
        return x;
    }

    static std::int64_t to_int(const std::string& key, const std::string& v) {
        const char* p = v.c_str();
        char* end = nullptr;
        const long long x = std::strtoll(p, &end, 10);
        if (end == p || *end != '\0')
            throw ConfigError(key, "expected an integer, got '" + v + "'");
        return x;
    }

    template <typename T, typename Conv>
    std::vector<T> take_list(const std::string& key, Conv conv) {
        const auto v = take(key);
        std::vector<T> out;
        if (!v) return out;
        std::istringstream in(*v);
        std::string tok;
        while (in >> tok) out.push_back(conv(key, tok));
        if (out.empty()) throw ConfigError(key, "expected at least one value");
        return out;
    }

    void finish(const std::set<std::string>& allowed_sections) const {
        for (const std::string& s : sections_)
            if (!allowed_sections.count(s)) throw ConfigError(s, "unknown section");
        if (!kv_.empty()) throw ConfigError(kv_.begin()->first, "unknown key");
    }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> sections_;
};

/// Accepts one value (replicated across active axes) or exactly `dim`.
template <typename T>
std::array<T, 3> per_axis(const std::string& key, std::vector<T> vals, int dim, T fill) {
    std::array<T, 3> out{fill, fill, fill};
    if (vals.size() == 1) vals.resize(static_cast<std::size_t>(dim), vals[0]);
    if (vals.size() != static_cast<std::size_t>(dim))
        throw ConfigError(key, "expected 1 or " + std::to_string(dim) + " values");
    for (int a = 0; a < dim; ++a) out[static_cast<std::size_t>(a)] = vals[static_cast<std::size_t>(a)];
    return out;
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const std::map<std::string, InitialConfig::Preset> kPresets = {
    {"constant", InitialConfig::Preset::constant},
    {"gaussian-bump", InitialConfig::Preset::gaussian_bump},
    {"cosine-series", InitialConfig::Preset::cosine_series},
    {"file", InitialConfig::Preset::file},
};

std::string preset_name(InitialConfig::Preset p) {
    for (const auto& [name, val] : kPresets)
        if (val == p) return name;
    return "constant";
}

} // anonymous namespace

RunConfig parse_config(const std::string& text) {
    KeyValues kv(text);
    RunConfig cfg;

    const int dim = static_cast<int>(KeyValues::to_int("grid.dim", kv.require("grid.dim")));
    if (dim < 1 || dim > Grid::max_dim) throw ConfigError("grid.dim", "must be 1, 2 or 3");
    auto cells_list = kv.take_list<std::int64_t>("grid.cells", &KeyValues::to_int);
    if (cells_list.empty()) throw ConfigError("grid.cells", "required key is missing");
    const auto cells = per_axis<std::int64_t>("grid.cells", std::move(cells_list), dim, 1);
    auto lengths_list = kv.take_list<double>("grid.lengths", &KeyValues::to_double);
    if (lengths_list.empty()) lengths_list = {1.0};
    const auto lengths = per_axis<double>("grid.lengths", lengths_list, dim, 1.0);
    std::array<int, 3> cells_i{};
    for (int a = 0; a < 3; ++a) cells_i[static_cast<std::size_t>(a)] = static_cast<int>(cells[static_cast<std::size_t>(a)]);
    cfg.grid = Grid::make(dim, std::span<const int>(cells_i.data(), static_cast<std::size_t>(dim)),
                          std::span<const double>(lengths.data(), static_cast<std::size_t>(dim)));

    cfg.solver.dt = kv.take_double("solver.dt", cfg.solver.dt);
    cfg.solver.t_end = kv.take_double("solver.t_end", cfg.solver.t_end);
    cfg.solver.sign = kv.take_double("solver.sign", cfg.solver.sign);
    if (const auto fs = kv.take("solver.flux_scheme")) {
        if (*fs == "scharfetter_gummel") cfg.solver.flux_scheme = FluxScheme::scharfetter_gummel;
        else if (*fs == "central_upwind") cfg.solver.flux_scheme = FluxScheme::central_upwind;
        else throw ConfigError("solver.flux_scheme",
                               "must be scharfetter_gummel or central_upwind, got '" + *fs + "'");
    }
    cfg.solver.linear_tol = kv.take_double("solver.linear_tol", cfg.solver.linear_tol);
    cfg.solver.blowup_threshold = kv.take_double("solver.blowup_threshold", cfg.solver.blowup_threshold);
    cfg.solver.positivity_floor = kv.take_double("solver.positivity_floor", cfg.solver.positivity_floor);
    cfg.solver.validate();

    InitialConfig& ini = cfg.initial;
    if (const auto p = kv.take("initial.preset")) {
        const auto it = kPresets.find(*p);
        if (it == kPresets.end())
            throw ConfigError("initial.preset",
                              "must be constant, gaussian-bump, cosine-series or file, got '" + *p + "'");
        ini.preset = it->second;
    }
    ini.u_value = kv.take_double("initial.u_value", ini.u_value);
    ini.v_value = kv.take_double("initial.v_value", ini.v_value);
    ini.mass = kv.take_double("initial.mass", ini.mass);
    ini.width = kv.take_double("initial.width", ini.width);
    {
        auto c = kv.take_list<double>("initial.center", &KeyValues::to_double);
        if (c.empty()) {
            for (int a = 0; a < 3; ++a)
                ini.center[static_cast<std::size_t>(a)] = 0.5 * cfg.grid.length(a);
        } else {
            ini.center = per_axis<double>("initial.center", c, dim, 0.5);
        }
    }
    ini.max_freq = static_cast<int>(kv.take_int("initial.max_freq", ini.max_freq));
    ini.base = kv.take_double("initial.base", ini.base);
    ini.amplitude = kv.take_double("initial.amplitude", ini.amplitude);
    ini.path = kv.take_string("initial.path", ini.path);

    if (!(ini.u_value >= 0.0)) throw ConfigError("initial.u_value", "must be >= 0");
    if (!(ini.v_value >= 0.0)) throw ConfigError("initial.v_value", "must be >= 0");
    if (!(ini.mass > 0.0)) throw ConfigError("initial.mass", "must be positive");
    if (!(ini.width > 0.0)) throw ConfigError("initial.width", "must be positive");
    for (int a = 0; a < dim; ++a) {
        const double c = ini.center[static_cast<std::size_t>(a)];
        if (!(c >= 0.0) || !(c <= cfg.grid.length(a)))
            throw ConfigError("initial.center", "must lie inside the box");
    }
    if (ini.max_freq < 1) throw ConfigError("initial.max_freq", "must be >= 1");
    if (!(ini.base > 0.0)) throw ConfigError("initial.base", "must be positive");
    if (!(ini.amplitude >= 0.0) || ini.amplitude >= 1.0)
        throw ConfigError("initial.amplitude", "must lie in [0,1)");
    if (ini.preset == InitialConfig::Preset::file && ini.path.empty())
        throw ConfigError("initial.path", "required for preset file");

    cfg.output.directory = kv.take_string("output.directory", cfg.output.directory);
    cfg.output.snapshot_stride = kv.take_int("output.snapshot_stride", cfg.output.snapshot_stride);
    cfg.output.csv = kv.take_string("output.csv", cfg.output.csv);
    if (cfg.output.directory.empty()) throw ConfigError("output.directory", "must not be empty");
    if (cfg.output.snapshot_stride < 0)
        throw ConfigError("output.snapshot_stride", "must be >= 0 (0 disables periodic snapshots)");
    if (cfg.output.csv.empty()) throw ConfigError("output.csv", "must not be empty");

    cfg.seed = kv.take_uint("run.seed", cfg.seed);
    kv.finish({"grid", "solver", "initial", "output", "run"});
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& file) {
    return parse_config(read_file(file));
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    const int dim = cfg.grid.dim();
    out << "[grid]\n";
    out << "dim = " << dim << "\n";
    out << "cells =";
    for (int a = 0; a < dim; ++a) out << ' ' << cfg.grid.cells(a);
    out << "\nlengths =";
    for (int a = 0; a < dim; ++a) out << ' ' << format_g17(cfg.grid.length(a));
    out << "\n\n[solver]\n";
    out << "dt = " << format_g17(cfg.solver.dt) << "\n";
    out << "t_end = " << format_g17(cfg.solver.t_end) << "\n";
    out << "sign = " << format_g17(cfg.solver.sign) << "\n";
    out << "flux_scheme = "
        << (cfg.solver.flux_scheme == FluxScheme::scharfetter_gummel ? "scharfetter_gummel"
                                                                     : "central_upwind")
        << "\n";
    out << "linear_tol = " << format_g17(cfg.solver.linear_tol) << "\n";
    out << "blowup_threshold = " << format_g17(cfg.solver.blowup_threshold) << "\n";
    out << "positivity_floor = " << format_g17(cfg.solver.positivity_floor) << "\n";
    out << "\n[initial]\n";
    out << "preset = " << preset_name(cfg.initial.preset) << "\n";
    out << "u_value = " << format_g17(cfg.initial.u_value) << "\n";
    out << "v_value = " << format_g17(cfg.initial.v_value) << "\n";
    out << "mass = " << format_g17(cfg.initial.mass) << "\n";
    out << "width = " << format_g17(cfg.initial.width) << "\n";
    out << "center =";
    for (int a = 0; a < dim; ++a) out << ' ' << format_g17(cfg.initial.center[static_cast<std::size_t>(a)]);
    out << "\nmax_freq = " << cfg.initial.max_freq << "\n";
    out << "base = " << format_g17(cfg.initial.base) << "\n";
    out << "amplitude = " << format_g17(cfg.initial.amplitude) << "\n";
    if (!cfg.initial.path.empty()) out << "path = " << cfg.initial.path << "\n";
    out << "\n[output]\n";
    out << "directory = " << cfg.output.directory << "\n";
    out << "snapshot_stride = " << cfg.output.snapshot_stride << "\n";
    out << "csv = " << cfg.output.csv << "\n";
    out << "\n[run]\n";
    out << "seed = " << cfg.seed << "\n";
    return out.str();
}

State build_initial_state(const RunConfig& cfg) {
    const Grid& g = cfg.grid;
    State s;
    s.t = 0.0;
    switch (cfg.initial.preset) {
    case InitialConfig::Preset::constant:
        s.u = ScalarField(g, cfg.initial.u_value);
        s.v = ScalarField(g, cfg.initial.v_value);
        return s;
    case InitialConfig::Preset::gaussian_bump: {
        ScalarField raw(g);
        const double inv2s2 = 1.0 / (2.0 * cfg.initial.width * cfg.initial.width);
        for (int i = 0; i < g.cells(0); ++i)
            for (int j = 0; j < g.cells(1); ++j)
                for (int k = 0; k < g.cells(2); ++k) {
                    double r2 = 0.0;
                    const int idx[3] = {i, j, k};
                    for (int a = 0; a < g.dim(); ++a) {
                        const double d = g.center(a, idx[a]) - cfg.initial.center[static_cast<std::size_t>(a)];
                        r2 += d * d;
                    }
                    raw.at(i, j, k) = std::exp(-r2 * inv2s2);
                }
        const double scale = cfg.initial.mass / integrate(raw);
        for (std::int64_t i = 0; i < raw.size(); ++i) raw[i] *= scale;
        s.u = std::move(raw);
        s.v = ScalarField(g, cfg.initial.v_value);
        return s;
    }
    case InitialConfig::Preset::cosine_series: {
        SampleParams p{g, cfg.initial.max_freq, cfg.initial.base, cfg.initial.amplitude};
        s.u = realize(sample(p, cfg.seed));
        s.v = realize(sample(p, cfg.seed + 1));
        return s;
    }
    case InitialConfig::Preset::file: {
        State loaded = read_snapshot(cfg.initial.path);
        if (!(loaded.u.grid() == g))
            throw ConfigError("initial.path", "snapshot grid does not match the [grid] block");
        loaded.t = 0.0;
        return loaded;
    }
    }
    throw ConfigError("initial.preset", "unhandled preset");
}

BatchConfig parse_batch(const std::string& text) {
    KeyValues kv(text);
    BatchConfig b;

    b.checks = kv.take_list<std::string>(
        "batch.check", [](const std::string&, const std::string& v) { return v; });
    if (b.checks.empty()) throw ConfigError("batch.check", "required key is missing");
    const std::set<std::string> known = {"winkler", "appendixA", "holder", "boundary_sign", "probe"};
    for (const std::string& c : b.checks)
        if (!known.count(c))
            throw ConfigError("batch.check",
                              "unknown check '" + c +
                                  "'; known: winkler appendixA holder boundary_sign probe");

    if (auto dims = kv.take_list<std::int64_t>("batch.dims", &KeyValues::to_int); !dims.empty()) {
        b.dims.clear();
        for (std::int64_t d : dims) {
            if (d < 1 || d > 3) throw ConfigError("batch.dims", "dimensions must be 1, 2 or 3");
            b.dims.push_back(static_cast<int>(d));
        }
    }
    b.samples = static_cast<int>(kv.take_int("batch.samples", b.samples));
    if (b.samples < 1) throw ConfigError("batch.samples", "must be >= 1; an empty batch is a usage error");
    b.cells = static_cast<int>(kv.take_int("batch.cells", b.cells));
    if (b.cells < Grid::min_cells_per_axis)
        throw ConfigError("batch.cells", "must be >= 4");
    b.seed = kv.take_uint("batch.seed", b.seed);
    b.max_freq = static_cast<int>(kv.take_int("batch.max_freq", b.max_freq));
    if (b.max_freq < 1) throw ConfigError("batch.max_freq", "must be >= 1");
    b.base = kv.take_double("batch.base", b.base);
    if (!(b.base > 0.0)) throw ConfigError("batch.base", "must be positive");
    b.amplitude = kv.take_double("batch.amplitude", b.amplitude);
    if (!(b.amplitude >= 0.0) || b.amplitude >= 1.0)
        throw ConfigError("batch.amplitude", "must lie in [0,1)");
    b.bound_scale = kv.take_double("batch.bound_scale", b.bound_scale);
    if (!(b.bound_scale > 0.0)) throw ConfigError("batch.bound_scale", "must be positive");
    b.refine = kv.take_bool("batch.refine", b.refine);
    b.directory = kv.take_string("output.directory", b.directory);
    if (b.directory.empty()) throw ConfigError("output.directory", "must not be empty");

    kv.finish({"batch", "output"});
    return b;
}

BatchConfig parse_batch_file(const std::filesystem::path& file) {
    return parse_batch(read_file(file));
}

} // namespace chemrep
