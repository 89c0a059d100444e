#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <chemrep/errors.hpp>
#include <chemrep/io.hpp>

using namespace chemrep;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
    const fs::path p = fs::temp_directory_path() / "chemrep_test_io";
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const fs::path& file, const std::string& bytes) {
    std::ofstream out(file, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

bool fields_equal(const ScalarField& a, const ScalarField& b) {
    return a.size() == b.size() &&
           std::memcmp(a.values().data(), b.values().data(),
                       static_cast<std::size_t>(a.size()) * sizeof(double)) == 0;
}

std::array<double, 19> double_fields(const DiagnosticsRecord& r) {
    return {r.t,
            r.mass_u,
            r.mass_v,
            r.lyapunov,
            r.dissipation,
            r.fisher_u,
            r.I,
            r.J,
            r.gradsqrt_L2sq,
            r.crit_theorem1,
            r.crit_appendixB,
            r.K_groenwall,
            r.concavity_margin,
            r.lemma43_residual,
            r.remark41_quantity,
            r.int_I,
            r.sup_u,
            r.l3_u,
            r.clamped_fraction};
}

} // namespace

TEST_CASE("format_g17 round-trips doubles bitwise") {
    const double cases[] = {0.1,    1.0 / 3.0, -0.0,   1e308, 5e-324,
                            2.0,    6.02214076e23, -1.7976931348623157e308,
                            3.141592653589793, 1.0000000000000002};
    for (double x : cases) {
        CAPTURE(x);
        const std::string s = format_g17(x);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(std::memcmp(&back, &x, sizeof x) == 0);
    }
    CHECK(format_g17(2.0) == "2"); // shortest form, no trailing noise
    CHECK(format_g17(-0.0) == "-0");
}

TEST_CASE("snapshot round-trip is bit exact") {
    const int cells[] = {5, 7, 4};
    const double lengths[] = {1.0, 0.5, 2.0};
    const Grid g = Grid::make(3, cells, lengths);
    State s{ScalarField(g), ScalarField(g), 0.7071067811865476};
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (std::int64_t i = 0; i < s.u.size(); ++i) {
        s.u[i] = std::ldexp(dist(rng), static_cast<int>(rng() % 64) - 32);
        s.v[i] = dist(rng);
    }
    s.u[0] = 5e-324;  // denormal survives
    s.u[1] = -0.0;    // signed zero survives
    s.v[2] = 1e308;

    const fs::path file = scratch_dir() / "roundtrip.snp";
    write_snapshot(file, s);
    const State back = read_snapshot(file);
    CHECK(back.u.grid() == g);
    CHECK(back.t == s.t);
    CHECK(fields_equal(back.u, s.u));
    CHECK(fields_equal(back.v, s.v));

    // Layout spot checks: magic, version, dim, first extent.
    const std::string bytes = slurp(file);
    REQUIRE(bytes.size() >= 16);
    CHECK(bytes.substr(0, 8) == "CHEMRSNP");
    std::uint32_t version = 0, dim = 0;
    std::memcpy(&version, bytes.data() + 8, 4);
    std::memcpy(&dim, bytes.data() + 12, 4);
    CHECK(version == 1);
    CHECK(dim == 3);
    const std::size_t expect = 8 + 4 + 4 + 3 * 8 + 3 * 8 + 8 +
                               2 * sizeof(double) * static_cast<std::size_t>(s.u.size());
    CHECK(bytes.size() == expect);
}

TEST_CASE("snapshot rejects corruption") {
    const Grid g = Grid::make_uniform(1, 8);
    const State s{ScalarField(g, 1.0), ScalarField(g, 2.0), 0.25};
    const fs::path file = scratch_dir() / "corrupt.snp";
    write_snapshot(file, s);
    const std::string good = slurp(file);

    SUBCASE("bad magic") {
        std::string bad = good;
        bad[0] = 'X';
        spit(file, bad);
        CHECK_THROWS_AS((void)read_snapshot(file), IoError);
    }
    SUBCASE("unsupported version") {
        std::string bad = good;
        bad[8] = 9;
        spit(file, bad);
        CHECK_THROWS_AS((void)read_snapshot(file), IoError);
    }
    SUBCASE("truncated payload") {
        spit(file, good.substr(0, good.size() - 5));
        CHECK_THROWS_AS((void)read_snapshot(file), IoError);
    }
    SUBCASE("trailing garbage") {
        spit(file, good + "zz");
        CHECK_THROWS_AS((void)read_snapshot(file), IoError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)read_snapshot(scratch_dir() / "nope.snp"), IoError);
    }
}

TEST_CASE("timeseries writer/reader round-trips every field bitwise") {
    std::vector<DiagnosticsRecord> rows(4);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        DiagnosticsRecord& r = rows[k];
        r.step = static_cast<std::int64_t>(k) * 17;
        r.t = 1e-3 * static_cast<double>(k);
        double* fields[] = {&r.mass_u,        &r.mass_v,         &r.lyapunov,
                            &r.dissipation,   &r.fisher_u,       &r.I,
                            &r.J,             &r.gradsqrt_L2sq,  &r.crit_theorem1,
                            &r.crit_appendixB, &r.K_groenwall,   &r.concavity_margin,
                            &r.lemma43_residual, &r.remark41_quantity, &r.int_I,
                            &r.sup_u,         &r.l3_u,           &r.clamped_fraction};
        for (double* f : fields) *f = std::ldexp(dist(rng), static_cast<int>(rng() % 40) - 20);
        r.clamped_fraction = 0.0625; // keep one representative exact value
    }
    const fs::path file = scratch_dir() / "series.csv";
    {
        TimeSeriesWriter w(file);
        for (const auto& r : rows) w.write(r);
        w.flush();
    }
    const std::vector<DiagnosticsRecord> back = read_timeseries(file);
    REQUIRE(back.size() == rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        CAPTURE(k);
        CHECK(back[k].step == rows[k].step);
        const auto a = double_fields(rows[k]);
        const auto b = double_fields(back[k]);
        for (std::size_t f = 0; f < a.size(); ++f) {
            CAPTURE(f);
            CHECK(std::memcmp(&a[f], &b[f], sizeof(double)) == 0);
        }
    }

    const std::string text = slurp(file);
    CHECK(text.rfind(std::string(timeseries_schema) + "\n", 0) == 0);
    CHECK(text.find(timeseries_header) != std::string::npos);
    CHECK(text.find('\r') == std::string::npos); // '\n' endings only
}

TEST_CASE("timeseries reader rejects malformed input") {
    const fs::path file = scratch_dir() / "bad.csv";
    const std::string schema_and_header =
        std::string(timeseries_schema) + "\n" + timeseries_header + "\n";

    SUBCASE("wrong schema line") {
        spit(file, "# other v9\n" + std::string(timeseries_header) + "\n");
        CHECK_THROWS_AS((void)read_timeseries(file), IoError);
    }
    SUBCASE("wrong header") {
        spit(file, std::string(timeseries_schema) + "\nstep,t\n");
        CHECK_THROWS_AS((void)read_timeseries(file), IoError);
    }
    SUBCASE("short row names its line") {
        spit(file, schema_and_header + "0,0,1\n");
        CHECK_THROWS_WITH_AS((void)read_timeseries(file), doctest::Contains("line 3"), IoError);
    }
    SUBCASE("non-numeric cell") {
        spit(file, schema_and_header +
                       "0,zero,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1\n");
        CHECK_THROWS_AS((void)read_timeseries(file), IoError);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS((void)read_timeseries(scratch_dir() / "absent.csv"), IoError);
    }
}

TEST_CASE("output root honors CHEMREP_OUTPUT_ROOT") {
    const fs::path root = scratch_dir() / "rootdir";
    fs::create_directories(root);
    REQUIRE(setenv("CHEMREP_OUTPUT_ROOT", root.c_str(), 1) == 0);
    CHECK(output_root() == root);
    const fs::path made = resolve_output_dir("a/b");
    CHECK(made == root / "a" / "b");
    CHECK(fs::is_directory(made));
    // Absolute paths pass through untouched.
    const fs::path abs_dir = scratch_dir() / "absolute_out";
    CHECK(resolve_output_dir(abs_dir) == abs_dir);
    CHECK(fs::is_directory(abs_dir));

    REQUIRE(setenv("CHEMREP_OUTPUT_ROOT", "", 1) == 0);
    CHECK(output_root() == fs::current_path()); // empty value falls back to cwd
    REQUIRE(unsetenv("CHEMREP_OUTPUT_ROOT") == 0);
    CHECK(output_root() == fs::current_path());
}
