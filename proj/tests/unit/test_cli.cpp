#include <gtest/gtest.h>

#include "adiabatic/cli.hpp"

using namespace adiabatic;
using namespace adiabatic::cli;

namespace {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::vector<double> col(const std::string& name) const {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw std::runtime_error("no column " + name);
        const std::size_t j = std::size_t(it - header.begin());
        std::vector<double> out;
        for (const auto& r : rows) out.push_back(std::stod(r.at(j)));
        return out;
    }
    std::vector<std::string> text(const std::string& name) const {
        const std::size_t j = std::size_t(std::find(header.begin(), header.end(), name) - header.begin());
        std::vector<std::string> out;
        for (const auto& r : rows) out.push_back(r.at(j));
        return out;
    }
};

Table parse_csv(const std::string& s) {
    Table t;
    std::istringstream is(s);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string c;
        while (std::getline(ls, c, ',')) cells.push_back(c);
        if (first)
            t.header = cells;
        else
            t.rows.push_back(cells);
        first = false;
    }
    return t;
}

const std::string& file(const Output& o, const std::string& name) {
    for (const auto& f : o.files)
        if (f.first == name) return f.second;
    throw std::runtime_error("missing output " + name);
}

Output run(const std::string& cmd, const std::string& cfg, int workers = 1, std::uint64_t seed = 1) {
    Config c = Config::parse(cfg);
    return run_command(cmd, c, RunContext{seed, workers});
}

}  // namespace

TEST(ConfigTest, UnknownKeyNamesTheKey) {
    try {
        Config::parse("[anneal]\nA = 10\nbogus = 3\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("anneal.bogus"), std::string::npos) << e.what();
    }
    EXPECT_THROW(Config::parse("[nosuch]\nA = 1\n"), ConfigError);
    EXPECT_THROW(Config::parse("A = 1\n"), ConfigError);
    EXPECT_THROW(Config::parse("[anneal\nA = 1\n"), ConfigError);
}

TEST(ConfigTest, TypedParsing) {
    Config c = Config::parse("[anneal]\nA = 12.5\nflux_override = yes\n[bounds]\nA_list = 10, 12,14\n[run]\nseed = 7\n");
    EXPECT_EQ(c.get_double("anneal.A", 0), 12.5);
    EXPECT_TRUE(c.get_bool("anneal.flux_override", false));
    EXPECT_EQ(c.get_list("bounds.A_list", {}), (std::vector<double>{10, 12, 14}));
    EXPECT_EQ(c.get_int("run.seed", 1), 7);
    EXPECT_EQ(c.get_double("anneal.E_C", 1.5), 1.5);

    Config bad = Config::parse("[anneal]\nA = 1O\nflux_override = maybe\n[run]\nseed = 2.5\n[path]\nkind = spiral\n");
    EXPECT_THROW(bad.get_double("anneal.A", 0), ConfigError);
    EXPECT_THROW(bad.get_bool("anneal.flux_override", false), ConfigError);
    EXPECT_THROW(bad.get_int("run.seed", 0), ConfigError);
    EXPECT_THROW(bad.get_string("path.kind", "csfq", {"csfq", "random"}), ConfigError);
    EXPECT_THROW(bad.get_double("anneal.nope", 0), ConfigError);
}

TEST(ConfigTest, ManifestEchoesDefaults) {
    Config c;
    RunContext ctx = resolve_run(c, std::nullopt, 3);
    EXPECT_EQ(ctx.seed, 1u);
    EXPECT_EQ(ctx.workers, 3);
    Output o = run_command("schedule", c, ctx);
    const std::string m = manifest("schedule", c, o);
    for (const char* line : {"command = schedule", "[anneal]", "A = 10", "delta = 1.0000000000000001e-09", "flux_override = false",
                             "mode = exact-implicit", "intervals = 400", "exact_gap = false", "seed = 1", "workers = 3"})
        EXPECT_NE(m.find(line), std::string::npos) << line << "\n" << m;
}

TEST(ConfigTest, FlagsOverrideRunSection) {
    Config c = Config::parse("[run]\nseed = 5\nworkers = 2\n");
    RunContext a = resolve_run(c, std::nullopt, std::nullopt);
    EXPECT_EQ(a.seed, 5u);
    RunContext b = resolve_run(c, 9, 1);
    EXPECT_EQ(b.seed, 9u);
    EXPECT_EQ(b.workers, 1);
    Config z = Config::parse("[run]\nworkers = 0\n");
    EXPECT_THROW(resolve_run(z, std::nullopt, std::nullopt), ConfigError);
}

TEST(ParallelMap, OrderAndErrors) {
    auto r = parallel_map(50, 4, [](std::size_t i) { return int(i * i); });
    for (int i = 0; i < 50; ++i) EXPECT_EQ(r[std::size_t(i)], i * i);
    EXPECT_TRUE(parallel_map(0, 3, [](std::size_t) { return 1; }).empty());
    try {
        parallel_map(10, 3, [](std::size_t i) -> int {
            if (i == 3 || i == 7) throw NumericalError("cell " + std::to_string(i));
            return 0;
        });
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_STREQ(e.what(), "cell 3");
    }
}

TEST(CsvTest, Formatting) {
    Csv c({"a", "b", "c", "d"});
    c << 0.1 << 3 << true << std::string("x");
    c.end();
    EXPECT_EQ(c.str(), "a,b,c,d\n0.10000000000000001,3,true,x\n");
}

TEST(Commands, ScheduleByteIdenticalOnRepeat) {
    const std::string cfg = "[anneal]\nA = 12\n[schedule]\nintervals = 50\n";
    EXPECT_EQ(file(run("schedule", cfg), "schedule.csv"), file(run("schedule", cfg), "schedule.csv"));
}

TEST(Commands, BoundsIndependentOfWorkerCount) {
    const std::string cfg = "[path]\nkind = random\n[bounds]\ns_star_list = 0.2,0.4,0.6,0.8,1\n";
    Output a = run("bounds", cfg, 1), b = run("bounds", cfg, 3);
    for (const char* f : {"bounds_summary.csv", "bounds_rows.csv", "theta_profile.csv"}) EXPECT_EQ(file(a, f), file(b, f)) << f;
    Output c = run("bounds", cfg, 1, 2);
    EXPECT_NE(file(a, "bounds_summary.csv"), file(c, "bounds_summary.csv"));
}

TEST(Commands, SpectrumGapPositive) {
    Output o = run("spectrum", "[anneal]\nA = 10\ndelta = 1e-9\n[spectrum]\nintervals = 20\n");
    Table t = parse_csv(file(o, "spectrum.csv"));
    ASSERT_EQ(t.rows.size(), 21u);
    for (double d : t.col("delta")) EXPECT_GT(d, 0);
    EXPECT_TRUE(o.flags.empty());
    EXPECT_EQ(t.header.front(), "s");
    EXPECT_EQ(t.header.back(), "r");
}

TEST(Commands, FluxAtPiWarns) {
    EXPECT_THROW(run("schedule", "[anneal]\nF = 3.141592653589793\n"), ValidationError);
    Output o = run("schedule", "[anneal]\nF = 3.141592653589793\nflux_override = true\n[schedule]\nintervals = 20\n");
    bool found = false;
    for (const auto& w : o.warnings) found = found || w.find("F = pi") != std::string::npos;
    EXPECT_TRUE(found);
}

TEST(Commands, ConstantPathBoundsVanish) {
    Table t = parse_csv(file(run("bounds", "[path]\nkind = constant\n"), "bounds_summary.csv"));
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.col("theta_general")[0], 0);
    EXPECT_EQ(t.col("theta_jrs")[0], 0);
    EXPECT_EQ(t.col("theta_new")[0], 0);
}

TEST(Commands, CsfqRatioFallsWithBarrierAndProfileMonotone) {
    Output o = run("bounds", "[bounds]\nA_list = 10,12,14\n[schedule]\ns_star = 0.9\nintervals = 100\n");
    Table t = parse_csv(file(o, "bounds_summary.csv"));
    std::vector<double> r = t.col("ratio_new_jrs");
    ASSERT_EQ(r.size(), 3u);
    EXPECT_GT(r[0], r[1]);
    EXPECT_GT(r[1], r[2]);
    Table p = parse_csv(file(o, "theta_profile.csv"));
    std::vector<double> cell = p.col("cell"), g = p.col("theta_general"), j = p.col("theta_jrs"), n = p.col("theta_new");
    for (std::size_t i = 1; i < g.size(); ++i) {
        if (cell[i] != cell[i - 1]) continue;
        EXPECT_GE(g[i], g[i - 1]);
        EXPECT_GE(j[i], j[i - 1]);
        EXPECT_GE(n[i], n[i - 1]);
    }
}

TEST(Commands, EvolveTwoLevelWithinBound) {
    Output o = run("evolve", "[path]\nkind = two-level\n[schedule]\ns_star = 1\n[evolve]\ninclude_zero = true\n");
    Table t = parse_csv(file(o, "evolve.csv"));
    ASSERT_EQ(t.rows.size(), 6u);
    EXPECT_EQ(t.col("t_f")[0], 0);
    EXPECT_EQ(t.col("diff_norm")[0], 0);
    for (const auto& w : t.text("within_bound")) EXPECT_EQ(w, "true");
    for (const auto& w : t.text("leak_ok")) EXPECT_EQ(w, "true");
    Table s = parse_csv(file(o, "evolve_summary.csv"));
    EXPECT_EQ(s.col("regression_points")[0], 5);
    EXPECT_GT(s.col("slope")[0], -1.3);
    EXPECT_LT(s.col("slope")[0], -0.7);
    EXPECT_TRUE(o.flags.empty());
}

TEST(Commands, EvolveNeedsExplicitTimesOnFlatPath) {
    EXPECT_THROW(run("evolve", "[path]\nkind = constant\n"), ConfigError);
}

TEST(Commands, EffectiveFrameMatchesSpectrum) {
    Output o = run("effective", "[path]\nkind = random\n[schedule]\ns_star = 1\n");
    Table t = parse_csv(file(o, "effective.csv"));
    for (double e : t.col("eig_error")) EXPECT_LT(e, 1e-8);
    EXPECT_TRUE(o.flags.empty());
    EXPECT_THROW(run("effective", "[path]\nkind = random\n[effective]\nobservable = well\n"), ConfigError);
}

TEST(Commands, VerifyPassListAndFixture) {
    const std::string cfg = "[verify]\ninstances = 10\ndims = 4,6\n";
    Output a = run("verify", cfg);
    EXPECT_TRUE(a.flags.empty());
    EXPECT_EQ(file(a, "verify.csv"), file(run("verify", cfg), "verify.csv"));
    Output b = run("verify", cfg + "fixture = non-hermitian\n");
    ASSERT_EQ(b.flags.size(), 1u);
    EXPECT_NE(b.flags[0].find("hermiticity"), std::string::npos);
    Table t = parse_csv(file(b, "verify.csv"));
    EXPECT_EQ(t.text("pass")[0], "false");
    EXPECT_EQ(t.text("invariant")[0], "hermiticity");
}

TEST(Execute, ExitCodesAndFiles) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "adiabatic_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& body) {
        std::ofstream(dir / name) << body;
        return (dir / name).string();
    };
    std::ostringstream log, err;
    EXPECT_EQ(execute("schedule", write("bad.ini", "[anneal]\nbogus = 1\n"), (dir / "a").string(), {}, {}, log, err), 2);
    EXPECT_NE(err.str().find("anneal.bogus"), std::string::npos);
    EXPECT_EQ(execute("schedule", write("bad2.ini", "[anneal]\nA = x\n"), (dir / "a").string(), {}, {}, log, err), 2);
    EXPECT_EQ(execute("nosuch", "", (dir / "a").string(), {}, {}, log, err), 2);
    EXPECT_EQ(execute("schedule", write("ok.ini", "[schedule]\nintervals = 10\n"), (dir / "b").string(), 4, 2, log, err), 0);
    for (const char* f : {"schedule.csv", "summary.txt", "manifest.txt"}) EXPECT_TRUE(fs::exists(dir / "b" / f)) << f;
    EXPECT_EQ(execute("verify", write("v.ini", "[verify]\ninstances = 3\ndims = 4\nfixture = non-hermitian\n"),
                      (dir / "c").string(), {}, {}, log, err),
              1);
    // step control gives up before the whole-path change settles
    EXPECT_EQ(execute("evolve",
                      write("n.ini", "[path]\nkind = two-level\n[evolve]\ntf_multiples = 2\ninitial_steps = 2\n"
                                     "max_doublings = 1\ntolerance = 1e-14\n"),
                      (dir / "d").string(), {}, {}, log, err),
              3);
    EXPECT_NE(err.str().find("numerical failure"), std::string::npos);
    fs::remove_all(dir);
}
