#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <swarmopt/cli.hpp>

using namespace swarmopt;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s)
{
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);)
        out.push_back(l);
    return out;
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("swarmopt_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

int expect_usage_error(const std::vector<std::string>& args, const std::string& mention)
{
    try {
        parse_args(args);
    } catch (const CliExit& e) {
        EXPECT_NE(std::string(e.what()).find(mention), std::string::npos) << e.what();
        return e.status();
    }
    ADD_FAILURE() << "expected a usage error";
    return 0;
}

ComparisonRow sample_row()
{
    return ComparisonRow{"sphere", 0.1, 7e-14, 0.06, 43.34, 2167, 0.47, 20, 1};
}

} // namespace

TEST(ParseArgs, Defaults)
{
    const auto cfg = parse_args({"run", "--function", "sphere", "--gamma", "0.1"});
    EXPECT_EQ(cfg.subcommand, Subcommand::run);
    EXPECT_EQ(cfg.function_name, "sphere");
    EXPECT_EQ(cfg.gamma, 0.1);
    EXPECT_EQ(cfg.algorithm, Algorithm::aclpso);
    EXPECT_EQ(cfg.particles, 40u);
    EXPECT_EQ(cfg.dims, 30u);
    EXPECT_EQ(cfg.iterations, 5000u);
    EXPECT_EQ(cfg.runs, 20u);
    EXPECT_EQ(cfg.output_format, OutputFormat::csv);
    EXPECT_FALSE(cfg.trace_enabled);
    EXPECT_EQ(cfg.output_path, fs::path("swarmopt_run.csv"));
}

TEST(ParseArgs, AllFlags)
{
    const auto cfg = parse_args({"run", "--function", "Ackley", "--algo", "CLPSO", "--gamma", "0", "--particles", "12",
                                 "--dims", "4", "--iters", "7", "--runs", "3", "--seed", "99", "--out", "x.json",
                                 "--trace", "--format", "json"});
    EXPECT_EQ(cfg.function_name, "ackley");
    EXPECT_EQ(cfg.algorithm, Algorithm::clpso);
    EXPECT_EQ(cfg.gamma, 0.0);
    EXPECT_EQ(cfg.particles, 12u);
    EXPECT_EQ(cfg.dims, 4u);
    EXPECT_EQ(cfg.iterations, 7u);
    EXPECT_EQ(cfg.runs, 3u);
    EXPECT_EQ(cfg.seed, 99u);
    EXPECT_EQ(cfg.output_path, fs::path("x.json"));
    EXPECT_TRUE(cfg.trace_enabled);
    EXPECT_EQ(cfg.output_format, OutputFormat::json);
}

TEST(ParseArgs, UsageErrors)
{
    EXPECT_EQ(expect_usage_error({"run", "--function", "nosuch"}, "--function"), 2);
    EXPECT_EQ(expect_usage_error({"run", "--bogus", "1"}, "--bogus"), 2);
    EXPECT_EQ(expect_usage_error({"run", "--gamma", "abc"}, "--gamma"), 2);
    EXPECT_EQ(expect_usage_error({"run", "--gamma", "-1"}, "--gamma"), 2);
    EXPECT_EQ(expect_usage_error({"run", "--runs", "0"}, "--runs"), 2);
    EXPECT_EQ(expect_usage_error({"run", "--algo", "olpso"}, "--algo"), 2);
    EXPECT_EQ(expect_usage_error({"run", "--format", "xml"}, "--format"), 2);
    EXPECT_EQ(expect_usage_error({"suite", "--function", "sphere"}, "--function"), 2);
    EXPECT_EQ(expect_usage_error({}, "subcommand"), 2);
}

TEST(ParseArgs, Help)
{
    try {
        parse_args({"run", "--help"});
        FAIL();
    } catch (const CliExit& e) {
        EXPECT_EQ(e.status(), 0);
        EXPECT_NE(std::string(e.what()).find("--gamma"), std::string::npos);
    }
}

TEST(ParseArgs, SuitePlan)
{
    const auto cfg = parse_args({"suite", "--runs", "200"});
    EXPECT_EQ(cfg.subcommand, Subcommand::suite);
    EXPECT_EQ(cfg.runs, 200u);
    const auto pairs = plan(cfg);
    ASSERT_EQ(pairs.size(), 10u);
    EXPECT_EQ(pairs.front().first.function_name, "sphere");
    EXPECT_EQ(pairs.front().first.gamma, 1e-1);
    EXPECT_EQ(pairs.back().first.function_name, "ackley");
    EXPECT_EQ(pairs.back().first.gamma, 1e-3);
    for (const auto& [a, c] : pairs)
        EXPECT_EQ(a.num_runs, 200u);
}

TEST(FormatDouble, RoundTrips)
{
    for (double v : {0.1, 1.0 / 3.0, 7e-14, 43.34, 1e300, -2.5e-308, 0.0})
        EXPECT_EQ(std::stod(format_double(v)), v);
    EXPECT_EQ(format_double(0.1), "0.1");
}

TEST_F(TempDir, SummaryCsvShape)
{
    const auto p = dir_ / "s.csv";
    write_summary(std::vector{sample_row()}, OutputFormat::csv, p);
    const auto ls = lines(slurp(p));
    ASSERT_EQ(ls.size(), 2u);
    EXPECT_EQ(ls[0],
              "function,gamma,clpso_mean,aclpso_mean,pct_computations,effective_iterations,clpso_effective_mean,runs,seed");
    EXPECT_EQ(ls[1], "sphere,0.1,7e-14,0.06,43.34,2167,0.47,20,1");
}

TEST_F(TempDir, SummaryJsonMirrorsCsv)
{
    const auto p = dir_ / "s.json";
    write_summary(std::vector{sample_row()}, OutputFormat::json, p);
    const auto j = nlohmann::json::parse(slurp(p));
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 1u);
    const auto& o = j[0];
    EXPECT_EQ(o.size(), 9u);
    EXPECT_EQ(o["function"], "sphere");
    EXPECT_EQ(o["gamma"].get<double>(), 0.1);
    EXPECT_EQ(o["clpso_mean"].get<double>(), 7e-14);
    EXPECT_EQ(o["effective_iterations"].get<int>(), 2167);
    EXPECT_EQ(o["clpso_effective_mean"].get<double>(), 0.47);
}

TEST_F(TempDir, SummaryByteIdentical)
{
    const std::vector rows{sample_row(), sample_row()};
    write_summary(rows, OutputFormat::csv, dir_ / "a.csv");
    write_summary(rows, OutputFormat::csv, dir_ / "b.csv");
    EXPECT_EQ(slurp(dir_ / "a.csv"), slurp(dir_ / "b.csv"));
}

TEST_F(TempDir, UnwritablePath)
{
    EXPECT_THROW(write_summary(std::vector{sample_row()}, OutputFormat::csv, dir_ / "missing" / "s.csv"), io_error);
    EXPECT_FALSE(fs::exists(dir_ / "missing"));
    EXPECT_THROW(write_summary(std::vector<ComparisonRow>{}, OutputFormat::csv, dir_ / "e.csv"), std::invalid_argument);
}

TEST_F(TempDir, TraceFiles)
{
    const auto spec = make_experiment("rosenbrock", Algorithm::aclpso, 0.1, 6, 4, 10, 1, 5);
    const auto recs = run_experiment(spec);
    const auto paths = write_traces(recs, dir_ / "tr", "rosen");
    ASSERT_EQ(paths.size(), 1u);
    EXPECT_EQ(paths[0].filename(), "rosen_run0.csv");
    const auto ls = lines(slurp(paths[0]));
    ASSERT_EQ(ls.size(), 11u);
    EXPECT_EQ(ls[0], "iteration,best_fitness,cumulative_multiplications");
    const auto t = read_trace(paths[0]);
    ASSERT_EQ(t.best_fitness.size(), 10u);
    for (std::size_t i = 0; i < 10; ++i) {
        EXPECT_EQ(t.iteration[i], i + 1);
        EXPECT_EQ(t.best_fitness[i], recs[0].best_fitness_trace[i]);
        if (i > 0) {
            EXPECT_LE(t.best_fitness[i], t.best_fitness[i - 1]);
            EXPECT_GT(t.cumulative_multiplications[i], t.cumulative_multiplications[i - 1]);
        }
    }
}

TEST_F(TempDir, RunCliEndToEnd)
{
    auto cfg = parse_args({"compare", "--function", "griewank", "--gamma", "0.1", "--particles", "6", "--dims", "3",
                           "--iters", "20", "--runs", "2", "--trace", "--out", (dir_ / "cmp.csv").string()});
    std::ostringstream log;
    ASSERT_EQ(run_cli(cfg, log), 0) << log.str();
    const auto summary = lines(slurp(dir_ / "cmp.csv"));
    ASSERT_EQ(summary.size(), 2u);
    EXPECT_EQ(summary[1].rfind("griewank,0.1,", 0), 0u);

    const auto meta = nlohmann::json::parse(slurp(metadata_path(dir_ / "cmp.csv")));
    EXPECT_EQ(meta["config"]["function"], "griewank");
    EXPECT_EQ(meta["version"], std::string(version_string));
    EXPECT_EQ(meta["rng"], std::string(rng_algorithm));
    EXPECT_EQ(meta["experiments"].size(), 1u);

    std::size_t trace_files = 0;
    for (const auto& e : fs::directory_iterator(trace_dir(dir_ / "cmp.csv"))) {
        (void)e;
        ++trace_files;
    }
    EXPECT_EQ(trace_files, 4u); // 2 runs x 2 algorithms

    // Byte-identical rerun.
    const auto first = slurp(dir_ / "cmp.csv");
    const auto first_meta = slurp(metadata_path(dir_ / "cmp.csv"));
    cfg.threads = 1;
    ASSERT_EQ(run_cli(cfg, log), 0);
    EXPECT_EQ(slurp(dir_ / "cmp.csv"), first);
    EXPECT_EQ(slurp(metadata_path(dir_ / "cmp.csv")), first_meta);
}

TEST_F(TempDir, RunCliSingleBattery)
{
    const auto cfg = parse_args({"run", "--function", "sphere", "--algo", "pso", "--particles", "5", "--dims", "2",
                                 "--iters", "15", "--runs", "3", "--format", "json", "--out",
                                 (dir_ / "run.json").string()});
    std::ostringstream log;
    ASSERT_EQ(run_cli(cfg, log), 0) << log.str();
    const auto j = nlohmann::json::parse(slurp(dir_ / "run.json"));
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["algorithm"], "pso");
    EXPECT_EQ(j[0]["runs"].get<int>(), 3);
    EXPECT_EQ(j[0]["pct_computations"].get<double>(), 100.0);
}

TEST_F(TempDir, RunCliIoFailureLeavesNothing)
{
    const auto cfg = parse_args({"run", "--function", "sphere", "--particles", "5", "--dims", "2", "--iters", "5",
                                 "--runs", "1", "--out", (dir_ / "nope" / "r.csv").string()});
    std::ostringstream log;
    EXPECT_NE(run_cli(cfg, log), 0);
    EXPECT_NE(log.str().find("I/O error"), std::string::npos);
    EXPECT_TRUE(fs::is_empty(dir_));
}
