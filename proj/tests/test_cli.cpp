#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "apstat/runner.hpp"
#include "apstat/sampler.hpp"
#include "test_helpers.hpp"

using namespace apstat;
using cli::RunConfig;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct TempDir {
    std::filesystem::path dir;
    TempDir(const char* tag) : dir(std::filesystem::temp_directory_path() / tag) {
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
    }
    std::string str() const { return dir.string(); }
};

}  // namespace

TEST_CASE("run config parsing and validation") {
    const auto cfg = RunConfig::from_string("a = 1\n# comment\nb=two # trailing\n\nc = 3.5\n");
    CHECK(cfg.get("a") == "1");
    CHECK(cfg.get("b") == "two");
    CHECK(cfg.get_num("c", 0, 0, 10) == 3.5);
    CHECK(cfg.get_num("missing", 7.0, 0, 10) == 7.0);
    CHECK_THROWS(cfg.get_num("c", 0, 0, 1));  // out of range
    CHECK_THROWS(RunConfig::from_string("a = 1\na = 2\n"));
    CHECK_THROWS(RunConfig::from_string("novalue\n"));
    CHECK_THROWS(cfg.require_known_keys({"a", "b"}));
    CHECK_NOTHROW(cfg.require_known_keys({"a", "b", "c"}));
}

TEST_CASE("model_from_config sources") {
    // example spectrum
    const auto ex = cli::model_from_config(
        RunConfig::from_string("example_a = 1\nexample_b = 1\nexample_n = 50\nexample_seed = 3\n"));
    CHECK(ex.size() == 100);

    // explicit kind
    const auto psi = cli::model_from_config(RunConfig::from_string(
        "explicit_kind = psi\nzeros = " + testutil::zeros_path() + "\ntruncation_index = 10\n"));
    CHECK(psi.size() == 20);

    // file source round-trip
    const std::string path = "/tmp/apstat_model_roundtrip.txt";
    spectra::save_text(ex, path);
    const auto loaded = cli::model_from_config(RunConfig::from_string("model_file = " + path + "\n"));
    CHECK(loaded.size() == ex.size());

    CHECK_THROWS(cli::model_from_config(RunConfig::from_string("model_file = /nonexistent\n")));
    CHECK_THROWS(cli::model_from_config(RunConfig::from_string("")));
}

TEST_CASE("cmd_simulate writes deterministic real-valued paths for psi") {
    TempDir tmp("apstat_sim");
    const std::string cfg_text = "explicit_kind = psi\nzeros = " + testutil::zeros_path() +
                                 "\ntruncation_index = 100\nseed = 11\nreplicas = 1\n";
    const auto cfg = RunConfig::from_string(cfg_text);
    std::ostringstream log;
    CHECK(cli::cmd_simulate(cfg, {tmp.str()}, log) == 0);

    const std::string csv = slurp(tmp.str() + "/simulate_r0.csv");
    const auto path = sampler::parse_path_sample_csv(csv);
    CHECK(path.grid.size() == 1001);  // t in [0,10], step 0.01
    for (const auto& v : path.values) CHECK(std::abs(v.imag()) < 1e-10);

    // byte-identical on a rerun with the same seed
    TempDir tmp2("apstat_sim2");
    CHECK(cli::cmd_simulate(cfg, {tmp2.str()}, log) == 0);
    CHECK(slurp(tmp2.str() + "/simulate_r0.csv") == csv);

    CHECK_THROWS(cli::cmd_simulate(RunConfig::from_string(cfg_text + "replicas = 0\n"), {tmp.str()},
                                   log));
    CHECK_THROWS(cli::cmd_simulate(RunConfig::from_string(cfg_text + "bogus = 1\n"), {tmp.str()},
                                   log));
}

TEST_CASE("cmd_covariance s=0 row equals the direct zero-table sum") {
    TempDir tmp("apstat_cov");
    const auto cfg = RunConfig::from_string("explicit_kind = psi\nzeros = " + testutil::zeros_path() +
                                            "\ntruncation_index = 100\nreplicas = 64\ns1 = 2\n");
    std::ostringstream log;
    CHECK(cli::cmd_covariance(cfg, {tmp.str()}, log) == 0);
    const std::string csv = slurp(tmp.str() + "/covariance.csv");

    const auto table = zeta::ingest_zeros(testutil::zeros_path());
    double expect = 0.0;
    for (std::size_t k = 0; k < 100; ++k) expect += 2.0 / (0.25 + table.gammas[k] * table.gammas[k]);

    std::istringstream in(csv);
    std::string line;
    bool found = false;
    while (std::getline(in, line)) {
        if (line.rfind("0,", 0) == 0) {
            double s, re;
            std::sscanf(line.c_str(), "%lg,%lg", &s, &re);
            CHECK(re == doctest::Approx(expect).epsilon(1e-12));
            found = true;
            break;
        }
    }
    CHECK(found);
}

TEST_CASE("cmd_verify runs a suite, writes reports and sets the exit code") {
    TempDir tmp("apstat_verify");
    std::ostringstream log;
    const auto ok = RunConfig::from_string("suite = parseval\nscale = 0.05\nseed = 5\n");
    CHECK(cli::cmd_verify(ok, {tmp.str()}, log) == 0);
    const std::string csv = slurp(tmp.str() + "/verify_parseval.csv");
    CHECK(csv.find("test,statistic,threshold,n,verdict") != std::string::npos);
    CHECK(csv.find("fail") == std::string::npos);

    CHECK_THROWS(cli::cmd_verify(RunConfig::from_string("suite = nope\n"), {tmp.str()}, log));

    // exit code contract: nonzero iff some verdict fails (the zerocount
    // suite carries a clause the bundled table cannot meet)
    const auto red = RunConfig::from_string("suite = zerocount\nzeros = " + testutil::zeros_path() +
                                            "\nzeta_prime = " + testutil::zprime_path() + "\n");
    CHECK(cli::cmd_verify(red, {tmp.str()}, log) == 1);
}

TEST_CASE("holder suite passes at smoke scale") {
    suites::SuiteOptions opt;
    opt.scale = 0.05;
    opt.zeros_path = testutil::zeros_path();
    for (const auto& r : suites::run_suite("holder", opt)) CHECK(r.verdict);
}

TEST_CASE("cmd_ingest canonicalizes and reports errors with line numbers") {
    TempDir tmp("apstat_ingest");
    std::ostringstream log;
    const auto cfg = RunConfig::from_string("zeros = " + testutil::zeros_path() + "\nzeta_prime = " +
                                            testutil::zprime_path() + "\n");
    CHECK(cli::cmd_ingest(cfg, {tmp.str()}, log) == 0);
    const std::string summary = slurp(tmp.str() + "/zeros_canonical_summary.txt");
    CHECK(summary.find("count = 1050") != std::string::npos);
    CHECK(summary.find("checksum_fnv1a64 = ") != std::string::npos);
    CHECK(summary.find("zeta_prime = present") != std::string::npos);

    const std::string bad = tmp.str() + "/bad.txt";
    {
        std::ofstream out(bad);
        out << "14.13\n21.02\n20.9\n";
    }
    try {
        cli::cmd_ingest(RunConfig::from_string("zeros = " + bad + "\n"), {tmp.str()}, log);
        CHECK(false);
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("cmd_explicit and cmd_tangent emit their CSV surfaces") {
    TempDir tmp("apstat_cmds");
    std::ostringstream log;
    const auto ecfg = RunConfig::from_string(
        "explicit_kind = psi\nzeros = " + testutil::zeros_path() +
        "\nsieve_limit = 20000\nt1 = 8.5\npoints = 60\ntruncation_indices = 10,50\n");
    CHECK(cli::cmd_explicit(ecfg, {tmp.str()}, log) == 0);
    const std::string trend = slurp(tmp.str() + "/explicit_trend.csv");
    CHECK(trend.find("T,rms,max") != std::string::npos);

    const auto tcfg = RunConfig::from_string(
        "example_a = 1\nexample_b = 1\nexample_n = 400\nexample_seed = 2\n"
        "epsilons = 0.1,0.01\nreplicas = 128\n");
    CHECK(cli::cmd_tangent(tcfg, {tmp.str()}, log) == 0);
    CHECK(slurp(tmp.str() + "/tangent_scan.csv").find("epsilon,max_gap") != std::string::npos);
    const std::string hurst = slurp(tmp.str() + "/tangent_hurst.csv");
    CHECK(hurst.find("source,H_hat,ci_low,ci_high") != std::string::npos);
    CHECK(hurst.find("tangent-paths,") != std::string::npos);
}
