// apstat: simulation and verification toolkit for Besicovitch almost
// periodic functions and the explicit-formula remainders driven by zeta
// zero tables.
//
// Subcommands: simulate | covariance | verify | ingest | tangent | explicit.
// Each takes a key=value config file (--config); a handful of common keys
// can be overridden from the command line.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "apstat/runner.hpp"

using apstat::cli::RunConfig;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::string seed;
    std::string threads;
    std::string zeros;
    std::string zeta_prime;
    std::string truncation;
    std::string sieve_limit;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value run configuration file");
    cmd->add_option("--out", args.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "override seed");
    cmd->add_option("--threads", args.threads, "override worker thread count");
    cmd->add_option("--zeros", args.zeros, "zero table path (one gamma per line)");
    cmd->add_option("--zeta-prime", args.zeta_prime, "zeta' companion CSV (gamma,re,im)");
    cmd->add_option("--truncation", args.truncation, "explicit-formula truncation height T");
    cmd->add_option("--sieve-limit", args.sieve_limit, "sieve limit N");
}

RunConfig merged_config(const CommonArgs& args) {
    RunConfig cfg;
    if (!args.config_path.empty()) cfg = RunConfig::load(args.config_path);
    auto put = [&cfg](const std::string& key, const std::string& value) {
        if (!value.empty()) cfg.set(key, value);
    };
    put("seed", args.seed);
    put("threads", args.threads);
    put("zeros", args.zeros);
    put("zeta_prime", args.zeta_prime);
    put("truncation", args.truncation);
    put("sieve_limit", args.sieve_limit);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"almost-periodic process simulation and verification toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* simulate = app.add_subcommand("simulate", "sample realizations of M_f to CSV");
    auto* covariance = app.add_subcommand("covariance", "exact and empirical covariance curves");
    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    auto* ingest = app.add_subcommand("ingest", "validate and canonicalize a zero table");
    auto* tangent = app.add_subcommand("tangent", "tangent-process scan and Hurst estimates");
    auto* explicit_cmd = app.add_subcommand("explicit", "explicit-formula gap over truncations");
    for (auto* cmd : {simulate, covariance, verify, ingest, tangent, explicit_cmd})
        add_common(cmd, args);

    std::string suite;
    verify->add_option("--suite", suite, "suite name or 'all'");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = merged_config(args);
        if (!suite.empty()) cfg.set("suite", suite);
        apstat::cli::Paths paths;
        paths.out_dir = args.out_dir;

        if (simulate->parsed()) return apstat::cli::cmd_simulate(cfg, paths, std::cout);
        if (covariance->parsed()) return apstat::cli::cmd_covariance(cfg, paths, std::cout);
        if (verify->parsed()) return apstat::cli::cmd_verify(cfg, paths, std::cout);
        if (ingest->parsed()) return apstat::cli::cmd_ingest(cfg, paths, std::cout);
        if (tangent->parsed()) return apstat::cli::cmd_tangent(cfg, paths, std::cout);
        if (explicit_cmd->parsed()) return apstat::cli::cmd_explicit(cfg, paths, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
