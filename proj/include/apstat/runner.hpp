#ifndef APSTAT_RUNNER_HPP
#define APSTAT_RUNNER_HPP

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "apstat/empirics.hpp"
#include "apstat/zeta.hpp"

// Verification suites and the CLI command layer. The acceptance binary and
// the `verify` subcommand run the same suite functions; the acceptance gate
// uses the default (full-scale) options.

namespace apstat::suites {

struct SuiteOptions {
    std::uint64_t seed = 20240901;
    int threads = 0;
    double scale = 1.0;  // < 1 shrinks sample sizes for smoke runs
    std::string zeros_path;       // required by zeta-dependent suites
    std::string zeta_prime_path;  // optional companion
    std::size_t scaled(std::size_t n, std::size_t floor_value = 64) const;
};

const std::vector<std::string>& suite_names();
std::vector<empirics::TestReport> run_suite(const std::string& name, const SuiteOptions& opt);

std::vector<empirics::TestReport> suite_parseval(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_translation(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_onedim(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_fidi(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_covariance(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_ergodic(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_equidist(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_holder(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_tangent(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_explicit(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_zerocount(const SuiteOptions& opt);
std::vector<empirics::TestReport> suite_sieve(const SuiteOptions& opt);

// Shared test models.
spectra::FourierModel random_pair_model(std::size_t n_pairs, std::uint64_t seed,
                                        bool conjugate_symmetric = false);
spectra::FourierModel psi_model_from_table(const zeta::ZeroTable& table, std::size_t n_zeros);

}  // namespace apstat::suites

namespace apstat::cli {

// Structured key=value run configuration; '#' starts a comment. Unknown keys
// and missing referenced paths are rejected before any computation starts.
class RunConfig {
public:
    static RunConfig load(const std::string& path);
    static RunConfig from_string(const std::string& text);

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key, const std::string& fallback = {}) const;
    double get_num(const std::string& key, double fallback, double lo, double hi) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;
    void require_known_keys(const std::vector<std::string>& allowed) const;
    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
};

struct Paths {
    std::string out_dir = ".";
};

// Subcommand bodies; each returns a process exit code (verify: nonzero iff
// any suite verdict failed).
int cmd_simulate(const RunConfig& cfg, const Paths& paths, std::ostream& log);
int cmd_covariance(const RunConfig& cfg, const Paths& paths, std::ostream& log);
int cmd_verify(const RunConfig& cfg, const Paths& paths, std::ostream& log);
int cmd_ingest(const RunConfig& cfg, const Paths& paths, std::ostream& log);
int cmd_tangent(const RunConfig& cfg, const Paths& paths, std::ostream& log);
int cmd_explicit(const RunConfig& cfg, const Paths& paths, std::ostream& log);

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::uint64_t fnv1a64(const std::string& data);

// Model construction from a config (model_file=... | example_* | explicit_*).
spectra::FourierModel model_from_config(const RunConfig& cfg);

}  // namespace apstat::cli

#endif
