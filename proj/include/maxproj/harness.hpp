#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "maxproj/geometry.hpp"
#include "maxproj/limit_sim.hpp"
#include "maxproj/samplers.hpp"

namespace maxproj {

/// Tool version written into every output row.
std::string tool_version();

enum class OutputFormat { csv, json };

/// n = 0 stands for the limit (n = ∞) row.
inline constexpr int kLimitN = 0;

struct RunConfig {
    std::string command;
    int d = 2;
    std::vector<int> ns{100};
    std::vector<int> betas{1, 2, 3, 4, 5, 6};
    double alpha = 0.05;
    std::optional<int> cover_m;       ///< default: 5000 for d ≤ 3, 20000 otherwise
    bool cover_all = false;           ///< use the cover also for β = 1, 2
    std::optional<int> reps;          ///< null replications (default 20000)
    int power_reps = 5000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string out;                  ///< empty: stdout
    OutputFormat format = OutputFormat::csv;
    std::vector<std::string> alts;
    std::vector<std::string> tests;   ///< empty: every test valid for d
    std::optional<double> min_diameter;
    std::string data;
    std::string crit;
    LimitMethod limit_method = LimitMethod::kernel;
    std::optional<int> limit_m;
    std::optional<int> limit_reps;

    /// Throws InputError on invalid values.
    void validate() const;
    int effective_cover_m() const;
    int null_reps() const { return reps.value_or(20000); }
};

/// Default cover size for the finite-n statistics.
int default_cover_m(int d);

struct NamedAlternative {
    std::string label;
    AlternativeSpec spec;
};

/// Parses strings such as "uniform", "vmf:kappa=1", "watson:kappa=0.5",
/// "mixvmf2:p=0.5,k1=1,k2=4", "bing1:kappa=0.25", "lp:m=3,kappa=1".
NamedAlternative parse_alternative(const std::string& text, int d);

enum class TestKind {
    t_beta, kuiper, watson_u2, ajne_circle, rayleigh_circle,
    ajne, rayleigh, bingham, gine, ca, cvm
};

struct TestDef {
    std::string name;
    TestKind kind;
    int param = 0;             ///< β for T, q for CA
    bool lower_tail = false;   ///< CA: small values are significant
};

/// T_{n,β} for the given β, then the competitors for d: Kuiper, WatsonU2,
/// Ajne, Rmod, CA25 on the circle; Ajne, Rmod, Bingham, Gine, CA100, CvM
/// otherwise.
std::vector<TestDef> default_tests(int d, const std::vector<int>& betas);
/// Subset of default_tests by name; throws InputError on unknown names.
std::vector<TestDef> select_tests(int d, const std::vector<int>& betas, const std::vector<std::string>& names);

struct EvalOptions {
    int cover_m = 5000;
    bool cover_all = false;
};

/// Raw statistic values, one per test. `rng` supplies the cover and the CA
/// projections.
std::vector<double> evaluate_tests(const SphericalSample& sample, const std::vector<TestDef>& tests,
                                   const EvalOptions& opt, Rng& rng);

/// Orients a raw value so that larger means more significant.
double significance_score(const TestDef& test, double raw);

/// reps × tests raw values; replication r uses Rng::stream(seed, r) for both
/// the sample and the statistics.
std::vector<std::vector<double>> simulate_statistics(const AlternativeSpec& spec, int n,
                                                     const std::vector<TestDef>& tests,
                                                     const EvalOptions& opt, int reps,
                                                     std::uint64_t seed, int workers);

struct CriticalValue {
    double value = 0.0;
    double mc_stderr = 0.0;
};
/// Upper 1−α quantile of raw values, or the α quantile for lower-tail tests.
CriticalValue critical_value(const TestDef& test, const std::vector<double>& raw, double alpha,
                             std::uint64_t seed);
bool rejects(const TestDef& test, double raw, double crit);

/// (1 + #{null at least as significant as observed}) / (R + 1).
double monte_carlo_pvalue(const TestDef& test, double observed, const std::vector<double>& null_raw);

/// Column-oriented output table.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string format_number(double v);
std::string csv_escape(const std::string& field);
void write_table(const Table& table, OutputFormat format, std::ostream& out);

/// Loaded critical values keyed by (d, n, test, alpha as printed).
using CritKey = std::tuple<int, int, std::string, std::string>;
std::map<CritKey, double> load_critical_values(const std::string& path);

Table cmd_critvals(const RunConfig& cfg);
Table cmd_power(const RunConfig& cfg);
Table cmd_test(const RunConfig& cfg, std::ostream* log = nullptr);
Table cmd_limit(const RunConfig& cfg);
Table cmd_bahadur(const RunConfig& cfg);
Table cmd_ingest_check(const RunConfig& cfg);

}  // namespace maxproj
