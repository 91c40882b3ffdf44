// maxproj: critical values, power tables and Monte Carlo p-values for the
// maximal projection uniformity tests.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "maxproj/errors.hpp"
#include "maxproj/harness.hpp"

namespace {

enum Exit { ok = 0, usage = 1, data = 2, numerical = 3 };

std::vector<int> parse_ns(const std::vector<std::string>& items) {
    std::vector<int> out;
    for (const auto& s : items) {
        if (s == "inf" || s == "Inf" || s == "INF") {
            out.push_back(maxproj::kLimitN);
            continue;
        }
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(s, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != s.size() || v < 1) throw CLI::ValidationError("--n", "expected a positive integer or 'inf', got '" + s + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uniformity tests on the sphere based on maximal projections"};
    app.set_version_flag("--version", maxproj::tool_version());
    app.require_subcommand(1);

    maxproj::RunConfig cfg;
    std::vector<std::string> n_items{"100"};
    std::string format = "csv";
    std::string method = "kernel";
    int cover_m = 0, reps = 0;

    auto common = [&](CLI::App* sub, bool sampling) {
        sub->add_option("--d", cfg.d, "Ambient dimension d (sphere S^{d-1})")->check(CLI::Range(2, 1000));
        sub->add_option("--beta", cfg.betas, "Projection moments beta")->delimiter(',');
        sub->add_option("--alpha", cfg.alpha, "Significance level");
        sub->add_option("--seed", cfg.seed, "Master seed");
        sub->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", cfg.out, "Output path (default stdout)");
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
        if (sampling) {
            sub->add_option("--n", n_items, "Sample sizes ('inf' for the limit)")->delimiter(',');
            sub->add_option("--cover-m", cover_m, "Random cover size")->check(CLI::PositiveNumber);
            sub->add_option("--reps", reps, "Null replications")->check(CLI::PositiveNumber);
            sub->add_option("--test", cfg.tests, "Restrict to these tests (e.g. T1,Kuiper,CA25)")->delimiter(',');
            sub->add_flag("--cover-all", cfg.cover_all, "Use the random cover also for beta = 1, 2");
        }
    };

    auto* critvals = app.add_subcommand("critvals", "Null critical values by simulation");
    common(critvals, true);
    critvals->add_option("--method", method, "Limit method for n=inf")->check(CLI::IsMember({"kernel", "harmonic"}));
    critvals->add_option("--limit-m", cfg.limit_m, "Cover size for n=inf rows");
    critvals->add_option("--limit-reps", cfg.limit_reps, "Replications for n=inf rows");

    auto* power = app.add_subcommand("power", "Empirical power against alternatives");
    common(power, true);
    power->add_option("--power-reps", cfg.power_reps, "Replications per alternative")->check(CLI::PositiveNumber);
    power->add_option("--alt", cfg.alts, "Alternative, e.g. vmf:kappa=1 or mixvmf2:p=0.5,k1=1,k2=4")->required();
    power->add_option("--crit", cfg.crit, "Critical values written by critvals");

    auto* test = app.add_subcommand("test", "Monte Carlo p-values for a data file");
    common(test, true);
    test->add_option("--data", cfg.data, "CSV with lat,lon or x1..xd columns")->required();
    test->add_option("--min-diameter", cfg.min_diameter, "Keep rows with diameter_km >= this");

    auto* limit = app.add_subcommand("limit", "Quantiles of the Gaussian limit law");
    common(limit, false);
    limit->add_option("--method", method, "Covariance factorization")->check(CLI::IsMember({"kernel", "harmonic"}));
    limit->add_option("--cover-m", cfg.limit_m, "Cover size m")->check(CLI::PositiveNumber);
    limit->add_option("--reps", cfg.limit_reps, "Replications")->check(CLI::PositiveNumber);

    auto* bahadur = app.add_subcommand("bahadur", "Local Bahadur efficiency table");
    bahadur->add_option("--out", cfg.out, "Output path (default stdout)");
    bahadur->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* ingest = app.add_subcommand("ingest-check", "Parse a data file and report what was kept");
    ingest->add_option("--data", cfg.data, "CSV with lat,lon or x1..xd columns")->required();
    ingest->add_option("--min-diameter", cfg.min_diameter, "Keep rows with diameter_km >= this");
    ingest->add_option("--out", cfg.out, "Output path (default stdout)");
    ingest->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
        cfg.ns = parse_ns(n_items);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::usage;
    }

    cfg.format = format == "json" ? maxproj::OutputFormat::json : maxproj::OutputFormat::csv;
    if (cover_m > 0) cfg.cover_m = cover_m;
    if (reps > 0) cfg.reps = reps;

    // Invalid requests are usage errors; problems with input files are data errors.
    try {
        cfg.limit_method = maxproj::parse_limit_method(method);
        cfg.validate();
        for (const auto& a : cfg.alts) maxproj::parse_alternative(a, cfg.d);
        if (!*test && !*ingest) maxproj::select_tests(cfg.d, cfg.betas, cfg.tests);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::usage;
    }

    try {
        maxproj::Table table;
        if (*critvals) table = maxproj::cmd_critvals(cfg);
        else if (*power) table = maxproj::cmd_power(cfg);
        else if (*test) table = maxproj::cmd_test(cfg, &std::cerr);
        else if (*limit) table = maxproj::cmd_limit(cfg);
        else if (*bahadur) table = maxproj::cmd_bahadur(cfg);
        else table = maxproj::cmd_ingest_check(cfg);

        if (cfg.out.empty()) {
            maxproj::write_table(table, cfg.format, std::cout);
        } else {
            std::ofstream out(cfg.out, std::ios::binary);
            if (!out) throw maxproj::InputError("cannot write '" + cfg.out + "'");
            maxproj::write_table(table, cfg.format, out);
            if (!out) throw maxproj::InputError("write to '" + cfg.out + "' failed");
        }
    } catch (const maxproj::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::data;
    } catch (const maxproj::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return Exit::numerical;
    } catch (const maxproj::DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::usage;
    } catch (const maxproj::UnsupportedError& e) {
        std::cerr << "unsupported: " << e.what() << "\n";
        return Exit::usage;
    }
    return Exit::ok;
}
