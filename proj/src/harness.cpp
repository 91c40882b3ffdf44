#include "maxproj/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "maxproj/bahadur.hpp"
#include "maxproj/errors.hpp"
#include "maxproj/ingest.hpp"
#include "maxproj/parallel.hpp"
#include "maxproj/statistics.hpp"

#ifndef MAXPROJ_VERSION
#define MAXPROJ_VERSION "0.0.0"
#endif

namespace maxproj {

namespace {

constexpr std::uint64_t kObservedStream = ~std::uint64_t{0};
constexpr int kBootstrapResamples = 200;

// FNV-1a, so per-row seeds do not depend on std::hash.
std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t seed, const std::string& tag) {
    std::uint64_t state = seed ^ fnv1a(tag);
    return splitmix64(state);
}

std::string n_label(int n) { return n == kLimitN ? "inf" : std::to_string(n); }

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw InputError("invalid number for " + what + ": '" + s + "'");
    return v;
}

int parse_int(const std::string& s, const std::string& what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InputError("invalid integer for " + what + ": '" + s + "'");
    return v;
}


}  // namespace

std::string tool_version() { return MAXPROJ_VERSION; }

int default_cover_m(int d) { return d <= 3 ? 5000 : 20000; }

int RunConfig::effective_cover_m() const { return cover_m.value_or(default_cover_m(d)); }

void RunConfig::validate() const {
    if (d < 2) throw InputError("d must be >= 2");
    if (ns.empty()) throw InputError("at least one n is required");
    for (int n : ns)
        if (n < 0) throw InputError("n must be >= 1 or 'inf'");
    if (betas.empty()) throw InputError("at least one beta is required");
    for (int b : betas)
        if (b < 1 || b > 12) throw InputError("beta must be in 1..12");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
    if (cover_m && *cover_m < 1) throw InputError("cover m must be >= 1");
    if (reps && *reps < 1) throw InputError("replications must be >= 1");
    if (power_reps < 1) throw InputError("power replications must be >= 1");
    if (workers < 1) throw InputError("workers must be >= 1");
    if (limit_m && *limit_m < 1) throw InputError("limit m must be >= 1");
    if (limit_reps && *limit_reps < 1) throw InputError("limit replications must be >= 1");
}

// ---------------------------------------------------------------------------
// Alternative strings

NamedAlternative parse_alternative(const std::string& text, int d) {
    const auto colon = text.find(':');
    std::string name = text.substr(0, colon);
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw InputError("alternative '" + text + "': expected key=value, got '" + item + "'");
            kv[item.substr(0, eq)] = item.substr(eq + 1);
        }
    }
    auto take = [&](const std::string& key) -> std::optional<double> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        double v = parse_double(it->second, text + " " + key);
        kv.erase(it);
        return v;
    };
    auto need = [&](const std::string& key) {
        auto v = take(key);
        if (!v) throw InputError("alternative '" + text + "' requires " + key + "=");
        return *v;
    };

    AlternativeSpec spec = UniformDist{d};
    if (name == "uniform") {
    } else if (name == "vmf") {
        spec = vmf1(d, need("kappa"));
    } else if (name == "watson") {
        spec = watson1(d, need("kappa"));
    } else if (name == "bing1" || name == "bing2") {
        const double kappa = need("kappa");
        spec = name == "bing1" ? bing1(d, kappa) : bing2(d, kappa);
    } else if (name == "lp") {
        const double m = need("m");
        if (m != std::floor(m) || m < 1) throw InputError("alternative '" + text + "': m must be a positive integer");
        spec = lp(d, static_cast<int>(m), need("kappa"));
    } else if (name == "mixvmf1" || name == "mixvmf2") {
        const double p = need("p");
        auto mix = std::get<MixVMF2>(name == "mixvmf1" ? mix_vmf1(d, p) : mix_vmf2(d, p));
        if (auto k = take("k1")) mix.first.kappa = *k;
        if (auto k = take("k2")) mix.second.kappa = *k;
        spec = mix;
    } else if (name == "mixvmf3" || name == "mixvmf4") {
        const double p = need("p");
        auto mix = std::get<MixVMF3>(name == "mixvmf3" ? mix_vmf3(d, p) : mix_vmf4(d, p));
        if (auto k = take("k1")) mix.first.kappa = *k;
        if (auto k = take("k2")) mix.second.kappa = *k;
        if (auto k = take("k3")) mix.third.kappa = *k;
        spec = mix;
    } else {
        throw InputError("unknown alternative '" + name +
                         "' (expected uniform, vmf, watson, mixvmf1..4, bing1, bing2, lp)");
    }
    if (!kv.empty()) throw InputError("alternative '" + text + "': unknown key '" + kv.begin()->first + "'");
    validate(spec);
    return {text, spec};
}

// ---------------------------------------------------------------------------
// Test registry

std::vector<TestDef> default_tests(int d, const std::vector<int>& betas) {
    std::vector<TestDef> out;
    for (int b : betas) out.push_back({"T" + std::to_string(b), TestKind::t_beta, b, false});
    if (d == 2) {
        out.push_back({"Kuiper", TestKind::kuiper, 0, false});
        out.push_back({"WatsonU2", TestKind::watson_u2, 0, false});
        out.push_back({"Ajne", TestKind::ajne_circle, 0, false});
        out.push_back({"Rmod", TestKind::rayleigh_circle, 0, false});
        out.push_back({"CA25", TestKind::ca, 25, true});
    } else {
        out.push_back({"Ajne", TestKind::ajne, 0, false});
        out.push_back({"Rmod", TestKind::rayleigh, 0, false});
        out.push_back({"Bingham", TestKind::bingham, 0, false});
        out.push_back({"Gine", TestKind::gine, 0, false});
        out.push_back({"CA100", TestKind::ca, 100, true});
        out.push_back({"CvM", TestKind::cvm, 0, false});
    }
    return out;
}

std::vector<TestDef> select_tests(int d, const std::vector<int>& betas, const std::vector<std::string>& names) {
    auto all = default_tests(d, betas);
    if (names.empty()) return all;
    std::vector<TestDef> out;
    for (const auto& name : names) {
        auto it = std::find_if(all.begin(), all.end(), [&](const TestDef& t) { return t.name == name; });
        if (it == all.end()) {
            std::string known;
            for (const auto& t : all) known += (known.empty() ? "" : ", ") + t.name;
            throw InputError("unknown test '" + name + "' for d=" + std::to_string(d) + " (available: " + known + ")");
        }
        out.push_back(*it);
    }
    return out;
}

std::vector<double> evaluate_tests(const SphericalSample& sample, const std::vector<TestDef>& tests,
                                   const EvalOptions& opt, Rng& rng) {
    std::vector<double> out(tests.size(), 0.0);
    int cover_beta = 0;
    for (const auto& t : tests)
        if (t.kind == TestKind::t_beta && (opt.cover_all || t.param > 2)) cover_beta = std::max(cover_beta, t.param);

    std::vector<double> cover_values;
    if (cover_beta > 0) {
        const auto cover = make_cover(sample.dim(), opt.cover_m, rng.next());
        cover_values = t_stat_all(sample, cover_beta, cover);
    }
    std::optional<CircleStatistics> circle;
    std::optional<SobolevStatistics> sobolev;
    for (std::size_t i = 0; i < tests.size(); ++i) {
        const auto& t = tests[i];
        switch (t.kind) {
            case TestKind::t_beta:
                if (opt.cover_all || t.param > 2)
                    out[i] = cover_values[static_cast<std::size_t>(t.param - 1)];
                else
                    out[i] = t.param == 1 ? t1_closed(sample) : t2_closed(sample);
                break;
            case TestKind::kuiper:
            case TestKind::watson_u2:
            case TestKind::ajne_circle:
            case TestKind::rayleigh_circle:
                if (!circle) circle = circle_classical(sample);
                out[i] = t.kind == TestKind::kuiper      ? circle->kuiper
                         : t.kind == TestKind::watson_u2 ? circle->watson_u2
                         : t.kind == TestKind::ajne_circle ? circle->ajne
                                                           : circle->rayleigh_mod;
                break;
            case TestKind::ajne: out[i] = ajne_sphere(sample); break;
            case TestKind::rayleigh: out[i] = rayleigh_mod_sphere(sample); break;
            case TestKind::bingham: out[i] = bingham_stat(sample); break;
            case TestKind::gine: out[i] = gine_stat(sample); break;
            case TestKind::ca: out[i] = ca_test(sample, t.param, rng).value; break;
            case TestKind::cvm: out[i] = cvm_test(sample).value; break;
        }
    }
    return out;
}

double significance_score(const TestDef& test, double raw) { return test.lower_tail ? -raw : raw; }

std::vector<std::vector<double>> simulate_statistics(const AlternativeSpec& spec, int n,
                                                     const std::vector<TestDef>& tests,
                                                     const EvalOptions& opt, int reps,
                                                     std::uint64_t seed, int workers) {
    if (reps < 1) throw InputError("replications must be >= 1");
    std::vector<std::vector<double>> out(static_cast<std::size_t>(reps));
    parallel_for(out.size(), workers, [&](std::size_t r) {
        Rng rng = Rng::stream(seed, r);
        const auto x = sample(spec, n, rng);
        out[r] = evaluate_tests(x, tests, opt, rng);
    });
    return out;
}

CriticalValue critical_value(const TestDef& test, const std::vector<double>& raw, double alpha,
                             std::uint64_t seed) {
    const double level = test.lower_tail ? alpha : 1.0 - alpha;
    return {empirical_quantile(raw, level), bootstrap_quantile_se(raw, level, kBootstrapResamples, seed)};
}

bool rejects(const TestDef& test, double raw, double crit) { return test.lower_tail ? raw < crit : raw > crit; }

double monte_carlo_pvalue(const TestDef& test, double observed, const std::vector<double>& null_raw) {
    const double obs = significance_score(test, observed);
    std::size_t hits = 0;
    for (double v : null_raw)
        if (significance_score(test, v) >= obs) ++hits;
    return (1.0 + static_cast<double>(hits)) / (1.0 + static_cast<double>(null_raw.size()));
}

// ---------------------------------------------------------------------------
// Output

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void write_table(const Table& table, OutputFormat format, std::ostream& out) {
    if (format == OutputFormat::csv) {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << csv_escape(cells[i]);
            out << "\n";
        };
        line(table.columns);
        for (const auto& r : table.rows) line(r);
        return;
    }
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : table.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t i = 0; i < table.columns.size() && i < r.size(); ++i) {
            const std::string& cell = r[i];
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            const bool numeric = !cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v) &&
                                 table.columns[i] != "tool_version";
            if (numeric && cell.find_first_of(".eE") == std::string::npos && std::abs(v) < 9e15)
                obj[table.columns[i]] = static_cast<long long>(v);
            else if (numeric)
                obj[table.columns[i]] = v;
            else
                obj[table.columns[i]] = cell;
        }
        arr.push_back(std::move(obj));
    }
    out << arr.dump(2) << "\n";
}

std::map<CritKey, double> load_critical_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open critical-value file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": empty critical-value file");
    const auto header = split_csv_line(line);
    auto col = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw InputError(path + ": missing column '" + name + "'; expected output of 'maxproj critvals'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto cd = col("d"), cn = col("n"), ct = col("test"), ca = col("alpha"), cv = col("critical_value");
    std::map<CritKey, double> out;
    long lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size())
            throw InputError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                             " fields, got " + std::to_string(f.size()));
        const std::string where = path + ":" + std::to_string(lineno);
        const int n = f[cn] == "inf" ? kLimitN : parse_int(f[cn], where + " n");
        const std::string alpha = format_number(parse_double(f[ca], where + " alpha"));
        out[{parse_int(f[cd], where + " d"), n, f[ct], alpha}] = parse_double(f[cv], where + " critical_value");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Commands

Table cmd_critvals(const RunConfig& cfg) {
    cfg.validate();
    Table t;
    t.columns = {"tool_version", "seed", "d", "n", "test", "tail", "alpha", "critical_value", "mc_stderr",
                 "replications", "cover_m", "method"};
    const auto tests = select_tests(cfg.d, cfg.betas, cfg.tests);
    const EvalOptions opt{cfg.effective_cover_m(), cfg.cover_all};
    for (int n : cfg.ns) {
        if (n == kLimitN) {
            const int m = cfg.limit_m.value_or(default_limit_m(cfg.d));
            const int reps = cfg.limit_reps.value_or(default_limit_replications(cfg.d));
            for (const auto& test : tests) {
                if (test.kind != TestKind::t_beta) continue;
                const auto q = limit_quantile(test.param, cfg.d, 1.0 - cfg.alpha, cfg.limit_method, m, reps,
                                              derive_seed(cfg.seed, "limit/" + test.name), cfg.workers);
                t.rows.push_back({tool_version(), std::to_string(cfg.seed), std::to_string(cfg.d), "inf", test.name,
                                  "upper", format_number(cfg.alpha), format_number(q.value),
                                  format_number(q.mc_stderr), std::to_string(reps), std::to_string(m),
                                  "limit_" + to_string(cfg.limit_method)});
            }
            continue;
        }
        const std::uint64_t seed = derive_seed(cfg.seed, "null/n=" + std::to_string(n));
        const auto raw = simulate_statistics(UniformDist{cfg.d}, n, tests, opt, cfg.null_reps(), seed, cfg.workers);
        for (std::size_t j = 0; j < tests.size(); ++j) {
            std::vector<double> col(raw.size());
            for (std::size_t r = 0; r < raw.size(); ++r) col[r] = raw[r][j];
            const auto cv = critical_value(tests[j], col, cfg.alpha, derive_seed(seed, tests[j].name));
            const bool cover = tests[j].kind == TestKind::t_beta && (cfg.cover_all || tests[j].param > 2);
            t.rows.push_back({tool_version(), std::to_string(cfg.seed), std::to_string(cfg.d), n_label(n),
                              tests[j].name, tests[j].lower_tail ? "lower" : "upper", format_number(cfg.alpha),
                              format_number(cv.value), format_number(cv.mc_stderr), std::to_string(cfg.null_reps()),
                              cover ? std::to_string(opt.cover_m) : "", "monte_carlo_null"});
        }
    }
    return t;
}

Table cmd_power(const RunConfig& cfg) {
    cfg.validate();
    if (cfg.crit.empty())
        throw InputError("power needs critical values: run 'maxproj critvals' with the same --d/--n/--alpha "
                         "and pass its output with --crit");
    if (cfg.alts.empty()) throw InputError("power needs at least one --alt");
    const auto crit = load_critical_values(cfg.crit);
    const auto tests = select_tests(cfg.d, cfg.betas, cfg.tests);
    const EvalOptions opt{cfg.effective_cover_m(), cfg.cover_all};
    std::vector<NamedAlternative> alts;
    for (const auto& a : cfg.alts) alts.push_back(parse_alternative(a, cfg.d));

    Table t;
    t.columns = {"tool_version", "seed", "d", "n", "alternative", "test", "alpha", "critical_value", "power",
                 "mc_stderr", "replications", "cover_m"};
    const std::string alpha = format_number(cfg.alpha);
    for (int n : cfg.ns) {
        if (n == kLimitN) throw InputError("power is defined for finite n only");
        std::vector<double> cv(tests.size());
        for (std::size_t j = 0; j < tests.size(); ++j) {
            auto it = crit.find({cfg.d, n, tests[j].name, alpha});
            if (it == crit.end())
                throw InputError("missing critical value for " + tests[j].name + " at d=" + std::to_string(cfg.d) +
                                 ", n=" + std::to_string(n) + ", alpha=" + alpha + " in '" + cfg.crit +
                                 "'; run 'maxproj critvals' for this configuration first");
            cv[j] = it->second;
        }
        for (const auto& alt : alts) {
            const auto seed = derive_seed(cfg.seed, "power/n=" + std::to_string(n) + "/" + alt.label);
            const auto raw = simulate_statistics(alt.spec, n, tests, opt, cfg.power_reps, seed, cfg.workers);
            for (std::size_t j = 0; j < tests.size(); ++j) {
                long hits = 0;
                for (const auto& row : raw) hits += rejects(tests[j], row[j], cv[j]) ? 1 : 0;
                const double p = static_cast<double>(hits) / static_cast<double>(raw.size());
                const bool cover = tests[j].kind == TestKind::t_beta && (cfg.cover_all || tests[j].param > 2);
                t.rows.push_back({tool_version(), std::to_string(cfg.seed), std::to_string(cfg.d), n_label(n),
                                  alt.label, tests[j].name, alpha, format_number(cv[j]), format_number(p),
                                  format_number(std::sqrt(p * (1.0 - p) / static_cast<double>(raw.size()))),
                                  std::to_string(cfg.power_reps), cover ? std::to_string(opt.cover_m) : ""});
            }
        }
    }
    return t;
}

Table cmd_test(const RunConfig& cfg, std::ostream* log) {
    cfg.validate();
    if (cfg.data.empty()) throw InputError("test needs --data <csv>");
    IngestOptions iopt;
    iopt.min_value = cfg.min_diameter;
    const auto in = ingest_file(cfg.data, iopt);
    const auto& x = in.sample;
    if (x.size() < 2) throw InputError(cfg.data + ": fewer than two usable rows");
    if (auto* os = log) {
        *os << "ingest: schema=" << in.report.schema << " d=" << in.report.d << " rows=" << in.report.rows_read
            << " kept=" << in.report.kept << " repaired=" << in.report.repaired << " skipped=" << in.report.skipped
            << " filtered=" << in.report.filtered << "\n";
        for (const auto& note : in.report.notes) *os << "ingest: " << note << "\n";
    }
    const int d = x.dim();
    const auto tests = select_tests(d, cfg.betas, cfg.tests);
    const EvalOptions opt{cfg.cover_m.value_or(default_cover_m(d)), cfg.cover_all};

    Rng obs_rng = Rng::stream(cfg.seed, kObservedStream);
    const auto observed = evaluate_tests(x, tests, opt, obs_rng);
    const auto null = simulate_statistics(UniformDist{d}, x.size(), tests, opt, cfg.null_reps(),
                                          derive_seed(cfg.seed, "test/null"), cfg.workers);
    Table t;
    t.columns = {"tool_version", "seed", "d", "n", "test", "value", "pvalue", "pvalue_method", "replications",
                 "cover_m"};
    for (std::size_t j = 0; j < tests.size(); ++j) {
        std::vector<double> col(null.size());
        for (std::size_t r = 0; r < null.size(); ++r) col[r] = null[r][j];
        const bool cover = tests[j].kind == TestKind::t_beta && (cfg.cover_all || tests[j].param > 2);
        t.rows.push_back({tool_version(), std::to_string(cfg.seed), std::to_string(d), std::to_string(x.size()),
                          tests[j].name, format_number(observed[j]),
                          format_number(monte_carlo_pvalue(tests[j], observed[j], col)), "monte_carlo_null",
                          std::to_string(cfg.null_reps()), cover ? std::to_string(opt.cover_m) : ""});
    }
    return t;
}

Table cmd_limit(const RunConfig& cfg) {
    cfg.validate();
    const int m = cfg.limit_m.value_or(default_limit_m(cfg.d));
    const int reps = cfg.limit_reps.value_or(default_limit_replications(cfg.d));
    Table t;
    t.columns = {"tool_version", "seed", "d", "beta", "alpha", "method", "quantile", "mc_stderr", "m",
                 "replications", "factor_rank", "clip_error", "cover_efficiency"};
    for (int b : cfg.betas) {
        const auto q = limit_quantile(b, cfg.d, 1.0 - cfg.alpha, cfg.limit_method, m, reps,
                                      derive_seed(cfg.seed, "limit/T" + std::to_string(b)), cfg.workers);
        t.rows.push_back({tool_version(), std::to_string(cfg.seed), std::to_string(cfg.d), std::to_string(b),
                          format_number(cfg.alpha), to_string(q.method), format_number(q.value),
                          format_number(q.mc_stderr), std::to_string(q.m), std::to_string(q.replications),
                          std::to_string(q.factor_rank), format_number(q.clip_error),
                          format_number(q.cover_efficiency)});
    }
    return t;
}

namespace {
// Two decimals, or one significant digit when that would print as zero.
std::string table_rounding(double v) {
    char buf[32];
    if (std::round(v * 100.0) == 0.0 && v != 0.0) {
        const int digits = -static_cast<int>(std::floor(std::log10(std::abs(v))));
        std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    } else {
        std::snprintf(buf, sizeof buf, "%.2f", v);
    }
    return buf;
}
}  // namespace

Table cmd_bahadur(const RunConfig& cfg) {
    Table t;
    t.columns = {"tool_version", "alternative", "beta", "d", "are", "are_rounded"};
    for (const auto& e : are_table())
        t.rows.push_back({tool_version(), to_string(e.alt), std::to_string(e.beta), std::to_string(e.d),
                          format_number(e.value), table_rounding(e.value)});
    (void)cfg;
    return t;
}

Table cmd_ingest_check(const RunConfig& cfg) {
    if (cfg.data.empty()) throw InputError("ingest-check needs --data <csv>");
    IngestOptions iopt;
    iopt.min_value = cfg.min_diameter;
    const auto in = ingest_file(cfg.data, iopt);
    const auto& r = in.report;
    std::string notes;
    for (const auto& n : r.notes) notes += (notes.empty() ? "" : "; ") + n;
    Table t;
    t.columns = {"tool_version", "schema", "d", "rows_read", "kept", "repaired", "skipped", "filtered", "notes"};
    t.rows.push_back({tool_version(), r.schema, std::to_string(r.d), std::to_string(r.rows_read),
                      std::to_string(r.kept), std::to_string(r.repaired), std::to_string(r.skipped),
                      std::to_string(r.filtered), notes});
    return t;
}

}  // namespace maxproj
