#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <variant>

#include "json.hpp"
#include "maxproj/errors.hpp"
#include "maxproj/harness.hpp"
#include "maxproj/ingest.hpp"
#include "maxproj/statistics.hpp"

using namespace maxproj;

namespace {

IngestResult ingest_text(const std::string& s, const IngestOptions& opt = {}) {
    std::istringstream in(s);
    return ingest(in, opt);
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

std::string temp_path(const std::string& name) { return "/tmp/maxproj_unit_" + name; }

std::string render(const Table& t, OutputFormat f = OutputFormat::csv) {
    std::ostringstream os;
    write_table(t, f, os);
    return os.str();
}

}  // namespace

TEST_CASE("ingest: lat/lon origin maps to the first axis") {
    const auto r = ingest_text("lat,lon\n0,0\n");
    REQUIRE(r.sample.size() == 1);
    CHECK(r.sample.dim() == 3);
    CHECK(r.sample.row(0)[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(r.sample.row(0)[1]) < 1e-15);
    CHECK(std::abs(r.sample.row(0)[2]) < 1e-15);
    CHECK(r.report.schema == "latlon");
}

TEST_CASE("ingest: cartesian unit row passes through") {
    const auto r = ingest_text("x1,x2\n0.6,0.8\n");
    REQUIRE(r.sample.size() == 1);
    CHECK(r.sample.row(0)[0] == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(r.sample.row(0)[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(r.report.repaired == 0);
}

TEST_CASE("ingest: short row is renormalized and counted") {
    const auto r = ingest_text("x1,x2,x3\n0.3,0.4,0\n0,0,1\n");
    REQUIRE(r.sample.size() == 2);
    CHECK(r.sample.row(0)[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(r.sample.row(0)[1] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(r.report.repaired == 1);
    CHECK(r.report.rows_read == 2);
    CHECK(r.report.kept == 2);
}

TEST_CASE("ingest: zero row is skipped with a note") {
    const auto r = ingest_text("x1,x2\n0,0\n1,0\n");
    CHECK(r.sample.size() == 1);
    CHECK(r.report.skipped == 1);
    REQUIRE(!r.report.notes.empty());
    CHECK(r.report.notes[0].find("line 2") != std::string::npos);
}

TEST_CASE("ingest: errors name the line") {
    CHECK(error_of([] { ingest_text("x1,x2\n1,0\n0.6,abc\n"); }).find("line 3") != std::string::npos);
    CHECK(error_of([] { ingest_text("x1,x2\n1,0,5\n"); }).find("line 2") != std::string::npos);
    CHECK(error_of([] { ingest_text("lat,lon\n95,0\n"); }).find("line 2") != std::string::npos);
    CHECK_THROWS_AS(ingest_text("x1,x2\n1,0\n0.6,abc\n"), InputError);
}

TEST_CASE("ingest: unknown schema lists the accepted ones") {
    const auto msg = error_of([] { ingest_text("a,b\n1,2\n"); });
    CHECK(msg.find("lat") != std::string::npos);
    CHECK(msg.find("x1") != std::string::npos);
}

TEST_CASE("ingest: diameter filter and quoted fields") {
    IngestOptions opt;
    opt.min_value = 150.0;
    const auto r = ingest_text("name,lat,lon,diameter_km\n\"Crater, big\",0,90,200\nsmall,10,10,100\n", opt);
    REQUIRE(r.sample.size() == 1);
    CHECK(r.report.filtered == 1);
    CHECK(std::abs(r.sample.row(0)[0]) < 1e-15);
    CHECK(r.sample.row(0)[1] == doctest::Approx(1.0));
    CHECK(split_csv_line("a,\"b,\"\"c\"\"\",d") == std::vector<std::string>{"a", "b,\"c\"", "d"});
}

TEST_CASE("alternative strings") {
    auto v = parse_alternative("vmf:kappa=1", 3);
    REQUIRE(std::holds_alternative<VonMisesFisher>(v.spec));
    CHECK(std::get<VonMisesFisher>(v.spec).kappa == 1.0);
    CHECK(v.label == "vmf:kappa=1");

    auto m = parse_alternative("mixvmf2:p=0.5,k1=1,k2=4", 2);
    REQUIRE(std::holds_alternative<MixVMF2>(m.spec));
    CHECK(std::get<MixVMF2>(m.spec).p == 0.5);
    CHECK(std::get<MixVMF2>(m.spec).second.kappa == 4.0);

    auto m3 = parse_alternative("mixvmf4:p=0.25,k3=7", 3);
    CHECK(std::get<MixVMF3>(m3.spec).third.kappa == 7.0);
    CHECK(std::get<MixVMF3>(m3.spec).first.kappa == 2.0);

    auto l = parse_alternative("lp:m=3,kappa=1", 2);
    CHECK(std::get<LegendreDist>(l.spec).m == 3);
    CHECK(std::holds_alternative<BinghamDist>(parse_alternative("bing1:kappa=0.25", 2).spec));
    CHECK(std::holds_alternative<BinghamDist>(parse_alternative("bing2:kappa=1", 3).spec));
    CHECK(std::holds_alternative<WatsonDist>(parse_alternative("watson:kappa=0.5", 3).spec));
    CHECK(std::holds_alternative<UniformDist>(parse_alternative("uniform", 5).spec));

    CHECK_THROWS_AS(parse_alternative("cauchy:kappa=1", 2), InputError);
    CHECK_THROWS_AS(parse_alternative("vmf", 2), InputError);
    CHECK_THROWS_AS(parse_alternative("vmf:kappa=x", 2), InputError);
    CHECK_THROWS_AS(parse_alternative("vmf:kappa=1,rho=2", 2), InputError);
    CHECK_THROWS_AS(parse_alternative("lp:m=1.5,kappa=1", 2), InputError);
    CHECK_THROWS_AS(parse_alternative("lp:m=2,kappa=3", 2), InputError);
}

TEST_CASE("test registry per dimension") {
    auto names = [](const std::vector<TestDef>& ts) {
        std::vector<std::string> out;
        for (const auto& t : ts) out.push_back(t.name);
        return out;
    };
    const std::vector<int> b{1, 2, 3, 4, 5, 6};
    CHECK(names(default_tests(2, b)) == std::vector<std::string>{"T1", "T2", "T3", "T4", "T5", "T6", "Kuiper",
                                                                    "WatsonU2", "Ajne", "Rmod", "CA25"});
    CHECK(names(default_tests(3, b)) == std::vector<std::string>{"T1", "T2", "T3", "T4", "T5", "T6", "Ajne", "Rmod",
                                                                    "Bingham", "Gine", "CA100", "CvM"});
    CHECK(select_tests(3, b, {"CvM", "T2"}).size() == 2);
    CHECK_THROWS_AS(select_tests(2, b, {"Gine"}), InputError);
}

TEST_CASE("evaluate_tests agrees with the direct statistics") {
    Rng rng(11);
    const auto x = sample_uniform(3, 60, rng);
    const auto tests = default_tests(3, {1, 2, 3});
    Rng r1(5);
    const auto v = evaluate_tests(x, tests, {2000, false}, r1);
    CHECK(v[0] == doctest::Approx(t1_closed(x)).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(t2_closed(x)).epsilon(1e-14));
    Rng r2(5);
    const auto cover = make_cover(3, 2000, r2.next());
    CHECK(v[2] == doctest::Approx(t_stat(x, 3, cover).value).epsilon(1e-14));
    CHECK(v[3] == doctest::Approx(ajne_sphere(x)).epsilon(1e-14));
    CHECK(v[6] == doctest::Approx(gine_stat(x)).epsilon(1e-14));
    CHECK(v[8] == doctest::Approx(cvm_test(x).value).epsilon(1e-14));
    CHECK(v[7] > 0.0);
    CHECK(v[7] <= 1.0);
}

TEST_CASE("null simulation is independent of the worker count") {
    const auto tests = default_tests(2, {1, 3});
    const auto a = simulate_statistics(UniformDist{2}, 30, tests, {500, false}, 40, 77, 1);
    const auto b = simulate_statistics(UniformDist{2}, 30, tests, {500, false}, 40, 77, 4);
    CHECK(a == b);
    const auto c = simulate_statistics(UniformDist{2}, 30, tests, {500, false}, 40, 78, 1);
    CHECK(a != c);
}

TEST_CASE("critical values, rejection and p-values respect the tail") {
    const TestDef up{"T1", TestKind::t_beta, 1, false};
    const TestDef lo{"CA25", TestKind::ca, 25, true};
    std::vector<double> raw;
    for (int i = 1; i <= 100; ++i) raw.push_back(i);
    CHECK(critical_value(up, raw, 0.05, 1).value == 95.0);
    CHECK(critical_value(lo, raw, 0.05, 1).value == 5.0);
    CHECK(rejects(up, 96.0, 95.0));
    CHECK_FALSE(rejects(up, 95.0, 95.0));
    CHECK(rejects(lo, 4.0, 5.0));
    CHECK_FALSE(rejects(lo, 6.0, 5.0));
    CHECK(monte_carlo_pvalue(up, 1000.0, raw) == doctest::Approx(1.0 / 101.0));
    CHECK(monte_carlo_pvalue(up, 0.0, raw) == doctest::Approx(1.0));
    CHECK(monte_carlo_pvalue(lo, 0.5, raw) == doctest::Approx(1.0 / 101.0));
    CHECK(monte_carlo_pvalue(up, 50.0, raw) == doctest::Approx(52.0 / 101.0));
}

TEST_CASE("Monte Carlo p-values are calibrated under uniformity") {
    const auto tests = select_tests(3, {1}, {"T1", "Rmod"});
    const auto null = simulate_statistics(UniformDist{3}, 119, tests, {1000, false}, 999, 3, 1);
    std::vector<std::vector<double>> cols(tests.size());
    for (const auto& row : null)
        for (std::size_t j = 0; j < tests.size(); ++j) cols[j].push_back(row[j]);
    const auto obs = simulate_statistics(UniformDist{3}, 119, tests, {1000, false}, 200, 4, 1);
    for (std::size_t j = 0; j < tests.size(); ++j) {
        int small = 0;
        for (const auto& row : obs) small += monte_carlo_pvalue(tests[j], row[j], cols[j]) < 0.05;
        CHECK(std::abs(small / 200.0 - 0.05) <= 0.03);
    }
}

TEST_CASE("CSV formatting") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333");
    Table t{{"a", "b"}, {{"1", "x,y"}, {"inf", "2.5"}}};
    CHECK(render(t) == "a,b\n1,\"x,y\"\ninf,2.5\n");
    const auto j = nlohmann::json::parse(render(t, OutputFormat::json));
    CHECK(j.size() == 2);
    CHECK(j[0]["a"] == 1.0);
    CHECK(j[0]["b"] == "x,y");
    CHECK(j[1]["a"] == "inf");
}

TEST_CASE("critvals and power round trip through the CSV") {
    RunConfig cfg;
    cfg.d = 2;
    cfg.ns = {20};
    cfg.betas = {1, 3};
    cfg.tests = {"T1", "T3", "CA25"};
    cfg.reps = 300;
    cfg.cover_m = 500;
    cfg.seed = 9;
    const auto crit = cmd_critvals(cfg);
    REQUIRE(crit.rows.size() == 3);
    const auto path = temp_path("crit.csv");
    {
        std::ofstream out(path);
        write_table(crit, OutputFormat::csv, out);
    }
    const auto loaded = load_critical_values(path);
    CHECK(loaded.size() == 3);
    CHECK(loaded.count({2, 20, "CA25", "0.05"}) == 1);

    cfg.crit = path;
    cfg.alts = {"vmf:kappa=1", "uniform"};
    cfg.power_reps = 200;
    const auto power = cmd_power(cfg);
    REQUIRE(power.rows.size() == 6);
    for (const auto& row : power.rows) {
        const double p = std::stod(row[8]);
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
    }
    CHECK(std::stod(power.rows[0][8]) > 0.5);  // T1 against vmf:kappa=1

    cfg.ns = {30};
    CHECK(error_of([&] { cmd_power(cfg); }).find("critvals") != std::string::npos);
    cfg.crit.clear();
    CHECK(error_of([&] { cmd_power(cfg); }).find("critvals") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("cmd_test flags a concentrated sample") {
    const auto path = temp_path("vmf.csv");
    {
        Rng rng(21);
        const auto x = sample(vmf1(3, 1.0), 119, rng);
        std::ofstream out(path);
        out << "x1,x2,x3\n";
        out.precision(17);
        for (int i = 0; i < x.size(); ++i) out << x.row(i)[0] << "," << x.row(i)[1] << "," << x.row(i)[2] << "\n";
    }
    RunConfig cfg;
    cfg.d = 3;
    cfg.data = path;
    cfg.betas = {1, 2};
    cfg.tests = {"T1", "T2"};
    cfg.reps = 500;
    std::ostringstream log;
    const auto t = cmd_test(cfg, &log);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][3] == "119");
    CHECK(std::stod(t.rows[0][6]) < 0.01);
    CHECK(log.str().find("kept=119") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("bahadur table rounding") {
    const auto t = cmd_bahadur({});
    auto find = [&](const std::string& alt, const std::string& beta, const std::string& d) {
        for (const auto& r : t.rows)
            if (r[1] == alt && r[2] == beta && r[3] == d) return r[5];
        return std::string("missing");
    };
    CHECK(find("W", "4", "2") == "0.94");
    CHECK(find("LP6", "6", "2") == "0.004");
    CHECK(find("vMF", "1", "10") == "1.00");
}

TEST_CASE("config validation") {
    RunConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.alpha = 0.05;
    cfg.reps = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.reps = 10;
    cfg.workers = 0;
    CHECK_THROWS_AS(cfg.validate(), InputError);
    cfg.workers = 2;
    cfg.d = 5;
    CHECK(cfg.effective_cover_m() == 20000);
    cfg.d = 3;
    CHECK(cfg.effective_cover_m() == 5000);
}
