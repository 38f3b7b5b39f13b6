#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "qws/ensemble.hpp"
#include "qws/errors.hpp"

using namespace qws;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("qws_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string prefix(const std::string& name) const { return (dir / name).string(); }
};

struct Outcome {
    int code;
    std::string out, err;
};

Outcome qws_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int col(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return static_cast<int>(i);
        }
        FAIL("missing column " << name);
        return -1;
    }
    double num(std::size_t r, const std::string& name) const { return std::stod(rows[r][col(name)]); }
};

Table read_csv(const std::string& path) {
    std::istringstream in(slurp(path));
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (first) t.header = cells;
        else t.rows.push_back(cells);
        first = false;
    }
    return t;
}

}  // namespace

TEST_CASE("parse_angle") {
    CHECK(cli::parse_angle("0.25pi") == 0.25 * kPi);
    CHECK(cli::parse_angle("pi") == kPi);
    CHECK(cli::parse_angle("-pi") == -kPi);
    CHECK(cli::parse_angle("-0.5pi") == -0.5 * kPi);
    CHECK(cli::parse_angle("1.5") == 1.5);
    CHECK(cli::parse_angle("+2") == 2.0);
    CHECK(cli::parse_angle("1e-3") == 1e-3);
    for (const char* bad : {"", "abc", "pi/4", "0.25 pi", "1.0x", "nan", "infpi", "--1"}) {
        CHECK_THROWS_AS(cli::parse_angle(bad), std::invalid_argument);
    }
}

TEST_CASE("format_double round-trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 2.0, -0.0, 123456789.125}) {
        CHECK(std::stod(cli::format_double(v)) == v);
    }
    CHECK(cli::format_double(3.0) == "3");
}

TEST_CASE("exit codes") {
    Scratch s;
    CHECK(qws_run({"--help"}).code == 0);
    CHECK(qws_run({}).code == 2);
    CHECK(qws_run({"otoc", "--bogus"}).code == 2);
    CHECK(qws_run({"otoc", "--sites", "11", "--out", s.prefix("odd")}).code == 2);
    CHECK(qws_run({"otoc", "--disorder", "spatial", "--strength", "4", "--out", s.prefix("w")}).code == 2);
    CHECK(qws_run({"otoc", "--pairs", "xq", "--out", s.prefix("p")}).code == 2);
    CHECK(qws_run({"krylov", "--emit", "gram,lanczos", "--out", s.prefix("e")}).code == 2);
    CHECK(qws_run({"krylov", "--sites", "10", "--steps", "4", "--site", "5", "--out", s.prefix("e")}).code == 2);
    CHECK(qws_run({"dispersion", "--theta", "0.7pi", "--out", s.prefix("d")}).code == 2);
    CHECK(qws_run({"replay", "--manifest", s.prefix("missing.json")}).code == 2);

    const auto bad = qws_run({"dispersion", "--theta", "abc", "--out", s.prefix("d")});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("malformed angle") != std::string::npos);

    std::ostringstream sink;
    auto code_of = [&](auto&& ex) { return cli::exit_code_for(std::make_exception_ptr(ex), sink); };
    CHECK(code_of(NumericalDegeneracyError(4, "G not PSD")) == 3);
    CHECK(code_of(EnsembleError(2, 99, std::make_exception_ptr(NumericalDegeneracyError(7, "x")), "x")) == 3);
    CHECK(code_of(EnsembleError(2, 99, std::make_exception_ptr(std::invalid_argument("x")), "x")) == 2);
    CHECK(code_of(std::domain_error("x")) == 2);
    CHECK(code_of(std::runtime_error("x")) == 1);
}

TEST_CASE("dispersion command") {
    Scratch s;
    SUBCASE("theta = 0: group velocity is +-1 everywhere") {
        REQUIRE(qws_run({"dispersion", "--theta", "0", "--out", s.prefix("d0")}).code == 0);
        const auto t = read_csv(s.prefix("d0") + ".csv");
        CHECK(t.header == std::vector<std::string>{"k", "omega", "v_g"});
        CHECK(t.rows.size() == 1025);
        for (std::size_t r = 0; r < t.rows.size(); ++r) CHECK(std::abs(t.num(r, "v_g")) == 1.0);
        const auto m = nlohmann::json::parse(slurp(s.prefix("d0") + ".manifest.json"));
        CHECK(m["results"]["v_B"].get<double>() == 1.0);
        CHECK(m["results"]["zeta"] == "unbounded");
    }
    SUBCASE("theta = pi/2: omega(0) = sqrt 2") {
        REQUIRE(qws_run({"dispersion", "--theta", "0.5pi", "--k-points", "129", "--out", s.prefix("d1")}).code == 0);
        const auto t = read_csv(s.prefix("d1") + ".csv");
        REQUIRE(t.rows[64][0] == "0");
        CHECK(t.num(64, "omega") == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    }
}

TEST_CASE("evolve command") {
    Scratch s;
    SUBCASE("zero-width disorder: stderr columns vanish, rows are normalized") {
        REQUIRE(qws_run({"evolve", "--theta", "0.25pi", "--sites", "40", "--steps", "20", "--disorder", "spatial",
                         "--strength", "0", "--realizations", "5", "--out", s.prefix("e")})
                    .code == 0);
        const auto p = read_csv(s.prefix("e") + ".csv");
        CHECK(p.header == std::vector<std::string>{"t", "x", "p_mean", "p_stderr"});
        REQUIRE(p.rows.size() == 21 * 40);
        std::map<int, double> sums;
        for (std::size_t r = 0; r < p.rows.size(); ++r) {
            CHECK(p.num(r, "p_stderr") == 0.0);
            sums[std::stoi(p.rows[r][0])] += p.num(r, "p_mean");
        }
        for (const auto& [t, sum] : sums) CHECK(std::abs(sum - 1.0) <= 1e-9);
        const auto ipr = read_csv(s.prefix("e") + "_ipr.csv");
        CHECK(ipr.header == std::vector<std::string>{"t", "ipr_mean", "ipr_stderr"});
        CHECK(ipr.num(0, "ipr_mean") == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t r = 0; r < ipr.rows.size(); ++r) CHECK(ipr.num(r, "ipr_stderr") == 0.0);
    }
    SUBCASE("theta = 0 splits the walker onto -t and +t") {
        REQUIRE(qws_run({"evolve", "--theta", "0", "--sites", "20", "--steps", "6", "--out", s.prefix("e0")}).code == 0);
        const auto p = read_csv(s.prefix("e0") + ".csv");
        for (std::size_t r = 0; r < p.rows.size(); ++r) {
            const int t = std::stoi(p.rows[r][0]), x = std::stoi(p.rows[r][1]);
            const double expected = t == 0 ? (x == 0 ? 1.0 : 0.0) : (std::abs(x) == t ? 0.5 : 0.0);
            CHECK(p.num(r, "p_mean") == doctest::Approx(expected).epsilon(1e-15));
        }
    }
    SUBCASE("steps beyond the causal horizon warn but run") {
        const auto o = qws_run({"evolve", "--sites", "10", "--steps", "8", "--out", s.prefix("w")});
        CHECK(o.code == 0);
        CHECK(o.err.find("warning") != std::string::npos);
    }
}

TEST_CASE("otoc command") {
    Scratch s;
    REQUIRE(qws_run({"otoc", "--theta", "0", "--sites", "100", "--steps", "50", "--out", s.prefix("o")}).code == 0);
    const auto t = read_csv(s.prefix("o") + ".csv");
    CHECK(t.header == std::vector<std::string>{"pair", "t", "l", "c_mean", "c_stderr"});
    CHECK(t.rows.size() == 9u * 51 * 100);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const int time = std::stoi(t.rows[r][1]), l = std::stoi(t.rows[r][2]);
        if (std::abs(l) > time) CHECK(t.num(r, "c_mean") == 0.0);
        if (t.rows[r][0] == "xx" && time == 0) CHECK(t.num(r, "c_mean") == 0.0);
    }
    const auto m = nlohmann::json::parse(slurp(s.prefix("o") + ".manifest.json"));
    CHECK(m["normalization"] == "trace");
    CHECK(m["results"]["v_B"].get<double>() == 1.0);
    CHECK(std::abs(m["results"]["front_velocity"]["xx"]["slope"].get<double>() - 1.0) <= 0.02);
    CHECK(m["outputs"].size() == 1);
}

TEST_CASE("krylov command") {
    Scratch s;
    SUBCASE("clean pi/6: odd Gram entries vanish and K(1) = 1") {
        REQUIRE(qws_run({"krylov", "--theta", "1/6", "--sites", "80", "--steps", "20", "--out", s.prefix("bad")}).code == 2);
        REQUIRE(qws_run({"krylov", "--theta", "0.16666666666666666pi", "--sites", "80", "--steps", "20", "--emit",
                         "gram,norms,phi,k", "--out", s.prefix("k")})
                    .code == 0);
        const auto g = read_csv(s.prefix("k") + "_gram.csv");
        CHECK(g.header == std::vector<std::string>{"n", "m", "value"});
        CHECK(g.rows.size() == 21u * 21);
        for (std::size_t r = 0; r < g.rows.size(); ++r) {
            if ((std::stoi(g.rows[r][0]) - std::stoi(g.rows[r][1])) % 2 != 0) CHECK(std::abs(g.num(r, "value")) < 1e-14);
        }
        const auto k = read_csv(s.prefix("k") + "_k.csv");
        CHECK(k.header == std::vector<std::string>{"t", "k_mean", "k_stderr"});
        CHECK(k.num(1, "k_mean") == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(read_csv(s.prefix("k") + "_norms.csv").header == std::vector<std::string>{"n", "norm_A"});
        CHECK(read_csv(s.prefix("k") + "_phi.csv").header == std::vector<std::string>{"n", "t", "value"});
    }
    SUBCASE("theta = 0: K(t) = t exactly") {
        REQUIRE(qws_run({"krylov", "--theta", "0", "--sites", "60", "--steps", "25", "--out", s.prefix("k0")}).code == 0);
        const auto k = read_csv(s.prefix("k0") + "_k.csv");
        REQUIRE(k.rows.size() == 26);
        for (std::size_t r = 0; r < k.rows.size(); ++r) CHECK(k.num(r, "k_mean") == static_cast<double>(r));
    }
}

TEST_CASE("manifest replay reproduces CSV bytes") {
    Scratch s;
    const std::vector<std::vector<std::string>> runs{
        {"dispersion", "--theta", "0.3", "--out", s.prefix("g_disp")},
        {"evolve", "--theta", "0.25pi", "--sites", "40", "--steps", "20", "--disorder", "temporal", "--strength", "0.5pi",
         "--realizations", "12", "--seed", "77", "--initial", "up", "--out", s.prefix("g_ev")},
        {"otoc", "--theta", "0.2pi", "--sites", "30", "--steps", "15", "--disorder", "spatial", "--strength", "1.1",
         "--distribution", "binary", "--realizations", "9", "--pairs", "xx,zy", "--norm", "half", "--out", s.prefix("g_ot")},
        {"krylov", "--theta", "0.4", "--sites", "40", "--steps", "18", "--disorder", "spatial", "--strength", "0.5pi",
         "--realizations", "6", "--mu", "y", "--site", "-3", "--emit", "gram,norms,phi,k", "--out", s.prefix("g_kr")},
    };
    for (const auto& args : runs) {
        const auto first = qws_run(args);
        REQUIRE(first.code == 0);
        const std::string prefix = args.back();
        const auto manifest = nlohmann::json::parse(slurp(prefix + ".manifest.json"));
        const auto replay = qws_run({"replay", "--manifest", prefix + ".manifest.json", "--out", prefix + "_replay", "--workers", "3"});
        REQUIRE(replay.code == 0);
        const auto outputs = manifest["outputs"].get<std::vector<std::string>>();
        REQUIRE_FALSE(outputs.empty());
        for (const auto& path : outputs) {
            const std::string suffix = path.substr(prefix.size());
            CHECK(slurp(path) == slurp(prefix + "_replay" + suffix));
        }
        const auto again = nlohmann::json::parse(slurp(prefix + "_replay.manifest.json"));
        auto cfg = manifest["config"];
        cfg["out"] = prefix + "_replay";
        CHECK(again["config"] == cfg);
    }
}

TEST_CASE("CSV bytes do not depend on the worker count") {
    Scratch s;
    for (const char* cmd : {"evolve", "otoc", "krylov"}) {
        std::vector<std::string> base{cmd, "--theta", "0.25pi", "--sites", "40", "--steps", "20", "--disorder", "spatial",
                                      "--strength", "0.5pi", "--realizations", "24", "--seed", "5"};
        auto one = base, eight = base;
        one.insert(one.end(), {"--workers", "1", "--out", s.prefix(std::string(cmd) + "_w1")});
        eight.insert(eight.end(), {"--workers", "8", "--out", s.prefix(std::string(cmd) + "_w8")});
        REQUIRE(qws_run(one).code == 0);
        REQUIRE(qws_run(eight).code == 0);
        const auto m = nlohmann::json::parse(slurp(s.prefix(std::string(cmd) + "_w1") + ".manifest.json"));
        for (const auto& path : m["outputs"].get<std::vector<std::string>>()) {
            const std::string suffix = path.substr(s.prefix(std::string(cmd) + "_w1").size());
            CHECK(slurp(path) == slurp(s.prefix(std::string(cmd) + "_w8") + suffix));
        }
    }
}

TEST_CASE("options JSON round trip") {
    cli::RunOptions o;
    o.command = "otoc";
    o.theta = 0.1 + 0.2;
    o.disorder = DisorderKind::Temporal;
    o.strength = 1.0 / 3.0;
    o.seed = ~0ULL;
    o.pairs = {{Axis::Z, Axis::X}};
    o.norm = Normalization::Unit;
    o.out = "x";
    const auto back = cli::options_from_json(nlohmann::json::parse(cli::to_json(o).dump()));
    CHECK(back.theta == o.theta);
    CHECK(back.strength == o.strength);
    CHECK(back.seed == o.seed);
    CHECK(back.pairs == o.pairs);
    CHECK(back.norm == o.norm);
    CHECK(cli::to_json(back) == cli::to_json(o));
}
