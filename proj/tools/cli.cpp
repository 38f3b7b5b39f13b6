#include "cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "qws/ensemble.hpp"
#include "qws/errors.hpp"
#include "qws/krylov.hpp"

namespace qws::cli {

namespace {

constexpr std::string_view kToolName = "qws";
constexpr std::string_view kToolVersion = "0.1.0";

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_commas(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        if (end > start) parts.emplace_back(text.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

std::vector<std::string> parse_emit(std::string_view text) {
    auto items = split_commas(text);
    if (items.empty()) throw std::invalid_argument("--emit needs at least one of gram, norms, phi, k");
    for (const auto& e : items) {
        if (e != "gram" && e != "norms" && e != "phi" && e != "k") {
            throw std::invalid_argument("unknown emission '" + e + "' (expected gram, norms, phi or k)");
        }
    }
    return items;
}

class CsvWriter {
public:
    explicit CsvWriter(std::string_view header) { buf_.append(header).push_back('\n'); }

    CsvWriter& field(double v) {
        sep();
        buf_ += format_double(v);
        return *this;
    }
    CsvWriter& field(long long v) {
        sep();
        buf_ += std::to_string(v);
        return *this;
    }
    CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
    CsvWriter& field(std::string_view s) {
        sep();
        buf_ += s;
        return *this;
    }
    void end_row() {
        buf_.push_back('\n');
        fresh_ = true;
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot open '" + path + "' for writing");
        f.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
        if (!f) throw IoError("failed writing '" + path + "'");
    }

private:
    void sep() {
        if (!fresh_) buf_.push_back(',');
        fresh_ = false;
    }

    std::string buf_;
    bool fresh_ = true;
};

std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void warn_horizon(const RunOptions& opts, std::ostream& log) {
    if (2 * opts.steps > opts.sites) {
        log << "warning: steps " << opts.steps << " exceed sites/2 = " << opts.sites / 2
            << "; the ring wraps back inside the light cone\n";
    }
}

// Probability rows and IPR series packed into one sample vector per realization.
std::vector<std::string> run_evolve(const RunOptions& opts, int workers, nlohmann::json&) {
    WalkConfig config = opts.walk_config();
    const int L = config.sites, T = config.steps;
    const auto psi0 = initial_state(L, opts.initial);
    const auto res = run_ensemble(
        [&](std::uint64_t seed, int) {
            WalkConfig c = config;
            c.seed = seed;
            const auto traj = evolve(c, psi0);
            std::vector<double> sample = traj.probabilities;
            sample.insert(sample.end(), traj.ipr.begin(), traj.ipr.end());
            return sample;
        },
        EnsembleSpec{opts.effective_realizations(), opts.seed}, workers);

    CsvWriter p("t,x,p_mean,p_stderr");
    for (int t = 0; t <= T; ++t) {
        for (int l = -L / 2; l < L / 2; ++l) {
            const std::size_t i = static_cast<std::size_t>(t) * L + internal_site(l, L);
            p.field(t).field(l).field(res.mean[i]).field(res.std_error[i]).end_row();
        }
    }
    CsvWriter ipr("t,ipr_mean,ipr_stderr");
    const std::size_t off = static_cast<std::size_t>(T + 1) * L;
    for (int t = 0; t <= T; ++t) ipr.field(t).field(res.mean[off + t]).field(res.std_error[off + t]).end_row();

    const std::string a = opts.out + ".csv", b = opts.out + "_ipr.csv";
    p.save(a);
    ipr.save(b);
    return {a, b};
}

std::vector<std::string> run_dispersion(const RunOptions& opts, nlohmann::json& results) {
    const int n = opts.k_points;
    if (n < 64) throw std::invalid_argument("--k-points must be at least 64");
    CsvWriter w("k,omega,v_g");
    for (int i = 0; i < n; ++i) {
        // Exact 0 at the midpoint of odd grids and exact +-pi at the ends.
        const double k = kPi * (2.0 * i - (n - 1)) / (n - 1);
        w.field(k).field(dispersion(k, opts.theta)).field(group_velocity(k, opts.theta)).end_row();
    }
    results["v_B"] = butterfly_velocity(opts.theta, n);
    const auto zeta = localization_length(opts.theta);
    results["zeta"] = zeta ? nlohmann::json(*zeta) : nlohmann::json("unbounded");

    const std::string path = opts.out + ".csv";
    w.save(path);
    return {path};
}

std::vector<std::string> run_otoc(const RunOptions& opts, int workers, nlohmann::json& results) {
    const auto grid = otoc_ensemble(opts.walk_config(), opts.pairs, opts.norm, opts.effective_realizations(), workers);
    const int L = grid.sites(), T = grid.steps();

    CsvWriter w("pair,t,l,c_mean,c_stderr");
    nlohmann::json fronts = nlohmann::json::object();
    for (std::size_t p = 0; p < grid.pairs.size(); ++p) {
        const std::string label = grid.pairs[p].label();
        for (int t = 0; t <= T; ++t) {
            for (int l = -L / 2; l < L / 2; ++l) {
                w.field(label).field(t).field(l).field(grid.at(p, t, l)).field(grid.error_at(p, t, l)).end_row();
            }
        }
        const auto fit = front_velocity(grid, p);
        fronts[label] = fit.found ? nlohmann::json{{"slope", fit.slope}, {"intercept", fit.intercept}, {"residual", fit.residual}}
                                  : nlohmann::json(nullptr);
    }
    try {
        results["v_B"] = butterfly_velocity(opts.theta);
    } catch (const std::domain_error&) {
        results["v_B"] = nullptr;  // theta0 outside the dispersion domain
    }
    results["front_velocity"] = fronts;
    results["front_threshold"] = 0.1;

    const std::string path = opts.out + ".csv";
    w.save(path);
    return {path};
}

std::vector<std::string> run_krylov(const RunOptions& opts, int workers, nlohmann::json&) {
    const WalkConfig config = opts.walk_config();
    std::vector<std::string> written;
    auto wants = [&](std::string_view e) { return std::find(opts.emit.begin(), opts.emit.end(), e) != opts.emit.end(); };

    if (wants("gram") || wants("norms") || wants("phi")) {
        WalkConfig first = config;
        first.seed = derive_seed(opts.seed, 0);
        const auto gram = gram_matrix(first, opts.mu, opts.site);
        const auto dec = krylov_decompose(gram);
        if (wants("gram")) {
            CsvWriter w("n,m,value");
            for (int n = 0; n < gram.size(); ++n) {
                for (int m = 0; m < gram.size(); ++m) w.field(n).field(m).field(gram(n, m)).end_row();
            }
            written.push_back(opts.out + "_gram.csv");
            w.save(written.back());
        }
        if (wants("norms")) {
            CsvWriter w("n,norm_A");
            for (int n = 0; n < dec.rank; ++n) w.field(n).field(dec.norms[n]).end_row();
            written.push_back(opts.out + "_norms.csv");
            w.save(written.back());
        }
        if (wants("phi")) {
            CsvWriter w("n,t,value");
            for (int n = 0; n < dec.rank; ++n) {
                for (int t = 0; t < dec.snapshots; ++t) w.field(n).field(t).field(dec.amplitudes[n][t]).end_row();
            }
            written.push_back(opts.out + "_phi.csv");
            w.save(written.back());
        }
    }
    if (wants("k")) {
        const auto k = k_complexity_ensemble(config, opts.mu, opts.site, opts.effective_realizations(), workers);
        CsvWriter w("t,k_mean,k_stderr");
        for (std::size_t t = 0; t < k.mean.size(); ++t) {
            w.field(static_cast<long long>(t)).field(k.mean[t]).field(k.std_error[t]).end_row();
        }
        written.push_back(opts.out + "_k.csv");
        w.save(written.back());
    }
    return written;
}

void validate(const RunOptions& opts) {
    if (opts.out.empty()) throw std::invalid_argument("--out prefix is required");
    if (!std::isfinite(opts.theta)) throw std::invalid_argument("theta must be finite");
    if (opts.command == "dispersion") return;
    opts.walk_config().validate();
    if (opts.realizations < 1) throw std::invalid_argument("--realizations must be positive");
    if (opts.command == "otoc" && opts.pairs.empty()) throw std::invalid_argument("--pairs must not be empty");
    if (opts.command == "krylov" && (opts.site < -opts.sites / 2 || opts.site >= opts.sites / 2)) {
        throw std::invalid_argument("--site must be a centered label in [-L/2, L/2-1]");
    }
}

RunOptions load_manifest(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read manifest '" + path + "'");
    const auto j = nlohmann::json::parse(f);
    if (j.value("tool", "") != kToolName) throw std::invalid_argument("'" + path + "' is not a qws manifest");
    return options_from_json(j.at("config"));
}

}  // namespace

int exit_code_for(std::exception_ptr ep, std::ostream& err) {
    try {
        std::rethrow_exception(ep);
    } catch (const EnsembleError& e) {
        err << "error: " << e.what() << '\n';
        if (e.cause()) {
            std::ostringstream sink;
            return exit_code_for(e.cause(), sink);
        }
        return 1;
    } catch (const NumericalDegeneracyError& e) {
        err << "error: numerical degeneracy: " << e.what() << '\n';
        return kDegenerate;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed manifest: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

double parse_angle(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    bool times_pi = false;
    if (s.size() >= 2 && s.substr(s.size() - 2) == "pi") {
        times_pi = true;
        s.remove_suffix(2);
    }
    double v = 1.0;
    if (times_pi && (s.empty() || s == "-" || s == "+")) {
        v = s == "-" ? -1.0 : 1.0;
    } else {
        if (!s.empty() && s.front() == '+') s.remove_prefix(1);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
            throw std::invalid_argument("malformed angle '" + std::string(text) + "' (use radians or e.g. 0.25pi)");
        }
    }
    const double r = times_pi ? v * kPi : v;
    if (!std::isfinite(r)) throw std::invalid_argument("angle '" + std::string(text) + "' is not finite");
    return r;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

WalkConfig RunOptions::walk_config() const {
    WalkConfig c;
    c.sites = sites;
    c.steps = steps;
    c.seed = seed;
    c.disorder = DisorderSpec{disorder, theta, disorder == DisorderKind::Clean ? 0.0 : strength, distribution};
    return c;
}

int RunOptions::effective_realizations() const { return disorder == DisorderKind::Clean ? 1 : realizations; }

nlohmann::json to_json(const RunOptions& o) {
    nlohmann::json j{{"command", o.command}, {"theta", o.theta}, {"out", o.out}};
    if (o.command == "dispersion") {
        j["k_points"] = o.k_points;
        return j;
    }
    j["sites"] = o.sites;
    j["steps"] = o.steps;
    j["disorder"] = to_string(o.disorder);
    j["strength"] = o.walk_config().disorder.strength;
    j["distribution"] = to_string(o.distribution);
    j["realizations"] = o.effective_realizations();
    j["seed"] = o.seed;
    if (o.command == "evolve") j["initial"] = to_string(o.initial);
    if (o.command == "otoc") {
        auto pairs = nlohmann::json::array();
        for (const auto& p : o.pairs) pairs.push_back(p.label());
        j["pairs"] = pairs;
        j["norm"] = to_string(o.norm);
    }
    if (o.command == "krylov") {
        j["mu"] = std::string(1, axis_char(o.mu));
        j["site"] = o.site;
        j["emit"] = o.emit;
    }
    return j;
}

RunOptions options_from_json(const nlohmann::json& j) {
    RunOptions o;
    o.command = j.at("command").get<std::string>();
    if (o.command != "dispersion" && o.command != "evolve" && o.command != "otoc" && o.command != "krylov") {
        throw std::invalid_argument("manifest names unknown command '" + o.command + "'");
    }
    o.theta = j.at("theta").get<double>();
    o.out = j.at("out").get<std::string>();
    if (o.command == "dispersion") {
        o.k_points = j.at("k_points").get<int>();
        return o;
    }
    o.sites = j.at("sites").get<int>();
    o.steps = j.at("steps").get<int>();
    o.disorder = parse_disorder_kind(j.at("disorder").get<std::string>());
    o.strength = j.at("strength").get<double>();
    o.distribution = parse_distribution(j.at("distribution").get<std::string>());
    o.realizations = j.at("realizations").get<int>();
    o.seed = j.at("seed").get<std::uint64_t>();
    if (o.command == "evolve") o.initial = parse_initial_state(j.at("initial").get<std::string>());
    if (o.command == "otoc") {
        o.pairs.clear();
        for (const auto& p : j.at("pairs")) o.pairs.push_back(parse_pair(p.get<std::string>()));
        o.norm = parse_normalization(j.at("norm").get<std::string>());
    }
    if (o.command == "krylov") {
        const auto mu = j.at("mu").get<std::string>();
        if (mu.size() != 1) throw std::invalid_argument("manifest mu must be one of x, y, z");
        o.mu = parse_axis(mu[0]);
        o.site = j.at("site").get<int>();
        o.emit = j.at("emit").get<std::vector<std::string>>();
    }
    return o;
}

std::vector<std::string> execute(const RunOptions& opts, int workers, std::ostream& log) {
    validate(opts);
    if (opts.command != "dispersion") warn_horizon(opts, log);

    const auto start_wall = std::chrono::system_clock::now();
    const auto start = std::chrono::steady_clock::now();
    nlohmann::json results = nlohmann::json::object();
    std::vector<std::string> written;
    if (opts.command == "dispersion") written = run_dispersion(opts, results);
    else if (opts.command == "evolve") written = run_evolve(opts, workers, results);
    else if (opts.command == "otoc") written = run_otoc(opts, workers, results);
    else written = run_krylov(opts, workers, results);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const std::string manifest_path = opts.out + ".manifest.json";
    nlohmann::json m{{"tool", kToolName},
                     {"version", kToolVersion},
                     {"config", to_json(opts)},
                     {"seed", opts.seed},
                     {"normalization", opts.command == "otoc" ? nlohmann::json(to_string(opts.norm)) : nlohmann::json(nullptr)},
                     {"started_utc", utc_timestamp(start_wall)},
                     {"wall_clock_seconds", elapsed},
                     {"workers", workers},
                     {"outputs", written},
                     {"results", results}};
    std::ofstream f(manifest_path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + manifest_path + "' for writing");
    f << m.dump(2) << '\n';
    written.push_back(manifest_path);
    return written;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete-time quantum walk scrambling diagnostics", std::string(kToolName)};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    RunOptions opts;
    std::string theta = "0", strength = "0", disorder = "clean", distribution = "uniform", initial = "sym";
    std::string pairs = "xx,xy,xz,yx,yy,yz,zx,zy,zz", norm = "trace", mu = "x", emit = "k", manifest;
    std::string replay_out;
    int workers = 0;

    auto add_walk = [&](CLI::App* sub) {
        sub->add_option("--theta", theta, "coin angle theta0 (radians, or e.g. 0.25pi)");
        sub->add_option("--sites", opts.sites, "ring size L (even)");
        sub->add_option("--steps", opts.steps, "time steps T");
        sub->add_option("--disorder", disorder, "clean | spatial | temporal");
        sub->add_option("--strength", strength, "disorder width W in [0, pi]");
        sub->add_option("--distribution", distribution, "uniform | binary");
        sub->add_option("--realizations", opts.realizations, "ensemble size N");
        sub->add_option("--seed", opts.seed, "base seed");
        sub->add_option("--workers", workers, "worker threads (default: QWS_WORKERS or hardware)");
        sub->add_option("--out", opts.out, "output prefix")->required();
    };

    auto* disp = app.add_subcommand("dispersion", "dispersion relation, group and butterfly velocity");
    disp->add_option("--theta", theta, "coin angle (radians, or e.g. 0.25pi)");
    disp->add_option("--k-points", opts.k_points, "k grid points on [-pi, pi]");
    disp->add_option("--out", opts.out, "output prefix")->required();

    auto* ev = app.add_subcommand("evolve", "position distributions and IPR");
    add_walk(ev);
    ev->add_option("--initial", initial, "sym | up | down");

    auto* ot = app.add_subcommand("otoc", "OTOC grid C_{mu nu}(l, t)");
    add_walk(ot);
    ot->add_option("--pairs", pairs, "comma list of mu nu pairs, e.g. xx,zz,xy");
    ot->add_option("--norm", norm, "trace (1/D) | half (1/2) | unit (1)");

    auto* kr = app.add_subcommand("krylov", "Gram matrix, Krylov norms, amplitudes and K-complexity");
    add_walk(kr);
    kr->add_option("--mu", mu, "operator axis x | y | z");
    kr->add_option("--site", opts.site, "operator site (centered label)");
    kr->add_option("--emit", emit, "comma list of gram, norms, phi, k");

    auto* rp = app.add_subcommand("replay", "rerun from a manifest");
    rp->add_option("--manifest", manifest, "manifest JSON")->required();
    rp->add_option("--out", replay_out, "output prefix (default: the manifest's)");
    rp->add_option("--workers", workers, "worker threads");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == static_cast<int>(CLI::ExitCodes::Success) ? kOk : kUsage;
    }

    try {
        RunOptions run_opts;
        if (rp->parsed()) {
            run_opts = load_manifest(manifest);
            if (!replay_out.empty()) run_opts.out = replay_out;
        } else {
            run_opts = opts;
            run_opts.command = app.get_subcommands().front()->get_name();
            run_opts.theta = parse_angle(theta);
            if (run_opts.command != "dispersion") {
                run_opts.strength = parse_angle(strength);
                run_opts.disorder = parse_disorder_kind(disorder);
                run_opts.distribution = parse_distribution(distribution);
                run_opts.initial = parse_initial_state(initial);
                run_opts.pairs = parse_pairs(pairs);
                run_opts.norm = parse_normalization(norm);
                if (mu.size() != 1) throw std::invalid_argument("--mu must be one of x, y, z");
                run_opts.mu = parse_axis(mu[0]);
                run_opts.emit = parse_emit(emit);
            }
        }
        if (workers < 0) throw std::invalid_argument("--workers must be non-negative");
        const int w = workers > 0 ? workers : default_workers();
        for (const auto& path : execute(run_opts, w, err)) out << path << '\n';
        return kOk;
    } catch (...) {
        return exit_code_for(std::current_exception(), err);
    }
}

}  // namespace qws::cli
