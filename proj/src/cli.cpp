#include "henon/cli.hpp"

#include "henon/bubble.hpp"
#include "henon/coupling.hpp"
#include "henon/error.hpp"
#include "henon/groundstate.hpp"
#include "henon/radial_ode.hpp"
#include "henon/spectrum.hpp"
#include "henon/verify.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

namespace henon::cli {

namespace {

using nlohmann::json;

std::shared_ptr<spdlog::logger> logger() {
    static const std::shared_ptr<spdlog::logger> log = [] {
        auto l = std::make_shared<spdlog::logger>("henon", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        l->set_pattern("[%l] %v");
        const char* env = std::getenv("HENON_LOG");
        const std::string level = env ? env : "error";
        if (level == "debug") l->set_level(spdlog::level::debug);
        else if (level == "info") l->set_level(spdlog::level::info);
        else l->set_level(spdlog::level::err);
        return l;
    }();
    return log;
}

/// A table of rows with a fixed header; cells are preformatted strings.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t) {
    std::string s;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) s += ',';
            s += csv_field(cells[i]);
        }
        s += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return s;
}

json table_json(const Table& t) {
    json rows = json::array();
    for (const auto& r : t.rows) {
        json o = json::object();
        for (std::size_t i = 0; i < t.header.size(); ++i) {
            const std::string& cell = r[i];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty()) o[t.header[i]] = nullptr;
            else if (ec == std::errc() && ptr == cell.data() + cell.size()) o[t.header[i]] = v;
            else o[t.header[i]] = cell;
        }
        rows.push_back(std::move(o));
    }
    return rows;
}

/// What a command produced: a JSON document and optionally a table for CSV output.
struct Artifact {
    json document = json::object();
    std::optional<Table> table;
    bool sidecar = false;  ///< CSV output also writes <out>.json with the document
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::IoError, "cannot open \"" + path + "\" for writing");
    f << text;
    if (!f) throw Error(ErrorKind::IoError, "write to \"" + path + "\" failed");
}

void emit(const RunConfig& cfg, Artifact art, std::ostream& out) {
    art.document["schema_version"] = kSchemaVersion;
    art.document["command"] = cfg.command;
    std::string text;
    if (cfg.format == Format::Csv) {
        if (!art.table)
            throw Error(ErrorKind::ConstraintViolation, "command \"" + cfg.command + "\" has no CSV form; use --format json");
        text = to_csv(*art.table);
    } else {
        if (art.table && !art.sidecar) art.document["rows"] = table_json(*art.table);
        text = art.document.dump(2) + "\n";
    }
    if (cfg.out.empty()) {
        out << text;
        return;
    }
    write_text(cfg.out, text);
    if (cfg.format == Format::Csv && art.sidecar) write_text(cfg.out + ".json", art.document.dump(2) + "\n");
    logger()->info("wrote {}", cfg.out);
}

// ---------------------------------------------------------------- config access

bool has(const json& c, const char* key) { return c.contains(key) && !c.at(key).is_null(); }

template <typename T>
T get_or(const json& c, const char* key, T fallback) {
    if (!has(c, key)) return fallback;
    try {
        return c.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("key \"") + key + "\": " + e.what());
    }
}

std::string get_string(const json& c, const char* key, const std::string& fallback = {}) {
    if (!has(c, key)) return fallback;
    const json& v = c.at(key);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw Error(ErrorKind::ParseError, std::string("key \"") + key + "\" must be a string");
}

template <typename T>
T require(const json& c, const char* key) {
    if (!has(c, key)) throw Error(ErrorKind::ParseError, std::string("missing key \"") + key + "\"");
    return get_or<T>(c, key, T{});
}

WeightSpace space_of(const json& c) {
    return validate_space(require<int>(c, "n"), require<double>(c, "a"), require<double>(c, "b"));
}

/// beta defaults to p - alpha, the critical choice alpha + beta = p.
ProblemParams params_of(const json& c) {
    const WeightSpace w = space_of(c);
    const double alpha = require<double>(c, "alpha");
    return validate_params(w.n, w.a, w.b, require<double>(c, "nu"), alpha, get_or<double>(c, "beta", w.p - alpha));
}

bool is_k_spec(const json& c) { return has(c, "kappa"); }

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(' ');
        const auto e = item.find_last_not_of(' ');
        if (b == std::string::npos) throw Error(ErrorKind::ParseError, "empty entry in list \"" + text + "\"");
        item = item.substr(b, e - b + 1);
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
        if (ec != std::errc() || ptr != item.data() + item.size())
            throw Error(ErrorKind::ParseError, "not a number: \"" + item + "\"");
        v.push_back(x);
    }
    return v;
}

std::vector<double> list_of(const json& c, const char* key) {
    const json& v = c.at(key);
    if (v.is_array()) return v.get<std::vector<double>>();
    if (v.is_number()) return {v.get<double>()};
    return parse_list(v.get<std::string>());
}

// ---------------------------------------------------------------- parallel rows

/// Evaluates fn(i) for i < count on up to `jobs` threads; results keep index order.
template <typename Fn>
std::vector<std::vector<std::string>> parallel_rows(std::size_t count, int jobs, Fn fn) {
    std::vector<std::vector<std::string>> rows(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) rows[i] = fn(i);
    };
    const int threads = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    return rows;
}

std::string error_cell(const std::exception& e) { return e.what(); }

// ---------------------------------------------------------------- commands

Artifact cmd_bubble(const RunConfig& cfg) {
    const json& c = cfg.config;
    const WeightSpace w = space_of(c);
    const double mu = get_or<double>(c, "mu", 1.0);
    const auto points = get_or<int>(c, "points", 2001);
    if (!(mu > 0.0)) throw Error(ErrorKind::ConstraintViolation, "mu > 0 required");
    if (points < 2) throw Error(ErrorKind::ConstraintViolation, "points >= 2 required");
    const BubbleParams bp = make_bubble(w, mu);
    const double T = default_half_width(w);
    const double centre = -std::log(mu);
    const RadialProfile prof = bubble_profile(bp, centre - T, centre + T, static_cast<std::size_t>(points));

    Artifact art;
    art.sidecar = true;
    art.document["lambda"] = w.lambda;
    art.document["tail_fit"] = {{"rate", prof.tail_rate()}};
    art.document["params"] = {{"n", w.n}, {"a", w.a}, {"b", w.b}, {"p", w.p}, {"mu", mu}};
    art.document["K"] = bubble_constant(w);
    Table t{{"t", "value"}, {}};
    const auto tg = prof.t_grid();
    const auto v = prof.values();
    for (std::size_t i = 0; i < tg.size(); ++i) t.rows.push_back({format_number(tg[i]), format_number(v[i])});
    if (cfg.format == Format::Json) art.document["profile"] = {{"t", std::vector<double>(tg.begin(), tg.end())},
                                                              {"value", std::vector<double>(v.begin(), v.end())}};
    art.table = std::move(t);
    return art;
}

Table sync_table(const std::vector<SyncConstants>& roots, int k) {
    Table t;
    t.header = {"branch", "label"};
    for (int i = 1; i <= k; ++i) t.header.push_back("c" + std::to_string(i));
    t.header.push_back("residual");
    for (const auto& r : roots) {
        std::vector<std::string> row{std::to_string(r.branch), std::string(to_string(r.label))};
        for (double x : r.c) row.push_back(format_number(x));
        row.push_back(format_number(r.residual));
        t.rows.push_back(std::move(row));
    }
    return t;
}

Artifact cmd_sync(const RunConfig& cfg) {
    const json& c = cfg.config;
    std::vector<SyncConstants> roots;
    int k = 2;
    Artifact art;
    if (is_k_spec(c)) {
        const CouplingSpec spec = coupling_from_json(c);
        k = spec.k();
        roots = solve_sync_k(spec, get_or<int>(c, "starts", 200), cfg.seed, cfg.jobs);
        art.document["spec"] = to_json(spec);
    } else {
        const ProblemParams pp = params_of(c);
        roots = solve_sync_2(pp);
        art.document["params"] = to_json(pp);
        art.document["reduction_roots"] = scalar_reduction_roots(pp).roots;
    }
    if (get_or<bool>(c, "require_positive", false)) roots = require_positive_root(roots);
    json list = json::array();
    for (const auto& r : roots) list.push_back(to_json(r));
    art.document["roots"] = std::move(list);
    art.table = sync_table(roots, k);
    art.sidecar = true;
    return art;
}

Artifact cmd_solve_ode(const RunConfig& cfg) {
    const json& c = cfg.config;
    const CouplingSpec spec = is_k_spec(c) ? coupling_from_json(c) : CouplingSpec::from_pair(params_of(c));
    InitialData init;
    if (has(c, "init")) {
        init.values_at_zero = list_of(c, "init");
    } else {
        if (is_k_spec(c)) throw Error(ErrorKind::ParseError, "--init is required for a k-coupled spec");
        const double K = bubble_constant(spec.space());
        const SyncConstants sc = require_positive_root(solve_sync_2(params_of(c))).front();
        for (double x : sc.c) init.values_at_zero.push_back(x * K);
    }
    if (static_cast<int>(init.values_at_zero.size()) != spec.k())
        throw Error(ErrorKind::ConstraintViolation, "--init needs " + std::to_string(spec.k()) + " values");
    PicardOptions opt;
    opt.tol = get_or<double>(c, "tol", opt.tol);
    const double r_max = get_or<double>(c, "rmax", 10.0);
    const auto points = get_or<int>(c, "points", 4001);
    if (points < 8) throw Error(ErrorKind::ConstraintViolation, "points >= 8 required");

    const RadialSolution sol = picard_solve(spec, init, r_max, opt);
    const std::vector<RadialProfile> profiles = sol.to_profiles(static_cast<std::size_t>(points));

    Artifact art;
    art.sidecar = true;
    art.document["spec"] = to_json(spec);
    art.document["init"] = init.values_at_zero;
    art.document["status"] = sol.status() == PicardStatus::Completed ? "completed" : "vanished";
    art.document["r_end"] = sol.r_end();
    art.document["windows"] = sol.windows().size();
    art.document["iterations"] = sol.total_iterations();
    art.document["lambda"] = spec.space().lambda;
    art.document["residual"] = residual(spec, profiles);
    try {
        art.document["asymptotics"] = to_json(asymptotics(spec.space(), profiles));
    } catch (const Error& e) {
        // the window ends before the tail regime; report why instead of a fit
        art.document["asymptotics"] = {{"error", e.what()}};
    }
    Table t;
    t.header = {"t"};
    for (int i = 1; i <= spec.k(); ++i) t.header.push_back("value" + std::to_string(i));
    const auto tg = profiles.front().t_grid();
    for (std::size_t q = 0; q < tg.size(); ++q) {
        std::vector<std::string> row{format_number(tg[q])};
        for (const auto& p : profiles) row.push_back(format_number(p.values()[q]));
        t.rows.push_back(std::move(row));
    }
    art.table = std::move(t);
    if (cfg.format == Format::Json) {
        json prof = json::array();
        for (const auto& p : profiles) prof.push_back(std::vector<double>(p.values().begin(), p.values().end()));
        art.document["profile"] = {{"t", std::vector<double>(tg.begin(), tg.end())}, {"values", prof}};
    }
    return art;
}

/// "a=lo:hi:step,b=...,nu=..." into named value lists.
std::map<std::string, std::vector<double>> parse_sweep(const std::string& text) {
    std::map<std::string, std::vector<double>> axes;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "sweep entry \"" + item + "\" lacks '='");
        const std::string key = item.substr(0, eq);
        if (key != "a" && key != "b" && key != "nu" && key != "alpha")
            throw Error(ErrorKind::ParseError, "unknown sweep axis \"" + key + "\"");
        axes[key] = parse_range(item.substr(eq + 1));
    }
    return axes;
}

Artifact cmd_groundstate(const RunConfig& cfg) {
    const json& c = cfg.config;
    Artifact art;
    if (!has(c, "sweep")) {
        if (is_k_spec(c)) {
            const CouplingSpec spec = coupling_from_json(c);
            art.document["spec"] = to_json(spec);
            art.document["result"] = to_json(ground_energy(spec, get_or<int>(c, "restarts", 50), cfg.seed));
        } else {
            const ProblemParams pp = params_of(c);
            art.document["params"] = to_json(pp);
            art.document["result"] = to_json(ground_energy(pp));
        }
        return art;
    }
    auto axes = parse_sweep(get_string(c, "sweep"));
    auto axis = [&](const char* key) {
        if (axes.count(key)) return axes[key];
        return std::vector<double>{require<double>(c, key)};
    };
    const int n = require<int>(c, "n");
    const auto as = axis("a"), bs = axis("b"), nus = axis("nu"), alphas = axis("alpha");
    struct Point { double a, b, nu, alpha; };
    std::vector<Point> grid;
    for (double a : as)
        for (double b : bs)
            for (double nu : nus)
                for (double al : alphas) grid.push_back({a, b, nu, al});
    logger()->info("groundstate sweep over {} points with {} jobs", grid.size(), cfg.jobs);

    Table t{{"a", "b", "nu", "alpha", "beta", "case", "f_min", "S", "S_bar", "energy", "error"}, {}};
    t.rows = parallel_rows(grid.size(), cfg.jobs, [&](std::size_t i) {
        const Point& g = grid[i];
        std::vector<std::string> row{format_number(g.a), format_number(g.b), format_number(g.nu), format_number(g.alpha)};
        try {
            const WeightSpace w = validate_space(n, g.a, g.b);
            const ProblemParams pp = validate_params(n, g.a, g.b, g.nu, g.alpha, w.p - g.alpha);
            const GroundStateReport r = ground_energy(pp);
            for (auto s : {format_number(pp.beta()), std::string(to_string(r.case_label)), format_number(r.f_min),
                           format_number(r.S), format_number(r.S_bar), format_number(r.energy), std::string()})
                row.push_back(std::move(s));
        } catch (const std::exception& e) {
            logger()->debug("point {} failed: {}", i, e.what());
            row.resize(10);
            row.push_back(error_cell(e));
        }
        return row;
    });
    art.document["n"] = n;
    art.table = std::move(t);
    return art;
}

Artifact cmd_spectrum(const RunConfig& cfg) {
    const json& c = cfg.config;
    const WeightSpace w = space_of(c);
    Artifact art;
    GridSpec grid;
    grid.points = get_or<int>(c, "grid", 0);
    const RadialEigenResult r = radial_eigen(w, get_or<int>(c, "modes", 3), grid);
    art.document["spectrum"] = to_json(r, w);
    if (has(c, "nu") && has(c, "alpha")) {
        const ProblemParams pp = params_of(c);
        art.document["params"] = to_json(pp);
        json reports = json::array();
        for (const auto& sc : solve_sync_2(pp)) {
            json item = {{"root", to_json(sc)}, {"nondegeneracy", to_json(nondegeneracy_check(pp, sc.c[0], sc.c[1]))}};
            if (sc.label == SyncLabel::Positive)
                item["decouple"] = to_json(linearized_decouple(pp, sc.c[0], sc.c[1]));
            reports.push_back(std::move(item));
        }
        art.document["roots"] = std::move(reports);
    }
    if (has(c, "scan_nu")) {
        json cands = json::array();
        for (const auto& d : degeneracy_scan(w, require<double>(c, "alpha"), parse_range(get_string(c, "scan_nu"))))
            cands.push_back(to_json(d));
        art.document["degeneracy_candidates"] = std::move(cands);
    }
    Table t{{"mode", "eigenvalue", "raw_finest"}, {}};
    for (std::size_t i = 0; i < r.eigenvalues.size(); ++i)
        t.rows.push_back({std::to_string(i + 1), format_number(r.eigenvalues[i]), format_number(r.raw.back()[i])});
    art.table = std::move(t);
    art.sidecar = true;
    return art;
}

Artifact cmd_sweep(const RunConfig& cfg) {
    const json& c = cfg.config;
    const std::string curve = get_string(c, "curve", "fs");
    if (curve != "fs") throw Error(ErrorKind::ParseError, "unknown curve \"" + curve + "\" (supported: fs)");
    if (!has(c, "a")) throw Error(ErrorKind::ParseError, "--a=lo:hi:step is required");
    const std::vector<double> as = has(c, "a") && c.at("a").is_number() ? std::vector<double>{c.at("a").get<double>()}
                                                                        : parse_range(get_string(c, "a"));
    const int n = get_or<int>(c, "n", 3);
    if (n < 3) throw Error(ErrorKind::ConstraintViolation, "n >= 3 required");
    Table t{{"a", "b_fs"}, {}};
    t.rows = parallel_rows(as.size(), cfg.jobs, [&](std::size_t i) {
        return std::vector<std::string>{format_number(as[i]), format_number(felli_schneider(n, as[i]))};
    });
    Artifact art;
    art.document["n"] = n;
    art.document["curve"] = curve;
    art.table = std::move(t);
    return art;
}

Artifact cmd_verify_all(const RunConfig& cfg, bool& all_pass) {
    const ProblemParams pp = params_of(cfg.config);
    const auto checks = verify_all(pp);
    Artifact art;
    art.document["params"] = to_json(pp);
    json list = json::array();
    Table t{{"name", "pass", "skipped", "value", "tolerance", "detail"}, {}};
    all_pass = true;
    for (const auto& ch : checks) {
        list.push_back(to_json(ch));
        all_pass = all_pass && ch.pass;
        t.rows.push_back({ch.name, ch.pass ? "true" : "false", ch.skipped ? "true" : "false",
                          format_number(ch.value), format_number(ch.tolerance), ch.detail});
        logger()->info("{} {}", ch.pass ? "PASS" : "FAIL", ch.name);
    }
    art.document["checks"] = std::move(list);
    art.document["pass"] = all_pass;
    art.table = std::move(t);
    art.sidecar = true;
    return art;
}

// ---------------------------------------------------------------- flag merging

/// Numeric flag text becomes a JSON number (integer when it parses as one).
json flag_value(const std::string& text) {
    long long i = 0;
    auto [pi, ei] = std::from_chars(text.data(), text.data() + text.size(), i);
    if (ei == std::errc() && pi == text.data() + text.size()) return i;
    double d = 0.0;
    auto [pd, ed] = std::from_chars(text.data(), text.data() + text.size(), d);
    if (ed == std::errc() && pd == text.data() + text.size()) return d;
    if (text == "true") return true;
    if (text == "false") return false;
    return text;
}

json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::IoError, "cannot open \"" + path + "\"");
    std::stringstream ss;
    ss << f.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, "\"" + path + "\" at byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

/// Nested {"params": {...}} keys are lifted to the top level; explicit top-level keys win.
json flatten(json c) {
    if (!c.is_object()) throw Error(ErrorKind::ParseError, "config must be a JSON object");
    if (c.contains("params") && c.at("params").is_object()) {
        json inner = c.at("params");
        c.erase("params");
        for (auto& [k, v] : inner.items())
            if (!c.contains(k)) c[k] = v;
    }
    return c;
}

}  // namespace

std::string csv_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string s = "\"";
    for (char ch : field) {
        if (ch == '"') s += '"';
        s += ch;
    }
    return s + "\"";
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::vector<double> parse_range(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        double x = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
        if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(x))
            throw Error(ErrorKind::ParseError, "malformed range \"" + text + "\"");
        parts.push_back(x);
    }
    if (parts.size() == 1) return parts;
    if (parts.size() != 3) throw Error(ErrorKind::ParseError, "range \"" + text + "\" must be lo:hi:step");
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || hi < lo) throw Error(ErrorKind::ParseError, "range \"" + text + "\" needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 10'000'000) throw Error(ErrorKind::ParseError, "range \"" + text + "\" has too many points");
    std::vector<double> v(count);
    for (std::size_t i = 0; i < count; ++i) v[i] = lo + static_cast<double>(i) * step;
    return v;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        logger()->info("command {} (seed {}, jobs {})", cfg.command, cfg.seed, cfg.jobs);
        if (cfg.jobs < 1) throw Error(ErrorKind::ConstraintViolation, "--jobs >= 1 required");
        bool ok = true;
        Artifact art;
        if (cfg.command == "bubble") art = cmd_bubble(cfg);
        else if (cfg.command == "sync") art = cmd_sync(cfg);
        else if (cfg.command == "solve-ode") art = cmd_solve_ode(cfg);
        else if (cfg.command == "groundstate") art = cmd_groundstate(cfg);
        else if (cfg.command == "spectrum") art = cmd_spectrum(cfg);
        else if (cfg.command == "sweep") art = cmd_sweep(cfg);
        else if (cfg.command == "verify-all") art = cmd_verify_all(cfg, ok);
        else throw Error(ErrorKind::ParseError, "unknown command \"" + cfg.command + "\"");
        emit(cfg, std::move(art), out);
        if (!ok) {
            err << "error: verification failed; see the failing checks in the report\n";
            return 3;
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_validation_error(e.kind()) ? 2 : 3;
    } catch (const json::exception& e) {
        err << "error: ParseError: " << e.what() << "\n";
        return 2;
    }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Radial solutions, sharp constants and spectra of the weighted critical coupled system"};
    app.require_subcommand(1);

    std::string config_path, out_path, format;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::map<std::string, std::string> flags;

    struct Flag { const char* name; const char* help; };
    const std::vector<Flag> param_flags{{"n", "dimension"}, {"a", "weight exponent a"}, {"b", "weight exponent b"},
                                        {"nu", "coupling strength"}, {"alpha", "coupling exponent alpha"},
                                        {"beta", "coupling exponent beta (default p - alpha)"}};
    const std::map<std::string, std::vector<Flag>> command_flags{
        {"bubble", {{"mu", "dilation parameter"}, {"points", "profile samples"}}},
        {"sync", {{"starts", "random Newton starts for k >= 3"}, {"k-spec", "JSON file with a k-coupled spec"}}},
        {"solve-ode", {{"init", "comma list of u_i(0)"}, {"rmax", "integration radius"}, {"tol", "Picard tolerance"},
                       {"points", "profile samples"}}},
        {"groundstate", {{"sweep", "a=lo:hi:step,b=...,nu=...,alpha=..."}, {"restarts", "Nelder-Mead restarts for k >= 3"},
                         {"k-spec", "JSON file with a k-coupled spec"}}},
        {"spectrum", {{"modes", "number of eigenpairs"}, {"grid", "interior nodes of the coarsest grid"},
                      {"scan-nu", "lo:hi:step range of nu for the degeneracy scan"}}},
        {"sweep", {{"curve", "curve to tabulate (fs)"}}},
        {"verify-all", {}},
    };
    const std::map<std::string, const char*> descriptions{
        {"bubble", "sample the explicit bubble profile"},
        {"sync", "synchronization constants"},
        {"solve-ode", "Picard solution of the radial system"},
        {"groundstate", "coupling function minimum, sharp constants and ground energy"},
        {"spectrum", "radial linearized spectrum and nondegeneracy"},
        {"sweep", "tabulate the Felli-Schneider curve"},
        {"verify-all", "run every module check on one parameter set"},
    };
    bool require_positive = false;
    for (const auto& [name, extra] : command_flags) {
        CLI::App* sub = app.add_subcommand(name, descriptions.at(name));
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--out", out_path, "output path (default stdout)");
        sub->add_option("--format", format, "csv or json (default csv for sweeps, json otherwise)")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", seed, "seed for randomized steps");
        sub->add_option("--jobs", jobs, "worker threads for sweeps");
        for (const auto& f : param_flags) sub->add_option(std::string("--") + f.name, flags[f.name], f.help);
        for (const auto& f : extra) sub->add_option(std::string("--") + f.name, flags[f.name], f.help);
        if (name == "sync") sub->add_flag("--require-positive", require_positive, "fail unless a positive root exists");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
            return 0;
        }
        err << "error: ParseError: " << e.what() << "\n";
        return 2;
    }

    RunConfig cfg;
    cfg.command = app.get_subcommands().front()->get_name();
    cfg.out = out_path;
    cfg.seed = seed;
    cfg.jobs = jobs;
    try {
        json c = config_path.empty() ? json::object() : flatten(read_json_file(config_path));
        if (!flags["k-spec"].empty()) {
            json spec = flatten(read_json_file(flags["k-spec"]));
            for (auto& [k, v] : spec.items()) c[k] = v;
        }
        for (const auto& [k, v] : flags) {
            if (v.empty() || k == "k-spec") continue;
            std::string key = k;
            std::replace(key.begin(), key.end(), '-', '_');
            c[key] = flag_value(v);
        }
        if (require_positive) c["require_positive"] = true;
        if (format.empty()) format = cfg.command == "sweep" || has(c, "sweep") ? "csv" : "json";
        cfg.format = format == "csv" ? Format::Csv : Format::Json;
        cfg.config = std::move(c);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_validation_error(e.kind()) ? 2 : 3;
    }
    return run(cfg, out, err);
}

}  // namespace henon::cli
