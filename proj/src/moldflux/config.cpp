#include "moldflux/config.hpp"

#include <cmath>
#include <sstream>

#include "moldflux/errors.hpp"
#include "moldflux/io.hpp"

namespace moldflux {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw Error(ErrorCode::Config, "config: " + key + ": " + why);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
        return d;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad(key, "not a number: '" + v + "'");
    }
}

int parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        long n = std::stol(v, &pos);
        if (pos != v.size()) bad(key, "trailing characters in '" + v + "'");
        return static_cast<int>(n);
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        bad(key, "not an integer: '" + v + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad(key, "not a boolean: '" + v + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& key, const std::string& v,
                          Parse parse) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(parse(key, item));
    }
    if (out.empty()) bad(key, "empty list");
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
std::string join(const std::vector<T>& v) {
    std::ostringstream out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out << ',';
        if constexpr (std::is_same_v<T, double>)
            out << format_double(v[i]);
        else
            out << v[i];
    }
    return out.str();
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "case.benchmark") {
        if (v != "analytical" && v != "industrial" && v != "custom")
            bad(key, "expected analytical|industrial|custom");
        benchmark = v;
    } else if (key == "case.nx") nx = parse_int(key, v);
    else if (key == "case.ny") ny = parse_int(key, v);
    else if (key == "case.nz") nz = parse_int(key, v);
    else if (key == "case.lx") lx = parse_double(key, v);
    else if (key == "case.ly") ly = parse_double(key, v);
    else if (key == "case.lz") lz = parse_double(key, v);
    else if (key == "case.full") full = parse_bool(key, v);
    else if (key == "case.k") k = parse_double(key, v);
    else if (key == "case.h") h = parse_double(key, v);
    else if (key == "case.tf") tf_const = parse_double(key, v);
    else if (key == "case.g") g_const = parse_double(key, v);
    else if (key == "case.robin") {
        if (v != "series" && v != "direct") bad(key, "expected series|direct");
        robin = v;
    } else if (key == "case.precond") {
        if (v != "dic" && v != "jacobi") bad(key, "expected dic|jacobi");
        precond = v;
    } else if (key == "case.pcg_tol") pcg_tol = parse_double(key, v);
    else if (key == "case.pcg_max_iter") pcg_max_iter = parse_int(key, v);
    else if (key == "sensors.plane_y") plane_y = parse_double(key, v);
    else if (key == "sensors.count_x") count_x = parse_int(key, v);
    else if (key == "sensors.count_z") count_z = parse_int(key, v);
    else if (key == "method.name") {
        if (v != "alifanov" && v != "param") bad(key, "expected alifanov|param");
        method = v;
    } else if (key == "method.g0") g0 = parse_double(key, v);
    else if (key == "method.j_tol") j_tol = parse_double(key, v);
    else if (key == "method.n_max") n_max = parse_int(key, v);
    else if (key == "method.rel_change_tol") {
        if (v == "none") rel_change_tol.reset();
        else rel_change_tol = parse_double(key, v);
    } else if (key == "method.dp_omega") {
        if (v == "none") dp_omega.reset();
        else dp_omega = parse_double(key, v);
    } else if (key == "method.dp_squared") dp_squared = parse_bool(key, v);
    else if (key == "method.eta") eta = parse_double(key, v);
    else if (key == "method.reg") {
        if (v != "lu" && v.rfind("tsvd:", 0) != 0)
            bad(key, "expected lu|tsvd:<alpha>");
        if (v.rfind("tsvd:", 0) == 0) parse_int(key, v.substr(5));
        reg = v;
    } else if (key == "method.mode") {
        if (v != "j1" && v != "j2") bad(key, "expected j1|j2");
        mode = v;
    } else if (key == "method.p_g") p_g = parse_double(key, v);
    else if (key == "method.ghat") {
        if (v != "auto") parse_double(key, v);
        ghat = v;
    } else if (key == "noise.omega") omega = parse_double(key, v);
    else if (key == "noise.reps") reps = parse_int(key, v);
    else if (key == "noise.seed") {
        try {
            seed = std::stoull(v);
        } catch (const std::exception&) {
            bad(key, "not an unsigned integer: '" + v + "'");
        }
    } else if (key == "study.levels") levels = parse_list<int>(key, v, parse_int);
    else if (key == "study.omegas") omegas = parse_list<double>(key, v, parse_double);
    else if (key == "study.etas") etas = parse_list<double>(key, v, parse_double);
    else if (key == "study.pg_values")
        pg_values = parse_list<double>(key, v, parse_double);
    else if (key == "run.out") out_dir = v;
    else if (key == "run.threads") threads = parse_int(key, v);
    else if (key == "run.artifact") artifact = v;
    else if (key == "run.measurements") measurements = v;
    else bad(key, "unknown key");
}

void RunConfig::apply_preset(const std::string& name) {
    if (name == "analytical") {
        benchmark = "analytical";
        nx = ny = nz = 20;
        lx = ly = lz = 1.0;
        plane_y = 0.2;
        count_x = count_z = 4;
        eta = 0.7;
        j_tol = 1e-4;
    } else if (name == "industrial") {
        benchmark = "industrial";
        nx = 100; ny = 25; nz = 50;
        lx = 2.0; ly = 0.1; lz = 1.2;
        plane_y = 0.02;
        count_x = count_z = 10;
        eta = 0.3;
        j_tol = 1e-4;
    } else {
        throw Error(ErrorCode::Config, "unknown preset '" + name + "'");
    }
}

void RunConfig::validate() const {
    auto check = [](bool ok, const std::string& msg) {
        if (!ok) throw Error(ErrorCode::Config, "config: " + msg);
    };
    check(nx > 0 && ny > 0 && nz > 0, "grid dimensions must be positive");
    check(lx > 0 && ly > 0 && lz > 0, "domain lengths must be positive");
    check(benchmark != "custom" || (k > 0 && h > 0),
          "custom case needs positive k and h");
    check(plane_y > 0 && plane_y < ly, "sensors.plane_y must lie inside (0, ly)");
    check(count_x > 0 && count_z > 0, "sensor counts must be positive");
    check(n_max > 0, "method.n_max must be positive");
    check(eta > 0, "method.eta must be positive");
    check(p_g >= 0, "method.p_g must be non-negative");
    check(reg == "lu" || tsvd_alpha() >= 1,
          "tsvd truncation rank must be at least 1");
    check(omega >= 0, "noise.omega must be non-negative");
    check(reps >= 1, "noise.reps must be at least 1");
    check(threads >= 1, "run.threads must be at least 1");
    check(pcg_tol > 0 && pcg_max_iter > 0, "pcg controls must be positive");
    check(!rel_change_tol || *rel_change_tol > 0,
          "method.rel_change_tol must be positive");
    check(!dp_omega || *dp_omega > 0, "method.dp_omega must be positive");
}

std::map<std::string, std::string> RunConfig::to_map() const {
    std::map<std::string, std::string> m;
    m["case.benchmark"] = benchmark;
    m["case.nx"] = std::to_string(nx);
    m["case.ny"] = std::to_string(ny);
    m["case.nz"] = std::to_string(nz);
    m["case.lx"] = format_double(lx);
    m["case.ly"] = format_double(ly);
    m["case.lz"] = format_double(lz);
    m["case.full"] = full ? "true" : "false";
    m["case.k"] = format_double(k);
    m["case.h"] = format_double(h);
    m["case.tf"] = format_double(tf_const);
    m["case.g"] = format_double(g_const);
    m["case.robin"] = robin;
    m["case.precond"] = precond;
    m["case.pcg_tol"] = format_double(pcg_tol);
    m["case.pcg_max_iter"] = std::to_string(pcg_max_iter);
    m["sensors.plane_y"] = format_double(plane_y);
    m["sensors.count_x"] = std::to_string(count_x);
    m["sensors.count_z"] = std::to_string(count_z);
    m["method.name"] = method;
    m["method.g0"] = format_double(g0);
    m["method.j_tol"] = format_double(j_tol);
    m["method.n_max"] = std::to_string(n_max);
    m["method.rel_change_tol"] =
        rel_change_tol ? format_double(*rel_change_tol) : "none";
    m["method.dp_omega"] = dp_omega ? format_double(*dp_omega) : "none";
    m["method.dp_squared"] = dp_squared ? "true" : "false";
    m["method.eta"] = format_double(eta);
    m["method.reg"] = reg;
    m["method.mode"] = mode;
    m["method.p_g"] = format_double(p_g);
    m["method.ghat"] = ghat;
    m["noise.omega"] = format_double(omega);
    m["noise.reps"] = std::to_string(reps);
    m["noise.seed"] = std::to_string(seed);
    m["study.levels"] = join(levels);
    m["study.omegas"] = join(omegas);
    m["study.etas"] = join(etas);
    m["study.pg_values"] = join(pg_values);
    m["run.out"] = out_dir;
    m["run.threads"] = std::to_string(threads);
    m["run.artifact"] = artifact;
    m["run.measurements"] = measurements;
    return m;
}

std::string RunConfig::to_ini() const {
    std::ostringstream out;
    std::string section;
    for (const auto& [key, value] : to_map()) {
        auto dotpos = key.find('.');
        std::string sec = key.substr(0, dotpos);
        if (sec != section) {
            if (!section.empty()) out << '\n';
            out << '[' << sec << "]\n";
            section = sec;
        }
        if (!value.empty()) out << key.substr(dotpos + 1) << " = " << value << '\n';
    }
    return out.str();
}

void RunConfig::apply_ini(const std::string& text) {
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw Error(ErrorCode::Config,
                            "config line " + std::to_string(lineno) +
                                ": unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::Config, "config line " + std::to_string(lineno) +
                                               ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        if (section.empty())
            throw Error(ErrorCode::Config, "config line " + std::to_string(lineno) +
                                               ": key outside any [section]");
        set(section + "." + key, s.substr(eq + 1));
    }
}

RunConfig RunConfig::from_ini(const std::string& text) {
    RunConfig cfg;
    cfg.apply_ini(text);
    return cfg;
}

int RunConfig::tsvd_alpha() const {
    if (reg.rfind("tsvd:", 0) != 0) return 0;
    return parse_int("method.reg", reg.substr(5));
}

double RunConfig::ghat_value() const {
    if (ghat == "auto") return std::nan("");
    return parse_double("method.ghat", ghat);
}

}  // namespace moldflux
