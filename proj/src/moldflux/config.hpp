#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moldflux {

/// Resolved run configuration. Every field is addressable through a
/// "section.key" string so that INI files, command-line overrides and
/// manifests all speak one dialect.
struct RunConfig {
    // [case]
    std::string benchmark = "analytical";  // analytical | industrial | custom
    int nx = 20, ny = 20, nz = 20;
    double lx = 1.0, ly = 1.0, lz = 1.0;
    bool full = false;        // industrial: full-resolution grid
    double k = 3.0;           // custom only; presets parameterize benchmarks
    double h = 5.0;
    double tf_const = 0.0;    // custom only
    double g_const = 0.0;     // custom only
    std::string robin = "series";  // series | direct
    std::string precond = "dic";   // dic | jacobi
    double pcg_tol = 1e-12;
    int pcg_max_iter = 10000;

    // [sensors]
    double plane_y = 0.2;
    int count_x = 4, count_z = 4;

    // [method]
    std::string method = "param";  // alifanov | param
    double g0 = 0.0;               // uniform initial flux, W/m^2
    double j_tol = 1e-4;           // K^2
    int n_max = 100;
    std::optional<double> rel_change_tol;
    std::optional<double> dp_omega;
    bool dp_squared = true;
    double eta = 0.7;
    std::string reg = "lu";        // lu | tsvd:<alpha>
    std::string mode = "j1";       // j1 | j2
    double p_g = 0.0;
    std::string ghat = "auto";     // auto | <number>

    // [noise]
    double omega = 0.0;
    int reps = 1;
    uint64_t seed = 7771;

    // [study]
    std::vector<int> levels = {10, 20, 40};
    std::vector<double> omegas;
    std::vector<double> etas;
    std::vector<double> pg_values;

    // [run]
    std::string out_dir = "out";
    int threads = 1;
    std::string artifact;
    std::string measurements;

    /// Assigns one "section.key" entry; rejects unknown keys and malformed
    /// values with a config error.
    void set(const std::string& key, const std::string& value);

    /// Applies a named parameter preset (analytical | industrial).
    void apply_preset(const std::string& name);

    /// Full consistency check; throws a config error on violations.
    void validate() const;

    /// Canonical key -> value dump (round-trips through set()).
    std::map<std::string, std::string> to_map() const;
    std::string to_ini() const;

    /// Applies INI text over the current values (later sources win).
    void apply_ini(const std::string& text);
    static RunConfig from_ini(const std::string& text);

    int tsvd_alpha() const;  // parsed from reg; 0 when reg is lu
    double ghat_value() const;  // numeric Ghat; NaN when "auto"
};

}  // namespace moldflux
