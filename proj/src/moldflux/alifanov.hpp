#pragma once

#include <optional>
#include <string>
#include <vector>

#include "moldflux/measurements.hpp"

namespace moldflux {

/// Cost-functional selector: J1 is the pure temperature misfit, J2 adds the
/// weighted total-heat penalty.
struct CostMode {
    bool with_total_heat = false;
    double p_g = 0.0;    // K^2/W^2
    double g_hat = 0.0;  // W

    static CostMode j1() { return {}; }
    static CostMode j2(double p_g, double g_hat) { return {true, p_g, g_hat}; }
};

struct DiscrepancyRule {
    double omega = 0.0;
    int sensor_count = 0;
    bool squared = true;  // threshold (omega^2 M / 2)^2; false uses omega^2 M / 2
    double threshold() const;
};

struct StoppingRule {
    double j_tol = 0.0;  // absolute, K^2; <= 0 disables
    int max_iter = 100;
    std::optional<double> rel_change_tol;
    std::optional<DiscrepancyRule> discrepancy;
};

struct CgTraceRow {
    int iter;
    double j;
    double beta;
    double gamma;
    double err_l2;    // vs reference flux, NaN when unavailable
    double err_linf;
};

struct CgResult {
    std::vector<double> g;  // estimated flux on SIn
    std::vector<CgTraceRow> trace;
    std::string stop_reason;
    bool stagnated = false;
};

/// J' at the current iterate: -lambda traced on SIn, plus the uniform
/// total-heat correction in J2 mode. One adjoint solve.
std::vector<double> gradient(const PhysicalCase& pc,
                             const std::vector<double>& g_n,
                             const Sensors& sensors,
                             const TemperatureField& t_direct,
                             const CostMode& mode);

double fletcher_reeves_gamma(const StructuredGrid& grid,
                             const std::vector<double>& grad_n,
                             const std::vector<double>& grad_prev);

/// Exact line-search step along P_n. One sensitivity solve.
double step_size_beta(const PhysicalCase& pc, const std::vector<double>& g_n,
                      const std::vector<double>& p_n, const Sensors& sensors,
                      const TemperatureField& t_direct, const CostMode& mode);

/// Alifanov's regularization: Fletcher-Reeves CG on the adjoint gradient.
/// g_ref, when given, fills per-iteration error norms in the trace.
CgResult run_alifanov(const PhysicalCase& pc, const Sensors& sensors,
                      const std::vector<double>& g0, const StoppingRule& rule,
                      const CostMode& mode,
                      const std::vector<double>* g_ref = nullptr);

}  // namespace moldflux
