#include "moldflux/alifanov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "moldflux/benchmarks.hpp"

namespace moldflux {

double DiscrepancyRule::threshold() const {
    const double base = omega * omega * sensor_count / 2.0;
    return squared ? base * base : base;
}

namespace {
std::vector<std::pair<Vec3, double>> residual_sources(
    const StructuredGrid& grid, const TemperatureField& t,
    const Sensors& sensors) {
    std::vector<std::pair<Vec3, double>> r;
    r.reserve(sensors.points.size());
    for (size_t i = 0; i < sensors.points.size(); ++i)
        r.emplace_back(sensors.points[i],
                       sample_field(grid, t.values, sensors.points[i]) -
                           sensors.values[i]);
    return r;
}
}  // namespace

std::vector<double> gradient(const PhysicalCase& pc,
                             const std::vector<double>& g_n,
                             const Sensors& sensors,
                             const TemperatureField& t_direct,
                             const CostMode& mode) {
    const auto residuals = residual_sources(*pc.grid, t_direct, sensors);
    const TemperatureField lambda = solve_adjoint(pc, residuals);
    std::vector<double> grad = trace_s_in(*pc.grid, lambda.values);
    for (double& v : grad) v = -v;
    if (mode.with_total_heat) {
        const double corr =
            mode.p_g * (integrate_s_in(*pc.grid, g_n) - mode.g_hat);
        for (double& v : grad) v += corr;
    }
    return grad;
}

double fletcher_reeves_gamma(const StructuredGrid& grid,
                             const std::vector<double>& grad_n,
                             const std::vector<double>& grad_prev) {
    const double prev = inner_s_in(grid, grad_prev, grad_prev);
    require(prev > 0.0, ErrorCode::InvalidArgument,
            "fletcher_reeves_gamma: zero previous gradient");
    return inner_s_in(grid, grad_n, grad_n) / prev;
}

double step_size_beta(const PhysicalCase& pc, const std::vector<double>& g_n,
                      const std::vector<double>& p_n, const Sensors& sensors,
                      const TemperatureField& t_direct, const CostMode& mode) {
    const TemperatureField dt = solve_sensitivity(pc, p_n);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < sensors.points.size(); ++i) {
        const double r =
            sample_field(*pc.grid, t_direct.values, sensors.points[i]) -
            sensors.values[i];
        const double s = sample_field(*pc.grid, dt.values, sensors.points[i]);
        num += r * s;
        den += s * s;
    }
    if (mode.with_total_heat) {
        const double ip = integrate_s_in(*pc.grid, p_n);
        num += mode.p_g * ip * (integrate_s_in(*pc.grid, g_n) - mode.g_hat);
        den += mode.p_g * ip * ip;
    }
    require(den > 0.0, ErrorCode::Stagnation,
            "step_size_beta: search direction invisible to the sensors");
    return num / den;
}

CgResult run_alifanov(const PhysicalCase& pc, const Sensors& sensors,
                      const std::vector<double>& g0, const StoppingRule& rule,
                      const CostMode& mode, const std::vector<double>* g_ref) {
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    CgResult res;
    res.g = g0;
    PhysicalCase work = pc;  // carries the current iterate as its flux

    auto eval_cost = [&](const TemperatureField& t) {
        return mode.with_total_heat
                   ? eval_J2(*pc.grid, t, sensors, res.g, mode.g_hat, mode.p_g)
                   : eval_J1(*pc.grid, t, sensors);
    };
    auto record = [&](int n, double j, double beta, double gamma) {
        double e2 = kNaN, einf = kNaN;
        if (g_ref) std::tie(e2, einf) = relative_error_norms(*pc.grid, res.g, *g_ref);
        res.trace.push_back({n, j, beta, gamma, e2, einf});
    };

    std::vector<double> p, grad_prev;
    double prev_j = kNaN;

    for (int n = 0; n <= rule.max_iter; ++n) {
        work.g = res.g;
        const TemperatureField t = solve_direct(work);
        const double j = eval_cost(t);

        if (rule.j_tol > 0.0 && j < rule.j_tol) {
            record(n, j, 0.0, 0.0);
            res.stop_reason = "j_tol";
            return res;
        }
        if (rule.discrepancy && j < rule.discrepancy->threshold()) {
            record(n, j, 0.0, 0.0);
            res.stop_reason = "discrepancy";
            return res;
        }
        if (rule.rel_change_tol && n > 0 &&
            std::abs(j - prev_j) / std::max(j, 1e-300) < *rule.rel_change_tol) {
            record(n, j, 0.0, 0.0);
            res.stop_reason = "rel_change";
            return res;
        }
        if (n == rule.max_iter) {
            record(n, j, 0.0, 0.0);
            res.stop_reason = "max_iter";
            return res;
        }
        prev_j = j;

        std::vector<double> grad = gradient(work, res.g, sensors, t, mode);
        const double gn2 = inner_s_in(*pc.grid, grad, grad);
        double gamma = 0.0;
        if (n == 0 || p.empty()) {
            p = grad;
        } else {
            if (gn2 == 0.0) {
                record(n, j, 0.0, 0.0);
                res.stop_reason = "zero_gradient";
                return res;
            }
            gamma = fletcher_reeves_gamma(*pc.grid, grad, grad_prev);
            for (size_t i = 0; i < p.size(); ++i) p[i] = grad[i] + gamma * p[i];
        }
        grad_prev = grad;

        double beta;
        try {
            beta = step_size_beta(work, res.g, p, sensors, t, mode);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Stagnation) throw;
            record(n, j, 0.0, gamma);
            res.stop_reason = "stagnation";
            res.stagnated = true;
            return res;
        }

        record(n, j, beta, gamma);
        for (size_t i = 0; i < res.g.size(); ++i) res.g[i] -= beta * p[i];
        require(std::all_of(res.g.begin(), res.g.end(),
                            [](double v) { return std::isfinite(v); }),
                ErrorCode::NoConvergence, "run_alifanov: non-finite iterate");
    }
    return res;  // unreachable
}

}  // namespace moldflux
