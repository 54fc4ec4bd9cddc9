#include "moldflux/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "moldflux/benchmarks.hpp"
#include "moldflux/errors.hpp"
#include "moldflux/io.hpp"
#include "moldflux/rbf.hpp"

namespace moldflux {

namespace {

using nlohmann::json;

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

/// One fully materialized case: grid, physics, sensors, reference flux and
/// clean measurements. The grid lives on the heap so pc.grid stays valid.
struct Bundle {
    std::unique_ptr<StructuredGrid> grid;
    PhysicalCase pc;
    std::vector<Vec3> sensor_points;
    std::vector<double> g_ref;    // empty when no reference flux exists
    std::vector<double> t_clean;  // noise-free sensor temperatures
    double ghat_auto = 0.0;       // W
};

Bundle make_bundle(const RunConfig& cfg) {
    Bundle b;
    if (cfg.benchmark == "analytical") {
        AnalyticalCase ac;
        b.grid = std::make_unique<StructuredGrid>(cfg.nx, cfg.ny, cfg.nz,
                                                  ac.L, ac.W, ac.H);
        b.pc = ac.make_case(*b.grid);
        b.g_ref = ac.g_an_field(*b.grid);
        b.ghat_auto = ac.total_heat();
        b.sensor_points =
            place_lattice(*b.grid, cfg.plane_y, cfg.count_x, cfg.count_z);
        b.t_clean = synthesize([&](const Vec3& p) { return ac.t_an(p); },
                               b.sensor_points);
    } else if (cfg.benchmark == "industrial") {
        IndustrialCase ic;
        int nx = cfg.full ? 200 : cfg.nx;
        int ny = cfg.full ? 50 : cfg.ny;
        int nz = cfg.full ? 100 : cfg.nz;
        b.grid = std::make_unique<StructuredGrid>(nx, ny, nz, ic.L, ic.W, ic.H);
        b.pc = ic.make_case(*b.grid);
        b.g_ref = ic.g_true_field(*b.grid);
        b.ghat_auto = total_heat_of_flux(*b.grid, b.g_ref);
        b.sensor_points =
            place_lattice(*b.grid, cfg.plane_y, cfg.count_x, cfg.count_z);
    } else {
        b.grid = std::make_unique<StructuredGrid>(cfg.nx, cfg.ny, cfg.nz,
                                                  cfg.lx, cfg.ly, cfg.lz);
        b.pc.grid = b.grid.get();
        b.pc.k = cfg.k;
        b.pc.h = cfg.h;
        b.pc.t_f.assign(b.grid->patch_face_count(PatchId::SF), cfg.tf_const);
        b.pc.g.assign(b.grid->patch_face_count(PatchId::SIn), cfg.g_const);
        b.g_ref = b.pc.g;
        b.ghat_auto = total_heat_of_flux(*b.grid, b.g_ref);
        b.sensor_points =
            place_lattice(*b.grid, cfg.plane_y, cfg.count_x, cfg.count_z);
    }
    b.pc.assembly.direct_robin = (cfg.robin == "direct");
    b.pc.pcg.tol = cfg.pcg_tol;
    b.pc.pcg.max_iter = cfg.pcg_max_iter;
    b.pc.pcg.precond = (cfg.precond == "jacobi") ? Preconditioner::Jacobi
                       : Preconditioner::DiagonalIncompleteCholesky;
    if (b.t_clean.empty()) {
        TemperatureField t = solve_direct(b.pc);
        b.t_clean = synthesize(*b.grid, t, b.sensor_points);
    }
    return b;
}

double resolve_ghat(const RunConfig& cfg, const Bundle& b) {
    double v = cfg.ghat_value();
    return std::isnan(v) ? b.ghat_auto : v;
}

CostMode cost_mode(const RunConfig& cfg, const Bundle& b) {
    if (cfg.mode == "j2") return CostMode::j2(cfg.p_g, resolve_ghat(cfg, b));
    return CostMode::j1();
}

OnlineOptions online_options(const RunConfig& cfg, const Bundle& b) {
    OnlineOptions opts;
    opts.reg = cfg.reg == "lu" ? OnlineReg::Lu : OnlineReg::Tsvd;
    opts.tsvd_alpha = cfg.tsvd_alpha();
    opts.mode = cost_mode(cfg, b);
    return opts;
}

RbfBasis make_basis(const RunConfig& cfg, const Bundle& b) {
    return RbfBasis{project_to_boundary(b.sensor_points), cfg.eta};
}

/// Collects results and output paths; writes manifest.json on demand so one
/// copy exists even if a later numerical stage throws.
struct Manifest {
    std::string dir;
    json doc;

    Manifest(const RunConfig& cfg, const std::string& subcommand)
        : dir(cfg.out_dir) {
        std::filesystem::create_directories(dir);
        doc["subcommand"] = subcommand;
        doc["config"] = cfg.to_map();
        doc["config_ini"] = cfg.to_ini();
        doc["outputs"] = json::array();
        doc["results"] = json::object();
        doc["notes"] = json::array();
        doc["status"] = "running";
        flush();
    }
    std::string path(const std::string& name) {
        doc["outputs"].push_back(name);
        return dir + "/" + name;
    }
    void note(const std::string& n) { doc["notes"].push_back(n); }
    void flush() { write_text_file(dir + "/manifest.json", doc.dump(2) + "\n"); }
    void finish() {
        doc["status"] = "ok";
        flush();
    }
};

std::vector<std::vector<double>> indexed_rows(const std::vector<double>& v) {
    std::vector<std::vector<double>> rows;
    rows.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        rows.push_back({static_cast<double>(i), v[i]});
    return rows;
}

void write_flux_outputs(Manifest& man, const StructuredGrid& grid,
                        const std::vector<double>& g) {
    auto faces = grid.boundary_faces(PatchId::SIn);
    std::vector<std::vector<double>> rows;
    rows.reserve(g.size());
    for (std::size_t f = 0; f < g.size(); ++f)
        rows.push_back({static_cast<double>(f), faces[f].center[0],
                        faces[f].center[2], g[f]});
    write_csv(man.path("flux.csv"), {"face", "x", "z", "g"}, rows);
    write_vtk_boundary_field(man.path("flux.vtk"), grid, g, "g");
}

void record_errors(Manifest& man, const Bundle& b, const std::vector<double>& g,
                   bool emit_csv = true) {
    if (b.g_ref.empty()) return;
    auto [l2, linf] = relative_error_norms(*b.grid, g, b.g_ref);
    double q = total_heat_of_flux(*b.grid, g);
    double q_rel = (q - b.ghat_auto) / b.ghat_auto;
    if (emit_csv)
        write_csv(man.path("errors.csv"),
                  {"l2_rel", "linf_rel", "total_heat", "total_heat_rel_err"},
                  {{l2, linf, q, q_rel}});
    man.doc["results"]["l2_rel"] = l2;
    man.doc["results"]["linf_rel"] = linf;
    man.doc["results"]["total_heat"] = q;
    man.doc["results"]["total_heat_rel_err"] = q_rel;
}

std::vector<double> measured(const RunConfig& cfg, const Bundle& b) {
    return add_noise(b.t_clean, cfg.omega, cfg.seed);
}

std::string run_direct(const RunConfig& cfg, Manifest& man) {
    Bundle b = make_bundle(cfg);
    TemperatureField t = solve_direct(b.pc);
    write_vtk_cell_field(man.path("temperature.vtk"), *b.grid, t.values, "T");
    write_flux_outputs(man, *b.grid, b.pc.g);
    std::vector<double> t_hat = measured(cfg, b);
    write_csv(man.path("measurements.csv"), {"sensor", "T"}, indexed_rows(t_hat));
    double q = total_heat_of_flux(*b.grid, b.pc.g);
    man.doc["results"]["total_heat"] = q;
    std::ostringstream rep;
    rep << "direct solve on " << b.grid->nx() << "x" << b.grid->ny() << "x"
        << b.grid->nz() << "; total heat " << format_double(q) << " W";
    return rep.str();
}

std::string run_converge(const RunConfig& cfg, Manifest& man) {
    require(cfg.benchmark == "analytical", ErrorCode::Config,
            "converge needs the analytical benchmark");
    PcgOptions pcg;
    pcg.tol = cfg.pcg_tol;
    pcg.max_iter = cfg.pcg_max_iter;
    pcg.precond = (cfg.precond == "jacobi") ? Preconditioner::Jacobi
                  : Preconditioner::DiagonalIncompleteCholesky;
    ConvergenceResult res = run_convergence_study(AnalyticalCase{}, cfg.levels, pcg);
    std::vector<std::vector<double>> rows;
    for (const auto& r : res.rows)
        rows.push_back({static_cast<double>(r.n), r.abs_l2, r.rel_l2});
    write_csv(man.path("convergence.csv"), {"n", "abs_l2", "rel_l2"}, rows);
    man.doc["results"]["slope"] = res.slope;
    std::ostringstream rep;
    rep << "convergence slope " << format_double(res.slope);
    return rep.str();
}

std::string run_invert(const RunConfig& cfg, Manifest& man) {
    Bundle b = make_bundle(cfg);
    std::vector<double> t_hat = measured(cfg, b);
    std::vector<double> g;
    std::ostringstream rep;
    if (cfg.method == "alifanov") {
        StoppingRule rule;
        rule.j_tol = cfg.j_tol;
        rule.max_iter = cfg.n_max;
        rule.rel_change_tol = cfg.rel_change_tol;
        if (cfg.dp_omega)
            rule.discrepancy = DiscrepancyRule{
                *cfg.dp_omega, static_cast<int>(t_hat.size()), cfg.dp_squared};
        std::vector<double> g0(b.pc.g.size(), cfg.g0);
        Sensors sensors{b.sensor_points, t_hat};
        CgResult res =
            run_alifanov(b.pc, sensors, g0, rule, cost_mode(cfg, b),
                         b.g_ref.empty() ? nullptr : &b.g_ref);
        g = res.g;
        std::vector<std::vector<double>> rows;
        for (const auto& r : res.trace)
            rows.push_back({static_cast<double>(r.iter), r.j, r.beta, r.gamma,
                            r.err_l2, r.err_linf});
        write_csv(man.path("trace.csv"),
                  {"iter", "j", "beta", "gamma", "err_l2", "err_linf"}, rows);
        man.doc["results"]["stop_reason"] = res.stop_reason;
        man.doc["results"]["iterations"] = res.trace.size();
        man.doc["results"]["j_final"] =
            res.trace.empty() ? 0.0 : res.trace.back().j;
        rep << "alifanov stopped (" << res.stop_reason << ") after "
            << res.trace.size() << " iterations";
    } else {
        RbfBasis basis = make_basis(cfg, b);
        double t0 = now_seconds();
        OfflineArtifact art =
            build_offline(b.pc, basis, b.sensor_points, cfg.threads);
        double t1 = now_seconds();
        std::vector<double> w = online_solve(art, t_hat, online_options(cfg, b));
        double t2 = now_seconds();
        g = reconstruct_flux(basis, *b.grid, w);
        write_csv(man.path("weights.csv"), {"j", "w"}, indexed_rows(w));
        man.doc["results"]["offline_seconds"] = t1 - t0;
        man.doc["results"]["online_seconds"] = t2 - t1;
        rep << "parameterized inversion, M = " << basis.size();
    }
    write_flux_outputs(man, *b.grid, g);
    record_errors(man, b, g);
    if (!b.g_ref.empty())
        rep << "; L2 rel err "
            << format_double(man.doc["results"]["l2_rel"].get<double>());
    return rep.str();
}

std::string run_offline(const RunConfig& cfg, Manifest& man) {
    Bundle b = make_bundle(cfg);
    RbfBasis basis = make_basis(cfg, b);
    double t0 = now_seconds();
    OfflineArtifact art = build_offline(b.pc, basis, b.sensor_points, cfg.threads);
    double t1 = now_seconds();
    save_artifact(art, man.path("artifact.bin"));
    man.doc["results"]["m"] = art.m;
    man.doc["results"]["metadata_hash"] = art.metadata_hash();
    man.doc["results"]["offline_seconds"] = t1 - t0;
    if (cfg.benchmark == "industrial" && !cfg.full)
        man.note("desk-scale industrial grid; error bounds are relaxed "
                 "relative to the full-resolution run");
    std::ostringstream rep;
    rep << "offline build, M = " << art.m << ", "
        << format_double(t1 - t0) << " s";
    return rep.str();
}

std::string run_online(const RunConfig& cfg, Manifest& man) {
    require(!cfg.artifact.empty(), ErrorCode::Config,
            "online needs run.artifact (--artifact)");
    require(!cfg.measurements.empty(), ErrorCode::Config,
            "online needs run.measurements (--measurements)");
    Bundle b = make_bundle(cfg);
    RbfBasis basis = make_basis(cfg, b);
    OfflineArtifact art = load_artifact(cfg.artifact);
    art.check_matches(b.pc, basis, b.sensor_points);
    std::vector<double> t_hat = read_value_csv(cfg.measurements);
    require(t_hat.size() == art.sensor_points.size(), ErrorCode::Config,
            "measurement count does not match the artifact sensor layout");
    double t0 = now_seconds();
    std::vector<double> w = online_solve(art, t_hat, online_options(cfg, b));
    double t1 = now_seconds();
    std::vector<double> g = reconstruct_flux(basis, *b.grid, w);
    write_csv(man.path("weights.csv"), {"j", "w"}, indexed_rows(w));
    write_flux_outputs(man, *b.grid, g);
    record_errors(man, b, g);
    man.doc["results"]["online_seconds"] = t1 - t0;
    std::ostringstream rep;
    rep << "online solve in " << format_double(t1 - t0) << " s";
    return rep.str();
}

std::string run_noise_study_cmd(const RunConfig& cfg, Manifest& man) {
    require(!cfg.omegas.empty(), ErrorCode::Config,
            "noise-study needs study.omegas");
    Bundle b = make_bundle(cfg);
    require(!b.g_ref.empty(), ErrorCode::Config,
            "noise-study needs a benchmark with a reference flux");
    InverseSolver solver;
    RbfBasis basis = make_basis(cfg, b);
    OfflineArtifact art;  // built once, shared by all repetitions
    if (cfg.method == "param") {
        art = build_offline(b.pc, basis, b.sensor_points, cfg.threads);
        OnlineOptions opts = online_options(cfg, b);
        solver = [&, opts](const std::vector<double>& t_hat) {
            return reconstruct_flux(basis, *b.grid,
                                    online_solve(art, t_hat, opts));
        };
    } else {
        StoppingRule rule;
        rule.j_tol = cfg.j_tol;
        rule.max_iter = cfg.n_max;
        rule.rel_change_tol = cfg.rel_change_tol;
        CostMode mode = cost_mode(cfg, b);
        std::vector<double> g0(b.pc.g.size(), cfg.g0);
        solver = [&, rule, mode, g0](const std::vector<double>& t_hat) {
            Sensors sensors{b.sensor_points, t_hat};
            return run_alifanov(b.pc, sensors, g0, rule, mode).g;
        };
    }
    auto rows = run_noise_study(*b.grid, solver, b.t_clean, b.g_ref,
                                cfg.omegas, cfg.reps, cfg.seed);
    std::vector<std::vector<double>> csv;
    for (const auto& r : rows)
        csv.push_back({r.omega, r.mean_l2, r.q05_l2, r.q95_l2, r.mean_linf,
                       r.q05_linf, r.q95_linf});
    write_csv(man.path("noise_study.csv"),
              {"omega", "mean_l2", "q05_l2", "q95_l2", "mean_linf", "q05_linf",
               "q95_linf"},
              csv);
    std::ostringstream rep;
    rep << "noise study over " << rows.size() << " noise levels, "
        << cfg.reps << " repetitions each";
    return rep.str();
}

std::string run_eta_sweep(const RunConfig& cfg, Manifest& man) {
    require(!cfg.etas.empty(), ErrorCode::Config, "eta-sweep needs study.etas");
    Bundle b = make_bundle(cfg);
    require(!b.g_ref.empty(), ErrorCode::Config,
            "eta-sweep needs a benchmark with a reference flux");
    std::vector<double> t_hat = measured(cfg, b);
    std::vector<std::vector<double>> csv;
    for (double eta : cfg.etas) {
        RbfBasis basis{project_to_boundary(b.sensor_points), eta};
        OfflineArtifact art =
            build_offline(b.pc, basis, b.sensor_points, cfg.threads);
        std::vector<double> w = online_solve(art, t_hat, online_options(cfg, b));
        std::vector<double> g = reconstruct_flux(basis, *b.grid, w);
        auto [l2, linf] = relative_error_norms(*b.grid, g, b.g_ref);
        double cond =
            condition_number(svd_decompose(art.theta.transpose_times(art.theta)));
        csv.push_back({eta, l2, linf, cond});
    }
    write_csv(man.path("eta_sweep.csv"), {"eta", "l2_rel", "linf_rel", "cond"},
              csv);
    std::ostringstream rep;
    rep << "eta sweep over " << csv.size() << " values";
    return rep.str();
}

std::string run_pg_sweep_cmd(const RunConfig& cfg, Manifest& man) {
    require(!cfg.pg_values.empty(), ErrorCode::Config,
            "pg-sweep needs study.pg_values");
    Bundle b = make_bundle(cfg);
    require(!b.g_ref.empty(), ErrorCode::Config,
            "pg-sweep needs a benchmark with a reference flux");
    double ghat = resolve_ghat(cfg, b);
    RbfBasis basis = make_basis(cfg, b);
    OfflineArtifact art = build_offline(b.pc, basis, b.sensor_points, cfg.threads);
    std::vector<double> t_hat = measured(cfg, b);
    auto solver_for_pg = [&](double p_g) {
        OnlineOptions opts = online_options(cfg, b);
        opts.mode = p_g > 0 ? CostMode::j2(p_g, ghat) : CostMode::j1();
        return reconstruct_flux(basis, *b.grid,
                                online_solve(art, t_hat, opts));
    };
    auto rows = run_pg_sweep(*b.grid, solver_for_pg, b.g_ref, ghat,
                             cfg.pg_values);
    std::vector<std::vector<double>> csv;
    for (const auto& r : rows)
        csv.push_back({r.p_g, r.l2, r.linf, r.total_heat_rel_err});
    write_csv(man.path("pg_sweep.csv"),
              {"p_g", "l2_rel", "linf_rel", "total_heat_rel_err"}, csv);
    man.doc["results"]["ghat"] = ghat;
    std::ostringstream rep;
    rep << "p_g sweep over " << csv.size() << " values, Ghat "
        << format_double(ghat) << " W";
    return rep.str();
}

std::string run_inspect(const RunConfig& cfg, Manifest& man) {
    require(!cfg.artifact.empty(), ErrorCode::Config,
            "inspect-artifact needs run.artifact (--artifact)");
    OfflineArtifact art = load_artifact(cfg.artifact);
    json meta;
    meta["format_version"] = OfflineArtifact::kFormatVersion;
    meta["m"] = art.m;
    meta["grid"] = {art.nx, art.ny, art.nz};
    meta["lengths"] = {art.lx, art.ly, art.lz};
    meta["k"] = art.k;
    meta["h"] = art.h;
    meta["eta"] = art.eta;
    meta["sensors"] = art.sensor_points.size();
    meta["metadata_hash"] = art.metadata_hash();
    man.doc["results"] = meta;
    write_text_file(man.path("inspect.json"), meta.dump(2) + "\n");
    return meta.dump(2);
}

}  // namespace

std::string run_subcommand(const RunConfig& cfg, const std::string& subcommand) {
    cfg.validate();
    Manifest man(cfg, subcommand);
    std::string report;
    if (subcommand == "direct") report = run_direct(cfg, man);
    else if (subcommand == "converge") report = run_converge(cfg, man);
    else if (subcommand == "invert") report = run_invert(cfg, man);
    else if (subcommand == "offline") report = run_offline(cfg, man);
    else if (subcommand == "online") report = run_online(cfg, man);
    else if (subcommand == "noise-study") report = run_noise_study_cmd(cfg, man);
    else if (subcommand == "eta-sweep") report = run_eta_sweep(cfg, man);
    else if (subcommand == "pg-sweep") report = run_pg_sweep_cmd(cfg, man);
    else if (subcommand == "inspect-artifact") report = run_inspect(cfg, man);
    else
        throw Error(ErrorCode::Config, "unknown subcommand '" + subcommand + "'");
    man.finish();
    return report;
}

}  // namespace moldflux
