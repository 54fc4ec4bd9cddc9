#include "moldflux/rbf.hpp"

#include <atomic>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include <json.hpp>

namespace moldflux {

std::vector<Vec3> project_to_boundary(const std::vector<Vec3>& points) {
    std::vector<Vec3> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({p[0], 0.0, p[2]});
    return out;
}

double rbf_evaluate(const RbfBasis& basis, int j, const Vec3& x) {
    const Vec3& c = basis.centers[j];
    const double dx = x[0] - c[0], dy = x[1] - c[1], dz = x[2] - c[2];
    const double d2 = dx * dx + dy * dy + dz * dz;
    return std::exp(-basis.eta * basis.eta * d2);
}

std::vector<double> rbf_face_field(const RbfBasis& basis,
                                   const StructuredGrid& grid, int j) {
    const auto faces = grid.boundary_faces(PatchId::SIn);
    std::vector<double> f(faces.size());
    for (size_t i = 0; i < faces.size(); ++i)
        f[i] = rbf_evaluate(basis, j, faces[i].center);
    return f;
}

namespace {
uint64_t fnv1a(const void* data, size_t len, uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

template <typename T>
uint64_t hash_value(const T& v, uint64_t h) {
    return fnv1a(&v, sizeof(v), h);
}
}  // namespace

uint64_t OfflineArtifact::metadata_hash() const {
    uint64_t h = 0xcbf29ce484222325ULL;
    h = hash_value(kFormatVersion, h);
    for (int v : {nx, ny, nz, m}) h = hash_value(v, h);
    for (double v : {lx, ly, lz, k, this->h, eta}) h = hash_value(v, h);
    for (const auto& c : centers)
        for (double v : c) h = hash_value(v, h);
    for (const auto& p : sensor_points)
        for (double v : p) h = hash_value(v, h);
    return h;
}

void OfflineArtifact::check_matches(const PhysicalCase& pc,
                                    const RbfBasis& basis,
                                    const std::vector<Vec3>& sensors) const {
    OfflineArtifact probe;
    probe.m = basis.size();
    probe.nx = pc.grid->nx();
    probe.ny = pc.grid->ny();
    probe.nz = pc.grid->nz();
    probe.lx = pc.grid->lx();
    probe.ly = pc.grid->ly();
    probe.lz = pc.grid->lz();
    probe.k = pc.k;
    probe.h = pc.h;
    probe.eta = basis.eta;
    probe.centers = basis.centers;
    probe.sensor_points = sensors;
    require(probe.metadata_hash() == metadata_hash(), ErrorCode::Integrity,
            "artifact: metadata does not match the requested case");
}

OfflineArtifact build_offline(const PhysicalCase& pc, const RbfBasis& basis,
                              const std::vector<Vec3>& sensor_points,
                              int threads) {
    pc.validate();
    const int m = basis.size();
    require(m >= 1, ErrorCode::InvalidArgument, "build_offline: empty basis");
    require(static_cast<int>(sensor_points.size()) == m ||
                !sensor_points.empty(),
            ErrorCode::InvalidArgument, "build_offline: no sensors");
    const int n_sensors = static_cast<int>(sensor_points.size());

    // Duplicate centers make Theta columns nearly collinear; keep going but
    // the conditioning will show it.
    const StructuredGrid& grid = *pc.grid;

    std::vector<std::vector<double>> samples(m);  // T[phi_j] at sensors
    std::vector<double> t_ad_samples;

    // Task j < m: direct solve with g = phi_j. Task m: additive solve.
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(std::max(threads, 1));
    auto worker = [&](int tid) {
        try {
            for (int task = next.fetch_add(1); task <= m;
                 task = next.fetch_add(1)) {
                if (task < m) {
                    PhysicalCase local = pc;
                    local.g = rbf_face_field(basis, grid, task);
                    const TemperatureField t = solve_direct(local);
                    samples[task] = synthesize(grid, t, sensor_points);
                } else {
                    const TemperatureField t_ad = solve_additive(pc);
                    t_ad_samples = synthesize(grid, t_ad, sensor_points);
                }
            }
        } catch (...) {
            errors[tid] = std::current_exception();
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    OfflineArtifact art;
    art.m = m;
    art.theta = DenseMatrix(m);
    for (int i = 0; i < n_sensors; ++i)
        for (int j = 0; j < m; ++j)
            art.theta(i, j) = samples[j][i] + t_ad_samples[i];
    art.t_ad_samples = t_ad_samples;
    art.phi_integrals.resize(m);
    for (int j = 0; j < m; ++j)
        art.phi_integrals[j] = integrate_s_in(grid, rbf_face_field(basis, grid, j));
    art.nx = grid.nx();
    art.ny = grid.ny();
    art.nz = grid.nz();
    art.lx = grid.lx();
    art.ly = grid.ly();
    art.lz = grid.lz();
    art.k = pc.k;
    art.h = pc.h;
    art.eta = basis.eta;
    art.centers = basis.centers;
    art.sensor_points = sensor_points;
    return art;
}

std::vector<double> online_solve(const OfflineArtifact& art,
                                 const std::vector<double>& t_hat,
                                 const OnlineOptions& opts) {
    const int m = art.m;
    require(static_cast<int>(t_hat.size()) == m, ErrorCode::InvalidArgument,
            "online_solve: measurement vector size mismatch");

    DenseMatrix lhs = art.theta.transpose_times(art.theta);
    std::vector<double> data(m);
    for (int i = 0; i < m; ++i) data[i] = t_hat[i] + art.t_ad_samples[i];
    std::vector<double> rhs = art.theta.transpose_times(data);

    if (opts.mode.with_total_heat && opts.mode.p_g > 0.0) {
        const double pg = opts.mode.p_g;
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j)
                lhs(i, j) += pg * art.phi_integrals[i] * art.phi_integrals[j];
            rhs[i] += pg * opts.mode.g_hat * art.phi_integrals[i];
        }
    }

    if (opts.reg == OnlineReg::Lu) {
        try {
            return lu_full_pivot_solve(lhs, rhs);
        } catch (const Error& e) {
            if (e.code() == ErrorCode::SingularMatrix)
                throw Error(ErrorCode::SingularMatrix,
                            std::string(e.what()) + " (consider TSVD)");
            throw;
        }
    }
    const SvdResult svd = svd_decompose(lhs);
    return tsvd_solve(svd, rhs, opts.tsvd_alpha);
}

std::vector<double> reconstruct_flux(const RbfBasis& basis,
                                     const StructuredGrid& grid,
                                     const std::vector<double>& w) {
    require(static_cast<int>(w.size()) == basis.size(),
            ErrorCode::InvalidArgument, "reconstruct_flux: weight size mismatch");
    const auto faces = grid.boundary_faces(PatchId::SIn);
    std::vector<double> g(faces.size(), 0.0);
    for (int j = 0; j < basis.size(); ++j) {
        if (w[j] == 0.0) continue;
        for (size_t f = 0; f < faces.size(); ++f)
            g[f] += w[j] * rbf_evaluate(basis, j, faces[f].center);
    }
    return g;
}

// File layout: "MFART\n" + u64 header length + JSON metadata + the numeric
// payload as little-endian binary64, row-major (Theta, T_ad, phi integrals).
static constexpr char kMagic[6] = {'M', 'F', 'A', 'R', 'T', '\n'};

void save_artifact(const OfflineArtifact& art, const std::string& path) {
    nlohmann::json meta;
    meta["format_version"] = OfflineArtifact::kFormatVersion;
    meta["grid"] = {{"nx", art.nx}, {"ny", art.ny}, {"nz", art.nz},
                    {"lx", art.lx}, {"ly", art.ly}, {"lz", art.lz}};
    meta["physics"] = {{"k", art.k}, {"h", art.h}};
    meta["eta"] = art.eta;
    meta["m"] = art.m;
    auto pts = [](const std::vector<Vec3>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& p : v) a.push_back({p[0], p[1], p[2]});
        return a;
    };
    meta["centers"] = pts(art.centers);
    meta["sensors"] = pts(art.sensor_points);
    meta["hash"] = art.metadata_hash();
    const std::string header = meta.dump();

    std::ofstream f(path, std::ios::binary);
    require(f.good(), ErrorCode::Io, "save_artifact: cannot open " + path);
    f.write(kMagic, sizeof(kMagic));
    const uint64_t hlen = header.size();
    f.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    f.write(header.data(), static_cast<std::streamsize>(hlen));
    auto write_doubles = [&](const std::vector<double>& v) {
        f.write(reinterpret_cast<const char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
    };
    write_doubles(art.theta.a);
    write_doubles(art.t_ad_samples);
    write_doubles(art.phi_integrals);
    require(f.good(), ErrorCode::Io, "save_artifact: write failed for " + path);
}

OfflineArtifact load_artifact(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    require(f.good(), ErrorCode::Io, "load_artifact: cannot open " + path);
    char magic[6];
    f.read(magic, sizeof(magic));
    require(f.good() && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0,
            ErrorCode::Integrity, "load_artifact: bad magic");
    uint64_t hlen = 0;
    f.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    require(f.good() && hlen < (1ULL << 30), ErrorCode::Integrity,
            "load_artifact: corrupt header length");
    std::string header(hlen, '\0');
    f.read(header.data(), static_cast<std::streamsize>(hlen));
    require(f.good(), ErrorCode::Integrity, "load_artifact: truncated header");

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(header);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::Integrity,
                    std::string("load_artifact: bad metadata: ") + e.what());
    }
    const uint32_t version = meta.at("format_version").get<uint32_t>();
    require(version == OfflineArtifact::kFormatVersion,
            ErrorCode::UnsupportedVersion,
            "load_artifact: unsupported format version " +
                std::to_string(version));

    OfflineArtifact art;
    art.m = meta.at("m").get<int>();
    const auto& g = meta.at("grid");
    art.nx = g.at("nx").get<int>();
    art.ny = g.at("ny").get<int>();
    art.nz = g.at("nz").get<int>();
    art.lx = g.at("lx").get<double>();
    art.ly = g.at("ly").get<double>();
    art.lz = g.at("lz").get<double>();
    art.k = meta.at("physics").at("k").get<double>();
    art.h = meta.at("physics").at("h").get<double>();
    art.eta = meta.at("eta").get<double>();
    auto pts = [](const nlohmann::json& a) {
        std::vector<Vec3> v;
        for (const auto& p : a) v.push_back({p[0], p[1], p[2]});
        return v;
    };
    art.centers = pts(meta.at("centers"));
    art.sensor_points = pts(meta.at("sensors"));
    require(art.metadata_hash() == meta.at("hash").get<uint64_t>(),
            ErrorCode::Integrity, "load_artifact: metadata hash mismatch");

    const int m = art.m;
    require(m >= 1, ErrorCode::Integrity, "load_artifact: invalid size");
    art.theta = DenseMatrix(m);
    auto read_doubles = [&](std::vector<double>& v, size_t count) {
        v.resize(count);
        f.read(reinterpret_cast<char*>(v.data()),
               static_cast<std::streamsize>(count * sizeof(double)));
        require(f.good(), ErrorCode::Integrity,
                "load_artifact: truncated payload");
    };
    read_doubles(art.theta.a, static_cast<size_t>(m) * m);
    read_doubles(art.t_ad_samples, m);
    read_doubles(art.phi_integrals, m);
    return art;
}

}  // namespace moldflux
