#include "moldflux.h"

#include <cstring>
#include <string>

#include "moldflux/config.hpp"
#include "moldflux/errors.hpp"
#include "moldflux/io.hpp"
#include "moldflux/rbf.hpp"
#include "moldflux/runner.hpp"

namespace {

thread_local std::string g_last_error;

mf_status status_of(const moldflux::Error& e) {
    using moldflux::ErrorCode;
    switch (e.code()) {
        case ErrorCode::Config:
        case ErrorCode::Integrity:
        case ErrorCode::UnsupportedVersion:
            return MF_ERR_CONFIG;
        case ErrorCode::NotSpd:
        case ErrorCode::NoConvergence:
        case ErrorCode::SingularMatrix:
        case ErrorCode::Stagnation:
            return MF_ERR_NUMERICAL;
        case ErrorCode::Io:
            return MF_ERR_IO;
        case ErrorCode::InvalidArgument:
        case ErrorCode::OutOfDomain:
            return MF_ERR_INVALID;
    }
    return MF_ERR_INTERNAL;
}

template <typename Fn>
mf_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return MF_OK;
    } catch (const moldflux::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MF_ERR_INTERNAL;
    }
}

void copy_out(const std::string& s, char* buf, size_t buf_len) {
    if (!buf || buf_len == 0) return;
    size_t n = s.size() < buf_len - 1 ? s.size() : buf_len - 1;
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

}  // namespace

struct mf_config {
    moldflux::RunConfig cfg;
};

struct mf_artifact {
    moldflux::OfflineArtifact art;
};

extern "C" {

const char* mf_last_error(void) { return g_last_error.c_str(); }

mf_config* mf_config_new(void) { return new mf_config(); }

void mf_config_free(mf_config* cfg) { delete cfg; }

mf_status mf_config_preset(mf_config* cfg, const char* name) {
    if (!cfg || !name) {
        g_last_error = "null argument";
        return MF_ERR_INVALID;
    }
    return guarded([&] { cfg->cfg.apply_preset(name); });
}

mf_status mf_config_load(mf_config* cfg, const char* path) {
    if (!cfg || !path) {
        g_last_error = "null argument";
        return MF_ERR_INVALID;
    }
    return guarded(
        [&] { cfg->cfg.apply_ini(moldflux::read_text_file(path)); });
}

mf_status mf_config_set(mf_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        g_last_error = "null argument";
        return MF_ERR_INVALID;
    }
    return guarded([&] { cfg->cfg.set(key, value); });
}

mf_status mf_config_get(const mf_config* cfg, const char* key, char* buf,
                        size_t buf_len) {
    if (!cfg || !key || !buf) {
        g_last_error = "null argument";
        return MF_ERR_INVALID;
    }
    return guarded([&] {
        auto m = cfg->cfg.to_map();
        auto it = m.find(key);
        moldflux::require(it != m.end(), moldflux::ErrorCode::Config,
                          std::string("unknown key '") + key + "'");
        copy_out(it->second, buf, buf_len);
    });
}

mf_status mf_run(const mf_config* cfg, const char* subcommand, char* report,
                 size_t report_len) {
    if (!cfg || !subcommand) {
        g_last_error = "null argument";
        return MF_ERR_INVALID;
    }
    return guarded([&] {
        std::string rep = moldflux::run_subcommand(cfg->cfg, subcommand);
        copy_out(rep, report, report_len);
    });
}

mf_status mf_artifact_open(const char* path, mf_artifact** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return MF_ERR_INVALID;
    }
    *out = nullptr;
    return guarded([&] {
        auto* handle = new mf_artifact{moldflux::load_artifact(path)};
        *out = handle;
    });
}

void mf_artifact_free(mf_artifact* art) { delete art; }

mf_status mf_artifact_size(const mf_artifact* art, int* m) {
    if (!art || !m) {
        g_last_error = "null argument";
        return MF_ERR_INVALID;
    }
    *m = art->art.m;
    return MF_OK;
}

mf_status mf_artifact_hash(const mf_artifact* art, unsigned long long* hash) {
    if (!art || !hash) {
        g_last_error = "null argument";
        return MF_ERR_INVALID;
    }
    *hash = art->art.metadata_hash();
    return MF_OK;
}

}  // extern "C"
