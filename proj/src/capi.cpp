#include "veo/veo.h"

#include <cstring>
#include <exception>
#include <ios>
#include <new>
#include <string>

#include "veo/config.hpp"
#include "veo/harness.hpp"

struct veo_config {
  veo::ScenarioConfig cfg;
};

struct veo_plan {
  veo::ExperimentPlan plan;
};

namespace {

thread_local std::string g_last_error;

veo_status fail(veo_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
veo_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const veo::ConfigError& e) {
    return fail(VEO_ERR_CONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(VEO_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::ios_base::failure& e) {
    return fail(VEO_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(VEO_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    const std::string what = e.what();
    if (what.find("cannot open") != std::string::npos ||
        what.find("cannot write") != std::string::npos)
      return fail(VEO_ERR_IO, what);
    return fail(VEO_ERR_RUNTIME, what);
  }
}

veo_status copy_out(const std::string& value, char* buf, size_t buflen) {
  if (buf == nullptr) return fail(VEO_ERR_INVALID_ARGUMENT, "output buffer is NULL");
  if (value.size() + 1 > buflen)
    return fail(VEO_ERR_INVALID_ARGUMENT, "output buffer too small, need " +
                                              std::to_string(value.size() + 1) + " bytes");
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return VEO_OK;
}

}  // namespace

extern "C" {

const char* veo_version(void) { return "1.0.0"; }

const char* veo_last_error(void) { return g_last_error.c_str(); }

veo_status veo_config_create(veo_config** out) {
  if (out == nullptr) return fail(VEO_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    *out = new veo_config{};
    return VEO_OK;
  });
}

veo_status veo_config_load(const char* path, veo_config** out) {
  if (path == nullptr || out == nullptr)
    return fail(VEO_ERR_INVALID_ARGUMENT, "path and out must be non-NULL");
  return guarded([&] {
    auto cfg = veo::load_config(path);
    *out = new veo_config{std::move(cfg)};
    return VEO_OK;
  });
}

veo_status veo_config_set(veo_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr)
    return fail(VEO_ERR_INVALID_ARGUMENT, "cfg, key, and value must be non-NULL");
  return guarded([&] {
    veo::config_set_field(cfg->cfg, key, value);
    return VEO_OK;
  });
}

veo_status veo_config_get(const veo_config* cfg, const char* key, char* buf, size_t buflen) {
  if (cfg == nullptr || key == nullptr)
    return fail(VEO_ERR_INVALID_ARGUMENT, "cfg and key must be non-NULL");
  return guarded([&] { return copy_out(veo::config_get_field(cfg->cfg, key), buf, buflen); });
}

veo_status veo_config_save(const veo_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr)
    return fail(VEO_ERR_INVALID_ARGUMENT, "cfg and path must be non-NULL");
  return guarded([&] {
    veo::save_config(cfg->cfg, path);
    return VEO_OK;
  });
}

void veo_config_free(veo_config* cfg) { delete cfg; }

veo_status veo_plan_create(veo_plan** out) {
  if (out == nullptr) return fail(VEO_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    *out = new veo_plan{};
    return VEO_OK;
  });
}

veo_status veo_plan_set(veo_plan* plan, const char* key, const char* value) {
  if (plan == nullptr || key == nullptr || value == nullptr)
    return fail(VEO_ERR_INVALID_ARGUMENT, "plan, key, and value must be non-NULL");
  return guarded([&] {
    veo::plan_set_field(plan->plan, key, value);
    return VEO_OK;
  });
}

veo_status veo_plan_run(const veo_plan* plan, const veo_config* cfg, char* out_dir_buf,
                        size_t buflen) {
  if (plan == nullptr || cfg == nullptr)
    return fail(VEO_ERR_INVALID_ARGUMENT, "plan and cfg must be non-NULL");
  return guarded([&] {
    const std::string dir = veo::run_plan(plan->plan, cfg->cfg);
    if (out_dir_buf != nullptr) return copy_out(dir, out_dir_buf, buflen);
    return VEO_OK;
  });
}

void veo_plan_free(veo_plan* plan) { delete plan; }

}  // extern "C"
