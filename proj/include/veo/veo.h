#ifndef VEO_H
#define VEO_H

/* C interface to the vehicular edge offloading simulator and trainer.
 *
 * All functions return a veo_status; VEO_OK means success. On failure the
 * thread-local message returned by veo_last_error() describes what went
 * wrong. Handles are opaque; every *_create has a matching *_free, and
 * freeing NULL is a no-op.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum veo_status {
  VEO_OK = 0,
  VEO_ERR_INVALID_ARGUMENT = 1,
  VEO_ERR_CONFIG = 2,
  VEO_ERR_IO = 3,
  VEO_ERR_RUNTIME = 4
} veo_status;

typedef struct veo_config veo_config;
typedef struct veo_plan veo_plan;

const char* veo_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
const char* veo_last_error(void);

/* Scenario configuration. Keys mirror the config file syntax, e.g.
 * veo_config_set(cfg, "num_cvs", "4"). */
veo_status veo_config_create(veo_config** out);
veo_status veo_config_load(const char* path, veo_config** out);
veo_status veo_config_set(veo_config* cfg, const char* key, const char* value);

/* Writes the formatted value into buf (NUL terminated). Fails with
 * VEO_ERR_INVALID_ARGUMENT if buflen is too small. */
veo_status veo_config_get(const veo_config* cfg, const char* key, char* buf, size_t buflen);
veo_status veo_config_save(const veo_config* cfg, const char* path);
void veo_config_free(veo_config* cfg);

/* Experiment plan. Keys: mode (simulate|train|evaluate|sweep), policy, dt
 * (on|off), seed, seeds, episodes, out, sweep_axis, sweep_values (comma
 * separated), workers, and trainer.<field> for trainer hyperparameters. */
veo_status veo_plan_create(veo_plan** out);
veo_status veo_plan_set(veo_plan* plan, const char* key, const char* value);

/* Runs the plan against the config. On success writes the artifact
 * directory path into out_dir_buf when it is non-NULL. */
veo_status veo_plan_run(const veo_plan* plan, const veo_config* cfg, char* out_dir_buf,
                        size_t buflen);
void veo_plan_free(veo_plan* plan);

#ifdef __cplusplus
}
#endif

#endif /* VEO_H */
