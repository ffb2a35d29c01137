#ifndef SYSKIT_H
#define SYSKIT_H

#if defined(SYSKIT_BUILDING)
#define SYSKIT_API __attribute__((visibility("default")))
#else
#define SYSKIT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Nonzero values mirror the library's error codes. */
enum syskit_status {
  SYSKIT_OK = 0,
  SYSKIT_E_PARSE = 1,
  SYSKIT_E_TRIANGLE_INEQUALITY,
  SYSKIT_E_NONMANIFOLD,
  SYSKIT_E_NONORIENTABLE,
  SYSKIT_E_FOREST,
  SYSKIT_E_DISCONNECTED,
  SYSKIT_E_NOT_CLOSED,
  SYSKIT_E_NOT_A_LOOP,
  SYSKIT_E_SEEDS_TOO_CLOSE,
  SYSKIT_E_EPSILON_TOO_LARGE,
  SYSKIT_E_IRREGULAR_METRIC,
  SYSKIT_E_NOT_EPIMORPHIC,
  SYSKIT_E_RANK_DEFICIT,
  SYSKIT_E_GENUS_TOO_LARGE,
  SYSKIT_E_NO_NONTRIVIAL_CLASS,
  SYSKIT_E_TARGET_UNREACHABLE,
  SYSKIT_E_EPS_OUT_OF_RANGE,
  SYSKIT_E_NONPOSITIVE_LENGTH,
  SYSKIT_E_NO_SOLUTION,
  SYSKIT_E_BAD_ELL,
  SYSKIT_E_BAD_PARAMS,
  SYSKIT_E_BAD_C,
  SYSKIT_E_NON_FINITE_VALUES,
  SYSKIT_E_NOT_SPHERE,
  SYSKIT_E_MARKS_TOO_CLOSE,
  SYSKIT_E_TOO_FEW_MARKS,
  SYSKIT_E_INDUCTION_OVERFLOW,
  SYSKIT_E_BAD_BRANCH_DATA,
  SYSKIT_E_IO,
  SYSKIT_E_REFINEMENT_NEEDED,
  SYSKIT_E_INTERNAL
};

/* What a command reads from its input path. */
enum syskit_input {
  SYSKIT_INPUT_NONE = 0,
  SYSKIT_INPUT_MESH = 1,
  SYSKIT_INPUT_GRAPH = 2,
  SYSKIT_INPUT_OPTIONAL_MESH = 3
};

typedef struct syskit_mesh syskit_mesh;
typedef struct syskit_config syskit_config;
typedef struct syskit_report syskit_report;

/* "OK" or the upper-case error name. */
SYSKIT_API const char* syskit_status_name(int status);
/* Message of the last failure on this thread; empty when none. */
SYSKIT_API const char* syskit_last_error(void);
/* The last failure on this thread as a JSON error object. */
SYSKIT_API const char* syskit_last_error_json(void);
/* Newline-separated command names. */
SYSKIT_API const char* syskit_commands(void);
SYSKIT_API int syskit_command_input(const char* command, int* input);

SYSKIT_API syskit_config* syskit_config_new(void);
SYSKIT_API void syskit_config_free(syskit_config* cfg);
/* Keys: ell, eps, count, target, seed, steiner, log_base, format, const
   (value NAME=VALUE). */
SYSKIT_API int syskit_config_set(syskit_config* cfg, const char* key, const char* value);

SYSKIT_API int syskit_mesh_load(const char* path, syskit_mesh** out);
SYSKIT_API int syskit_mesh_generate(const char* kind, int argc, const char* const* argv,
                                    const syskit_config* cfg, syskit_mesh** out);
SYSKIT_API int syskit_mesh_save(const syskit_mesh* mesh, const char* path);
/* Any output pointer may be NULL. */
SYSKIT_API int syskit_mesh_info(const syskit_mesh* mesh, int* vertices, int* edges, int* faces,
                                int* genus, int* marks, double* area);
SYSKIT_API void syskit_mesh_free(syskit_mesh* mesh);

/* On failure *out still receives a report holding the error object. */
SYSKIT_API int syskit_run(const char* command, const syskit_mesh* mesh, const syskit_config* cfg,
                          syskit_report** out);
/* Loads `path` as the command's input kind (may be NULL when optional). */
SYSKIT_API int syskit_run_path(const char* command, const char* path, const syskit_config* cfg,
                               syskit_report** out);
/* Rendered in the configured format. */
SYSKIT_API const char* syskit_report_text(const syskit_report* report);
SYSKIT_API int syskit_report_status(const syskit_report* report);
SYSKIT_API int syskit_report_flagged(const syskit_report* report);
SYSKIT_API void syskit_report_free(syskit_report* report);

/* SVG line plot of a CSV series file (header row, x in the first column). */
SYSKIT_API int syskit_plot_svg(const char* csv_path, const char* title, const char* svg_path);

#ifdef __cplusplus
}
#endif

#endif
