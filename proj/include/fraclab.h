/* fraclab.h - C interface to the nonlocal variational laboratory.
 *
 * All functions return a fraclab_status; FRACLAB_OK is 0. A run that
 * completes but fails one of its embedded assertions returns
 * FRACLAB_ASSERTION_FAILED. Strings returned through out-parameters are
 * heap-allocated and must be released with fraclab_string_free. Handles are
 * opaque; destroy them with their matching *_free function. The last error
 * message is kept per thread and can be read with fraclab_last_error.
 */
#ifndef FRACLAB_H
#define FRACLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fraclab_status {
  FRACLAB_OK = 0,
  FRACLAB_INVALID_ARGUMENT = 1,
  FRACLAB_NUMERIC_FAILURE = 2,
  FRACLAB_IO_ERROR = 3,
  FRACLAB_ASSERTION_FAILED = 4
} fraclab_status;

typedef struct fraclab_mesh fraclab_mesh;
typedef struct fraclab_form fraclab_form;

const char* fraclab_version(void);

/* Human-readable message of the last failure on this thread ("" if none). */
const char* fraclab_last_error(void);

void fraclab_string_free(char* str);

/* --- meshes ------------------------------------------------------------ */

fraclab_status fraclab_mesh_create_interval(double a, double b, double s, int resolution,
                                            fraclab_mesh** out);
fraclab_status fraclab_mesh_create_disk(double cx, double cy, double radius, double s,
                                        int resolution, fraclab_mesh** out);
void fraclab_mesh_free(fraclab_mesh* mesh);

fraclab_status fraclab_mesh_node_count(const fraclab_mesh* mesh, int* out);
fraclab_status fraclab_mesh_interior_count(const fraclab_mesh* mesh, int* out);
fraclab_status fraclab_mesh_to_json(const fraclab_mesh* mesh, char** out_json);

/* --- nonlocal form ------------------------------------------------------ */

/* Assembles the energy and mass matrices with the standard kernel
 * normalization for the mesh's fractional order. */
fraclab_status fraclab_form_assemble(const fraclab_mesh* mesh, fraclab_form** out);
void fraclab_form_free(fraclab_form* form);

/* u and v are nodal arrays of length fraclab_mesh_node_count (boundary
 * entries must vanish). */
fraclab_status fraclab_form_apply(const fraclab_form* form, const double* u, const double* v,
                                  size_t len, double* out);
fraclab_status fraclab_form_seminorm(const fraclab_form* form, const double* u, size_t len,
                                     double* out);

/* Solves the linear problem A u = M g for nodal data g (length = node
 * count); writes the nodal solution into out_u (same length). */
fraclab_status fraclab_form_solve_linear(const fraclab_form* form, const double* g, size_t len,
                                         double* out_u);

/* Smallest generalized eigenvalues; out_lambda has length count. */
fraclab_status fraclab_form_eigenvalues(const fraclab_form* form, int count, double* out_lambda);

/* --- experiments --------------------------------------------------------- */

/* JSON array of {name, description} for every experiment. */
fraclab_status fraclab_experiment_list(char** out_json);

/* Runs an experiment from a JSON config document. out_dir_override and
 * seed_override (< 0 keeps the config seed) are optional. On success or
 * assertion failure the run manifest JSON is returned. */
fraclab_status fraclab_experiment_run(const char* config_json, const char* out_dir_override,
                                      long long seed_override, int jobs, char** out_manifest_json);

#ifdef __cplusplus
}
#endif

#endif /* FRACLAB_H */
