#include "fraclab.h"

#include <Eigen/Dense>
#include <cstring>
#include <string>

#include "fraclab/eigensolver.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/mesh.hpp"
#include "fraclab/stiffness_form.hpp"
#include "json.hpp"

using namespace fraclab;

struct fraclab_mesh {
  std::shared_ptr<const Mesh> mesh;
};

struct fraclab_form {
  std::shared_ptr<const StiffnessForm> form;
};

namespace {

thread_local std::string g_last_error;

fraclab_status fail(fraclab_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
fraclab_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(FRACLAB_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(FRACLAB_NUMERIC_FAILURE, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fraclab_status nodal_to_gridfn(const fraclab_form* form, const double* data, size_t len,
                               GridFunction& out) {
  const auto& mesh = form->form->mesh;
  if (len != static_cast<size_t>(mesh->num_nodes()))
    return fail(FRACLAB_INVALID_ARGUMENT, "nodal array length does not match the mesh");
  Eigen::VectorXd v(mesh->num_nodes());
  for (size_t i = 0; i < len; ++i) v[static_cast<int>(i)] = data[i];
  out = GridFunction(mesh, std::move(v));
  return FRACLAB_OK;
}

}  // namespace

extern "C" {

const char* fraclab_version(void) { return "fraclab 1.0.0"; }

const char* fraclab_last_error(void) { return g_last_error.c_str(); }

void fraclab_string_free(char* str) { delete[] str; }

fraclab_status fraclab_mesh_create_interval(double a, double b, double s, int resolution,
                                            fraclab_mesh** out) {
  if (!out) return fail(FRACLAB_INVALID_ARGUMENT, "null output pointer");
  return guarded([&]() {
    auto mesh = build_mesh(Domain::interval(a, b, s), resolution);
    *out = new fraclab_mesh{std::move(mesh)};
    return FRACLAB_OK;
  });
}

fraclab_status fraclab_mesh_create_disk(double cx, double cy, double radius, double s,
                                        int resolution, fraclab_mesh** out) {
  if (!out) return fail(FRACLAB_INVALID_ARGUMENT, "null output pointer");
  return guarded([&]() {
    auto mesh = build_mesh(Domain::disk({cx, cy}, radius, s), resolution);
    *out = new fraclab_mesh{std::move(mesh)};
    return FRACLAB_OK;
  });
}

void fraclab_mesh_free(fraclab_mesh* mesh) { delete mesh; }

fraclab_status fraclab_mesh_node_count(const fraclab_mesh* mesh, int* out) {
  if (!mesh || !out) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  *out = mesh->mesh->num_nodes();
  return FRACLAB_OK;
}

fraclab_status fraclab_mesh_interior_count(const fraclab_mesh* mesh, int* out) {
  if (!mesh || !out) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  *out = mesh->mesh->num_interior();
  return FRACLAB_OK;
}

fraclab_status fraclab_mesh_to_json(const fraclab_mesh* mesh, char** out_json) {
  if (!mesh || !out_json) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    *out_json = dup_string(mesh_to_json(*mesh->mesh));
    return FRACLAB_OK;
  });
}

fraclab_status fraclab_form_assemble(const fraclab_mesh* mesh, fraclab_form** out) {
  if (!mesh || !out) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    auto form = std::make_shared<StiffnessForm>(assemble_form(mesh->mesh));
    *out = new fraclab_form{std::move(form)};
    return FRACLAB_OK;
  });
}

void fraclab_form_free(fraclab_form* form) { delete form; }

fraclab_status fraclab_form_apply(const fraclab_form* form, const double* u, const double* v,
                                  size_t len, double* out) {
  if (!form || !u || !v || !out) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    GridFunction gu{form->form->mesh}, gv{form->form->mesh};
    fraclab_status st = nodal_to_gridfn(form, u, len, gu);
    if (st != FRACLAB_OK) return st;
    st = nodal_to_gridfn(form, v, len, gv);
    if (st != FRACLAB_OK) return st;
    *out = apply_form(*form->form, gu, gv);
    return FRACLAB_OK;
  });
}

fraclab_status fraclab_form_seminorm(const fraclab_form* form, const double* u, size_t len,
                                     double* out) {
  if (!form || !u || !out) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    GridFunction gu{form->form->mesh};
    fraclab_status st = nodal_to_gridfn(form, u, len, gu);
    if (st != FRACLAB_OK) return st;
    *out = seminorm(*form->form, gu);
    return FRACLAB_OK;
  });
}

fraclab_status fraclab_form_solve_linear(const fraclab_form* form, const double* g, size_t len,
                                         double* out_u) {
  if (!form || !g || !out_u) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    GridFunction gg{form->form->mesh};
    fraclab_status st = nodal_to_gridfn(form, g, len, gg);
    if (st != FRACLAB_OK) return st;
    Eigen::VectorXd rhs = form->form->M * gg.interior();
    Eigen::VectorXd sol = Eigen::LLT<Eigen::MatrixXd>(form->form->A).solve(rhs);
    GridFunction u = GridFunction::from_interior(form->form->mesh, sol);
    for (int i = 0; i < u.size(); ++i) out_u[i] = u[i];
    return FRACLAB_OK;
  });
}

fraclab_status fraclab_form_eigenvalues(const fraclab_form* form, int count, double* out_lambda) {
  if (!form || !out_lambda) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    auto pairs = eigenpairs(*form->form, count);
    for (int i = 0; i < count; ++i) out_lambda[i] = pairs[i].lambda;
    return FRACLAB_OK;
  });
}

fraclab_status fraclab_experiment_list(char** out_json) {
  if (!out_json) return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  return guarded([&]() {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [name, desc] : experiment_catalog())
      j.push_back({{"name", name}, {"description", desc}});
    *out_json = dup_string(j.dump(2));
    return FRACLAB_OK;
  });
}

fraclab_status fraclab_experiment_run(const char* config_json, const char* out_dir_override,
                                      long long seed_override, int jobs,
                                      char** out_manifest_json) {
  if (!config_json || !out_manifest_json)
    return fail(FRACLAB_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> fraclab_status {
    ExperimentConfig cfg = parse_config(config_json);
    if (out_dir_override && *out_dir_override) cfg.out_dir = out_dir_override;
    if (seed_override >= 0) cfg.seed = static_cast<unsigned>(seed_override);
    RunManifest man;
    try {
      man = run_experiment(cfg, jobs < 1 ? 1 : jobs);
    } catch (const std::ios_base::failure& e) {
      return fail(FRACLAB_IO_ERROR, e.what());
    }
    *out_manifest_json = dup_string(man.to_json());
    if (!man.pass) return fail(FRACLAB_ASSERTION_FAILED, "one or more experiment checks failed");
    return FRACLAB_OK;
  });
}

}  // extern "C"
