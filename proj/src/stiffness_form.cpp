#include "fraclab/stiffness_form.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace fraclab {

// Defined in assembly2d.cpp.
void assemble_disk_form(const Mesh& mesh, const KernelSpec& kernel, Eigen::MatrixXd& A_raw);

namespace {

// Fourth-difference weights of the hat-pair correlation.
constexpr double kW4[5] = {1.0, -4.0, 6.0, -4.0, 1.0};

void assemble_interval(const Mesh& mesh, const KernelSpec& kernel, Eigen::MatrixXd& A,
                       Eigen::MatrixXd& M) {
  const int n = mesh.num_interior();
  const double h = mesh.spacing;
  const double s = kernel.s;
  std::vector<double> a(n);
  for (int m = 0; m < n; ++m) a[m] = 0.5 * kernel.normalization * hat_pair_energy_1d(h, s, m);
  A.resize(n, n);
  M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = a[std::abs(i - j)];
  for (int i = 0; i < n; ++i) {
    M(i, i) = 2.0 * h / 3.0;
    if (i + 1 < n) M(i, i + 1) = M(i + 1, i) = h / 6.0;
  }
}

}  // namespace

double hat_pair_energy_1d(double h, double s, long long m) {
  if (!(h > 0.0)) throw std::invalid_argument("hat_pair_energy_1d: h must be positive");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("hat_pair_energy_1d: s must lie in (0,1)");
  m = std::llabs(m);
  long double acc = 0.0L;
  if (std::abs(s - 0.5) < 1e-9) {
    // kernel |z|^{-2}: fourth antiderivative z^2 log|z| (the log h terms
    // cancel in the fourth difference, so entries are h-independent)
    for (int j = 0; j < 5; ++j) {
      long long nj = j - 2 - m;
      if (nj == 0) continue;
      long double v = static_cast<long double>(nj);
      acc += static_cast<long double>(kW4[j]) * v * v * std::log(std::abs(v));
    }
    return static_cast<double>(acc);
  }
  const long double beta = 3.0L - 2.0L * static_cast<long double>(s);
  const long double c = (3.0L - 2.0L * s) * (2.0L - 2.0L * s) * (1.0L - 2.0L * s) * (-2.0L * s);
  for (int j = 0; j < 5; ++j) {
    long double v = std::abs(static_cast<long double>(j - 2 - m));
    acc += static_cast<long double>(kW4[j]) * std::pow(v, beta);
  }
  long double val = -(2.0L * std::pow(static_cast<long double>(h), 1.0L - 2.0L * s) / c) * acc;
  if (!std::isfinite(static_cast<double>(val)))
    throw std::runtime_error("hat_pair_energy_1d: non-finite entry (singular quadrature failure)");
  return static_cast<double>(val);
}

double complement_kernel_mass(const Domain& domain, double s, const Point& x) {
  if (domain.kind() == Domain::Kind::interval) {
    const double dl = x.x - domain.left(), dr = domain.right() - x.x;
    if (dl <= 0.0 || dr <= 0.0)
      throw std::invalid_argument("complement_kernel_mass: point must lie inside the domain");
    return (std::pow(dl, -2.0 * s) + std::pow(dr, -2.0 * s)) / (2.0 * s);
  }
  const double R = domain.radius();
  const double rho = distance(x, domain.center());
  if (rho >= R) throw std::invalid_argument("complement_kernel_mass: point must lie inside the disk");
  // w = 1/(2s) * integral over angles of t(theta)^{-2s}, t = exit distance
  // of the ray from x to the circle. Periodic trapezoid rule.
  const int nq = 128;
  double acc = 0.0;
  for (int k = 0; k < nq; ++k) {
    double th = 2.0 * M_PI * k / nq;
    double ct = std::cos(th);
    double t = -rho * ct + std::sqrt(R * R - rho * rho * (1.0 - ct * ct));
    acc += std::pow(t, -2.0 * s);
  }
  return acc * (2.0 * M_PI / nq) / (2.0 * s);
}

StiffnessForm assemble_form(std::shared_ptr<const Mesh> mesh, const KernelSpec& kernel) {
  if (kernel.dimension != mesh->domain.dimension())
    throw std::invalid_argument("assemble_form: kernel and mesh dimensions disagree");
  if (std::abs(kernel.s - mesh->domain.order()) > 1e-14)
    throw std::invalid_argument("assemble_form: kernel order differs from the domain order");
  StiffnessForm form;
  form.mesh = mesh;
  form.kernel = kernel;
  if (mesh->domain.kind() == Domain::Kind::interval) {
    assemble_interval(*mesh, kernel, form.A, form.M);
  } else {
    Eigen::MatrixXd raw;
    assemble_disk_form(*mesh, kernel, raw);
    form.A = 0.5 * kernel.normalization * raw;
    const int n = mesh->num_interior();
    form.M = Eigen::MatrixXd::Zero(n, n);
    for (int e = 0; e < mesh->num_elements(); ++e) {
      const Element& el = mesh->elements[e];
      const double w = mesh->element_measure(e) / 12.0;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          int ia = mesh->interior_index[el.v[a]], ib = mesh->interior_index[el.v[b]];
          if (ia >= 0 && ib >= 0) form.M(ia, ib) += w * (a == b ? 2.0 : 1.0);
        }
    }
  }
  // symmetry is structural; enforce it exactly against roundoff
  form.A = 0.5 * (form.A + form.A.transpose()).eval();
  if (!form.A.allFinite())
    throw std::runtime_error("assemble_form: non-finite entry in the energy matrix");
  return form;
}

StiffnessForm assemble_form(std::shared_ptr<const Mesh> mesh) {
  return assemble_form(mesh, KernelSpec::standard(mesh->domain.dimension(), mesh->domain.order()));
}

double apply_form(const StiffnessForm& form, const GridFunction& u, const GridFunction& v) {
  if (u.mesh_ptr().get() != form.mesh.get() || v.mesh_ptr().get() != form.mesh.get())
    throw std::invalid_argument("apply_form: grid function mesh does not match the form");
  if (!u.vanishes_on_boundary() || !v.vanishes_on_boundary())
    throw std::invalid_argument("apply_form: nonzero boundary values");
  return u.interior().dot(form.A * v.interior());
}

double seminorm(const StiffnessForm& form, const GridFunction& u) {
  double q = apply_form(form, u, u);
  if (q < -1e-12 * (1.0 + u.max_abs()))
    throw std::runtime_error("seminorm: negative quadratic form value (assembly corruption)");
  return std::sqrt(std::max(q, 0.0));
}

std::string form_to_json(const StiffnessForm& form) {
  nlohmann::json j;
  j["dimension"] = form.kernel.dimension;
  j["s"] = form.kernel.s;
  j["normalization"] = form.kernel.normalization;
  j["n"] = form.n();
  auto dump = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["A"] = dump(form.A);
  j["M"] = dump(form.M);
  return j.dump();
}

std::string form_to_coo_text(const StiffnessForm& form) {
  std::ostringstream os;
  os.precision(17);
  for (int i = 0; i < form.n(); ++i)
    for (int k = 0; k < form.n(); ++k)
      if (form.A(i, k) != 0.0) os << i << " " << k << " " << form.A(i, k) << "\n";
  return os.str();
}

}  // namespace fraclab
