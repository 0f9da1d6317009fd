#include "fraclab/eigensolver.hpp"

#include <Eigen/Dense>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fraclab {

std::vector<EigenPair> eigenpairs(const StiffnessForm& form, int count, double tol, int max_iter) {
  const int n = form.n();
  if (count < 1 || count >= n)
    throw std::invalid_argument("eigenpairs: count must lie in [1, interior node count)");

  Eigen::LLT<Eigen::MatrixXd> allt(form.A);
  if (allt.info() != Eigen::Success)
    throw std::runtime_error("eigenpairs: energy matrix is not positive definite");

  std::vector<EigenPair> out;
  std::vector<Eigen::VectorXd> found;  // M-orthonormal eigenvectors
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto m_orthogonalize = [&](Eigen::VectorXd& v) {
    for (const auto& f : found) v -= (f.dot(form.M * v)) * f;
  };

  for (int k = 0; k < count; ++k) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    m_orthogonalize(v);
    v /= std::sqrt(v.dot(form.M * v));

    double lambda = v.dot(form.A * v);
    double res = 1.0;
    int it = 0;
    for (; it < max_iter; ++it) {
      Eigen::VectorXd w = allt.solve(form.M * v);
      m_orthogonalize(w);
      double nrm = std::sqrt(w.dot(form.M * w));
      if (!(nrm > 0.0)) throw std::runtime_error("eigenpairs: iteration collapsed onto deflated space");
      v = w / nrm;
      lambda = v.dot(form.A * v);
      Eigen::VectorXd r = form.A * v - lambda * (form.M * v);
      res = r.norm() / std::max((form.A * v).norm(), 1e-300);
      if (res < std::max(tol, 1e-14)) break;
    }
    // Rayleigh-shift polish (one factorization, two solves)
    if (res > 1e-14) {
      Eigen::MatrixXd shifted = form.A - (lambda * (1.0 - 1e-10)) * form.M;
      Eigen::PartialPivLU<Eigen::MatrixXd> lu(shifted);
      for (int p = 0; p < 2; ++p) {
        Eigen::VectorXd w = lu.solve(form.M * v);
        m_orthogonalize(w);
        double nrm = std::sqrt(w.dot(form.M * w));
        if (!(nrm > 0.0) || !w.allFinite()) break;
        v = w / nrm;
      }
      lambda = v.dot(form.A * v);
      Eigen::VectorXd r = form.A * v - lambda * (form.M * v);
      res = r.norm() / std::max((form.A * v).norm(), 1e-300);
    }
    if (res > 1e-6)
      throw std::runtime_error("eigenpairs: inverse iteration did not converge, residual " +
                               std::to_string(res) + " after " + std::to_string(it) + " iterations");

    if (v.sum() < 0.0) v = -v;  // positive nodal-mean sign convention
    found.push_back(v);
    EigenPair pair{lambda, GridFunction::from_interior(form.mesh, v), res};
    out.push_back(std::move(pair));
  }
  std::sort(out.begin(), out.end(),
            [](const EigenPair& a, const EigenPair& b) { return a.lambda < b.lambda; });
  return out;
}

std::string eigenpairs_to_csv(const std::vector<EigenPair>& pairs) {
  std::ostringstream os;
  os << "index,lambda,residual\n";
  os.precision(12);
  for (size_t i = 0; i < pairs.size(); ++i)
    os << i << "," << pairs[i].lambda << "," << pairs[i].residual << "\n";
  return os.str();
}

}  // namespace fraclab
