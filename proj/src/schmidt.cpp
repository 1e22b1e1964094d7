#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pairsim/errors.hpp"
#include "pairsim/jsa.hpp"

namespace pairsim {

// Schmidt spectrum of the continuous amplitude: singular values of A scaled
// by the square roots of the quadrature weights, obtained as eigenvalues of
// the (symmetric, positive semidefinite) Gram matrix B^T B.
std::vector<double> schmidt_spectrum(const JsaGrid& jsa) {
  const int n = jsa.grid.points_per_axis;
  const auto w = jsa.grid.weights();
  std::vector<double> sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(w[i]);

  Eigen::MatrixXd b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      b(i, j) = jsa.at(i, j) * sw[i] * sw[j];

  Eigen::MatrixXd gram = b.transpose() * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("schmidt spectrum: eigensolver did not converge on a " +
                         std::to_string(n) + "x" + std::to_string(n) + " grid");

  std::vector<double> lambda(solver.eigenvalues().data(),
                             solver.eigenvalues().data() + n);
  for (double& l : lambda) l = std::max(l, 0.0);  // clamp rounding negatives
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  double total = 0.0;
  for (double l : lambda) total += l;
  if (!(total > 0.0))
    throw NumericalError("schmidt spectrum: amplitude grid has zero norm");
  for (double& l : lambda) l /= total;
  return lambda;
}

} // namespace pairsim
