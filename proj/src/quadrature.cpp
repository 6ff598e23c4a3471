#include "efish/quadrature.hpp"

#include <cmath>

namespace efish {

Eigen::ArrayXd periodic_log_weights(int num_points) {
  if (num_points < 2 || num_points % 2 != 0) {
    throw std::invalid_argument("periodic log rule needs an even node count");
  }
  const int n = num_points / 2;
  Eigen::ArrayXd r(num_points);
  for (int d = 0; d < num_points; ++d) {
    double sum = 0.0;
    for (int m = 1; m < n; ++m) {
      sum += std::cos(m * d * kPi / n) / m;
    }
    const double alt = (d % 2 == 0) ? 1.0 : -1.0;
    r[d] = -(kTwoPi / n) * sum - alt * kPi / (n * n);
  }
  return r;
}

Eigen::MatrixXd periodic_diff_matrix(int num_points) {
  if (num_points < 2 || num_points % 2 != 0) {
    throw std::invalid_argument("spectral differentiation needs an even node count");
  }
  const double h = kTwoPi / num_points;
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(num_points, num_points);
  for (int i = 0; i < num_points; ++i) {
    for (int j = 0; j < num_points; ++j) {
      if (i == j) continue;
      const double sign = ((i - j) % 2 == 0) ? 1.0 : -1.0;
      d(i, j) = 0.5 * sign / std::tan(0.5 * (i - j) * h);
    }
  }
  return d;
}

Eigen::VectorXcd trig_interpolate(const Eigen::ArrayXd& params,
                                  const Eigen::VectorXcd& values,
                                  const Eigen::ArrayXd& targets) {
  const int p = static_cast<int>(params.size());
  if (p % 2 != 0) throw std::invalid_argument("trig interpolation needs an even node count");
  const int n = p / 2;
  Eigen::VectorXcd out(targets.size());
  // Cardinal-kernel form: K(u) = sin(nu)·cot(u/2)/P, K(0) = 1.
  for (int k = 0; k < targets.size(); ++k) {
    Cplx acc(0.0, 0.0);
    for (int j = 0; j < p; ++j) {
      double u = targets[k] - params[j];
      u -= kTwoPi * std::round(u / kTwoPi);
      double kernel;
      if (std::abs(u) < 1e-9) {
        kernel = 1.0;
      } else {
        kernel = std::sin(n * u) / std::tan(0.5 * u) / p;
      }
      acc += values[j] * kernel;
    }
    out[k] = acc;
  }
  return out;
}

namespace {

GaussRule make_rule(std::initializer_list<double> nodes01,
                    std::initializer_list<double> weights01) {
  GaussRule r;
  r.nodes = Eigen::Map<const Eigen::ArrayXd>(nodes01.begin(), nodes01.size());
  r.weights = Eigen::Map<const Eigen::ArrayXd>(weights01.begin(), weights01.size());
  return r;
}

}  // namespace

const GaussRule& gauss_rule_4() {
  static const GaussRule rule = [] {
    const double x1 = 0.3399810435848563, x2 = 0.8611363115940526;
    const double w1 = 0.6521451548625461, w2 = 0.3478548451374538;
    return make_rule({0.5 * (1 - x2), 0.5 * (1 - x1), 0.5 * (1 + x1), 0.5 * (1 + x2)},
                     {0.5 * w2, 0.5 * w1, 0.5 * w1, 0.5 * w2});
  }();
  return rule;
}

const GaussRule& gauss_rule_8() {
  static const GaussRule rule = [] {
    const double x[4] = {0.1834346424956498, 0.5255324099163290,
                         0.7966664774136267, 0.9602898564975363};
    const double w[4] = {0.3626837833783620, 0.3137066458778873,
                         0.2223810344533745, 0.1012285362903763};
    return make_rule({0.5 * (1 - x[3]), 0.5 * (1 - x[2]), 0.5 * (1 - x[1]),
                      0.5 * (1 - x[0]), 0.5 * (1 + x[0]), 0.5 * (1 + x[1]),
                      0.5 * (1 + x[2]), 0.5 * (1 + x[3])},
                     {0.5 * w[3], 0.5 * w[2], 0.5 * w[1], 0.5 * w[0],
                      0.5 * w[0], 0.5 * w[1], 0.5 * w[2], 0.5 * w[3]});
  }();
  return rule;
}

}  // namespace efish
