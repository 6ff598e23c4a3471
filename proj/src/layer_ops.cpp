#include "efish/layer_ops.hpp"

#include <cmath>
#include <iostream>
#include <map>

namespace efish {

double green(Vec2 x, Vec2 y) {
  const double r = (x - y).norm();
  if (r == 0.0) throw SingularityError("Green kernel evaluated at coincident points");
  return std::log(r) / kTwoPi;
}

Vec2 green_gradient(Vec2 x, Vec2 y) {
  const Vec2 w = x - y;
  const double r2 = w.squaredNorm();
  if (r2 == 0.0) throw SingularityError("Green gradient at coincident points");
  return w / (kTwoPi * r2);
}

Eigen::Matrix2d green_hessian(Vec2 x, Vec2 y) {
  const Vec2 w = x - y;
  const double r2 = w.squaredNorm();
  if (r2 == 0.0) throw SingularityError("Green Hessian at coincident points");
  return (Eigen::Matrix2d::Identity() / r2 -
          2.0 * (w * w.transpose()) / (r2 * r2)) /
         kTwoPi;
}

namespace {

// Single layer on the mesh's own nodes: split the kernel into the periodic
// log singularity, handled by the spectral rule, and a smooth remainder,
// handled by the trapezoid rule.
Eigen::MatrixXd single_layer_self(const CurveMesh& mesh) {
  const int p = mesh.size();
  const double h = mesh.spacing();
  const Eigen::ArrayXd r = periodic_log_weights(p);
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      double smooth;
      if (i == j) {
        smooth = std::log(mesh.speeds[i]);
      } else {
        const double dist = (mesh.nodes.col(i) - mesh.nodes.col(j)).norm();
        const double u = mesh.params[i] - mesh.params[j];
        smooth = std::log(dist / (2.0 * std::abs(std::sin(0.5 * u))));
      }
      const int d = std::abs(i - j);
      m(i, j) = mesh.speeds[j] * (r[d] / (2.0 * kTwoPi) + h * smooth / kTwoPi);
    }
  }
  return m;
}

enum class PvKernel { K, Kstar, D };

Eigen::MatrixXd principal_value_self(const CurveMesh& mesh, PvKernel which) {
  const int p = mesh.size();
  Eigen::MatrixXd m(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      double kernel;
      if (i == j) {
        kernel = mesh.curvatures[i] / (2.0 * kTwoPi);
        if (which == PvKernel::D) kernel = -kernel;
      } else {
        const Vec2 w = mesh.nodes.col(i) - mesh.nodes.col(j);
        const double r2 = w.squaredNorm();
        switch (which) {
          case PvKernel::K:
            kernel = -w.dot(mesh.normals.col(j)) / (kTwoPi * r2);
            break;
          case PvKernel::Kstar:
            kernel = w.dot(mesh.normals.col(i)) / (kTwoPi * r2);
            break;
          case PvKernel::D:
            kernel = w.dot(mesh.normals.col(j)) / (kTwoPi * r2);
            break;
        }
      }
      m(i, j) = mesh.weights[j] * kernel;
    }
  }
  return m;
}

}  // namespace

KernelMatrix assemble(OperatorTag tag, const CurveMesh& mesh) {
  switch (tag) {
    case OperatorTag::SingleLayer:
      return {tag, single_layer_self(mesh)};
    case OperatorTag::NeumannPoincare:
      return {tag, principal_value_self(mesh, PvKernel::K)};
    case OperatorTag::NeumannPoincareAdjoint:
      return {tag, principal_value_self(mesh, PvKernel::Kstar)};
    case OperatorTag::DoubleLayer:
      return {tag, principal_value_self(mesh, PvKernel::D)};
  }
  throw std::logic_error("unknown operator tag");
}

namespace {

// ∫ m(u)·log|u| du with m the unit tent of half-width h centered at c,
// exact, valid whether or not the singularity lies under the tent.
double tent_log_integral(double c, double h) {
  auto l0 = [](double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)) - x; };
  auto l1 = [](double x) {
    return x == 0.0 ? 0.0 : 0.5 * x * x * std::log(std::abs(x)) - 0.25 * x * x;
  };
  const double a = c - h, b = c + h;
  const double left = (l1(c) - l1(a)) - a * (l0(c) - l0(a));
  const double right = b * (l0(b) - l0(c)) - (l1(b) - l1(c));
  return left + right;
}

}  // namespace

Eigen::MatrixXd hypersingular_form(const CurveMesh& mesh) {
  if (mesh.kind != ElementKind::P1Nodes) {
    throw std::invalid_argument("hypersingular form requires continuous (P1) elements");
  }
  const int p = mesh.size();
  const double h = mesh.spacing();
  const GaussRule& gauss = gauss_rule_8();
  const int g = static_cast<int>(gauss.nodes.size());

  // Per-panel Gauss geometry.
  Eigen::Matrix2Xd gpts(2, p * g);
  for (int q = 0; q < p; ++q) {
    for (int a = 0; a < g; ++a) {
      gpts.col(q * g + a) = mesh.curve.position((q + gauss.nodes[a]) * h);
    }
  }

  // B[p][q] = -(1/2π) ∫∫ log|X(t)-X(s)| dt ds over panel pair.
  Eigen::MatrixXd b(p, p);
  for (int pp = 0; pp < p; ++pp) {
    for (int q = pp; q < p; ++q) {
      int koff = q - pp;
      if (koff > p / 2) koff -= p;
      double val = 0.0;
      if (std::abs(koff) <= 1) {
        // Exact tent integral of log|u| plus Gauss on the smooth remainder.
        val = tent_log_integral(koff * h, h);
        for (int a = 0; a < g; ++a) {
          for (int c = 0; c < g; ++c) {
            const double t = (pp + gauss.nodes[a]) * h;
            const double s = (q + gauss.nodes[c]) * h;
            const double u = t - s;
            double rem;
            if (std::abs(u) < 1e-13) {
              rem = std::log(mesh.curve.speed(t));
            } else {
              const Vec2 d = mesh.curve.position(t) - mesh.curve.position(s);
              rem = std::log(d.norm() / std::abs(u));
            }
            val += gauss.weights[a] * gauss.weights[c] * h * h * rem;
          }
        }
      } else {
        for (int a = 0; a < g; ++a) {
          for (int c = 0; c < g; ++c) {
            const Vec2 d = gpts.col(pp * g + a) - gpts.col(q * g + c);
            val += gauss.weights[a] * gauss.weights[c] * h * h * std::log(d.norm());
          }
        }
      }
      b(pp, q) = -val / kTwoPi;
      b(q, pp) = b(pp, q);
    }
  }

  // Hat-function parameter slopes: panel q sees hat q fall and hat q+1 rise.
  Eigen::MatrixXd slopes = Eigen::MatrixXd::Zero(p, p);
  for (int q = 0; q < p; ++q) {
    slopes(q, q) = -1.0 / h;
    slopes(q, (q + 1) % p) = 1.0 / h;
  }
  Eigen::MatrixXd w = slopes.transpose() * b * slopes;
  return 0.5 * (w + w.transpose());  // enforce exact symmetry
}

Eigen::MatrixXd hypersingular_nodal(const CurveMesh& mesh) {
  const Eigen::MatrixXd s = single_layer_self(mesh);
  Eigen::MatrixXd darc = periodic_diff_matrix(mesh.size());
  darc.array().colwise() *= (1.0 / mesh.speeds);
  return darc * s * darc;
}

namespace {

struct FineGeometry {
  Eigen::ArrayXd params;
  Eigen::Matrix2Xd nodes;
  Eigen::Matrix2Xd normals;
  Eigen::ArrayXd weights;
  Eigen::MatrixXd interp;  // fine×coarse trig interpolation
};

Eigen::MatrixXd trig_interp_matrix(const Eigen::ArrayXd& src,
                                   const Eigen::ArrayXd& dst) {
  const int p = static_cast<int>(src.size());
  const int n = p / 2;
  Eigen::MatrixXd m(dst.size(), p);
  for (int k = 0; k < dst.size(); ++k) {
    for (int j = 0; j < p; ++j) {
      double u = dst[k] - src[j];
      u -= kTwoPi * std::round(u / kTwoPi);
      m(k, j) = std::abs(u) < 1e-9 ? 1.0 : std::sin(n * u) / std::tan(0.5 * u) / p;
    }
  }
  return m;
}

FineGeometry make_fine(const CurveMesh& mesh, int factor) {
  FineGeometry f;
  const int pf = mesh.size() * factor;
  const double h = kTwoPi / pf;
  const double offset = mesh.params[0] == 0.0 ? 0.0 : 0.5 * h;
  f.params.resize(pf);
  f.nodes.resize(2, pf);
  f.normals.resize(2, pf);
  f.weights.resize(pf);
  for (int i = 0; i < pf; ++i) {
    const double t = offset + i * h;
    f.params[i] = t;
    f.nodes.col(i) = mesh.curve.position(t);
    f.normals.col(i) = mesh.curve.outward_normal(t);
    f.weights[i] = mesh.curve.speed(t) * h;
  }
  f.interp = trig_interp_matrix(mesh.params, f.params);
  return f;
}

int refinement_factor(double dist, double max_panel) {
  if (dist >= 3.0 * max_panel) return 1;
  int factor = 2;
  while (factor < 128 && dist < 3.0 * max_panel / factor) factor *= 2;
  return factor;
}

double distance_to_nodes(const CurveMesh& mesh, Vec2 p) {
  return (mesh.nodes.colwise() - p).colwise().norm().minCoeff();
}

enum class CrossKind { S, D, DSdn, DDdn };

double cross_kernel(CrossKind kind, Vec2 obs, const Vec2* obs_normal, Vec2 src,
                    Vec2 src_normal) {
  switch (kind) {
    case CrossKind::S:
      return green(obs, src);
    case CrossKind::D:
      return green_gradient(obs, src).dot(src_normal);
    case CrossKind::DSdn:
      return green_gradient(obs, src).dot(*obs_normal);
    case CrossKind::DDdn:
      return obs_normal->dot(green_hessian(obs, src) * src_normal);
  }
  return 0.0;
}

CrossMatrix cross_matrix(CrossKind kind, const CurveMesh& source,
                         const Eigen::Matrix2Xd& obs,
                         const Eigen::Matrix2Xd* obs_normals) {
  CrossMatrix out;
  out.values.resize(obs.cols(), source.size());
  const double max_panel = source.max_panel_length();
  std::map<int, FineGeometry> fines;
  for (int i = 0; i < obs.cols(); ++i) {
    const Vec2 p = obs.col(i);
    const Vec2 nrm = obs_normals ? Vec2(obs_normals->col(i)) : Vec2(0, 0);
    const double dist = distance_to_nodes(source, p);
    const int factor = refinement_factor(dist, max_panel);
    if (dist < max_panel) {
      out.near_singular = true;
      std::cerr << "[layer_ops] warning: observation point within one panel of "
                   "a foreign source mesh; refining quadrature\n";
    }
    if (factor == 1) {
      for (int j = 0; j < source.size(); ++j) {
        out.values(i, j) =
            source.weights[j] * cross_kernel(kind, p, obs_normals ? &nrm : nullptr,
                                             source.nodes.col(j), source.normals.col(j));
      }
    } else {
      auto it = fines.find(factor);
      if (it == fines.end()) it = fines.emplace(factor, make_fine(source, factor)).first;
      const FineGeometry& f = it->second;
      Eigen::RowVectorXd row(f.params.size());
      for (int j = 0; j < f.params.size(); ++j) {
        row[j] = f.weights[j] * cross_kernel(kind, p, obs_normals ? &nrm : nullptr,
                                             f.nodes.col(j), f.normals.col(j));
      }
      out.values.row(i) = row * f.interp;
    }
  }
  return out;
}

}  // namespace

CrossMatrix cross_single_layer(const CurveMesh& source, const Eigen::Matrix2Xd& obs) {
  return cross_matrix(CrossKind::S, source, obs, nullptr);
}

CrossMatrix cross_double_layer(const CurveMesh& source, const Eigen::Matrix2Xd& obs) {
  return cross_matrix(CrossKind::D, source, obs, nullptr);
}

CrossMatrix cross_single_layer_normal_deriv(const CurveMesh& source,
                                            const Eigen::Matrix2Xd& obs,
                                            const Eigen::Matrix2Xd& obs_normals) {
  return cross_matrix(CrossKind::DSdn, source, obs, &obs_normals);
}

CrossMatrix cross_double_layer_normal_deriv(const CurveMesh& source,
                                            const Eigen::Matrix2Xd& obs,
                                            const Eigen::Matrix2Xd& obs_normals) {
  return cross_matrix(CrossKind::DDdn, source, obs, &obs_normals);
}

namespace {

template <typename ValueFn>
void eval_pointwise(const CurveMesh& source, const Eigen::VectorXcd& density,
                    const Eigen::Matrix2Xd& points, ValueFn&& emit) {
  const double max_panel = source.max_panel_length();
  std::map<int, std::pair<FineGeometry, Eigen::VectorXcd>> fines;
  for (int i = 0; i < points.cols(); ++i) {
    const Vec2 p = points.col(i);
    const int factor = refinement_factor(distance_to_nodes(source, p), max_panel);
    if (factor == 1) {
      emit(i, p, source.nodes, source.normals,
           source.weights, density);
    } else {
      auto it = fines.find(factor);
      if (it == fines.end()) {
        FineGeometry f = make_fine(source, factor);
        Eigen::VectorXcd fine_density = f.interp * density;
        it = fines.emplace(factor, std::make_pair(std::move(f), std::move(fine_density))).first;
      }
      const FineGeometry& f = it->second.first;
      emit(i, p, f.nodes, f.normals, f.weights, it->second.second);
    }
  }
}

}  // namespace

Eigen::VectorXcd eval_potential(PotentialKind kind, const CurveMesh& source,
                                const Eigen::VectorXcd& density,
                                const Eigen::Matrix2Xd& points) {
  Eigen::VectorXcd out(points.cols());
  eval_pointwise(source, density, points,
                 [&](int i, Vec2 p, const Eigen::Matrix2Xd& nodes,
                     const Eigen::Matrix2Xd& normals, const Eigen::ArrayXd& weights,
                     const Eigen::VectorXcd& dens) {
                   Cplx acc(0, 0);
                   for (int j = 0; j < nodes.cols(); ++j) {
                     const double ker =
                         kind == PotentialKind::SingleLayer
                             ? green(p, nodes.col(j))
                             : green_gradient(p, nodes.col(j)).dot(normals.col(j));
                     acc += weights[j] * ker * dens[j];
                   }
                   out[i] = acc;
                 });
  return out;
}

Eigen::Matrix2Xcd eval_potential_gradient(PotentialKind kind,
                                          const CurveMesh& source,
                                          const Eigen::VectorXcd& density,
                                          const Eigen::Matrix2Xd& points) {
  Eigen::Matrix2Xcd out(2, points.cols());
  eval_pointwise(source, density, points,
                 [&](int i, Vec2 p, const Eigen::Matrix2Xd& nodes,
                     const Eigen::Matrix2Xd& normals, const Eigen::ArrayXd& weights,
                     const Eigen::VectorXcd& dens) {
                   CVec2 acc = CVec2::Zero();
                   for (int j = 0; j < nodes.cols(); ++j) {
                     Vec2 ker;
                     if (kind == PotentialKind::SingleLayer) {
                       ker = green_gradient(p, nodes.col(j));
                     } else {
                       ker = green_hessian(p, nodes.col(j)) * normals.col(j);
                     }
                     acc += weights[j] * dens[j] * ker.cast<Cplx>();
                   }
                   out.col(i) = acc;
                 });
  return out;
}

}  // namespace efish
