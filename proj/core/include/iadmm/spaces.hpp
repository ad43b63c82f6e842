#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace iadmm {

/// Thrown when two objects that must agree on a dimension do not.
struct DimensionError : std::invalid_argument {
    DimensionError(const std::string& context, Eigen::Index lhs_dim, Eigen::Index rhs_dim);

    Eigen::Index lhs;
    Eigen::Index rhs;
};

/// Thrown for parameter values outside their admissible range.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Dense vector restricted to finite entries. Construction scans the input
/// and rejects NaN or infinity, so downstream arithmetic never has to.
class Vec {
  public:
    Vec() = default;
    explicit Vec(Eigen::VectorXd values);

    static Vec zeros(Eigen::Index dim);

    Eigen::Index dim() const { return v_.size(); }
    double operator[](Eigen::Index i) const { return v_(i); }
    const Eigen::VectorXd& data() const { return v_; }

    double dot(const Vec& other) const;
    double norm_sq() const { return v_.squaredNorm(); }
    double norm() const { return v_.norm(); }
    double linf_norm() const { return v_.size() == 0 ? 0.0 : v_.cwiseAbs().maxCoeff(); }

  private:
    Eigen::VectorXd v_;
};

Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
Vec operator-(const Vec& a);

/// Linear coupling operator between the primal space and the split space.
/// Either the identity or an explicit dense matrix.
class LinearOp {
  public:
    static LinearOp identity(Eigen::Index dim);
    static LinearOp dense(Eigen::MatrixXd matrix);

    Vec apply(const Vec& x) const;
    Vec adjoint(const Vec& u) const;

    Eigen::Index input_dim() const { return in_; }
    Eigen::Index output_dim() const { return out_; }
    bool is_identity() const { return identity_; }

  private:
    LinearOp(bool identity, Eigen::Index in, Eigen::Index out, Eigen::MatrixXd m);

    bool identity_ = true;
    Eigen::Index in_ = 0;
    Eigen::Index out_ = 0;
    Eigen::MatrixXd m_;
};

/// Positive penalty parameter defining the weighted product-space metric.
struct GammaMetric {
    explicit GammaMetric(double gamma_value);
    double gamma;
};

/// Point in the product space: dual block z and split-variable block w,
/// both living in the output space of the coupling operator.
struct PrimalDualPoint {
    PrimalDualPoint(Vec z_block, Vec w_block);

    Vec z;
    Vec w;

    Eigen::Index dim() const { return z.dim(); }
};

PrimalDualPoint operator+(const PrimalDualPoint& p, const PrimalDualPoint& q);
PrimalDualPoint operator-(const PrimalDualPoint& p, const PrimalDualPoint& q);
PrimalDualPoint operator*(double s, const PrimalDualPoint& p);

/// Weighted inner product (1/gamma)<z, z'> + gamma <w, w'>.
double gamma_inner(const PrimalDualPoint& p, const PrimalDualPoint& q, const GammaMetric& m);

/// Squared norm induced by gamma_inner.
double gamma_norm_sq(const PrimalDualPoint& p, const GammaMetric& m);

double gamma_norm(const PrimalDualPoint& p, const GammaMetric& m);

}  // namespace iadmm
