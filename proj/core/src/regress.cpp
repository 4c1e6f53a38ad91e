#include "multiway/regress.hpp"

#include "multiway/linalg.hpp"
#include "multiway/products.hpp"
#include "multiway/tucker.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace multiway {

namespace {

constexpr double kExhaustedTol = 1e-12;

// Mean over the sample mode, kept as a tensor with sample extent 1.
DenseTensor sample_mean(const DenseTensor& t) {
  const Matrix m = unfold(t, 0);
  Shape s = t.shape();
  s[0] = 1;
  const Eigen::RowVectorXd mean = m.colwise().mean();
  return fold(mean, 0, s);
}

DenseTensor subtract_sample_row(const DenseTensor& t, const DenseTensor& row) {
  Matrix m = unfold(t, 0);
  const Matrix r = unfold(row, 0);
  m.rowwise() -= r.row(0);
  return fold(m, 0, t.shape());
}

DenseTensor add_sample_row(const DenseTensor& t, const DenseTensor& row) {
  Matrix m = unfold(t, 0);
  const Matrix r = unfold(row, 0);
  m.rowwise() += r.row(0);
  return fold(m, 0, t.shape());
}

// t x_1 F_1^T ... over modes 1..N-1 (sample mode untouched).
DenseTensor project_features(const DenseTensor& t, const std::vector<Matrix>& loadings) {
  DenseTensor out = t;
  for (std::size_t n = 0; n < loadings.size(); ++n) {
    out = mode_n_product_transposed(out, loadings[n], n + 1);
  }
  return out;
}

DenseTensor expand_block(const DenseTensor& core, const Vector& t, const std::vector<Matrix>& loadings) {
  DenseTensor out = mode_n_product(core, Matrix(t), 0);
  for (std::size_t n = 0; n < loadings.size(); ++n) out = mode_n_product(out, loadings[n], n + 1);
  return out;
}

}  // namespace

PLSModel pls_fit(const Matrix& x, const Matrix& y, std::size_t components, const PlsOptions& opts) {
  if (x.rows() != y.rows()) throw std::invalid_argument("pls_fit: X and Y need the same number of rows");
  if (x.rows() == 0 || x.cols() == 0 || y.cols() == 0) throw std::invalid_argument("pls_fit: empty input");
  PLSModel m;
  m.x_mean = opts.center ? Eigen::RowVectorXd(x.colwise().mean()) : Eigen::RowVectorXd::Zero(x.cols());
  m.y_mean = opts.center ? Eigen::RowVectorXd(y.colwise().mean()) : Eigen::RowVectorXd::Zero(y.cols());
  Matrix xr = x.rowwise() - m.x_mean;
  const Matrix yc = y.rowwise() - m.y_mean;
  const double x_norm = xr.norm();

  const auto n = x.rows();
  std::vector<Vector> w_cols, t_cols, u_cols, p_cols, q_cols;
  std::vector<double> scales;
  for (std::size_t r = 0; r < components; ++r) {
    const Matrix cross = xr.transpose() * yc;
    Vector w = leading_left_singular_vectors(cross, 1).col(0);
    Vector t = xr * w;
    const double scale = t.norm();
    if (scale <= kExhaustedTol * std::max(x_norm, 1.0)) {
      m.rank_exhausted = true;
      break;
    }
    t /= scale;
    const Vector p = xr.transpose() * t;
    const Vector q = yc.transpose() * t;
    const double qq = q.squaredNorm();
    const Vector u = qq > 0.0 ? Vector(yc * q / qq) : Vector(Vector::Zero(n));
    xr -= t * p.transpose();
    w_cols.push_back(w);
    t_cols.push_back(t);
    u_cols.push_back(u);
    p_cols.push_back(p);
    q_cols.push_back(q);
    scales.push_back(scale);
  }
  const auto k = static_cast<Eigen::Index>(w_cols.size());
  m.components = w_cols.size();
  m.weights.resize(x.cols(), k);
  m.x_scores.resize(n, k);
  m.y_scores.resize(n, k);
  m.x_loadings.resize(x.cols(), k);
  m.y_loadings.resize(y.cols(), k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto i = static_cast<std::size_t>(r);
    m.weights.col(r) = w_cols[i];
    m.x_scores.col(r) = t_cols[i];
    m.y_scores.col(r) = u_cols[i];
    m.x_loadings.col(r) = p_cols[i];
    m.y_loadings.col(r) = q_cols[i];
  }
  if (k == 0) {
    m.coefficients = Matrix::Zero(x.cols(), y.cols());
    return m;
  }
  // T = X W~ (P^T W~)^-1 with W~ the weights scaled to unit-norm scores
  Matrix w_scaled = m.weights;
  for (Eigen::Index r = 0; r < k; ++r) w_scaled.col(r) /= scales[static_cast<std::size_t>(r)];
  const Matrix rot = w_scaled * (m.x_loadings.transpose() * w_scaled).inverse();
  m.coefficients = rot * m.y_loadings.transpose();
  return m;
}

Matrix pls_predict(const PLSModel& model, const Matrix& x_new) {
  if (x_new.cols() != model.coefficients.rows()) {
    throw std::invalid_argument("pls_predict: expected " + std::to_string(model.coefficients.rows()) +
                                " columns, got " + std::to_string(x_new.cols()));
  }
  Matrix yhat = (x_new.rowwise() - model.x_mean) * model.coefficients;
  yhat.rowwise() += model.y_mean;
  return yhat;
}

HOPLSModel hopls_fit(const DenseTensor& x, const DenseTensor& y, std::size_t components,
                     std::size_t block_rank, const HoplsOptions& opts) {
  if (x.order() < 2 || y.order() < 2) throw std::invalid_argument("hopls_fit: X and Y need a sample mode plus features");
  if (x.shape()[0] != y.shape()[0]) throw std::invalid_argument("hopls_fit: sample extents differ");
  if (block_rank == 0) throw std::invalid_argument("hopls_fit: block rank must be positive");
  for (std::size_t n = 1; n < x.order(); ++n) {
    if (block_rank > x.shape()[n]) throw std::invalid_argument("hopls_fit: L exceeds X extent in mode " + std::to_string(n));
  }
  for (std::size_t n = 1; n < y.order(); ++n) {
    if (block_rank > y.shape()[n]) throw std::invalid_argument("hopls_fit: L exceeds Y extent in mode " + std::to_string(n));
  }

  HOPLSModel m;
  m.x_shape = x.shape();
  m.y_shape = y.shape();
  DenseTensor xr = x;
  DenseTensor yr = y;
  if (opts.center) {
    m.x_mean = sample_mean(x);
    m.y_mean = sample_mean(y);
    xr = subtract_sample_row(x, m.x_mean);
    yr = subtract_sample_row(y, m.y_mean);
  } else {
    Shape xs = x.shape(), ys = y.shape();
    xs[0] = ys[0] = 1;
    m.x_mean = DenseTensor(xs);
    m.y_mean = DenseTensor(ys);
  }
  m.x_residual_norms.push_back(frobenius_norm(xr));
  m.y_residual_norms.push_back(frobenius_norm(yr));

  const std::size_t nx = x.order() - 1;
  const std::size_t ny = y.order() - 1;
  for (std::size_t r = 0; r < components; ++r) {
    // cross-covariance over the sample mode, shape (I_1..I_{N-1}, J_1..J_{M-1})
    const Matrix cross = unfold(xr, 0).transpose() * unfold(yr, 0);
    if (cross.norm() == 0.0) break;
    Shape cshape(x.shape().begin() + 1, x.shape().end());
    cshape.insert(cshape.end(), y.shape().begin() + 1, y.shape().end());
    const DenseTensor c(cshape, std::vector<double>(cross.data(), cross.data() + cross.size()));
    const TuckerModel tk = truncated_mlsvd(c, Shape(nx + ny, block_rank));

    HoplsComponent comp;
    comp.x_loadings.assign(tk.factors.begin(), tk.factors.begin() + static_cast<std::ptrdiff_t>(nx));
    comp.y_loadings.assign(tk.factors.begin() + static_cast<std::ptrdiff_t>(nx), tk.factors.end());

    const Matrix xp = unfold(project_features(xr, comp.x_loadings), 0);  // n x L^{N-1}
    const auto xdim = static_cast<Eigen::Index>(xp.cols());
    const Eigen::Map<const Matrix> core_mat(tk.core.data().data(), xdim,
                                            static_cast<Eigen::Index>(tk.core.size()) / xdim);
    comp.t = leading_left_singular_vectors(xp * core_mat, 1).col(0);

    const Matrix t_row = comp.t.transpose();
    comp.x_core = mode_n_product(project_features(xr, comp.x_loadings), t_row, 0);
    const DenseTensor yp = project_features(yr, comp.y_loadings);
    comp.y_core = mode_n_product(yp, t_row, 0);
    const Vector gy = comp.y_core.vectorize();
    const double gyy = gy.squaredNorm();
    comp.u = gyy > 0.0 ? Vector(unfold(yp, 0) * gy / gyy) : Vector(Vector::Zero(comp.t.size()));
    xr = xr - expand_block(comp.x_core, comp.t, comp.x_loadings);
    yr = yr - expand_block(comp.y_core, comp.t, comp.y_loadings);
    m.x_residual_norms.push_back(frobenius_norm(xr));
    m.y_residual_norms.push_back(frobenius_norm(yr));
    m.components.push_back(std::move(comp));
  }
  return m;
}

DenseTensor hopls_predict(const HOPLSModel& model, const DenseTensor& x_new) {
  if (x_new.order() != model.x_shape.size()) throw std::invalid_argument("hopls_predict: order mismatch");
  for (std::size_t n = 1; n < x_new.order(); ++n) {
    if (x_new.shape()[n] != model.x_shape[n]) {
      throw std::invalid_argument("hopls_predict: extent mismatch in mode " + std::to_string(n));
    }
  }
  const std::size_t samples = x_new.shape()[0];
  DenseTensor xr = subtract_sample_row(x_new, model.x_mean);
  Shape yshape = model.y_shape;
  yshape[0] = samples;
  DenseTensor yhat(yshape);
  for (const auto& comp : model.components) {
    const Matrix xp = unfold(project_features(xr, comp.x_loadings), 0);
    const Vector g = comp.x_core.vectorize();
    const double gg = g.squaredNorm();
    const Vector t = gg > 0.0 ? Vector(xp * g / gg) : Vector(Vector::Zero(static_cast<Eigen::Index>(samples)));
    xr = xr - expand_block(comp.x_core, t, comp.x_loadings);
    yhat = yhat + expand_block(comp.y_core, t, comp.y_loadings);
  }
  return add_sample_row(yhat, model.y_mean);
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("pearson_correlation: size mismatch");
  const Eigen::Map<const Vector> va(a.data(), static_cast<Eigen::Index>(a.size()));
  const Eigen::Map<const Vector> vb(b.data(), static_cast<Eigen::Index>(b.size()));
  const Vector ca = va.array() - va.mean();
  const Vector cb = vb.array() - vb.mean();
  const double denom = ca.norm() * cb.norm();
  if (denom == 0.0) return 0.0;
  return ca.dot(cb) / denom;
}

}  // namespace multiway
