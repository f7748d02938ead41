#include <cmath>
#include <stdexcept>

#include "cqa/learn.hpp"

namespace cqa {

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

bool is_network(ClassifierKind kind) { return kind == ClassifierKind::nnet || kind == ClassifierKind::nnet_l2; }

}  // namespace

std::size_t parameter_count(ClassifierKind kind, std::size_t inputs, std::size_t hidden) {
  return is_network(kind) ? hidden * inputs + 2 * hidden + 1 : inputs + 1;
}

namespace objectives {

double score(ClassifierKind kind, std::size_t hidden, std::span<const double> params, std::span<const double> x) {
  const std::size_t d = x.size();
  if (!is_network(kind)) {
    double z = params[d];
    for (std::size_t j = 0; j < d; ++j) z += params[j] * x[j];
    return z;
  }
  const double* w1 = params.data();
  const double* b1 = w1 + hidden * d;
  const double* w2 = b1 + hidden;
  double z = w2[hidden];
  for (std::size_t k = 0; k < hidden; ++k) {
    double a = b1[k];
    for (std::size_t j = 0; j < d; ++j) a += w1[k * d + j] * x[j];
    z += w2[k] * sigmoid(a);
  }
  return z;
}

double forward(ClassifierKind kind, std::size_t hidden, std::span<const double> params, std::span<const double> x) {
  const double z = score(kind, hidden, params, x);
  return kind == ClassifierKind::svm ? z : sigmoid(z);
}

double loss_and_gradient(ClassifierKind kind, std::size_t hidden, std::span<const double> params, const Batch& batch,
                         double l2, std::span<double> grad) {
  const std::size_t d = batch.cols;
  if (params.size() != parameter_count(kind, d, hidden) || grad.size() != params.size()) {
    throw std::invalid_argument("parameter vector does not match the model shape");
  }
  std::fill(grad.begin(), grad.end(), 0.0);
  if (batch.rows == 0) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(batch.rows);
  double loss = 0.0;

  if (!is_network(kind)) {
    for (std::size_t i = 0; i < batch.rows; ++i) {
      const auto x = batch.row(i);
      const double y = batch.y[i];
      double z = params[d];
      for (std::size_t j = 0; j < d; ++j) z += params[j] * x[j];
      double dz = 0.0;
      if (kind == ClassifierKind::svm) {
        const double s = y > 0.5 ? 1.0 : -1.0;
        const double margin = s * z;
        if (margin < 1.0) {
          loss += 1.0 - margin;
          dz = -s;
        }
      } else {
        loss += softplus(z) - y * z;
        dz = sigmoid(z) - y;
      }
      dz *= inv_n;
      for (std::size_t j = 0; j < d; ++j) grad[j] += dz * x[j];
      grad[d] += dz;
    }
    loss *= inv_n;
    double reg = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      reg += params[j] * params[j];
      grad[j] += l2 * params[j];
    }
    return loss + 0.5 * l2 * reg;
  }

  const double* w1 = params.data();
  const double* b1 = w1 + hidden * d;
  const double* w2 = b1 + hidden;
  double* g_w1 = grad.data();
  double* g_b1 = g_w1 + hidden * d;
  double* g_w2 = g_b1 + hidden;
  std::vector<double> h(hidden);
  for (std::size_t i = 0; i < batch.rows; ++i) {
    const auto x = batch.row(i);
    const double y = batch.y[i];
    double z = w2[hidden];
    for (std::size_t k = 0; k < hidden; ++k) {
      double a = b1[k];
      for (std::size_t j = 0; j < d; ++j) a += w1[k * d + j] * x[j];
      h[k] = sigmoid(a);
      z += w2[k] * h[k];
    }
    const double p = sigmoid(z);
    double dz = 0.0;
    if (kind == ClassifierKind::nnet) {
      loss += softplus(z) - y * z;
      dz = p - y;
    } else {
      loss += (p - y) * (p - y);
      dz = 2.0 * (p - y) * p * (1.0 - p);
    }
    dz *= inv_n;
    g_w2[hidden] += dz;
    for (std::size_t k = 0; k < hidden; ++k) {
      g_w2[k] += dz * h[k];
      const double da = dz * w2[k] * h[k] * (1.0 - h[k]);
      g_b1[k] += da;
      for (std::size_t j = 0; j < d; ++j) g_w1[k * d + j] += da * x[j];
    }
  }
  loss *= inv_n;
  double reg = 0.0;
  for (std::size_t q = 0; q < hidden * d; ++q) {
    reg += w1[q] * w1[q];
    g_w1[q] += l2 * w1[q];
  }
  for (std::size_t k = 0; k < hidden; ++k) {
    reg += w2[k] * w2[k];
    g_w2[k] += l2 * w2[k];
  }
  return loss + 0.5 * l2 * reg;
}

double calibration_nll(double a, double b, std::span<const double> decisions, std::span<const double> targets,
                       double* grad_a, double* grad_b) {
  const std::size_t n = decisions.size();
  double loss = 0.0;
  double ga = 0.0;
  double gb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = a * decisions[i] + b;
    loss += softplus(z) - targets[i] * z;
    const double r = sigmoid(z) - targets[i];
    ga += r * decisions[i];
    gb += r;
  }
  const double inv_n = n ? 1.0 / static_cast<double>(n) : 0.0;
  if (grad_a) *grad_a = ga * inv_n;
  if (grad_b) *grad_b = gb * inv_n;
  return loss * inv_n;
}

}  // namespace objectives

}  // namespace cqa
