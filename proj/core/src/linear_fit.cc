// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/Dense>
#include <cmath>

#include "inml/error.h"
#include "inml/model.h"

namespace inml {

ModelSpec fit_linear(const Dataset &data, const FitOptions &options) {
  const std::size_t n = data.size();
  if (n == 0) throw Error(ErrorCode::kInvalidInput, "fit needs at least one sample");
  if (!(options.ridge >= 0.0) || !std::isfinite(options.ridge)) {
    throw Error(ErrorCode::kInvalidInput, "ridge must be a finite value >= 0");
  }
  const int k = data.num_features;
  const int m = data.num_targets;
  for (double v : data.features) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidInput, "non-finite feature");
  }
  for (double v : data.targets) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidInput, "non-finite target");
  }

  // Normal equations over the augmented design [x, 1]. Sums run in sample
  // order so results are reproducible bit for bit.
  const int d = k + 1;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(d, m);
  std::vector<double> row(d);
  for (std::size_t s = 0; s < n; ++s) {
    const auto x = data.feature_row(s);
    const auto y = data.target_row(s);
    for (int i = 0; i < k; ++i) row[i] = x[i];
    row[k] = 1.0;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) gram(i, j) += row[i] * row[j];
      for (int j = 0; j < m; ++j) rhs(i, j) += row[i] * y[j];
    }
  }
  for (int i = 0; i < k; ++i) gram(i, i) += options.ridge;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (!lu.isInvertible()) {
    throw Error(ErrorCode::kIllConditioned,
                options.ridge == 0.0
                    ? "normal equations are singular; retry with --ridge > 0"
                    : "normal equations are singular");
  }
  const Eigen::MatrixXd theta = lu.solve(rhs);

  LayerSpec layer;
  layer.in_width = k;
  layer.out_width = m;
  layer.weights.resize(static_cast<std::size_t>(k) * m);
  layer.biases.resize(m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < k; ++i) layer.weight(j, i) = theta(i, j);
    layer.biases[j] = theta(k, j);
  }

  ModelSpec model;
  model.model_id = options.model_id;
  model.scale_bits = options.scale_bits;
  model.layers.push_back(std::move(layer));
  model.validate();
  return model;
}

}  // namespace inml
