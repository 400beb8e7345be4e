// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference computations for tests. None of these call into the fixed-point
// or approximation code under test.

#ifndef INML_TESTS_SUPPORT_ORACLES_H_
#define INML_TESTS_SUPPORT_ORACLES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "inml/model.h"

namespace inml::oracle {

// Exact rational arithmetic on 128-bit integers, normalized after each step.
class Rational {
 public:
  Rational(__int128 num = 0, __int128 den = 1);
  static Rational from_raw(std::int64_t raw, int scale_bits);  // raw / 2^s
  static Rational from_double(double v);                        // exact

  __int128 num() const { return num_; }
  __int128 den() const { return den_; }
  double to_double() const;

  friend Rational operator+(const Rational &a, const Rational &b);
  friend Rational operator-(const Rational &a, const Rational &b);
  friend Rational operator*(const Rational &a, const Rational &b);
  friend bool operator==(const Rational &a, const Rational &b) = default;

 private:
  __int128 num_;
  __int128 den_;
};

// Nearest integer to num/den, ties away from zero. den > 0.
__int128 round_half_away(__int128 num, __int128 den);

// round(w * 2^s) computed exactly from the binary expansion of w, then
// clamped to int32. Sets *saturated when clamping happened.
std::int64_t encode(double w, int scale_bits, bool *saturated = nullptr);
double decode(std::int64_t raw, int scale_bits);

// Taylor polynomials of the logistic function about 0 with exact rational
// coefficients 1/2, 1/4, -1/48, 1/1440.
Rational sigmoid_poly_exact(const Rational &x, int order);
double sigmoid_poly(double x, int order);

// The same polynomial with coefficients first rounded to the fixed-point grid.
double sigmoid_poly_quantized(double x, int order, int scale_bits);

// Logistic function, computed directly.
double logistic(double x);

struct SweepResult {
  double max_abs = 0.0;
  double argmax = 0.0;
};

// max |logistic(x) - P_order(x)| over n evenly spaced points on [lo, hi].
SweepResult residual_sweep(int order, double lo, double hi, std::size_t n);

// Inference with encode/decode applied where the fixed-point pipeline
// quantizes: parameters and inputs on the grid, each pre-activation and each
// activation output rounded to the grid; sums in long double. Sigmoid layers
// use the quantized-coefficient polynomial with input clamp +-clamp_bound and
// output clamp [0, 1].
std::vector<double> quantized_inference(const ModelSpec &model, int scale_bits,
                                        std::span<const std::int32_t> input_raw,
                                        double clamp_bound = 2.0);

// Error budget in ULPs: 2 + (MACs on the longest path) + 4 * (sigmoid stages).
int error_budget_ulps(const ModelSpec &model);

// Sum of squared residuals of a single-output linear predictor.
double squared_residual(std::span<const double> features, std::span<const double> targets,
                        int num_features, std::span<const double> weights, double bias);

std::string hex(std::span<const std::uint8_t> bytes);

}  // namespace inml::oracle

#endif  // INML_TESTS_SUPPORT_ORACLES_H_
