// Copyright 2026 The INML Authors
// SPDX-License-Identifier: Apache-2.0

#include "inml/model.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "inml/error.h"
#include "support/oracles.h"

namespace inml {
namespace {

ErrorCode code_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

int line_of(auto &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.line();
  }
  ADD_FAILURE() << "no error raised";
  return -1;
}

constexpr const char *kMinimal =
    "# smallest model\n"
    "model 7 scale=16\n"
    "layer 0 in=1 out=1 act=linear\n"
    "w 0 0 0.5\n"
    "b 0 0\n";

TEST(ParseModelTest, Minimal) {
  const ModelSpec m = parse_model(kMinimal);
  EXPECT_EQ(m.model_id, 7);
  EXPECT_EQ(m.scale_bits, 16);
  ASSERT_EQ(m.layers.size(), 1u);
  EXPECT_EQ(m.layers[0].in_width, 1);
  EXPECT_EQ(m.layers[0].out_width, 1);
  EXPECT_EQ(m.layers[0].weights, std::vector<double>{0.5});
  EXPECT_EQ(m.layers[0].biases, std::vector<double>{0.0});
  std::istringstream in(kMinimal);
  EXPECT_EQ(parse_model(in), m);
}

TEST(ParseModelTest, ExtraWeightRow) {
  const char *text =
      "model 1 scale=16\n"
      "layer 0 in=2 out=1 act=linear\n"
      "w 0 0 1\nw 0 1 1\n"
      "w 1 0 1\n"
      "b 0 0\n";
  EXPECT_EQ(code_of([&] { parse_model(text); }), ErrorCode::kDimensionMismatch);
  EXPECT_EQ(line_of([&] { parse_model(text); }), 5);
}

TEST(ParseModelTest, MissingCell) {
  const char *text =
      "model 1 scale=16\n"
      "layer 0 in=2 out=1 act=linear\n"
      "w 0 0 1\n"
      "b 0 0\n";
  EXPECT_EQ(code_of([&] { parse_model(text); }), ErrorCode::kDimensionMismatch);
}

TEST(ParseModelTest, DuplicateCell) {
  const char *text =
      "model 1 scale=16\n"
      "layer 0 in=1 out=1 act=linear\n"
      "w 0 0 1\nw 0 0 2\n"
      "b 0 0\n";
  EXPECT_EQ(code_of([&] { parse_model(text); }), ErrorCode::kDuplicateEntry);
  EXPECT_EQ(line_of([&] { parse_model(text); }), 4);
}

TEST(ParseModelTest, UnknownActivation) {
  const char *text =
      "model 1 scale=16\n"
      "layer 0 in=1 out=1 act=tanh\n"
      "w 0 0 1\nb 0 0\n";
  EXPECT_EQ(code_of([&] { parse_model(text); }), ErrorCode::kUnknownActivation);
  EXPECT_EQ(line_of([&] { parse_model(text); }), 2);
}

TEST(ParseModelTest, SyntaxErrorsCarryLine) {
  EXPECT_EQ(code_of([] { parse_model("model x scale=16\n"); }), ErrorCode::kSyntax);
  EXPECT_EQ(code_of([] { parse_model("model 1 scale=16\nbogus 1 2\n"); }), ErrorCode::kSyntax);
  EXPECT_EQ(line_of([] { parse_model("model 1 scale=16\n\nbogus 1 2\n"); }), 3);
  EXPECT_EQ(code_of([] { parse_model("model 1 scale=16\nlayer 0 in=1 out=1 act=linear\n"
                                      "w 0 0 abc\nb 0 0\n"); }),
            ErrorCode::kSyntax);
  EXPECT_EQ(code_of([] { parse_model("model 70000 scale=16\n"); }), ErrorCode::kSyntax);
  EXPECT_NE(code_of([] { parse_model(""); }), ErrorCode::kIo);
}

TEST(ParseModelTest, ChainedWidths) {
  const char *text =
      "model 1 scale=16\n"
      "layer 0 in=1 out=2 act=relu\n"
      "w 0 0 1\nw 1 0 1\nb 0 0\nb 1 0\n"
      "layer 1 in=3 out=1 act=linear\n"
      "w 0 0 1\nw 0 1 1\nw 0 2 1\nb 0 0\n";
  EXPECT_EQ(code_of([&] { parse_model(text); }), ErrorCode::kDimensionMismatch);
}

ModelSpec random_model(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> weight(-3.0, 3.0);
  ModelSpec m;
  m.model_id = static_cast<std::uint16_t>(rng());
  m.scale_bits = static_cast<int>(rng() % 20) + 1;
  const int depth = static_cast<int>(rng() % 3) + 1;
  int width = static_cast<int>(rng() % 6) + 1;
  const Activation acts[] = {Activation::linear(), Activation::relu(),
                             Activation::leaky_relu(0.125),
                             Activation::sigmoid(TaylorOrder::kQuintic)};
  for (int l = 0; l < depth; ++l) {
    LayerSpec layer;
    layer.in_width = width;
    layer.out_width = static_cast<int>(rng() % 6) + 1;
    for (int i = 0; i < layer.in_width * layer.out_width; ++i) layer.weights.push_back(weight(rng));
    for (int i = 0; i < layer.out_width; ++i) layer.biases.push_back(weight(rng));
    layer.activation = acts[rng() % 4];
    width = layer.out_width;
    m.layers.push_back(layer);
  }
  return m;
}

TEST(RenderModelTest, RoundtripProperty) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    const ModelSpec m = random_model(rng);
    const std::string text = render_model(m);
    const ModelSpec back = parse_model(text);
    ASSERT_EQ(back, m) << text;
    ASSERT_EQ(render_model(back), text);
  }
}

TEST(FloatInferenceTest, LinearAndSigmoid) {
  ModelSpec m = parse_model(
      "model 1 scale=16\n"
      "layer 0 in=2 out=1 act=sigmoid:3\n"
      "w 0 0 0.5\nw 0 1 0.25\nb 0 0.5\n");
  const std::vector<double> x{1.0, 2.0};
  EXPECT_NEAR(float_inference(m, x)[0], oracle::logistic(1.5), 1e-15);
  m.layers[0].activation = Activation::linear();
  EXPECT_DOUBLE_EQ(float_inference(m, x)[0], 1.5);
}

TEST(DatasetTest, ParseAndRender) {
  const Dataset d = parse_dataset("x0,x1,y0\n1,2,3\n4,5,6\n");
  EXPECT_EQ(d.num_features, 2);
  EXPECT_EQ(d.num_targets, 1);
  EXPECT_EQ(d.size(), 2u);
  EXPECT_EQ(d.target_row(1)[0], 6.0);
  EXPECT_EQ(parse_dataset(render_dataset(d)).features, d.features);
  EXPECT_THROW(parse_dataset("x0,y0\n1\n"), Error);
  EXPECT_THROW(parse_dataset("a,b\n1,2\n"), Error);
  EXPECT_THROW(parse_dataset("x0,y0\n1,nan\n"), Error);
}

TEST(FitLinearTest, ExactLine) {
  const Dataset d = parse_dataset("x0,y0\n1,2\n2,4\n");
  const ModelSpec m = fit_linear(d, {});
  ASSERT_EQ(m.layers.size(), 1u);
  EXPECT_NEAR(m.layers[0].weights[0], 2.0, 1e-9);
  EXPECT_NEAR(m.layers[0].biases[0], 0.0, 1e-9);
}

TEST(FitLinearTest, ConstantTarget) {
  const Dataset d = parse_dataset("x0,y0\n1,3.5\n2,3.5\n5,3.5\n");
  const ModelSpec m = fit_linear(d, {});
  EXPECT_NEAR(m.layers[0].weights[0], 0.0, 1e-9);
  EXPECT_NEAR(m.layers[0].biases[0], 3.5, 1e-9);
}

TEST(FitLinearTest, SingularNeedsRidge) {
  const Dataset d = parse_dataset("x0,x1,y0\n1,2,1\n2,4,2\n3,6,3\n");
  EXPECT_EQ(code_of([&] { fit_linear(d, {}); }), ErrorCode::kIllConditioned);
  FitOptions ridge;
  ridge.ridge = 1e-3;
  EXPECT_NO_THROW(fit_linear(d, ridge));
}

TEST(FitLinearTest, LocallyOptimalAgainstPerturbations) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Dataset d;
  d.num_features = 3;
  d.num_targets = 1;
  for (int r = 0; r < 50; ++r) {
    double y = 0.3;
    for (int j = 0; j < 3; ++j) {
      const double x = u(rng);
      d.features.push_back(x);
      y += (j + 1) * 0.7 * x;
    }
    d.targets.push_back(y + 0.1 * u(rng));
  }
  const ModelSpec m = fit_linear(d, {});
  const std::vector<double> w = m.layers[0].weights;
  const double b = m.layers[0].biases[0];
  const double best = oracle::squared_residual(d.features, d.targets, 3, w, b);
  for (int p = 0; p < 4; ++p) {
    for (double delta : {-0.01, 0.01}) {
      std::vector<double> w2 = w;
      double b2 = b;
      if (p < 3) {
        w2[p] += delta;
      } else {
        b2 += delta;
      }
      EXPECT_LE(best, oracle::squared_residual(d.features, d.targets, 3, w2, b2));
    }
  }
}

TEST(FitLinearTest, Deterministic) {
  const Dataset d = parse_dataset("x0,x1,y0\n0.1,0.2,1\n0.3,-0.5,2\n0.9,0.4,-1\n-0.2,0.7,0.5\n");
  EXPECT_EQ(render_model(fit_linear(d, {})), render_model(fit_linear(d, {})));
}

}  // namespace
}  // namespace inml
