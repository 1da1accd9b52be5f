#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "resmooth/raster.hpp"
#include "resmooth/rng.hpp"

namespace resmooth {

enum class Arch : std::uint8_t { softmax_linear = 0, mlp1 = 1 };

enum class Schedule { constant, cosine };

struct TrainConfig {
  int epochs = 30;
  int batch_size = 64;
  double lr0 = 0.05;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  Schedule schedule = Schedule::cosine;
  std::uint64_t seed = 0;
};

// Parameters plus momentum slots. Array order is fixed:
//   softmax_linear: W1 (K x D), b1 (K)
//   mlp1:           W1 (H x D), b1 (H), W2 (K x H), b2 (K)
// Matrices are stored row-major; row = output unit.
struct ModelState {
  Arch arch = Arch::softmax_linear;
  int input_dim = 0;
  int hidden_dim = 0;  // 0 for softmax_linear
  int num_classes = 0;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> momentum;
  std::uint64_t rng_seed = 0;
};

struct Prediction {
  std::vector<double> probabilities;
  std::vector<double> logits;
  int argmax = 0;  // ties broken toward the lowest class index
};

struct EvalResult {
  double accuracy = 0.0;
  std::vector<double> losses;  // plain cross-entropy, in dataset order
};

// Probability floor inside logs; keeps confident wrong predictions finite.
constexpr double kProbFloor = 1e-12;

// Uniform init in [-s, s] with s = 1 / sqrt(fan_in), drawn from `seed`.
ModelState init_model(Arch arch, int input_dim, int hidden_dim,
                      int num_classes, std::uint64_t seed);

// Raster pixels scaled to [0, 1].
std::vector<double> to_features(const Raster& img);

Prediction forward_one(const ModelState& model, const Raster& img);
std::vector<Prediction> forward(const ModelState& model,
                                const std::vector<const Raster*>& batch);

struct LossAndGrad {
  double loss = 0.0;
  std::vector<std::vector<double>> grads;  // same shapes as weights
};

// Loss is the mean over the batch of the label-smoothed cross-entropy with
// per-sample strengths `alphas`; gradients are exact analytic derivatives.
// Throws if the loss is non-finite.
LossAndGrad loss_and_grad(const ModelState& model,
                          const std::vector<const Raster*>& batch,
                          const std::vector<int>& labels,
                          const std::vector<double>& alphas);

// Generalized objective sum_i weight_i * smoothed_ce_i; loss_and_grad is the
// weight_i = 1/B case and the two-group negative-augmentation objective uses
// per-group weights.
LossAndGrad loss_and_grad_weighted(const ModelState& model,
                                   const std::vector<const Raster*>& batch,
                                   const std::vector<int>& labels,
                                   const std::vector<double>& alphas,
                                   const std::vector<double>& weights);

// Per-sample d(loss)/d(logits); exposed for gradient identity tests.
std::vector<std::vector<double>> per_sample_logit_gradients(
    const ModelState& model, const std::vector<const Raster*>& batch,
    const std::vector<int>& labels, const std::vector<double>& alphas);

double cosine_lr(double lr0, int step_index, int total_steps);
double schedule_lr(const TrainConfig& cfg, int step_index, int total_steps);

// v <- momentum * v + (g + weight_decay * w); w <- w - lr(t) * v.
void sgd_step(ModelState& state, const std::vector<std::vector<double>>& grads,
              int step_index, int total_steps, const TrainConfig& cfg);

EvalResult evaluate(const ModelState& model,
                    const std::vector<LabeledSample>& dataset);

// Flat binary model file: magic "RSMK", version u16, architecture tag u8,
// shape table, then little-endian doubles (weights, then momentum slots).
void save_model(const std::string& path, const ModelState& state);
ModelState load_model(const std::string& path);

}  // namespace resmooth
