#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "resmooth/net.hpp"
#include "resmooth/raster.hpp"

namespace resmooth {

// Loss values are clamped to this floor before the log transform; memorized
// training samples can reach exactly zero cross-entropy.
constexpr double kLossEps = 1e-12;

inline double log_loss_of(double raw_loss) {
  return std::log(std::max(raw_loss, kLossEps));
}

struct LossRecord {
  std::uint64_t sample_id = 0;
  double raw_loss = 0.0;
  double log_loss = 0.0;
  Origin origin = Origin::original;
};

enum class LossSpace { log_loss, normalized_loss };

const char* loss_space_name(LossSpace s);
LossSpace loss_space_from_name(const std::string& name);

// Two-component 1-D mixture. Component 0 is the in-distribution component
// (mu0 <= mu1 after every fit). norm_mean/norm_std record the affine map
// applied to raw losses when space == normalized_loss (identity otherwise),
// so posteriors for new losses can be evaluated in the fitted space.
struct GmmParams {
  double mu0 = 0.0, sigma0 = 1.0, pi0 = 0.5;
  double mu1 = 0.0, sigma1 = 1.0, pi1 = 0.5;
  int iterations_used = 0;
  double final_log_likelihood = 0.0;
  LossSpace space = LossSpace::log_loss;
  double norm_mean = 0.0;
  double norm_std = 1.0;
};

struct SmoothingAssignment {
  std::uint64_t sample_id = 0;
  double w = 0.0;        // posterior ID probability
  double alpha_i = 0.0;  // resulting smoothing strength
};

struct EmSettings {
  int max_iterations = 200;
  double tolerance = 1e-6;     // on |delta log-likelihood|
  double sigma_floor = 1e-4;
  std::vector<double>* ll_trace = nullptr;  // optional per-iteration trace
};

// One record per sample, ordered by sample_id; raw_loss is the plain
// cross-entropy of the frozen model's prediction against the label.
std::vector<LossRecord> collect_log_losses(
    const ModelState& model, const std::vector<LabeledSample>& dataset);

// Standard 1-D two-component EM. Deterministic percentile-based init; stops
// on |delta LL| < tolerance or max_iterations (non-convergence returns the
// best-so-far fit). Components are ordered so mu0 <= mu1.
GmmParams fit_gmm_em(const std::vector<double>& values,
                     const EmSettings& settings = {});

// Posterior probability that a raw loss belongs to component 0.
double posterior_id(const GmmParams& params, double raw_loss);

// Posterior evaluated directly in the fitted space (x already transformed).
double posterior_id_at(const GmmParams& params, double x);

// record -> ID iff posterior_id >= tau.
std::pair<std::vector<LossRecord>, std::vector<LossRecord>> split_hard(
    const std::vector<LossRecord>& records, const GmmParams& params,
    double tau);

// (raw_loss - mean) / stddev per record (population stddev).
std::vector<double> normalized_loss_values(
    const std::vector<LossRecord>& records);
double loss_mean(const std::vector<LossRecord>& records);
double loss_stddev(const std::vector<LossRecord>& records);

// CSV dump `sample_id,origin,raw_loss,log_loss` with 17-significant-digit
// floats, and the structured-text parameter dump.
void write_loss_dump(const std::string& path,
                     const std::vector<LossRecord>& records);
std::vector<LossRecord> read_loss_dump(const std::string& path);
void write_gmm_params(const std::string& path, const GmmParams& params);
GmmParams read_gmm_params(const std::string& path);

}  // namespace resmooth
