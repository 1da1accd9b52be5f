#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace resmooth {

struct SmoothedTarget {
  std::vector<double> distribution;  // (1-alpha)*onehot + alpha/K
  double alpha = 0.0;
  int true_class = 0;
};

enum class AlphaModeKind {
  resmooth,        // alpha_max * (1 - w_i)
  reverse,         // alpha_max * w_i
  uniform_given,   // alpha_max for every sample
  uniform_avg,     // mean of the resmooth list for every sample
  uniform_optimal, // externally supplied constant
  random_sampling, // i.i.d. U(0, alpha_max)
  random_split,    // seeded shuffle of the resmooth list
};

struct AlphaMode {
  AlphaModeKind kind = AlphaModeKind::resmooth;
  double alpha_max = 0.4;
  std::uint64_t seed = 0;                 // random modes only
  std::optional<double> optimal_alpha;    // uniform_optimal only
};

const char* alpha_mode_name(AlphaModeKind k);
AlphaModeKind alpha_mode_from_name(const std::string& name);

SmoothedTarget smooth_label(int true_class, double alpha, int num_classes);

// Generic cross-entropy H(q, p) with the probability floor inside logs.
double cross_entropy(const std::vector<double>& target,
                     const std::vector<double>& prediction);
// Plain cross-entropy -log p[true_class].
double cross_entropy(const std::vector<double>& prediction, int true_class);

// (1-alpha) * H(q, p) + alpha * H(u, p); algebraically equal to H(q', p).
double smoothed_ce(const std::vector<double>& prediction, int true_class,
                   double alpha);

std::vector<double> assign_alphas(const std::vector<double>& weights,
                                  const AlphaMode& mode);

// Mean over samples of the per-sample smoothed cross-entropy.
double loss_div(const std::vector<std::vector<double>>& predictions,
                const std::vector<int>& true_classes,
                const std::vector<double>& alphas);

// Mean plain CE over the ID group plus mean constant-alpha smoothed CE over
// the OOD group, each normalized by its own size; an empty group contributes
// zero, both groups empty is an error.
double loss_neg(const std::vector<std::vector<double>>& id_predictions,
                const std::vector<int>& id_classes,
                const std::vector<std::vector<double>>& ood_predictions,
                const std::vector<int>& ood_classes, double alpha);

}  // namespace resmooth
