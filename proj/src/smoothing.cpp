#include "resmooth/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "resmooth/net.hpp"
#include "resmooth/rng.hpp"

namespace resmooth {

const char* alpha_mode_name(AlphaModeKind k) {
  switch (k) {
    case AlphaModeKind::resmooth: return "resmooth";
    case AlphaModeKind::reverse: return "reverse";
    case AlphaModeKind::uniform_given: return "uniform_given";
    case AlphaModeKind::uniform_avg: return "uniform_avg";
    case AlphaModeKind::uniform_optimal: return "uniform_optimal";
    case AlphaModeKind::random_sampling: return "random_sampling";
    case AlphaModeKind::random_split: return "random_split";
  }
  return "resmooth";
}

AlphaModeKind alpha_mode_from_name(const std::string& name) {
  if (name == "resmooth") return AlphaModeKind::resmooth;
  if (name == "reverse") return AlphaModeKind::reverse;
  if (name == "uniform_given") return AlphaModeKind::uniform_given;
  if (name == "uniform_avg") return AlphaModeKind::uniform_avg;
  if (name == "uniform_optimal") return AlphaModeKind::uniform_optimal;
  if (name == "random_sampling") return AlphaModeKind::random_sampling;
  if (name == "random_split") return AlphaModeKind::random_split;
  throw std::runtime_error("unknown alpha mode: " + name);
}

SmoothedTarget smooth_label(int true_class, double alpha, int num_classes) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("smooth_label: alpha must be in [0,1]");
  }
  if (true_class < 0 || true_class >= num_classes) {
    throw std::invalid_argument("smooth_label: class out of range");
  }
  SmoothedTarget t;
  t.alpha = alpha;
  t.true_class = true_class;
  t.distribution.assign(num_classes, alpha / num_classes);
  t.distribution[true_class] += 1.0 - alpha;
  return t;
}

double cross_entropy(const std::vector<double>& target,
                     const std::vector<double>& prediction) {
  if (target.size() != prediction.size()) {
    throw std::invalid_argument("cross_entropy: size mismatch");
  }
  double h = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    if (target[i] != 0.0) {
      h -= target[i] * std::log(std::max(prediction[i], kProbFloor));
    }
  }
  return h;
}

double cross_entropy(const std::vector<double>& prediction, int true_class) {
  return -std::log(std::max(prediction[true_class], kProbFloor));
}

double smoothed_ce(const std::vector<double>& prediction, int true_class,
                   double alpha) {
  const int k = static_cast<int>(prediction.size());
  double uniform_term = 0.0;
  for (int i = 0; i < k; ++i) {
    uniform_term -= std::log(std::max(prediction[i], kProbFloor));
  }
  uniform_term /= k;
  return (1.0 - alpha) * cross_entropy(prediction, true_class) +
         alpha * uniform_term;
}

std::vector<double> assign_alphas(const std::vector<double>& weights,
                                  const AlphaMode& mode) {
  for (double w : weights) {
    if (w < 0.0 || w > 1.0) {
      throw std::invalid_argument("assign_alphas: weight outside [0,1]");
    }
  }
  const std::size_t n = weights.size();
  std::vector<double> alphas(n, 0.0);
  switch (mode.kind) {
    case AlphaModeKind::resmooth:
      for (std::size_t i = 0; i < n; ++i) {
        alphas[i] = mode.alpha_max * (1.0 - weights[i]);
      }
      break;
    case AlphaModeKind::reverse:
      for (std::size_t i = 0; i < n; ++i) {
        alphas[i] = mode.alpha_max * weights[i];
      }
      break;
    case AlphaModeKind::uniform_given:
      std::fill(alphas.begin(), alphas.end(), mode.alpha_max);
      break;
    case AlphaModeKind::uniform_avg: {
      double mean = 0.0;
      for (double w : weights) mean += mode.alpha_max * (1.0 - w);
      if (n > 0) mean /= static_cast<double>(n);
      std::fill(alphas.begin(), alphas.end(), mean);
      break;
    }
    case AlphaModeKind::uniform_optimal:
      if (!mode.optimal_alpha) {
        throw std::runtime_error(
            "assign_alphas: uniform_optimal requires a supplied constant");
      }
      std::fill(alphas.begin(), alphas.end(), *mode.optimal_alpha);
      break;
    case AlphaModeKind::random_sampling: {
      Rng rng(mode.seed);
      for (auto& a : alphas) a = rng.uniform_real(mode.alpha_max);
      break;
    }
    case AlphaModeKind::random_split: {
      for (std::size_t i = 0; i < n; ++i) {
        alphas[i] = mode.alpha_max * (1.0 - weights[i]);
      }
      Rng rng(mode.seed);
      for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.uniform_int(i);
        std::swap(alphas[i - 1], alphas[j]);
      }
      break;
    }
  }
  return alphas;
}

double loss_div(const std::vector<std::vector<double>>& predictions,
                const std::vector<int>& true_classes,
                const std::vector<double>& alphas) {
  if (predictions.empty()) throw std::invalid_argument("loss_div: empty batch");
  if (predictions.size() != true_classes.size() ||
      predictions.size() != alphas.size()) {
    throw std::invalid_argument("loss_div: length mismatch");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    total += smoothed_ce(predictions[i], true_classes[i], alphas[i]);
  }
  return total / static_cast<double>(predictions.size());
}

double loss_neg(const std::vector<std::vector<double>>& id_predictions,
                const std::vector<int>& id_classes,
                const std::vector<std::vector<double>>& ood_predictions,
                const std::vector<int>& ood_classes, double alpha) {
  if (id_predictions.empty() && ood_predictions.empty()) {
    throw std::invalid_argument("loss_neg: both groups empty");
  }
  double total = 0.0;
  if (!id_predictions.empty()) {
    double id_sum = 0.0;
    for (std::size_t i = 0; i < id_predictions.size(); ++i) {
      id_sum += cross_entropy(id_predictions[i], id_classes[i]);
    }
    total += id_sum / static_cast<double>(id_predictions.size());
  }
  if (!ood_predictions.empty()) {
    double ood_sum = 0.0;
    for (std::size_t i = 0; i < ood_predictions.size(); ++i) {
      ood_sum += smoothed_ce(ood_predictions[i], ood_classes[i], alpha);
    }
    total += ood_sum / static_cast<double>(ood_predictions.size());
  }
  return total;
}

}  // namespace resmooth
