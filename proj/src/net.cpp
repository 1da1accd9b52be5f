#include "resmooth/net.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "resmooth/parallel.hpp"

namespace resmooth {

namespace {

constexpr char kModelMagic[4] = {'R', 'S', 'M', 'K'};
constexpr std::uint16_t kModelVersion = 1;

std::vector<std::vector<std::size_t>> array_shapes(const ModelState& m) {
  const std::size_t d = static_cast<std::size_t>(m.input_dim);
  const std::size_t k = static_cast<std::size_t>(m.num_classes);
  if (m.arch == Arch::softmax_linear) {
    return {{k, d}, {k}};
  }
  const std::size_t h = static_cast<std::size_t>(m.hidden_dim);
  return {{h, d}, {h}, {k, h}, {k}};
}

std::size_t shape_size(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

double clamped_log(double p) { return std::log(std::max(p, kProbFloor)); }

void softmax_into(const std::vector<double>& logits, std::vector<double>& out) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  out.resize(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
}

int argmax_low_tie(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

struct ForwardCache {
  std::vector<double> x;       // features
  std::vector<double> pre;     // hidden pre-activation (mlp1 only)
  std::vector<double> hidden;  // rectified hidden (mlp1 only)
  Prediction pred;
};

ForwardCache forward_cached(const ModelState& m, const Raster& img) {
  ForwardCache fc;
  fc.x = to_features(img);
  if (static_cast<int>(fc.x.size()) != m.input_dim) {
    throw std::invalid_argument(
        "forward: raster has " + std::to_string(fc.x.size()) +
        " values but model expects " + std::to_string(m.input_dim));
  }
  const int k = m.num_classes;
  std::vector<double> logits(k, 0.0);
  if (m.arch == Arch::softmax_linear) {
    const auto& w1 = m.weights[0];
    const auto& b1 = m.weights[1];
    for (int o = 0; o < k; ++o) {
      double acc = b1[o];
      const double* row = &w1[static_cast<std::size_t>(o) * m.input_dim];
      for (int i = 0; i < m.input_dim; ++i) acc += row[i] * fc.x[i];
      logits[o] = acc;
    }
  } else {
    const int h = m.hidden_dim;
    const auto& w1 = m.weights[0];
    const auto& b1 = m.weights[1];
    const auto& w2 = m.weights[2];
    const auto& b2 = m.weights[3];
    fc.pre.resize(h);
    fc.hidden.resize(h);
    for (int o = 0; o < h; ++o) {
      double acc = b1[o];
      const double* row = &w1[static_cast<std::size_t>(o) * m.input_dim];
      for (int i = 0; i < m.input_dim; ++i) acc += row[i] * fc.x[i];
      fc.pre[o] = acc;
      fc.hidden[o] = acc > 0.0 ? acc : 0.0;
    }
    for (int o = 0; o < k; ++o) {
      double acc = b2[o];
      const double* row = &w2[static_cast<std::size_t>(o) * h];
      for (int i = 0; i < h; ++i) acc += row[i] * fc.hidden[i];
      logits[o] = acc;
    }
  }
  fc.pred.logits = std::move(logits);
  softmax_into(fc.pred.logits, fc.pred.probabilities);
  fc.pred.argmax = argmax_low_tie(fc.pred.probabilities);
  return fc;
}

}  // namespace

ModelState init_model(Arch arch, int input_dim, int hidden_dim,
                      int num_classes, std::uint64_t seed) {
  if (input_dim <= 0 || num_classes <= 0) {
    throw std::invalid_argument("init_model: bad dimensions");
  }
  if (arch == Arch::mlp1 && hidden_dim <= 0) {
    throw std::invalid_argument("init_model: mlp1 needs hidden_dim > 0");
  }
  ModelState m;
  m.arch = arch;
  m.input_dim = input_dim;
  m.hidden_dim = arch == Arch::mlp1 ? hidden_dim : 0;
  m.num_classes = num_classes;
  m.rng_seed = seed;

  const auto shapes = array_shapes(m);
  std::vector<int> fan_in;
  if (arch == Arch::softmax_linear) {
    fan_in = {input_dim, input_dim};
  } else {
    fan_in = {input_dim, input_dim, hidden_dim, hidden_dim};
  }
  Rng rng(seed);
  for (std::size_t a = 0; a < shapes.size(); ++a) {
    const double s = 1.0 / std::sqrt(static_cast<double>(fan_in[a]));
    std::vector<double> arr(shape_size(shapes[a]));
    for (auto& v : arr) v = (rng.uniform_real() * 2.0 - 1.0) * s;
    m.weights.push_back(std::move(arr));
    m.momentum.emplace_back(shape_size(shapes[a]), 0.0);
  }
  return m;
}

std::vector<double> to_features(const Raster& img) {
  std::vector<double> x(img.pixels.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = img.pixels[i] / 255.0;
  return x;
}

Prediction forward_one(const ModelState& model, const Raster& img) {
  return forward_cached(model, img).pred;
}

std::vector<Prediction> forward(const ModelState& model,
                                const std::vector<const Raster*>& batch) {
  std::vector<Prediction> out(batch.size());
  parallel_for(batch.size(), [&](std::size_t i) {
    out[i] = forward_one(model, *batch[i]);
  });
  return out;
}

LossAndGrad loss_and_grad_weighted(const ModelState& model,
                                   const std::vector<const Raster*>& batch,
                                   const std::vector<int>& labels,
                                   const std::vector<double>& alphas,
                                   const std::vector<double>& weights) {
  const std::size_t n = batch.size();
  if (labels.size() != n || alphas.size() != n || weights.size() != n) {
    throw std::invalid_argument("loss_and_grad: length mismatch");
  }
  const int k = model.num_classes;
  const double uk = 1.0 / k;

  LossAndGrad out;
  out.grads.reserve(model.weights.size());
  for (const auto& arr : model.weights) out.grads.emplace_back(arr.size(), 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto fc = forward_cached(model, *batch[i]);
    const auto& p = fc.pred.probabilities;
    const int y = labels[i];
    const double a = alphas[i];
    if (y < 0 || y >= k) throw std::invalid_argument("loss_and_grad: label out of range");

    double ce = 0.0;
    for (int j = 0; j < k; ++j) {
      const double target = (1.0 - a) * (j == y ? 1.0 : 0.0) + a * uk;
      if (target != 0.0) ce -= target * clamped_log(p[j]);
    }
    out.loss += weights[i] * ce;

    std::vector<double> dlogits(k);
    for (int j = 0; j < k; ++j) {
      const double target = (1.0 - a) * (j == y ? 1.0 : 0.0) + a * uk;
      dlogits[j] = weights[i] * (p[j] - target);
    }

    if (model.arch == Arch::softmax_linear) {
      auto& gw1 = out.grads[0];
      auto& gb1 = out.grads[1];
      for (int o = 0; o < k; ++o) {
        const double d = dlogits[o];
        double* row = &gw1[static_cast<std::size_t>(o) * model.input_dim];
        for (int j = 0; j < model.input_dim; ++j) row[j] += d * fc.x[j];
        gb1[o] += d;
      }
    } else {
      const int h = model.hidden_dim;
      const auto& w2 = model.weights[2];
      auto& gw1 = out.grads[0];
      auto& gb1 = out.grads[1];
      auto& gw2 = out.grads[2];
      auto& gb2 = out.grads[3];
      std::vector<double> dhidden(h, 0.0);
      for (int o = 0; o < k; ++o) {
        const double d = dlogits[o];
        double* row = &gw2[static_cast<std::size_t>(o) * h];
        const double* w2row = &w2[static_cast<std::size_t>(o) * h];
        for (int j = 0; j < h; ++j) {
          row[j] += d * fc.hidden[j];
          dhidden[j] += d * w2row[j];
        }
        gb2[o] += d;
      }
      for (int o = 0; o < h; ++o) {
        if (fc.pre[o] <= 0.0) continue;
        const double d = dhidden[o];
        double* row = &gw1[static_cast<std::size_t>(o) * model.input_dim];
        for (int j = 0; j < model.input_dim; ++j) row[j] += d * fc.x[j];
        gb1[o] += d;
      }
    }
  }

  if (!std::isfinite(out.loss)) {
    throw std::runtime_error("loss_and_grad: non-finite loss");
  }
  return out;
}

LossAndGrad loss_and_grad(const ModelState& model,
                          const std::vector<const Raster*>& batch,
                          const std::vector<int>& labels,
                          const std::vector<double>& alphas) {
  if (batch.empty()) throw std::invalid_argument("loss_and_grad: empty batch");
  const std::vector<double> weights(batch.size(), 1.0 / batch.size());
  return loss_and_grad_weighted(model, batch, labels, alphas, weights);
}

std::vector<std::vector<double>> per_sample_logit_gradients(
    const ModelState& model, const std::vector<const Raster*>& batch,
    const std::vector<int>& labels, const std::vector<double>& alphas) {
  const std::size_t n = batch.size();
  const int k = model.num_classes;
  const double uk = 1.0 / k;
  std::vector<std::vector<double>> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto pred = forward_one(model, *batch[i]);
    out[i].resize(k);
    for (int j = 0; j < k; ++j) {
      const double target =
          (1.0 - alphas[i]) * (j == labels[i] ? 1.0 : 0.0) + alphas[i] * uk;
      out[i][j] = (pred.probabilities[j] - target) / static_cast<double>(n);
    }
  }
  return out;
}

double cosine_lr(double lr0, int step_index, int total_steps) {
  if (total_steps <= 0) return lr0;
  const double t = static_cast<double>(step_index) / total_steps;
  return lr0 * (1.0 + std::cos(3.14159265358979323846 * t)) / 2.0;
}

double schedule_lr(const TrainConfig& cfg, int step_index, int total_steps) {
  return cfg.schedule == Schedule::cosine
             ? cosine_lr(cfg.lr0, step_index, total_steps)
             : cfg.lr0;
}

void sgd_step(ModelState& state, const std::vector<std::vector<double>>& grads,
              int step_index, int total_steps, const TrainConfig& cfg) {
  if (grads.size() != state.weights.size()) {
    throw std::invalid_argument("sgd_step: gradient array count mismatch");
  }
  const double lr = schedule_lr(cfg, step_index, total_steps);
  for (std::size_t a = 0; a < state.weights.size(); ++a) {
    auto& w = state.weights[a];
    auto& v = state.momentum[a];
    const auto& g = grads[a];
    if (g.size() != w.size()) {
      throw std::invalid_argument("sgd_step: gradient shape mismatch");
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      v[i] = cfg.momentum * v[i] + (g[i] + cfg.weight_decay * w[i]);
      w[i] -= lr * v[i];
    }
  }
}

EvalResult evaluate(const ModelState& model,
                    const std::vector<LabeledSample>& dataset) {
  if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
  EvalResult res;
  res.losses.resize(dataset.size());
  std::vector<int> correct(dataset.size(), 0);
  parallel_for(dataset.size(), [&](std::size_t i) {
    const auto pred = forward_one(model, dataset[i].image);
    res.losses[i] = -clamped_log(pred.probabilities[dataset[i].label]);
    correct[i] = pred.argmax == dataset[i].label ? 1 : 0;
  });
  long long hits = 0;
  for (int c : correct) hits += c;
  res.accuracy = static_cast<double>(hits) / dataset.size();
  return res;
}

// ---------------------------------------------------------------------------
// Model file
// ---------------------------------------------------------------------------

namespace {

template <typename T>
void write_raw(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_raw(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw std::runtime_error("model file truncated");
  return v;
}

}  // namespace

void save_model(const std::string& path, const ModelState& state) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp + " for writing");
    f.write(kModelMagic, 4);
    write_raw<std::uint16_t>(f, kModelVersion);
    write_raw<std::uint8_t>(f, static_cast<std::uint8_t>(state.arch));
    const auto shapes = array_shapes(state);
    write_raw<std::uint8_t>(f, static_cast<std::uint8_t>(shapes.size()));
    for (const auto& shape : shapes) {
      write_raw<std::uint8_t>(f, static_cast<std::uint8_t>(shape.size()));
      for (auto d : shape) write_raw<std::uint64_t>(f, d);
    }
    for (const auto& arr : state.weights) {
      f.write(reinterpret_cast<const char*>(arr.data()),
              static_cast<std::streamsize>(arr.size() * sizeof(double)));
    }
    for (const auto& arr : state.momentum) {
      f.write(reinterpret_cast<const char*>(arr.data()),
              static_cast<std::streamsize>(arr.size() * sizeof(double)));
    }
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

ModelState load_model(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open model file " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, kModelMagic, 4) != 0) {
    throw std::runtime_error(path + " is not a model file");
  }
  const auto version = read_raw<std::uint16_t>(f);
  if (version != kModelVersion) {
    throw std::runtime_error("unsupported model file version " +
                             std::to_string(version));
  }
  ModelState m;
  m.arch = static_cast<Arch>(read_raw<std::uint8_t>(f));
  const int num_arrays = read_raw<std::uint8_t>(f);
  std::vector<std::vector<std::size_t>> shapes;
  for (int a = 0; a < num_arrays; ++a) {
    const int ndim = read_raw<std::uint8_t>(f);
    std::vector<std::size_t> shape;
    for (int d = 0; d < ndim; ++d) {
      shape.push_back(static_cast<std::size_t>(read_raw<std::uint64_t>(f)));
    }
    shapes.push_back(std::move(shape));
  }
  if (m.arch == Arch::softmax_linear) {
    if (num_arrays != 2 || shapes[0].size() != 2) {
      throw std::runtime_error("model file shape table inconsistent");
    }
    m.num_classes = static_cast<int>(shapes[0][0]);
    m.input_dim = static_cast<int>(shapes[0][1]);
    m.hidden_dim = 0;
  } else if (m.arch == Arch::mlp1) {
    if (num_arrays != 4 || shapes[0].size() != 2 || shapes[2].size() != 2) {
      throw std::runtime_error("model file shape table inconsistent");
    }
    m.hidden_dim = static_cast<int>(shapes[0][0]);
    m.input_dim = static_cast<int>(shapes[0][1]);
    m.num_classes = static_cast<int>(shapes[2][0]);
  } else {
    throw std::runtime_error("model file has unknown architecture tag");
  }
  for (const auto& shape : shapes) {
    std::vector<double> arr(shape_size(shape));
    f.read(reinterpret_cast<char*>(arr.data()),
           static_cast<std::streamsize>(arr.size() * sizeof(double)));
    if (!f) throw std::runtime_error("model file truncated");
    m.weights.push_back(std::move(arr));
  }
  for (const auto& shape : shapes) {
    std::vector<double> arr(shape_size(shape));
    f.read(reinterpret_cast<char*>(arr.data()),
           static_cast<std::streamsize>(arr.size() * sizeof(double)));
    if (!f) throw std::runtime_error("model file truncated");
    m.momentum.push_back(std::move(arr));
  }
  return m;
}

}  // namespace resmooth
