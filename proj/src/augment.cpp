#include "resmooth/augment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace resmooth {

namespace {

constexpr int kStandardPad = 2;
constexpr std::uint8_t kCutoutFill = 128;
constexpr std::uint8_t kTranslateFill = 128;
constexpr int kMaxMagnitude = 30;

std::uint8_t clamp_u8(long long v) {
  return static_cast<std::uint8_t>(std::clamp<long long>(v, 0, 255));
}

long long scaled(double full, int magnitude) {
  return std::llround(full * magnitude / kMaxMagnitude);
}

}  // namespace

Raster rotate_quarter(const Raster& img, int k) {
  if (k < 1 || k > 3) throw std::invalid_argument("rotate_quarter: k must be 1, 2 or 3");
  Raster cur = img;
  for (int step = 0; step < k; ++step) {
    Raster out;
    out.height = cur.width;
    out.width = cur.height;
    out.channels = cur.channels;
    out.pixels.resize(cur.pixels.size());
    for (int r = 0; r < out.height; ++r) {
      for (int c = 0; c < out.width; ++c) {
        for (int ch = 0; ch < out.channels; ++ch) {
          out.at(r, c, ch) = cur.at(cur.height - 1 - c, r, ch);
        }
      }
    }
    cur = std::move(out);
  }
  return cur;
}

Raster jigsaw_shuffle(const Raster& img, int grid_k,
                      const std::vector<int>& perm) {
  if (grid_k < 2) throw std::invalid_argument("jigsaw: grid_k must be >= 2");
  if (img.height % grid_k != 0) {
    throw std::invalid_argument("jigsaw: height " + std::to_string(img.height) +
                                " not divisible by grid " + std::to_string(grid_k));
  }
  if (img.width % grid_k != 0) {
    throw std::invalid_argument("jigsaw: width " + std::to_string(img.width) +
                                " not divisible by grid " + std::to_string(grid_k));
  }
  const int n = grid_k * grid_k;
  if (static_cast<int>(perm.size()) != n) {
    throw std::invalid_argument("jigsaw: permutation size mismatch");
  }
  std::vector<bool> seen(n, false);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[v]) {
      throw std::invalid_argument("jigsaw: invalid permutation");
    }
    seen[v] = true;
  }

  const int ph = img.height / grid_k;
  const int pw = img.width / grid_k;
  Raster out = img;
  for (int i = 0; i < n; ++i) {
    const int dst_r = (i / grid_k) * ph;
    const int dst_c = (i % grid_k) * pw;
    const int src_r = (perm[i] / grid_k) * ph;
    const int src_c = (perm[i] % grid_k) * pw;
    for (int r = 0; r < ph; ++r) {
      for (int c = 0; c < pw; ++c) {
        for (int ch = 0; ch < img.channels; ++ch) {
          out.at(dst_r + r, dst_c + c, ch) = img.at(src_r + r, src_c + c, ch);
        }
      }
    }
  }
  return out;
}

Raster cutout(const Raster& img, int size, int center_row, int center_col,
              std::uint8_t fill) {
  if (size < 0) throw std::invalid_argument("cutout: size must be >= 0");
  Raster out = img;
  const int r0 = std::max(0, center_row - size / 2);
  const int c0 = std::max(0, center_col - size / 2);
  const int r1 = std::min(img.height, center_row - size / 2 + size);
  const int c1 = std::min(img.width, center_col - size / 2 + size);
  for (int r = r0; r < r1; ++r) {
    for (int c = c0; c < c1; ++c) {
      for (int ch = 0; ch < img.channels; ++ch) out.at(r, c, ch) = fill;
    }
  }
  return out;
}

Raster autocontrast(const Raster& img) {
  Raster out = img;
  for (int ch = 0; ch < img.channels; ++ch) {
    int lo = 255, hi = 0;
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) {
        const int v = img.at(r, c, ch);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    if (hi <= lo) continue;
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) {
        const double v = img.at(r, c, ch);
        out.at(r, c, ch) = clamp_u8(std::llround((v - lo) * 255.0 / (hi - lo)));
      }
    }
  }
  return out;
}

Raster equalize(const Raster& img) {
  Raster out = img;
  const int total = img.height * img.width;
  for (int ch = 0; ch < img.channels; ++ch) {
    std::array<int, 256> hist{};
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) hist[img.at(r, c, ch)]++;
    }
    std::array<int, 256> cdf{};
    int running = 0;
    int cdf_min = 0;
    bool saw_min = false;
    for (int v = 0; v < 256; ++v) {
      running += hist[v];
      cdf[v] = running;
      if (!saw_min && hist[v] > 0) {
        cdf_min = running;
        saw_min = true;
      }
    }
    if (cdf_min == total) continue;  // single intensity level
    for (int r = 0; r < img.height; ++r) {
      for (int c = 0; c < img.width; ++c) {
        const int v = img.at(r, c, ch);
        out.at(r, c, ch) = clamp_u8(
            std::llround((cdf[v] - cdf_min) * 255.0 / (total - cdf_min)));
      }
    }
  }
  return out;
}

Raster invert(const Raster& img) {
  Raster out = img;
  for (auto& p : out.pixels) p = static_cast<std::uint8_t>(255 - p);
  return out;
}

Raster solarize(const Raster& img, int threshold) {
  Raster out = img;
  for (auto& p : out.pixels) {
    if (p >= threshold) p = static_cast<std::uint8_t>(255 - p);
  }
  return out;
}

Raster posterize(const Raster& img, int bits) {
  if (bits < 1 || bits > 8) throw std::invalid_argument("posterize: bits must be in [1,8]");
  const std::uint8_t mask = static_cast<std::uint8_t>(0xFF << (8 - bits));
  Raster out = img;
  for (auto& p : out.pixels) p = static_cast<std::uint8_t>(p & mask);
  return out;
}

Raster adjust_brightness(const Raster& img, double factor) {
  Raster out = img;
  for (auto& p : out.pixels) p = clamp_u8(std::llround(p * factor));
  return out;
}

Raster adjust_contrast(const Raster& img, double factor) {
  double mean = 0.0;
  for (auto p : img.pixels) mean += p;
  mean /= static_cast<double>(img.pixels.size());
  Raster out = img;
  for (auto& p : out.pixels) {
    p = clamp_u8(std::llround(mean + factor * (p - mean)));
  }
  return out;
}

Raster sharpness_blend(const Raster& img, double amount) {
  Raster out = img;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      for (int ch = 0; ch < img.channels; ++ch) {
        double sum = 0.0;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = std::clamp(r + dr, 0, img.height - 1);
            const int cc = std::clamp(c + dc, 0, img.width - 1);
            sum += img.at(rr, cc, ch);
          }
        }
        const double blur = sum / 9.0;
        const double v = img.at(r, c, ch);
        out.at(r, c, ch) = clamp_u8(std::llround(v + amount * (v - blur)));
      }
    }
  }
  return out;
}

Raster translate_axis(const Raster& img, int axis, int shift,
                      std::uint8_t fill) {
  Raster out = img;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const int src_r = axis == 1 ? r - shift : r;
      const int src_c = axis == 0 ? c - shift : c;
      const bool inside = src_r >= 0 && src_r < img.height && src_c >= 0 &&
                          src_c < img.width;
      for (int ch = 0; ch < img.channels; ++ch) {
        out.at(r, c, ch) = inside ? img.at(src_r, src_c, ch) : fill;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// RandAugment. Op list, draw order and parameter derivation are part of the
// reproducibility contract: op index first, then per-op draws in the order
// written here. Signs map draw 0 -> +1, draw 1 -> -1.
// ---------------------------------------------------------------------------

RandAugmentResult rand_augment(const Raster& img, int n_ops, int magnitude,
                               Rng& rng) {
  if (magnitude < 0 || magnitude > kMaxMagnitude) {
    throw std::invalid_argument("rand_augment: magnitude must be in [0,30]");
  }
  RandAugmentResult res{img, {}};
  for (int i = 0; i < n_ops; ++i) {
    const int op = static_cast<int>(rng.uniform_int(10));
    AugOp entry;
    switch (op) {
      case 0:
        entry.name = "identity";
        break;
      case 1:
        entry.name = "autocontrast";
        res.image = autocontrast(res.image);
        break;
      case 2:
        entry.name = "equalize";
        res.image = equalize(res.image);
        break;
      case 3:
        entry.name = "invert";
        res.image = invert(res.image);
        break;
      case 4: {
        const long long threshold = 256 - scaled(256.0, magnitude);
        entry.name = "solarize";
        entry.params.emplace_back("threshold", threshold);
        res.image = solarize(res.image, static_cast<int>(threshold));
        break;
      }
      case 5: {
        const long long bits = 8 - scaled(7.0, magnitude);
        entry.name = "posterize";
        entry.params.emplace_back("bits", bits);
        res.image = posterize(res.image, static_cast<int>(bits));
        break;
      }
      case 6: {
        const int sign = rng.uniform_int(2) == 0 ? 1 : -1;
        const long long pm = 1000 + sign * scaled(900.0, magnitude);
        entry.name = "brightness";
        entry.params.emplace_back("pm", pm);
        res.image = adjust_brightness(res.image, pm / 1000.0);
        break;
      }
      case 7: {
        const int sign = rng.uniform_int(2) == 0 ? 1 : -1;
        const long long pm = 1000 + sign * scaled(900.0, magnitude);
        entry.name = "contrast";
        entry.params.emplace_back("pm", pm);
        res.image = adjust_contrast(res.image, pm / 1000.0);
        break;
      }
      case 8: {
        const int sign = rng.uniform_int(2) == 0 ? 1 : -1;
        const long long pm = sign * scaled(1000.0, magnitude);
        entry.name = "sharpness";
        entry.params.emplace_back("pm", pm);
        res.image = sharpness_blend(res.image, pm / 1000.0);
        break;
      }
      case 9: {
        const int axis = static_cast<int>(rng.uniform_int(2));
        const int sign = rng.uniform_int(2) == 0 ? 1 : -1;
        const int extent = axis == 0 ? img.width : img.height;
        const long long shift = sign * scaled(0.30 * extent, magnitude);
        entry.name = "translate";
        entry.params.emplace_back("axis", axis);
        entry.params.emplace_back("shift", shift);
        res.image = translate_axis(res.image, axis, static_cast<int>(shift),
                                   kTranslateFill);
        break;
      }
      default:
        break;
    }
    res.log.push_back(std::move(entry));
  }
  return res;
}

Raster pad_crop(const Raster& img, int dr, int dc, int pad,
                std::uint8_t fill) {
  Raster out = img;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      const int src_r = r + dr - pad;
      const int src_c = c + dc - pad;
      const bool inside = src_r >= 0 && src_r < img.height && src_c >= 0 &&
                          src_c < img.width;
      for (int ch = 0; ch < img.channels; ++ch) {
        out.at(r, c, ch) = inside ? img.at(src_r, src_c, ch) : fill;
      }
    }
  }
  return out;
}

Raster hflip(const Raster& img) {
  Raster out = img;
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      for (int ch = 0; ch < img.channels; ++ch) {
        out.at(r, c, ch) = img.at(r, img.width - 1 - c, ch);
      }
    }
  }
  return out;
}

std::vector<int> sample_non_identity_perm(int n, Rng& rng) {
  if (n < 2) throw std::invalid_argument("permutation needs n >= 2");
  std::vector<int> perm(n);
  while (true) {
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i >= 1; --i) {
      const int j = static_cast<int>(rng.uniform_int(i + 1));
      std::swap(perm[i], perm[j]);
    }
    for (int i = 0; i < n; ++i) {
      if (perm[i] != i) return perm;
    }
  }
}

LabeledSample apply_strategy(const LabeledSample& sample,
                             const AugmentStrategy& strategy, Rng& rng) {
  if (sample.origin != Origin::original) {
    throw std::invalid_argument("apply_strategy: sample already augmented");
  }
  LabeledSample out = sample;
  out.origin = Origin::augmented;
  out.aug_log.clear();

  if (strategy.kind != AugKind::standard && rng.bernoulli(strategy.probability)) {
    switch (strategy.kind) {
      case AugKind::rand_augment: {
        auto res = rand_augment(out.image, strategy.n_ops, strategy.magnitude, rng);
        out.image = std::move(res.image);
        for (auto& op : res.log) out.aug_log.push_back(std::move(op));
        break;
      }
      case AugKind::jigsaw: {
        const int n = strategy.grid_k * strategy.grid_k;
        auto perm = sample_non_identity_perm(n, rng);
        out.image = jigsaw_shuffle(out.image, strategy.grid_k, perm);
        AugOp op;
        op.name = "jigsaw";
        op.params.emplace_back("grid", strategy.grid_k);
        for (int i = 0; i < n; ++i) {
          op.params.emplace_back("p" + std::to_string(i), perm[i]);
        }
        out.aug_log.push_back(std::move(op));
        break;
      }
      case AugKind::rotation: {
        const int k = 1 + static_cast<int>(rng.uniform_int(3));
        out.image = rotate_quarter(out.image, k);
        out.aug_log.push_back({"rotate", {{"k", k}}});
        break;
      }
      case AugKind::cutout: {
        const int row = static_cast<int>(rng.uniform_int(out.image.height));
        const int col = static_cast<int>(rng.uniform_int(out.image.width));
        out.image = cutout(out.image, strategy.cut_size, row, col, kCutoutFill);
        out.aug_log.push_back({"cutout",
                               {{"size", strategy.cut_size},
                                {"row", row},
                                {"col", col},
                                {"fill", kCutoutFill}}});
        break;
      }
      default:
        break;
    }
  }

  // Standard augmentation: pad-2 random crop, then horizontal flip half the
  // time. The flip is logged only when applied.
  const int dr = static_cast<int>(rng.uniform_int(2 * kStandardPad + 1));
  const int dc = static_cast<int>(rng.uniform_int(2 * kStandardPad + 1));
  out.image = pad_crop(out.image, dr, dc, kStandardPad);
  out.aug_log.push_back({"crop", {{"dr", dr}, {"dc", dc}}});
  if (rng.bernoulli(0.5)) {
    out.image = hflip(out.image);
    out.aug_log.push_back({"flip", {}});
  }
  return out;
}

LabeledSample apply_strategy(const LabeledSample& sample,
                             const AugmentStrategy& strategy,
                             std::uint64_t seed) {
  Rng rng(seed);
  return apply_strategy(sample, strategy, rng);
}

bool strategy_fired(const LabeledSample& sample, AugKind kind) {
  for (const auto& op : sample.aug_log) {
    switch (kind) {
      case AugKind::rand_augment:
        if (op.name != "crop" && op.name != "flip") return true;
        break;
      case AugKind::jigsaw:
        if (op.name == "jigsaw") return true;
        break;
      case AugKind::rotation:
        if (op.name == "rotate") return true;
        break;
      case AugKind::cutout:
        if (op.name == "cutout") return true;
        break;
      case AugKind::standard:
        return false;
    }
  }
  return false;
}

Raster replay_aug_log(const Raster& original, const std::vector<AugOp>& log) {
  Raster img = original;
  for (const auto& op : log) {
    if (op.name == "identity") {
      continue;
    } else if (op.name == "autocontrast") {
      img = autocontrast(img);
    } else if (op.name == "equalize") {
      img = equalize(img);
    } else if (op.name == "invert") {
      img = invert(img);
    } else if (op.name == "solarize") {
      img = solarize(img, static_cast<int>(op.param("threshold")));
    } else if (op.name == "posterize") {
      img = posterize(img, static_cast<int>(op.param("bits")));
    } else if (op.name == "brightness") {
      img = adjust_brightness(img, op.param("pm") / 1000.0);
    } else if (op.name == "contrast") {
      img = adjust_contrast(img, op.param("pm") / 1000.0);
    } else if (op.name == "sharpness") {
      img = sharpness_blend(img, op.param("pm") / 1000.0);
    } else if (op.name == "translate") {
      img = translate_axis(img, static_cast<int>(op.param("axis")),
                           static_cast<int>(op.param("shift")), kTranslateFill);
    } else if (op.name == "rotate") {
      img = rotate_quarter(img, static_cast<int>(op.param("k")));
    } else if (op.name == "jigsaw") {
      const int grid = static_cast<int>(op.param("grid"));
      std::vector<int> perm;
      for (const auto& [key, value] : op.params) {
        if (key != "grid") perm.push_back(static_cast<int>(value));
      }
      img = jigsaw_shuffle(img, grid, perm);
    } else if (op.name == "cutout") {
      img = cutout(img, static_cast<int>(op.param("size")),
                   static_cast<int>(op.param("row")),
                   static_cast<int>(op.param("col")),
                   static_cast<std::uint8_t>(op.param("fill")));
    } else if (op.name == "crop") {
      img = pad_crop(img, static_cast<int>(op.param("dr")),
                     static_cast<int>(op.param("dc")), kStandardPad);
    } else if (op.name == "flip") {
      img = hflip(img);
    } else {
      throw std::runtime_error("replay: unknown op '" + op.name + "'");
    }
  }
  return img;
}

}  // namespace resmooth
