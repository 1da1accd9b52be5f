#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace resmooth {

// 8-bit image, row-major with interleaved channels:
// pixels[(r * width + c) * channels + ch].
struct Raster {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<std::uint8_t> pixels;

  static Raster filled(int h, int w, int c, std::uint8_t value) {
    Raster out;
    out.height = h;
    out.width = w;
    out.channels = c;
    out.pixels.assign(static_cast<std::size_t>(h) * w * c, value);
    return out;
  }

  std::uint8_t& at(int r, int c, int ch = 0) {
    return pixels[(static_cast<std::size_t>(r) * width + c) * channels + ch];
  }
  std::uint8_t at(int r, int c, int ch = 0) const {
    return pixels[(static_cast<std::size_t>(r) * width + c) * channels + ch];
  }

  bool same_shape(const Raster& o) const {
    return height == o.height && width == o.width && channels == o.channels;
  }

  bool operator==(const Raster& o) const = default;
};

enum class Origin { original, augmented };

// One applied transform descriptor: name plus realized integer parameters,
// in application order. Serialized as `name(key=value,...)`, one line per op.
struct AugOp {
  std::string name;
  std::vector<std::pair<std::string, long long>> params;

  long long param(const std::string& key) const;
  std::string to_string() const;
  static AugOp parse(const std::string& line);

  bool operator==(const AugOp& o) const = default;
};

struct LabeledSample {
  Raster image;
  int label = 0;
  std::uint64_t sample_id = 0;
  Origin origin = Origin::original;
  std::vector<AugOp> aug_log;  // empty iff origin == original
};

enum class AugKind { standard, rand_augment, jigsaw, rotation, cutout };

struct AugmentStrategy {
  AugKind kind = AugKind::standard;
  int n_ops = 2;       // rand_augment only
  int magnitude = 10;  // rand_augment only, 0..30
  int grid_k = 2;      // jigsaw grid side, >= 2
  int cut_size = 8;    // cutout square side
  double probability = 0.5;  // chance the strategy fires per sample per epoch
};

const char* aug_kind_name(AugKind k);
AugKind aug_kind_from_name(const std::string& name);

}  // namespace resmooth
