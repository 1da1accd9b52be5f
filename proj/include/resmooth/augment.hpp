#pragma once

#include <cstdint>
#include <vector>

#include "resmooth/raster.hpp"
#include "resmooth/rng.hpp"

namespace resmooth {

// ---------------------------------------------------------------------------
// Deterministic raster transforms. Every function is a pure function of its
// arguments; randomized variants draw exclusively from the passed generator.
// ---------------------------------------------------------------------------

// Clockwise rotation by k * 90 degrees, k in {1,2,3}. Pure index remap;
// output dimensions swap when k is odd.
Raster rotate_quarter(const Raster& img, int k);

// Patch (r,c) of the output equals patch perm[r * grid_k + c] of the input.
// Throws if height or width is not divisible by grid_k.
Raster jigsaw_shuffle(const Raster& img, int grid_k,
                      const std::vector<int>& perm);

// Sets the size x size square centered at (center_row, center_col), clipped
// to the image bounds, to `fill`.
Raster cutout(const Raster& img, int size, int center_row, int center_col,
              std::uint8_t fill);

// Individual RandAugment ops. Magnitude-parameterized ops take their realized
// parameter directly; rand_augment() derives parameters from the magnitude.
Raster autocontrast(const Raster& img);
Raster equalize(const Raster& img);
Raster invert(const Raster& img);
Raster solarize(const Raster& img, int threshold);        // invert px >= threshold
Raster posterize(const Raster& img, int bits);            // keep top `bits` bits
Raster adjust_brightness(const Raster& img, double factor);
Raster adjust_contrast(const Raster& img, double factor);
Raster sharpness_blend(const Raster& img, double amount);  // out = px + amount*(px - blur3x3)
Raster translate_axis(const Raster& img, int axis, int shift,
                      std::uint8_t fill);  // axis 0 = x (cols), 1 = y (rows)

struct RandAugmentResult {
  Raster image;
  std::vector<AugOp> log;
};

// Applies n_ops transforms drawn uniformly with replacement from the fixed
// 10-op list. Magnitude 0 is the identity for every parameterized op; 30 is
// maximal strength, with linear interpolation between.
RandAugmentResult rand_augment(const Raster& img, int n_ops, int magnitude,
                               Rng& rng);

// Pad-2 random crop + horizontal flip (the standard augmentation).
Raster pad_crop(const Raster& img, int dr, int dc, int pad,
                std::uint8_t fill = 0);
Raster hflip(const Raster& img);

// Uniform random permutation of n elements excluding the identity.
std::vector<int> sample_non_identity_perm(int n, Rng& rng);

// With probability `strategy.probability`, applies the strategy transform
// followed by standard augmentation; otherwise standard augmentation only.
// The result records every applied op in aug_log and is marked augmented.
LabeledSample apply_strategy(const LabeledSample& sample,
                             const AugmentStrategy& strategy, Rng& rng);
LabeledSample apply_strategy(const LabeledSample& sample,
                             const AugmentStrategy& strategy,
                             std::uint64_t seed);

// True if the sample's log contains the strategy transform itself (as
// opposed to standard-augmentation entries only).
bool strategy_fired(const LabeledSample& sample, AugKind kind);

// Re-applies a recorded aug_log to the original raster. For any sample
// produced by this module, replay(original, sample.aug_log) == sample.image.
Raster replay_aug_log(const Raster& original, const std::vector<AugOp>& log);

}  // namespace resmooth
