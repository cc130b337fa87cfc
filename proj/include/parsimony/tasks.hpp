#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "parsimony/energy_model.hpp"
#include "parsimony/raster.hpp"
#include "parsimony/rhst.hpp"

namespace parsimony {

enum class SyntheticPotential {
    kTruncatedLinear,  // diameter diversity of lambda * min(|a-b|, M)
    kRandomRHst,       // hierarchical P^n Potts over a random r-HST
};

struct GridSpec {
    int width = 20;
    int height = 20;
    int num_labels = 5;
    int window = 4;
    int stride = 1;
    double unary_low = 0.0;
    double unary_high = 100.0;
    double weight = 1.0;
    SyntheticPotential potential = SyntheticPotential::kTruncatedLinear;
    double lambda = 1.0;
    int truncation = 5;
    double r = 2.0;
    int tree_depth = 3;
    std::uint64_t seed = 0;
};

/// Lattice model: unaries ~ Uniform[unary_low, unary_high], one clique per
/// window position (sliding by stride), all with weight spec.weight.
/// Variables are numbered row-major.
EnergyModel generate_synthetic(const GridSpec& spec);

/// Random r-HST with all leaves at `depth`; every internal node's edge to
/// its children is at most its parent's divided by r. label_count == 1
/// gives a single leaf-root. Throws InvalidInput when label_count >= 2 and
/// depth < 2, or r <= 1.
RHst random_rhst(int label_count, double r, int depth, std::uint64_t seed);

struct StereoParams {
    int num_disparities = 16;
    double lambda = 20.0;
    int truncation = 10;
    double sigma = 100.0;
    double unary_truncation = 0.0;  // <= 0 disables
    double gradient_threshold = 8.0;
    double weight_low_gradient = 2.0;
    double weight_high_gradient = 1.0;
};

struct InpaintParams {
    int levels = 256;
    double lambda = 40.0;
    int truncation = 40;
    double sigma = 10000.0;
    double pairwise_weight = 1.0;
};

/// Rectified pair -> model with one label per disparity. Unary(x, y, d) =
/// L1 colour difference between left(x, y) and right(x - d, y); columns
/// left of the image are clamped to column 0. 4-neighbour pairwise cliques
/// get weight_low_gradient when the L1 colour difference between the two
/// left pixels is below gradient_threshold, else weight_high_gradient.
/// Each superpixel region is one clique with w = exp(-var / sigma^2), var
/// the variance of mean-channel intensity over the region. Potential:
/// diameter diversity of the truncated linear metric.
EnergyModel build_stereo(const Raster& left, const Raster& right, const Raster& superpixels, const StereoParams& params);

/// Grayscale image -> model with `levels` labels; label l stands for
/// intensity l * 255 / (levels - 1). Observed pixels pay (value - I)^2,
/// obscured pixels (mask sample != 0) pay 0. Pairwise weights are
/// pairwise_weight; superpixel weights as in build_stereo, using observed
/// pixels only.
EnergyModel build_inpaint(const Raster& image, const std::optional<Raster>& mask, const Raster& superpixels,
                          const InpaintParams& params);

/// B x B tiles, ids dense in row-major tile order.
Raster block_superpixels(int width, int height, int block);

/// Intensity represented by `label` when `levels` labels span [0, 255].
double level_value(Label label, int levels);

/// Labels scaled to 0..255 for viewing.
Raster labeling_to_raster(std::span<const Label> labeling, int width, int height, std::size_t num_labels);

/// One label index per line.
std::string labeling_to_text(std::span<const Label> labeling);

}  // namespace parsimony
