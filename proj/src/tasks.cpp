#include "parsimony/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "parsimony/rng.hpp"

namespace parsimony {

namespace {

std::size_t pixel(int x, int y, int width) {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x);
}

void append_grid_pairs(int width, int height, std::vector<Clique>& cliques, auto&& weight_of) {
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const auto p = static_cast<std::int32_t>(pixel(x, y, width));
            if (x + 1 < width) {
                const auto q = static_cast<std::int32_t>(pixel(x + 1, y, width));
                cliques.push_back({{p, q}, weight_of(p, q)});
            }
            if (y + 1 < height) {
                const auto q = static_cast<std::int32_t>(pixel(x, y + 1, width));
                cliques.push_back({{p, q}, weight_of(p, q)});
            }
        }
    }
}

// Region cliques weighted exp(-variance / sigma^2). Region ids are remapped
// to dense ascending order; `include` filters pixels used for the variance.
void append_region_cliques(const Raster& regions, std::span<const double> intensity, const std::vector<bool>& include,
                           double sigma, std::vector<Clique>& cliques) {
    std::map<std::uint16_t, std::size_t> dense;
    for (auto s : regions.samples) {
        dense.emplace(s, 0);
    }
    std::size_t next = 0;
    for (auto& [id, idx] : dense) {
        idx = next++;
    }
    std::vector<std::vector<std::int32_t>> members(dense.size());
    for (std::size_t p = 0; p < regions.samples.size(); ++p) {
        members[dense[regions.samples[p]]].push_back(static_cast<std::int32_t>(p));
    }
    for (auto& m : members) {
        double sum = 0.0;
        double sq = 0.0;
        std::size_t count = 0;
        for (auto p : m) {
            if (include.empty() || include[static_cast<std::size_t>(p)]) {
                sum += intensity[static_cast<std::size_t>(p)];
                ++count;
            }
        }
        double variance = 0.0;
        if (count > 0) {
            const double mean = sum / static_cast<double>(count);
            for (auto p : m) {
                if (include.empty() || include[static_cast<std::size_t>(p)]) {
                    const double d = intensity[static_cast<std::size_t>(p)] - mean;
                    sq += d * d;
                }
            }
            variance = sq / static_cast<double>(count);
        }
        cliques.push_back({std::move(m), std::exp(-variance / (sigma * sigma))});
    }
}

void check_regions(const Raster& regions, int width, int height) {
    if (regions.channels != 1) {
        throw InvalidInput("superpixel map must be a single-channel PGM");
    }
    if (regions.width != width || regions.height != height) {
        throw InvalidInput("superpixel map dimensions differ from the image");
    }
}

}  // namespace

EnergyModel generate_synthetic(const GridSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0 || spec.num_labels <= 0) {
        throw InvalidInput("grid dimensions and label count must be positive");
    }
    if (spec.window <= 0 || spec.window > std::min(spec.width, spec.height) || spec.stride <= 0) {
        throw InvalidInput("clique window must fit inside the grid and stride must be positive");
    }
    if (!std::isfinite(spec.unary_low) || !std::isfinite(spec.unary_high) || spec.unary_low > spec.unary_high) {
        throw InvalidInput("unary bounds must be finite with low <= high");
    }
    SplitMix64 rng(spec.seed);
    SplitMix64 unary_rng = rng.split(0);
    const std::size_t n = static_cast<std::size_t>(spec.width) * static_cast<std::size_t>(spec.height);
    const auto h = static_cast<std::size_t>(spec.num_labels);
    std::vector<double> unaries(n * h);
    for (auto& u : unaries) {
        u = unary_rng.uniform(spec.unary_low, spec.unary_high);
    }
    std::vector<Clique> cliques;
    for (int y0 = 0; y0 + spec.window <= spec.height; y0 += spec.stride) {
        for (int x0 = 0; x0 + spec.window <= spec.width; x0 += spec.stride) {
            Clique c;
            c.weight = spec.weight;
            c.members.reserve(static_cast<std::size_t>(spec.window * spec.window));
            for (int y = y0; y < y0 + spec.window; ++y) {
                for (int x = x0; x < x0 + spec.window; ++x) {
                    c.members.push_back(static_cast<std::int32_t>(pixel(x, y, spec.width)));
                }
            }
            cliques.push_back(std::move(c));
        }
    }
    CliquePotentialSpec potential;
    if (spec.potential == SyntheticPotential::kTruncatedLinear) {
        potential = DiameterPotential{LabelMetric::truncated_linear(h, spec.lambda, spec.truncation), nullptr};
    } else {
        auto tree = std::make_shared<const RHst>(random_rhst(spec.num_labels, spec.r, spec.tree_depth, rng.split(1)()));
        potential = DiameterPotential{tree->metric(), tree};
    }
    return EnergyModel(n, h, std::move(unaries), std::move(cliques), std::move(potential));
}

RHst random_rhst(int label_count, double r, int depth, std::uint64_t seed) {
    if (label_count < 1) {
        throw InvalidInput("label_count must be positive");
    }
    if (!(r > 1.0) || !std::isfinite(r)) {
        throw InvalidInput("r must exceed 1");
    }
    if (depth < 1) {
        throw InvalidInput("depth must be at least 1");
    }
    if (label_count == 1) {
        const NodeId parent = -1;
        const double edge = 0.0;
        const Label label = 0;
        return RHst::from_parents({&parent, 1}, {&edge, 1}, {&label, 1}, r);
    }
    if (depth < 2) {
        throw InvalidInput("a tree over 2 or more labels needs depth >= 2");
    }
    SplitMix64 rng(seed);
    std::vector<Label> labels(static_cast<std::size_t>(label_count));
    std::iota(labels.begin(), labels.end(), 0);
    rng.shuffle(labels);

    std::vector<NodeId> parents{-1};
    std::vector<double> edges{rng.uniform(1.0, 10.0)};
    std::vector<Label> tags{-1};
    struct Cluster {
        NodeId node;
        std::vector<Label> labels;
    };
    std::vector<Cluster> level{{0, labels}};
    for (int d = 1; d < depth; ++d) {
        const bool last = d == depth - 1;
        std::vector<Cluster> next;
        for (auto& cl : level) {
            const std::size_t s = cl.labels.size();
            std::size_t groups = s;
            if (!last) {
                const std::size_t lo = std::min<std::size_t>(2, s);
                const std::size_t hi = std::min<std::size_t>(4, s);
                groups = lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
            }
            // random cut points split the (already shuffled) labels into non-empty groups
            std::vector<std::size_t> cuts(s - 1);
            std::iota(cuts.begin(), cuts.end(), 1);
            rng.shuffle(cuts);
            cuts.resize(groups - 1);
            std::sort(cuts.begin(), cuts.end());
            cuts.push_back(s);
            std::size_t begin = 0;
            const double child_edge = edges[static_cast<std::size_t>(cl.node)] / (r * rng.uniform(1.0, 1.5));
            for (std::size_t end : cuts) {
                const auto id = static_cast<NodeId>(parents.size());
                parents.push_back(cl.node);
                edges.push_back(last ? 0.0 : child_edge);
                tags.push_back(last ? cl.labels[begin] : -1);
                next.push_back({id, std::vector<Label>(cl.labels.begin() + static_cast<std::ptrdiff_t>(begin),
                                                       cl.labels.begin() + static_cast<std::ptrdiff_t>(end))});
                begin = end;
            }
        }
        level = std::move(next);
    }
    return RHst::from_parents(parents, edges, tags, r);
}

EnergyModel build_stereo(const Raster& left, const Raster& right, const Raster& superpixels, const StereoParams& params) {
    if (left.width != right.width || left.height != right.height || left.channels != right.channels) {
        throw InvalidInput("stereo images must have identical dimensions and channel counts");
    }
    if (params.num_disparities < 1) {
        throw InvalidInput("num_disparities must be at least 1");
    }
    if (!(params.sigma > 0.0)) {
        throw InvalidInput("sigma must be positive");
    }
    check_regions(superpixels, left.width, left.height);
    const int w = left.width;
    const int hgt = left.height;
    const auto labels = static_cast<std::size_t>(params.num_disparities);
    const std::size_t n = left.num_pixels();
    std::vector<double> unaries(n * labels);
    std::vector<double> intensity(n);
    for (int y = 0; y < hgt; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t p = pixel(x, y, w);
            double sum = 0.0;
            for (int c = 0; c < left.channels; ++c) {
                sum += left.at(x, y, c);
            }
            intensity[p] = sum / left.channels;
            for (std::size_t d = 0; d < labels; ++d) {
                const int xr = std::max(0, x - static_cast<int>(d));
                double cost = 0.0;
                for (int c = 0; c < left.channels; ++c) {
                    cost += std::abs(static_cast<double>(left.at(x, y, c)) - static_cast<double>(right.at(xr, y, c)));
                }
                if (params.unary_truncation > 0.0) {
                    cost = std::min(cost, params.unary_truncation);
                }
                unaries[p * labels + d] = cost;
            }
        }
    }
    std::vector<Clique> cliques;
    append_grid_pairs(w, hgt, cliques, [&](std::int32_t p, std::int32_t q) {
        double grad = 0.0;
        const int px = p % w, py = p / w, qx = q % w, qy = q / w;
        for (int c = 0; c < left.channels; ++c) {
            grad += std::abs(static_cast<double>(left.at(px, py, c)) - static_cast<double>(left.at(qx, qy, c)));
        }
        return grad < params.gradient_threshold ? params.weight_low_gradient : params.weight_high_gradient;
    });
    append_region_cliques(superpixels, intensity, std::vector<bool>{}, params.sigma, cliques);
    return EnergyModel(n, labels, std::move(unaries), std::move(cliques),
                       DiameterPotential{LabelMetric::truncated_linear(labels, params.lambda, params.truncation), nullptr});
}

double level_value(Label label, int levels) {
    return levels <= 1 ? 0.0 : static_cast<double>(label) * 255.0 / static_cast<double>(levels - 1);
}

EnergyModel build_inpaint(const Raster& image, const std::optional<Raster>& mask, const Raster& superpixels,
                          const InpaintParams& params) {
    if (image.channels != 1) {
        throw InvalidInput("inpainting needs a grayscale (P5) image");
    }
    if (params.levels < 1 || params.levels > 256) {
        throw InvalidInput("levels must lie in [1, 256]");
    }
    if (!(params.sigma > 0.0)) {
        throw InvalidInput("sigma must be positive");
    }
    if (mask && (mask->width != image.width || mask->height != image.height || mask->channels != 1)) {
        throw InvalidInput("mask must be a grayscale raster with the image's dimensions");
    }
    check_regions(superpixels, image.width, image.height);
    const std::size_t n = image.num_pixels();
    const auto labels = static_cast<std::size_t>(params.levels);
    std::vector<double> unaries(n * labels, 0.0);
    std::vector<double> intensity(n);
    std::vector<bool> observed(n, true);
    for (std::size_t p = 0; p < n; ++p) {
        intensity[p] = image.samples[p] * (255.0 / image.maxval);
        observed[p] = !mask || mask->samples[p] == 0;
        if (!observed[p]) {
            continue;
        }
        for (std::size_t l = 0; l < labels; ++l) {
            const double diff = level_value(static_cast<Label>(l), params.levels) - intensity[p];
            unaries[p * labels + l] = diff * diff;
        }
    }
    std::vector<Clique> cliques;
    append_grid_pairs(image.width, image.height, cliques, [&](std::int32_t, std::int32_t) { return params.pairwise_weight; });
    append_region_cliques(superpixels, intensity, observed, params.sigma, cliques);
    return EnergyModel(n, labels, std::move(unaries), std::move(cliques),
                       DiameterPotential{LabelMetric::truncated_linear(labels, params.lambda, params.truncation), nullptr});
}

Raster block_superpixels(int width, int height, int block) {
    if (width <= 0 || height <= 0 || block <= 0) {
        throw InvalidInput("block partition needs positive sizes");
    }
    Raster r;
    r.width = width;
    r.height = height;
    r.channels = 1;
    const int tiles_x = (width + block - 1) / block;
    const int tiles = tiles_x * ((height + block - 1) / block);
    r.maxval = std::max(1, std::min(65535, tiles - 1));
    if (tiles > 65536) {
        throw InvalidInput("too many tiles for a 16-bit region map");
    }
    r.samples.resize(r.num_pixels());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            r.samples[pixel(x, y, width)] = static_cast<std::uint16_t>((y / block) * tiles_x + x / block);
        }
    }
    return r;
}

Raster labeling_to_raster(std::span<const Label> labeling, int width, int height, std::size_t num_labels) {
    if (labeling.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw InvalidInput("labeling size does not match raster dimensions");
    }
    Raster r;
    r.width = width;
    r.height = height;
    r.channels = 1;
    r.maxval = 255;
    r.samples.resize(labeling.size());
    for (std::size_t i = 0; i < labeling.size(); ++i) {
        r.samples[i] = static_cast<std::uint16_t>(std::lround(level_value(labeling[i], static_cast<int>(num_labels))));
    }
    return r;
}

std::string labeling_to_text(std::span<const Label> labeling) {
    std::string out;
    for (Label l : labeling) {
        out += std::to_string(l);
        out += '\n';
    }
    return out;
}

}  // namespace parsimony
