#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "generators.hpp"
#include "parsimony/problem_io.hpp"
#include "parsimony/raster.hpp"
#include "parsimony/solver.hpp"
#include "parsimony/tasks.hpp"

using namespace parsimony;

namespace {

Raster gray(int w, int h, std::uint16_t value) {
    Raster r;
    r.width = w;
    r.height = h;
    r.channels = 1;
    r.maxval = 255;
    r.samples.assign(static_cast<std::size_t>(w * h), value);
    return r;
}

std::string expect_invalid(const std::string& json) {
    try {
        parse_problem(json);
    } catch (const InvalidInput& e) {
        return e.what();
    }
    ADD_FAILURE() << "accepted: " << json;
    return {};
}

}  // namespace

TEST(Synthetic, CliqueCount) {
    GridSpec spec;
    spec.width = spec.height = 100;
    spec.window = 10;
    spec.num_labels = 2;
    const auto m = generate_synthetic(spec);
    EXPECT_EQ(m.cliques().size(), 8281u);
    for (const auto& c : m.cliques()) {
        EXPECT_EQ(c.members.size(), 100u);
    }
}

TEST(Synthetic, DeterministicAndBounded) {
    GridSpec spec;
    spec.seed = 17;
    const auto a = generate_synthetic(spec);
    const auto b = generate_synthetic(spec);
    EXPECT_EQ(problem_to_json(a), problem_to_json(b));
    for (double u : a.unaries()) {
        EXPECT_GE(u, 0.0);
        EXPECT_LE(u, 100.0);
    }
    spec.potential = SyntheticPotential::kRandomRHst;
    EXPECT_EQ(problem_to_json(generate_synthetic(spec)), problem_to_json(generate_synthetic(spec)));
    spec.window = 30;
    EXPECT_THROW(generate_synthetic(spec), InvalidInput);
}

TEST(Synthetic, ZeroWeightIsUnaryArgmin) {
    GridSpec spec;
    spec.weight = 0.0;
    const auto m = generate_synthetic(spec);
    const auto r = solve(m, {3, 0, 1});
    for (std::size_t i = 0; i < m.num_variables(); ++i) {
        for (Label l = 0; l < static_cast<Label>(m.num_labels()); ++l) {
            EXPECT_LE(m.unary(i, r.labeling[i]), m.unary(i, l));
        }
    }
}

TEST(Synthetic, HeavyWeightUsesOneLabel) {
    for (auto kind : {SyntheticPotential::kTruncatedLinear, SyntheticPotential::kRandomRHst}) {
        GridSpec spec;
        spec.weight = 100.0;
        spec.potential = kind;
        const auto r = solve(generate_synthetic(spec), {10, 0, 1});
        const std::set<Label> used(r.labeling.begin(), r.labeling.end());
        EXPECT_EQ(used.size(), 1u);
    }
}

TEST(Stereo, IdenticalImagesZeroUnaryAtZero) {
    Raster img;
    img.width = 6;
    img.height = 4;
    img.channels = 3;
    img.maxval = 255;
    SplitMix64 rng(2);
    for (int i = 0; i < 6 * 4 * 3; ++i) {
        img.samples.push_back(static_cast<std::uint16_t>(rng.below(256)));
    }
    StereoParams p;
    p.num_disparities = 3;
    const auto m = build_stereo(img, img, block_superpixels(6, 4, 2), p);
    for (std::size_t i = 0; i < m.num_variables(); ++i) {
        EXPECT_EQ(m.unary(i, 0), 0.0);
    }
    // 4-neighbour pairs plus one clique per 2x2 tile
    EXPECT_EQ(m.cliques().size(), static_cast<std::size_t>(5 * 4 + 6 * 3 + 6));
}

TEST(Stereo, UniformSuperpixelWeightIsOne) {
    const Raster img = gray(4, 4, 90);
    StereoParams p;
    p.num_disparities = 2;
    const auto m = build_stereo(img, img, block_superpixels(4, 4, 4), p);
    EXPECT_DOUBLE_EQ(m.cliques().back().weight, 1.0);
    EXPECT_EQ(m.cliques().back().members.size(), 16u);
    // flat image: every pairwise weight is the low-gradient one
    EXPECT_DOUBLE_EQ(m.cliques().front().weight, 2.0);
}

TEST(Stereo, TsukubaStyleParameters) {
    const Raster img = gray(3, 3, 10);
    StereoParams p;
    p.num_disparities = 12;
    p.lambda = 20;
    p.sigma = 100;
    p.truncation = 10;
    const auto m = build_stereo(img, img, block_superpixels(3, 3, 3), p);
    const auto& metric = std::get<DiameterPotential>(m.potential()).metric;
    EXPECT_DOUBLE_EQ(metric(0, 11), 200.0);
    EXPECT_DOUBLE_EQ(metric(0, 3), 60.0);
    EXPECT_THROW(build_stereo(img, gray(2, 3, 0), block_superpixels(3, 3, 3), p), InvalidInput);
}

TEST(Inpaint, Unaries) {
    Raster img = gray(2, 1, 100);
    Raster mask = gray(2, 1, 0);
    mask.samples[1] = 255;
    const auto m = build_inpaint(img, mask, block_superpixels(2, 1, 2), InpaintParams{});
    EXPECT_EQ(m.num_labels(), 256u);
    EXPECT_DOUBLE_EQ(m.unary(0, 100), 0.0);
    EXPECT_DOUBLE_EQ(m.unary(0, 110), 100.0);
    EXPECT_DOUBLE_EQ(m.unary(1, 7), 0.0);
    const auto& metric = std::get<DiameterPotential>(m.potential()).metric;
    EXPECT_DOUBLE_EQ(metric(0, 255), 40.0 * 40);
}

TEST(Inpaint, FullyObscuredZeroWeightIsFlat) {
    Raster img = gray(3, 2, 50);
    img.samples = {0, 255, 0, 255, 7, 9};
    const Raster mask = gray(3, 2, 1);
    InpaintParams p;
    p.levels = 4;
    const auto built = build_inpaint(img, mask, block_superpixels(3, 2, 3), p);
    std::vector<Clique> cliques = built.cliques();
    for (auto& c : cliques) {
        c.weight = 0.0;
    }
    const auto m = built.with_cliques(cliques);
    SplitMix64 rng(1);
    for (int t = 0; t < 20; ++t) {
        Labeling x(6);
        for (auto& l : x) {
            l = static_cast<Label>(rng.below(4));
        }
        EXPECT_DOUBLE_EQ(evaluate_energy(m, x), 0.0);
    }
}

TEST(Inpaint, RejectsColour) {
    Raster rgb;
    rgb.width = rgb.height = 1;
    rgb.channels = 3;
    rgb.maxval = 255;
    rgb.samples = {1, 2, 3};
    EXPECT_THROW(build_inpaint(rgb, std::nullopt, block_superpixels(1, 1, 1), InpaintParams{}), InvalidInput);
}

TEST(Raster, RoundTripAndComments) {
    Raster rgb;
    rgb.width = 3;
    rgb.height = 2;
    rgb.channels = 3;
    rgb.maxval = 255;
    for (int i = 0; i < 18; ++i) {
        rgb.samples.push_back(static_cast<std::uint16_t>(i * 13));
    }
    EXPECT_EQ(parse_pnm(encode_pnm(rgb)).samples, rgb.samples);
    const std::string with_comment = std::string("P5\n# made by hand\n2 1\n# depth\n255\n") + '\x07' + '\xff';
    const Raster g = parse_pnm(with_comment);
    EXPECT_EQ(g.samples, (std::vector<std::uint16_t>{7, 255}));
    EXPECT_EQ(encode_pnm(g).find('#'), std::string::npos);
    EXPECT_THROW(parse_pnm("P3\n1 1\n255\n0 0 0\n"), InvalidInput);
    EXPECT_THROW(parse_pnm("P5\n2 2\n255\n\x01"), InvalidInput);
}

TEST(Raster, BlocksAndLabelImages) {
    const Raster b = block_superpixels(5, 3, 2);
    EXPECT_EQ(b.samples[0], 0);
    EXPECT_EQ(b.samples[4], 2);
    EXPECT_EQ(b.samples[2 * 5 + 4], 5);
    const Labeling x{0, 1, 2, 3};
    const Raster r = labeling_to_raster(x, 2, 2, 4);
    EXPECT_EQ(r.samples, (std::vector<std::uint16_t>{0, 85, 170, 255}));
    EXPECT_EQ(labeling_to_text(x), "0\n1\n2\n3\n");
}

TEST(ProblemIo, RoundTrip) {
    SplitMix64 rng(9);
    for (int t = 0; t < 10; ++t) {
        const auto m = testgen::random_table_model(rng);
        EXPECT_EQ(problem_to_json(parse_problem(problem_to_json(m))), problem_to_json(m));
        const auto tm = testgen::random_tree_model(rng);
        EXPECT_EQ(problem_to_json(parse_problem(problem_to_json(tm))), problem_to_json(tm));
    }
}

TEST(ProblemIo, ErrorsNameTheField) {
    const std::string base_head = R"({"num_variables": 2, "num_labels": 2, "unaries": [0, 1, 1, 0], )";
    EXPECT_NE(expect_invalid(base_head + R"("cliques": [{"members": [0, 1], "weight": -1}], "potential": {"kind": "pn_potts", "gamma": [0, 0], "gamma_max": 1}})")
                  .find("cliques[0].weight"),
              std::string::npos);
    EXPECT_NE(expect_invalid(base_head + R"("cliques": [], "potential": {"kind": "nope"}})").find("potential.kind"),
              std::string::npos);
    EXPECT_NE(expect_invalid(R"({"num_labels": 2})").find("num_variables"), std::string::npos);
    EXPECT_NE(expect_invalid("{\"num_variables\": ").find("malformed JSON"), std::string::npos);
    EXPECT_NE(expect_invalid(base_head + R"("cliques": [], "potential": {"kind": "diameter_metric", "metric": {"type": "matrix", "matrix": [[0, 1], [2, 0]]}}})")
                  .find("potential.metric"),
              std::string::npos);
}

TEST(ProblemIo, ReportIsDeterministic) {
    const auto m = generate_synthetic(GridSpec{});
    const auto a = solve(m, {4, 3, 1});
    const auto b = solve(m, {4, 3, 1});
    EXPECT_EQ(report_to_json(a), report_to_json(b));
    EXPECT_EQ(report_to_json(a).find("timings"), std::string::npos);
    EXPECT_NE(report_to_json(a, ReportOptions{true}).find("timings_ms"), std::string::npos);
}
