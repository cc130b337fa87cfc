#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "parsimony/parsimony.h"

namespace {

struct Fail {
    int code;
};

void check(pl_status s) {
    if (s != PL_OK) {
        std::cerr << "error: " << pl_last_error() << "\n";
        throw Fail{static_cast<int>(s)};
    }
}

struct CString {
    char* p = nullptr;
    ~CString() { pl_string_free(p); }
    std::string str() const { return p == nullptr ? std::string() : std::string(p); }
};

using ProblemPtr = std::unique_ptr<pl_problem, decltype(&pl_problem_free)>;
using ReportPtr = std::unique_ptr<pl_report, decltype(&pl_report_free)>;

// "-" means standard output.
void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
        std::cerr << "error: cannot write " << path << "\n";
        throw Fail{PL_INPUT_ERROR};
    }
}

struct SolveFlags {
    std::size_t k = 10;
    std::uint64_t seed = 0;
    std::size_t threads = 1;
    std::string report;
    std::string labeling;
    bool timings = false;

    void add_to(CLI::App* app) {
        app->add_option("--k", k, "Trees in the FRT mixture")->check(CLI::PositiveNumber);
        app->add_option("--seed", seed, "Random seed");
        app->add_option("--threads", threads, "Worker threads for mixture components")->check(CLI::PositiveNumber);
        app->add_option("--report", report, "Write the JSON report here ('-' for stdout)");
        app->add_option("--labeling", labeling, "Write the labeling, one label per line");
        app->add_flag("--timings", timings, "Include stage timings in the report (not deterministic)");
    }

    pl_solve_options options() const {
        pl_solve_options o;
        pl_solve_options_init(&o);
        o.mixture_size = k;
        o.seed = seed;
        o.threads = threads;
        return o;
    }

    void emit(const pl_report* rep) const {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", pl_report_energy(rep));
        (report == "-" ? std::cerr : std::cout) << "energy " << buf << "\n";
        if (!report.empty()) {
            CString json;
            check(pl_report_to_json(rep, timings ? 1 : 0, &json.p));
            write_text(report, json.str() + "\n");
        }
        if (!labeling.empty()) {
            CString text;
            check(pl_report_labeling_text(rep, &text.p));
            write_text(labeling, text.str());
        }
    }
};

const char* optional_path(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

// Missing superpixel maps fall back to block tiles.
const char* superpixel_path(const std::string& s, int block) {
    if (s.empty()) {
        return nullptr;
    }
    if (!std::filesystem::exists(s)) {
        std::cerr << "warning: superpixel map " << s << " not found; using " << block << "x" << block
                  << " block partition\n";
        return nullptr;
    }
    return s.c_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parsimonious labeling solver"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a TOML/INI file (flags take precedence)");
    app.option_defaults()->always_capture_default();

    // solve
    auto* solve = app.add_subcommand("solve", "Minimize the energy of a problem file");
    std::string problem_path;
    bool oracle = false;
    SolveFlags solve_flags;
    solve->add_option("problem", problem_path, "Problem JSON")->required()->check(CLI::ExistingFile);
    solve->add_flag("--oracle", oracle, "Compare against the exhaustive optimum (small instances)");
    solve_flags.add_to(solve);

    // synth-bench
    auto* synth = app.add_subcommand("synth-bench", "Sweep w_c on a synthetic lattice and print CSV");
    pl_synth_options so;
    pl_synth_options_init(&so);
    std::vector<double> weights{0, 1, 2, 3, 4, 5, 100};
    std::string synth_case = "diversity";
    std::string csv_path = "-";
    SolveFlags synth_flags;
    synth->add_option("--width", so.width, "Grid width")->check(CLI::PositiveNumber);
    synth->add_option("--height", so.height, "Grid height")->check(CLI::PositiveNumber);
    synth->add_option("--labels", so.num_labels, "Number of labels")->check(CLI::PositiveNumber);
    synth->add_option("--window", so.window, "Clique window side")->check(CLI::PositiveNumber);
    synth->add_option("--stride", so.stride, "Window stride")->check(CLI::PositiveNumber);
    synth->add_option("--case", synth_case, "diversity: truncated linear diameter diversity; tree: random r-HST")
        ->check(CLI::IsMember({"diversity", "tree"}));
    synth->add_option("--lambda", so.lambda, "Truncated linear weight");
    synth->add_option("--truncation", so.truncation, "Truncated linear M");
    synth->add_option("--r", so.r, "r of the random r-HST");
    synth->add_option("--depth", so.tree_depth, "Depth of the random r-HST");
    synth->add_option("--seed", so.seed, "Instance and solver seed");
    synth->add_option("--weights", weights, "w_c values")->delimiter(',');
    synth->add_option("--k", synth_flags.k, "Trees in the FRT mixture")->check(CLI::PositiveNumber);
    synth->add_option("--threads", synth_flags.threads, "Worker threads")->check(CLI::PositiveNumber);
    synth->add_option("--output", csv_path, "CSV destination ('-' for stdout)");

    // stereo
    auto* stereo = app.add_subcommand("stereo", "Stereo matching on a rectified PPM/PGM pair");
    std::string left, right, stereo_sp, stereo_out;
    int stereo_block = 8;
    pl_stereo_params sp;
    pl_stereo_params_init(&sp);
    SolveFlags stereo_flags;
    stereo->add_option("--left", left, "Left (reference) image")->required()->check(CLI::ExistingFile);
    stereo->add_option("--right", right, "Right image")->required()->check(CLI::ExistingFile);
    stereo->add_option("--superpixels", stereo_sp, "Region-id PGM");
    stereo->add_option("--block", stereo_block, "Tile size when no superpixel map is used")->check(CLI::PositiveNumber);
    stereo->add_option("--disparities", sp.num_disparities, "Number of disparity labels")->check(CLI::PositiveNumber);
    stereo->add_option("--lambda", sp.lambda, "Truncated linear weight");
    stereo->add_option("--truncation", sp.truncation, "Truncated linear M");
    stereo->add_option("--sigma", sp.sigma, "Superpixel weight scale");
    stereo->add_option("--unary-truncation", sp.unary_truncation, "Cap on unaries (<= 0 disables)");
    stereo->add_option("--gradient-threshold", sp.gradient_threshold, "Pairwise weight threshold");
    stereo->add_option("--weight-low", sp.weight_low_gradient, "Pairwise weight below the threshold");
    stereo->add_option("--weight-high", sp.weight_high_gradient, "Pairwise weight otherwise");
    stereo->add_option("--output", stereo_out, "Disparity PGM (labels scaled to 0..255)");
    stereo_flags.add_to(stereo);

    // inpaint
    auto* inpaint = app.add_subcommand("inpaint", "Denoise and inpaint a grayscale PGM");
    std::string image, mask, inpaint_sp, inpaint_out;
    int inpaint_block = 8;
    pl_inpaint_params ip;
    pl_inpaint_params_init(&ip);
    SolveFlags inpaint_flags;
    inpaint->add_option("--image", image, "Grayscale image")->required()->check(CLI::ExistingFile);
    inpaint->add_option("--mask", mask, "PGM, nonzero marks obscured pixels")->check(CLI::ExistingFile);
    inpaint->add_option("--superpixels", inpaint_sp, "Region-id PGM");
    inpaint->add_option("--block", inpaint_block, "Tile size when no superpixel map is used")->check(CLI::PositiveNumber);
    inpaint->add_option("--levels", ip.levels, "Intensity labels spanning 0..255")->check(CLI::Range(1, 256));
    inpaint->add_option("--lambda", ip.lambda, "Truncated linear weight");
    inpaint->add_option("--truncation", ip.truncation, "Truncated linear M");
    inpaint->add_option("--sigma", ip.sigma, "Superpixel weight scale");
    inpaint->add_option("--pairwise-weight", ip.pairwise_weight, "Weight of 4-neighbour cliques");
    inpaint->add_option("--output", inpaint_out, "Restored PGM");
    inpaint_flags.add_to(inpaint);

    // validate
    auto* validate = app.add_subcommand("validate", "Check diversity, metric, or tree axioms of a file");
    std::string validate_path;
    validate->add_option("file", validate_path, "Problem or tree JSON")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // help requests exit 0, usage errors are input errors
        const int code = app.exit(e);
        return code == 0 ? 0 : PL_INPUT_ERROR;
    }

    try {
        if (solve->parsed()) {
            pl_problem* raw = nullptr;
            check(pl_problem_load(problem_path.c_str(), &raw));
            ProblemPtr problem(raw, &pl_problem_free);
            const auto options = solve_flags.options();
            pl_report* rr = nullptr;
            check(pl_solve(problem.get(), &options, &rr));
            ReportPtr report(rr, &pl_report_free);
            solve_flags.emit(report.get());
            if (oracle) {
                pl_oracle_check oc;
                check(pl_oracle_check_report(problem.get(), report.get(), &oc));
                std::printf("oracle optimum %.17g\nratio %.17g\nbound %.17g (factor %.17g) %s\n", oc.optimum,
                            oc.ratio, oc.bound_rhs, oc.bound_factor, oc.bound_holds ? "holds" : "VIOLATED");
                if (!oc.bound_holds) {
                    return PL_SOLVER_FAILURE;
                }
            }
        } else if (synth->parsed()) {
            so.use_tree = synth_case == "tree" ? 1 : 0;
            so.weights = weights.data();
            so.num_weights = weights.size();
            synth_flags.seed = so.seed;
            const auto options = synth_flags.options();
            CString csv;
            check(pl_synth_bench(&so, &options, &csv.p));
            write_text(csv_path, csv.str());
        } else if (stereo->parsed()) {
            const auto options = stereo_flags.options();
            pl_report* rr = nullptr;
            check(pl_stereo(left.c_str(), right.c_str(), superpixel_path(stereo_sp, stereo_block), stereo_block, &sp,
                            &options, optional_path(stereo_out), &rr));
            ReportPtr report(rr, &pl_report_free);
            stereo_flags.emit(report.get());
        } else if (inpaint->parsed()) {
            const auto options = inpaint_flags.options();
            pl_report* rr = nullptr;
            check(pl_inpaint(image.c_str(), optional_path(mask), superpixel_path(inpaint_sp, inpaint_block),
                             inpaint_block, &ip, &options, optional_path(inpaint_out), &rr));
            ReportPtr report(rr, &pl_report_free);
            inpaint_flags.emit(report.get());
        } else if (validate->parsed()) {
            int ok = 0;
            CString text;
            check(pl_validate_file(validate_path.c_str(), &ok, &text.p));
            std::cout << text.str();
            return ok ? PL_OK : PL_INPUT_ERROR;
        }
    } catch (const Fail& f) {
        return f.code;
    }
    return PL_OK;
}
