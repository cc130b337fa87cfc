#include "parsimony/parsimony.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "parsimony/diversity.hpp"
#include "parsimony/energy_model.hpp"
#include "parsimony/oracle.hpp"
#include "parsimony/problem_io.hpp"
#include "parsimony/raster.hpp"
#include "parsimony/solver.hpp"
#include "parsimony/tasks.hpp"

using namespace parsimony;

struct pl_problem {
    std::shared_ptr<const EnergyModel> model;
};

struct pl_report {
    std::shared_ptr<const EnergyModel> model;
    SolveReport report;
};

namespace {

thread_local std::string g_last_error;

void set_error(std::string message) { g_last_error = std::move(message); }

// Runs fn, translating exceptions into status codes.
template <class F>
pl_status guarded(F&& fn) {
    try {
        g_last_error.clear();
        fn();
        return PL_OK;
    } catch (const InvalidInput& e) {
        set_error(e.what());
    } catch (const SizeLimitExceeded& e) {
        set_error(e.what());
    } catch (const nlohmann::json::exception& e) {
        set_error(e.what());
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return PL_SOLVER_FAILURE;
    } catch (const std::exception& e) {
        set_error(e.what());
        return PL_SOLVER_FAILURE;
    }
    return PL_INPUT_ERROR;
}

char* copy_string(const std::string& s) {
    auto* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void require(const void* p, const char* what) {
    if (p == nullptr) {
        throw InvalidInput(std::string(what) + ": null pointer");
    }
}

ParsimoniousOptions to_options(const pl_solve_options* options) {
    pl_solve_options o;
    pl_solve_options_init(&o);
    if (options != nullptr) {
        o = *options;
    }
    if (o.mixture_size == 0) {
        throw InvalidInput("mixture_size must be at least 1");
    }
    return {o.mixture_size, o.seed, o.threads == 0 ? 1 : o.threads};
}

// The report's energy must match a fresh evaluation of its labeling.
void verify_report(const pl_report& r) {
    const double e = evaluate_energy(*r.model, r.report.labeling);
    if (std::abs(e - r.report.energy) > 1e-9 * std::max(1.0, std::abs(e))) {
        throw std::runtime_error("reported energy " + std::to_string(r.report.energy) +
                                 " does not match re-evaluated energy " + std::to_string(e));
    }
}

pl_report* make_report(std::shared_ptr<const EnergyModel> model, const ParsimoniousOptions& options) {
    auto r = std::make_unique<pl_report>();
    r->report = solve(*model, options);
    r->model = std::move(model);
    verify_report(*r);
    return r.release();
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Raster load_regions(const char* superpixels, int block, int width, int height) {
    if (superpixels != nullptr) {
        return read_pnm(superpixels);
    }
    return block_superpixels(width, height, block);
}

}  // namespace

extern "C" {

const char* pl_last_error(void) { return g_last_error.c_str(); }

void pl_string_free(char* s) { std::free(s); }

pl_status pl_problem_load(const char* path, pl_problem** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = nullptr;
        auto p = std::make_unique<pl_problem>();
        p->model = std::make_shared<const EnergyModel>(load_problem(path));
        *out = p.release();
    });
}

pl_status pl_problem_parse(const char* json, size_t length, pl_problem** out) {
    return guarded([&] {
        require(json, "json");
        require(out, "out");
        *out = nullptr;
        auto p = std::make_unique<pl_problem>();
        p->model = std::make_shared<const EnergyModel>(parse_problem(std::string_view(json, length)));
        *out = p.release();
    });
}

void pl_problem_free(pl_problem* problem) { delete problem; }

size_t pl_problem_num_variables(const pl_problem* problem) {
    return problem == nullptr ? 0 : problem->model->num_variables();
}

size_t pl_problem_num_labels(const pl_problem* problem) {
    return problem == nullptr ? 0 : problem->model->num_labels();
}

pl_status pl_problem_to_json(const pl_problem* problem, char** out) {
    return guarded([&] {
        require(problem, "problem");
        require(out, "out");
        *out = copy_string(problem_to_json(*problem->model));
    });
}

pl_status pl_problem_energy(const pl_problem* problem, const int32_t* labeling, size_t length, double* out) {
    return guarded([&] {
        require(problem, "problem");
        require(out, "out");
        if (length > 0) {
            require(labeling, "labeling");
        }
        *out = evaluate_energy(*problem->model, std::span<const Label>(labeling, length));
    });
}

void pl_solve_options_init(pl_solve_options* options) {
    if (options != nullptr) {
        options->mixture_size = 10;
        options->seed = 0;
        options->threads = 1;
    }
}

pl_status pl_solve(const pl_problem* problem, const pl_solve_options* options, pl_report** out) {
    return guarded([&] {
        require(problem, "problem");
        require(out, "out");
        *out = nullptr;
        *out = make_report(problem->model, to_options(options));
    });
}

void pl_report_free(pl_report* report) { delete report; }

double pl_report_energy(const pl_report* report) { return report == nullptr ? NAN : report->report.energy; }

size_t pl_report_labeling(const pl_report* report, const int32_t** data) {
    if (report == nullptr) {
        return 0;
    }
    if (data != nullptr) {
        *data = report->report.labeling.data();
    }
    return report->report.labeling.size();
}

pl_status pl_report_to_json(const pl_report* report, int include_timings, char** out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        verify_report(*report);
        *out = copy_string(report_to_json(report->report, ReportOptions{include_timings != 0}));
    });
}

pl_status pl_report_labeling_text(const pl_report* report, char** out) {
    return guarded([&] {
        require(report, "report");
        require(out, "out");
        *out = copy_string(labeling_to_text(report->report.labeling));
    });
}

pl_status pl_oracle_check_report(const pl_problem* problem, const pl_report* report, pl_oracle_check* out) {
    return guarded([&] {
        require(problem, "problem");
        require(report, "report");
        require(out, "out");
        const auto& model = *problem->model;
        const auto& rep = report->report;
        const auto best = oracle::exhaustive_minimize(model);
        double factor = rep.bounds.bound2;
        if (rep.algorithm == "alpha_expansion") {
            factor = rep.pn_potts_bound;
        } else if (rep.algorithm == "hierarchical") {
            factor = rep.bounds.bound1;
        }
        const double e = evaluate_energy(model, rep.labeling);
        out->optimum = best.energy;
        out->optimum_unary = best.unary_term;
        out->optimum_clique = best.clique_term;
        out->ratio = best.energy == 0.0 ? (e == 0.0 ? 1.0 : INFINITY) : e / best.energy;
        out->bound_factor = factor;
        out->bound_rhs = best.unary_term + factor * best.clique_term;
        out->bound_holds = e <= out->bound_rhs + 1e-9 * std::max(1.0, std::abs(out->bound_rhs)) ? 1 : 0;
    });
}

void pl_synth_options_init(pl_synth_options* options) {
    if (options == nullptr) {
        return;
    }
    const GridSpec g;
    options->width = g.width;
    options->height = g.height;
    options->num_labels = g.num_labels;
    options->window = g.window;
    options->stride = g.stride;
    options->use_tree = 0;
    options->lambda = g.lambda;
    options->truncation = g.truncation;
    options->r = g.r;
    options->tree_depth = g.tree_depth;
    options->seed = g.seed;
    options->weights = nullptr;
    options->num_weights = 0;
}

pl_status pl_synth_bench(const pl_synth_options* synth, const pl_solve_options* solve_opts, char** csv) {
    return guarded([&] {
        require(synth, "synth");
        require(csv, "csv");
        static const double kDefaultWeights[] = {0, 1, 2, 3, 4, 5, 100};
        std::span<const double> weights(kDefaultWeights);
        if (synth->weights != nullptr) {
            weights = {synth->weights, synth->num_weights};
        }
        const auto options = to_options(solve_opts);
        GridSpec spec;
        spec.width = synth->width;
        spec.height = synth->height;
        spec.num_labels = synth->num_labels;
        spec.window = synth->window;
        spec.stride = synth->stride;
        spec.potential = synth->use_tree != 0 ? SyntheticPotential::kRandomRHst : SyntheticPotential::kTruncatedLinear;
        spec.lambda = synth->lambda;
        spec.truncation = synth->truncation;
        spec.r = synth->r;
        spec.tree_depth = synth->tree_depth;
        spec.seed = synth->seed;
        std::string out = "schema_version,w_c,energy,time_ms,unique_labels\n";
        for (double w : weights) {
            if (!std::isfinite(w) || w < 0.0) {
                throw InvalidInput("w_c values must be finite and non-negative");
            }
            spec.weight = w;
            const EnergyModel model = generate_synthetic(spec);
            const auto start = std::chrono::steady_clock::now();
            const auto rep = solve(model, options);
            const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
            const std::set<Label> used(rep.labeling.begin(), rep.labeling.end());
            char time_buf[32];
            std::snprintf(time_buf, sizeof time_buf, "%.3f", ms);
            out += "1," + format_double(w) + "," + format_double(rep.energy) + "," + time_buf + "," +
                   std::to_string(used.size()) + "\n";
        }
        *csv = copy_string(out);
    });
}

void pl_stereo_params_init(pl_stereo_params* params) {
    if (params == nullptr) {
        return;
    }
    const StereoParams s;
    params->num_disparities = s.num_disparities;
    params->lambda = s.lambda;
    params->truncation = s.truncation;
    params->sigma = s.sigma;
    params->unary_truncation = s.unary_truncation;
    params->gradient_threshold = s.gradient_threshold;
    params->weight_low_gradient = s.weight_low_gradient;
    params->weight_high_gradient = s.weight_high_gradient;
}

void pl_inpaint_params_init(pl_inpaint_params* params) {
    if (params == nullptr) {
        return;
    }
    const InpaintParams s;
    params->levels = s.levels;
    params->lambda = s.lambda;
    params->truncation = s.truncation;
    params->sigma = s.sigma;
    params->pairwise_weight = s.pairwise_weight;
}

pl_status pl_stereo(const char* left, const char* right, const char* superpixels, int block,
                    const pl_stereo_params* params, const pl_solve_options* options, const char* output_raster,
                    pl_report** out) {
    return guarded([&] {
        require(left, "left");
        require(right, "right");
        require(out, "out");
        *out = nullptr;
        pl_stereo_params p;
        pl_stereo_params_init(&p);
        if (params != nullptr) {
            p = *params;
        }
        const StereoParams sp{p.num_disparities,   p.lambda,
                              p.truncation,        p.sigma,
                              p.unary_truncation,  p.gradient_threshold,
                              p.weight_low_gradient, p.weight_high_gradient};
        const Raster l = read_pnm(left);
        const Raster r = read_pnm(right);
        const Raster regions = load_regions(superpixels, block, l.width, l.height);
        auto model = std::make_shared<const EnergyModel>(build_stereo(l, r, regions, sp));
        std::unique_ptr<pl_report> rep(make_report(model, to_options(options)));
        if (output_raster != nullptr) {
            write_pnm(output_raster, labeling_to_raster(rep->report.labeling, l.width, l.height, model->num_labels()));
        }
        *out = rep.release();
    });
}

pl_status pl_inpaint(const char* image, const char* mask, const char* superpixels, int block,
                     const pl_inpaint_params* params, const pl_solve_options* options, const char* output_raster,
                     pl_report** out) {
    return guarded([&] {
        require(image, "image");
        require(out, "out");
        *out = nullptr;
        pl_inpaint_params p;
        pl_inpaint_params_init(&p);
        if (params != nullptr) {
            p = *params;
        }
        const InpaintParams ip{p.levels, p.lambda, p.truncation, p.sigma, p.pairwise_weight};
        const Raster img = read_pnm(image);
        std::optional<Raster> m;
        if (mask != nullptr) {
            m = read_pnm(mask);
        }
        const Raster regions = load_regions(superpixels, block, img.width, img.height);
        auto model = std::make_shared<const EnergyModel>(build_inpaint(img, m, regions, ip));
        std::unique_ptr<pl_report> rep(make_report(model, to_options(options)));
        if (output_raster != nullptr) {
            write_pnm(output_raster, labeling_to_raster(rep->report.labeling, img.width, img.height, model->num_labels()));
        }
        *out = rep.release();
    });
}

pl_status pl_validate_file(const char* path, int* ok, char** text) {
    return guarded([&] {
        require(path, "path");
        require(ok, "ok");
        require(text, "text");
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            throw InvalidInput(std::string("cannot open ") + path);
        }
        std::stringstream buf;
        buf << in.rdbuf();
        const std::string doc = buf.str();
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(doc);
        } catch (const nlohmann::json::parse_error& e) {
            throw InvalidInput(std::string("document: malformed JSON (") + e.what() + ")");
        }
        std::ostringstream report;
        bool pass = true;
        try {
            if (j.is_object() && j.contains("nodes")) {
                const RHst tree = parse_tree(doc);
                report << "tree: " << tree.num_nodes() << " nodes, " << tree.num_labels() << " labels, r = " << tree.r()
                       << "\n";
                report << "r-HST invariants: ok\n";
            } else {
                const EnergyModel model = parse_problem(doc);
                report << "problem: " << model.num_variables() << " variables, " << model.num_labels() << " labels, "
                       << model.cliques().size() << " cliques\n";
                if (const auto* d = std::get_if<DiversityPotential>(&model.potential())) {
                    const auto axioms = validate_diversity_axioms(d->diversity);
                    report << "diversity axioms: " << (axioms.ok() ? "ok" : "violated") << " ("
                           << axioms.checks << " checks, " << (axioms.exhaustive ? "exhaustive" : "sampled") << ")\n";
                    for (const auto& v : axioms.violations) {
                        report << "  " << v.axiom << ": " << v.detail << "\n";
                    }
                    pass = axioms.ok();
                    if (pass) {
                        induced_metric(d->diversity);
                        report << "induced metric: ok\n";
                    }
                } else if (std::holds_alternative<DiameterPotential>(model.potential())) {
                    report << "metric axioms: ok\n";
                } else {
                    report << "P^n Potts parameters: ok\n";
                }
            }
        } catch (const AxiomViolation& e) {
            pass = false;
            report << "axiom violated (" << e.axiom() << "): " << e.what() << "\n";
        }
        *ok = pass ? 1 : 0;
        *text = copy_string(report.str());
    });
}

}  // extern "C"
