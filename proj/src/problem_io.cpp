#include "parsimony/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace parsimony {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw InvalidInput(field + ": " + what); }

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) {
        fail(path, "expected an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(path.empty() ? key : path + "." + key, "missing field");
    }
    return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    return v.get<double>();
}

std::int64_t as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return v.get<std::int64_t>();
}

std::vector<double> as_numbers(const json& v, const std::string& path) {
    if (!v.is_array()) {
        fail(path, "expected an array of numbers");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

RHst tree_from_json(const json& doc, const std::string& path) {
    const double r = as_number(require(doc, "r", path), join(path, "r"));
    const json& nodes = require(doc, "nodes", path);
    if (!nodes.is_array() || nodes.empty()) {
        fail(join(path, "nodes"), "expected a non-empty array");
    }
    std::vector<NodeId> parents;
    std::vector<double> edges;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string np = join(path, "nodes") + "[" + std::to_string(i) + "]";
        const json& n = nodes[i];
        parents.push_back(static_cast<NodeId>(as_integer(require(n, "parent", np), np + ".parent")));
        edges.push_back(n.contains("child_edge") ? as_number(n["child_edge"], np + ".child_edge") : 0.0);
        labels.push_back(n.contains("label") ? static_cast<Label>(as_integer(n["label"], np + ".label")) : -1);
    }
    try {
        return RHst::from_parents(parents, edges, labels, r);
    } catch (const InvalidInput& e) {
        fail(path.empty() ? "nodes" : path, e.what());
    }
}

json tree_json(const RHst& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes()) {
        json j{{"parent", n.parent}, {"child_edge", n.child_edge}};
        if (n.label >= 0) {
            j["label"] = n.label;
        }
        nodes.push_back(std::move(j));
    }
    return json{{"r", tree.r()}, {"nodes", std::move(nodes)}};
}

LabelMetric metric_from_json(const json& doc, std::size_t h, const std::string& path,
                             std::shared_ptr<const RHst>* tree_out) {
    const json& type_v = require(doc, "type", path);
    if (!type_v.is_string()) {
        fail(join(path, "type"), "expected a string");
    }
    const auto type = type_v.get<std::string>();
    try {
        if (type == "matrix") {
            const json& m = require(doc, "matrix", path);
            if (!m.is_array() || m.size() != h) {
                fail(join(path, "matrix"), "expected " + std::to_string(h) + " rows");
            }
            std::vector<double> values;
            for (std::size_t a = 0; a < h; ++a) {
                auto row = as_numbers(m[a], join(path, "matrix") + "[" + std::to_string(a) + "]");
                if (row.size() != h) {
                    fail(join(path, "matrix") + "[" + std::to_string(a) + "]", "expected " + std::to_string(h) + " columns");
                }
                values.insert(values.end(), row.begin(), row.end());
            }
            return LabelMetric::from_matrix(h, std::move(values));
        }
        if (type == "truncated_linear") {
            const double lambda = as_number(require(doc, "lambda", path), join(path, "lambda"));
            const auto trunc = as_integer(require(doc, "truncation", path), join(path, "truncation"));
            return LabelMetric::truncated_linear(h, lambda, static_cast<int>(trunc));
        }
        if (type == "uniform") {
            return LabelMetric::uniform(h, as_number(require(doc, "scale", path), join(path, "scale")));
        }
        if (type == "tree") {
            auto tree = std::make_shared<const RHst>(tree_from_json(require(doc, "tree", path), join(path, "tree")));
            if (tree->num_labels() != h) {
                fail(join(path, "tree"), "leaf count differs from num_labels");
            }
            if (tree_out != nullptr) {
                *tree_out = tree;
            }
            return tree->metric();
        }
    } catch (const AxiomViolation& e) {
        throw AxiomViolation(e.axiom(), path + ": " + e.what());
    }
    fail(join(path, "type"), "unknown metric type '" + type + "'");
}

json metric_json(const LabelMetric& m) {
    json rows = json::array();
    for (std::size_t a = 0; a < m.size(); ++a) {
        json row = json::array();
        for (std::size_t b = 0; b < m.size(); ++b) {
            row.push_back(m(static_cast<Label>(a), static_cast<Label>(b)));
        }
        rows.push_back(std::move(row));
    }
    return json{{"type", "matrix"}, {"matrix", std::move(rows)}};
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("document: malformed JSON (") + e.what() + ")");
    }
}

}  // namespace

EnergyModel parse_problem(std::string_view json_text) {
    const json doc = parse_json(json_text);
    if (!doc.is_object()) {
        fail("document", "expected a JSON object");
    }
    const auto n = as_integer(require(doc, "num_variables", ""), "num_variables");
    const auto h = as_integer(require(doc, "num_labels", ""), "num_labels");
    if (n < 0) {
        fail("num_variables", "must be non-negative");
    }
    if (h < 1) {
        fail("num_labels", "must be at least 1");
    }
    auto unaries = as_numbers(require(doc, "unaries", ""), "unaries");
    if (unaries.size() != static_cast<std::size_t>(n * h)) {
        fail("unaries", "expected " + std::to_string(n * h) + " entries, got " + std::to_string(unaries.size()));
    }
    std::vector<Clique> cliques;
    if (doc.contains("cliques")) {
        const json& cl = doc["cliques"];
        if (!cl.is_array()) {
            fail("cliques", "expected an array");
        }
        for (std::size_t c = 0; c < cl.size(); ++c) {
            const std::string cp = "cliques[" + std::to_string(c) + "]";
            Clique clique;
            const json& members = require(cl[c], "members", cp);
            if (!members.is_array()) {
                fail(cp + ".members", "expected an array");
            }
            for (std::size_t m = 0; m < members.size(); ++m) {
                clique.members.push_back(
                    static_cast<std::int32_t>(as_integer(members[m], cp + ".members[" + std::to_string(m) + "]")));
            }
            clique.weight = cl[c].contains("weight") ? as_number(cl[c]["weight"], cp + ".weight") : 1.0;
            cliques.push_back(std::move(clique));
        }
    }
    const json& pot = require(doc, "potential", "");
    const json& kind_v = require(pot, "kind", "potential");
    if (!kind_v.is_string()) {
        fail("potential.kind", "expected a string");
    }
    const auto kind = kind_v.get<std::string>();
    const auto hh = static_cast<std::size_t>(h);
    CliquePotentialSpec spec;
    if (kind == "pn_potts") {
        PnPottsPotential pn;
        pn.gamma = as_numbers(require(pot, "gamma", "potential"), "potential.gamma");
        pn.gamma_max = as_number(require(pot, "gamma_max", "potential"), "potential.gamma_max");
        spec = std::move(pn);
    } else if (kind == "diversity_table") {
        if (hh > kMaxTableLabels) {
            fail("potential.values", "explicit tables support at most " + std::to_string(kMaxTableLabels) + " labels");
        }
        auto values = as_numbers(require(pot, "values", "potential"), "potential.values");
        try {
            spec = DiversityPotential{Diversity::table(hh, std::move(values))};
        } catch (const InvalidInput& e) {
            fail("potential.values", e.what());
        }
    } else if (kind == "diameter_metric") {
        std::shared_ptr<const RHst> tree;
        auto metric = metric_from_json(require(pot, "metric", "potential"), hh, "potential.metric", &tree);
        spec = DiameterPotential{std::move(metric), std::move(tree)};
    } else {
        fail("potential.kind", "unknown kind '" + kind + "'");
    }
    try {
        return EnergyModel(static_cast<std::size_t>(n), hh, std::move(unaries), std::move(cliques), std::move(spec));
    } catch (const AxiomViolation&) {
        throw;
    } catch (const InvalidInput& e) {
        const std::string what = e.what();
        // messages from the model already lead with a field name
        if (what.rfind("cliques", 0) == 0 || what.rfind("potential", 0) == 0 || what.rfind("unaries", 0) == 0 ||
            what.rfind("num_", 0) == 0) {
            throw;
        }
        throw InvalidInput("potential: " + what);
    }
}

EnergyModel load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput(path + ": cannot open problem file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::string problem_to_json(const EnergyModel& model, int indent) {
    json doc;
    doc["num_variables"] = model.num_variables();
    doc["num_labels"] = model.num_labels();
    doc["unaries"] = std::vector<double>(model.unaries().begin(), model.unaries().end());
    json cl = json::array();
    for (const auto& c : model.cliques()) {
        cl.push_back(json{{"members", c.members}, {"weight", c.weight}});
    }
    doc["cliques"] = std::move(cl);
    if (const auto* pn = std::get_if<PnPottsPotential>(&model.potential())) {
        doc["potential"] = json{{"kind", "pn_potts"}, {"gamma", pn->gamma}, {"gamma_max", pn->gamma_max}};
    } else if (const auto* dv = std::get_if<DiversityPotential>(&model.potential())) {
        if (dv->diversity.is_table()) {
            doc["potential"] = json{{"kind", "diversity_table"}, {"values", dv->diversity.as_table().values}};
        } else {
            doc["potential"] = json{{"kind", "diameter_metric"}, {"metric", metric_json(dv->diversity.as_metric())}};
        }
    } else {
        const auto& dm = std::get<DiameterPotential>(model.potential());
        json metric = dm.tree ? json{{"type", "tree"}, {"tree", tree_json(*dm.tree)}} : metric_json(dm.metric);
        doc["potential"] = json{{"kind", "diameter_metric"}, {"metric", std::move(metric)}};
    }
    return doc.dump(indent);
}

RHst parse_tree(std::string_view json_text) { return tree_from_json(parse_json(json_text), ""); }

std::string tree_to_json(const RHst& tree, int indent) { return tree_json(tree).dump(indent); }

std::string report_to_json(const SolveReport& report, const ReportOptions& options, int indent) {
    json doc;
    doc["schema_version"] = 1;
    doc["algorithm"] = report.algorithm;
    doc["energy"] = report.energy;
    doc["unary_energy"] = report.unary_energy;
    doc["clique_energy"] = report.clique_energy;
    doc["num_variables"] = report.labeling.size();
    doc["labeling"] = report.labeling;
    doc["seed"] = report.seed;
    doc["mixture_size"] = report.mixture_size;
    doc["best_component"] = report.best_component;
    doc["component_energies"] = report.component_energies;
    doc["component_seeds"] = report.component_seeds;
    json bounds{{"r", report.bounds.r},
                {"bound1", report.bounds.bound1},
                {"bound2", report.bounds.bound2},
                {"bound2_drops_h_minus_1", report.bounds.diameter_diversity},
                {"log_base", report.bounds.log_base},
                {"bound2_is_order_of_magnitude", true}};
    if (report.algorithm == "alpha_expansion") {
        bounds["pn_potts"] = report.pn_potts_bound;
    }
    doc["bounds"] = std::move(bounds);
    if (options.include_timings) {
        json t = json::object();
        for (const auto& s : report.timings) {
            t[s.stage] = s.ms;
        }
        doc["timings_ms"] = std::move(t);
    }
    return doc.dump(indent);
}

}  // namespace parsimony
