#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <string>

#include "parsimony/parsimony.h"

namespace {

const char* kTiny = R"({"num_variables": 2, "num_labels": 2, "unaries": [0, 2, 1, 1],
  "cliques": [{"members": [0, 1], "weight": 1}],
  "potential": {"kind": "pn_potts", "gamma": [1, 2], "gamma_max": 5}})";

std::string take(char* s) {
    std::string out = s == nullptr ? "" : s;
    pl_string_free(s);
    return out;
}

}  // namespace

TEST(CApi, ParseSolveReport) {
    pl_problem* p = nullptr;
    ASSERT_EQ(pl_problem_parse(kTiny, std::strlen(kTiny), &p), PL_OK);
    EXPECT_EQ(pl_problem_num_variables(p), 2u);
    EXPECT_EQ(pl_problem_num_labels(p), 2u);
    pl_solve_options o;
    pl_solve_options_init(&o);
    EXPECT_EQ(o.mixture_size, 10u);
    pl_report* r = nullptr;
    ASSERT_EQ(pl_solve(p, &o, &r), PL_OK);
    EXPECT_DOUBLE_EQ(pl_report_energy(r), 2.0);
    const int32_t* lab = nullptr;
    ASSERT_EQ(pl_report_labeling(r, &lab), 2u);
    EXPECT_EQ(lab[0], 0);
    EXPECT_EQ(lab[1], 0);
    double e = 0;
    ASSERT_EQ(pl_problem_energy(p, lab, 2, &e), PL_OK);
    EXPECT_DOUBLE_EQ(e, 2.0);
    char* json = nullptr;
    ASSERT_EQ(pl_report_to_json(r, 0, &json), PL_OK);
    EXPECT_NE(take(json).find("\"algorithm\": \"alpha_expansion\""), std::string::npos);
    char* text = nullptr;
    ASSERT_EQ(pl_report_labeling_text(r, &text), PL_OK);
    EXPECT_EQ(take(text), "0\n0\n");
    pl_oracle_check oc;
    ASSERT_EQ(pl_oracle_check_report(p, r, &oc), PL_OK);
    EXPECT_DOUBLE_EQ(oc.optimum, 2.0);
    EXPECT_DOUBLE_EQ(oc.ratio, 1.0);
    EXPECT_EQ(oc.bound_holds, 1);
    pl_report_free(r);
    pl_problem_free(p);
}

TEST(CApi, ErrorCodes) {
    pl_problem* p = nullptr;
    const char* bad = "{\"num_variables\": 1";
    EXPECT_EQ(pl_problem_parse(bad, std::strlen(bad), &p), PL_INPUT_ERROR);
    EXPECT_EQ(p, nullptr);
    EXPECT_NE(std::string(pl_last_error()).find("malformed JSON"), std::string::npos);
    EXPECT_EQ(pl_problem_load("/nonexistent/problem.json", &p), PL_INPUT_ERROR);
    EXPECT_EQ(pl_solve(nullptr, nullptr, nullptr), PL_INPUT_ERROR);
    ASSERT_EQ(pl_problem_parse(kTiny, std::strlen(kTiny), &p), PL_OK);
    EXPECT_STREQ(pl_last_error(), "");
    const int32_t wrong[] = {0, 7};
    double e = 0;
    EXPECT_EQ(pl_problem_energy(p, wrong, 2, &e), PL_INPUT_ERROR);
    pl_solve_options o;
    pl_solve_options_init(&o);
    o.mixture_size = 0;
    pl_report* r = nullptr;
    EXPECT_EQ(pl_solve(p, &o, &r), PL_INPUT_ERROR);
    pl_problem_free(p);
    pl_problem_free(nullptr);
    pl_report_free(nullptr);
}

TEST(CApi, SynthBench) {
    pl_synth_options s;
    pl_synth_options_init(&s);
    pl_solve_options o;
    pl_solve_options_init(&o);
    o.mixture_size = 3;
    char* csv = nullptr;
    ASSERT_EQ(pl_synth_bench(&s, &o, &csv), PL_OK);
    const std::string text = take(csv);
    EXPECT_EQ(text.rfind("schema_version,w_c,energy,time_ms,unique_labels\n", 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 8);
}
