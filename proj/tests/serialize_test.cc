// Copyright 2026 The stochiso Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stochiso/serialize.h"

#include <gtest/gtest.h>

#include "stochiso/generate.h"
#include "test_util.h"

using namespace stochiso;

namespace {

ErrorCode code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorCode::InvalidArgument;
}

const char *kIdentityFile = R"({
  "superoperator": {
    "dim_in": 1,
    "dim_out": 1,
    "mat": [[1]]
  }
}
)";

}  // namespace

TEST(dump_canonical, layout) {
    Json j;
    j["b"] = 1;
    j["a"] = Json::array({0.5, -0.0, 1e-300, 0.1});
    // Rows of pairs stay on one line; longer rows get their own lines.
    j["m"] = Json::array({Json::array({1.0, 2.0}), Json::array({3.0, 4.0})});
    j["w"] = Json::array({Json::array({1.0, 2.0, 3.0}), Json::array({4.0, 5.0, 6.0})});
    j["s"] = "x";
    j["n"] = nullptr;
    j["e"] = Json::array();
    std::string want = "{\n"
                       "  \"b\": 1,\n"
                       "  \"a\": [0.5, 0, 1e-300, 0.10000000000000001],\n"
                       "  \"m\": [[1, 2], [3, 4]],\n"
                       "  \"w\": [\n"
                       "    [1, 2, 3],\n"
                       "    [4, 5, 6]\n"
                       "  ],\n"
                       "  \"s\": \"x\",\n"
                       "  \"n\": null,\n"
                       "  \"e\": []\n"
                       "}\n";
    ASSERT_EQ(dump_canonical(j), want);
    ASSERT_EQ(dump_canonical(parse_json(want)), want);
}

TEST(dump_canonical, full_precision) {
    Json j = Json::array({0.1, 1.0 / 3, -2.5e-17});
    Json back = parse_json(dump_canonical(j));
    for (size_t k = 0; k < 3; k++) {
        ASSERT_EQ(back[k].get<double>(), j[k].get<double>());
    }
}

TEST(channel_file, identity_example) {
    ChannelFile f = parse_channel_file(kIdentityFile);
    ASSERT_TRUE(f.superoperator.has_value());
    ASSERT_FALSE(f.form.has_value());
    ASSERT_EQ(f.channel().mat()(0, 0), 1);
    ASSERT_EQ(dump_canonical(channel_json(f.channel())), kIdentityFile);
}

TEST(channel_file, round_trip_is_byte_identical) {
    for (const auto &inst : standard_corpus()) {
        MixedIsometryForm f = generate_form(inst.spec);
        std::string form_text = dump_canonical(form_json(f));
        ChannelFile pf = parse_channel_file(form_text);
        ASSERT_TRUE(pf.form.has_value());
        ASSERT_EQ(dump_canonical(form_json(*pf.form)), form_text) << inst.name;

        std::string op_text = dump_canonical(channel_json(from_form(f)));
        ChannelFile po = parse_channel_file(op_text);
        ASSERT_EQ(dump_canonical(channel_json(po.channel())), op_text) << inst.name;
        ASSERT_EQ(max_abs_diff(pf.channel().mat(), po.channel().mat()), 0) << inst.name;
    }
}

TEST(channel_file, form_layout) {
    MixedIsometryForm f(1, 1, {{1, IsometryComponent(Kind::Antiunitary, ComplexMat::identity(1))}});
    std::string want = "{\n"
                       "  \"mixed_isometry\": {\n"
                       "    \"dim_in\": 1,\n"
                       "    \"dim_out\": 1,\n"
                       "    \"components\": [\n"
                       "      {\n"
                       "        \"weight\": 1,\n"
                       "        \"kind\": \"antiunitary\",\n"
                       "        \"v\": [\n"
                       "          [[1, 0]]\n"
                       "        ]\n"
                       "      }\n"
                       "    ]\n"
                       "  }\n"
                       "}\n";
    ASSERT_EQ(dump_canonical(form_json(f)), want);
}

TEST(channel_file, parse_errors) {
    auto code = [](const std::string &text) { return code_of([&] { parse_channel_file(text); }); };
    ASSERT_EQ(code("{"), ErrorCode::ParseError);
    ASSERT_EQ(code("{}"), ErrorCode::ParseError);
    ASSERT_EQ(code(R"({"superoperator": {"dim_in": 1, "dim_out": 1}})"), ErrorCode::ParseError);
    ASSERT_EQ(code(R"({"superoperator": {"dim_in": 1, "dim_out": 1, "mat": [[1, 0]]}})"), ErrorCode::ParseError);
    ASSERT_EQ(code(R"({"superoperator": {"dim_in": 0, "dim_out": 1, "mat": []}})"), ErrorCode::ParseError);
    ASSERT_EQ(code(R"({"superoperator": {"dim_in": 1, "dim_out": 1, "mat": [["x"]]}})"), ErrorCode::ParseError);
    std::string both = R"({"superoperator": {"dim_in": 1, "dim_out": 1, "mat": [[1]]},
        "mixed_isometry": {"dim_in": 1, "dim_out": 1, "components": []}})";
    ASSERT_EQ(code(both), ErrorCode::ParseError);
    ASSERT_EQ(code(R"({"mixed_isometry": {"dim_in": 1, "dim_out": 1, "components": [
        {"weight": 1, "kind": "sideways", "v": [[[1, 0]]]}]}})"),
              ErrorCode::ParseError);
    // Well-formed JSON with invalid content keeps its own code.
    ASSERT_EQ(code(R"({"mixed_isometry": {"dim_in": 1, "dim_out": 1, "components": [
        {"weight": 0.5, "kind": "unitary", "v": [[[1, 0]]]}]}})"),
              ErrorCode::WeightsNotNormalized);
    ASSERT_EQ(code(R"({"mixed_isometry": {"dim_in": 1, "dim_out": 1, "components": [
        {"weight": 1, "kind": "unitary", "v": [[[2, 0]]]}]}})"),
              ErrorCode::NotIsometric);
}

TEST(state_file, round_trip_and_validation) {
    Rng rng(5);
    for (size_t d = 1; d <= 5; d++) {
        HermOp rho = random_state(rng, d, 1 + d / 2);
        std::string text = dump_canonical(state_json(rho));
        HermOp back = parse_state_file(text);
        ASSERT_EQ(back.mat().entries(), rho.mat().entries());
        ASSERT_EQ(dump_canonical(state_json(back)), text);
    }
    auto code = [](const std::string &text) { return code_of([&] { parse_state_file(text); }); };
    ASSERT_EQ(code(R"({"dim": 1, "entries": [[[0.5, 0]]]})"), ErrorCode::ParseError);
    ASSERT_EQ(code(R"({"dim": 2, "entries": [[[1.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]]})"), ErrorCode::ParseError);
    ASSERT_EQ(code(R"({"dim": 2, "entries": [[[0.5, 0], [0.3, 0]], [[0, 0], [0.5, 0]]]})"), ErrorCode::ParseError);
    HermOp ok = parse_state_file(R"({"dim": 2, "entries": [[[0.5, 0], [0, 0.5]], [[0, -0.5], [0.5, 0]]]})");
    ASSERT_NEAR(ok.mat()(0, 1).imag(), 0.5, 0);
}

TEST(reports, round_trip_is_byte_identical) {
    MixedIsometryForm f = generate_form({2, 5, {0.5, 0.5}, {Kind::Unitary, Kind::Antiunitary}, 3, true});
    ChannelMatrix r = from_form(f);
    Decomposition d = decompose(r);
    std::string text = dump_canonical(decomposition_report_json(d.report));
    ASSERT_EQ(dump_canonical(parse_json(text)), text);
    Json j = parse_json(text);
    ASSERT_EQ(j["bands"].size(), 1u);
    ASSERT_EQ(j["bands"][0]["m_l"], 1);
    ASSERT_EQ(j["bands"][0]["m_a"], 1);
    ASSERT_EQ(j["p0"]["rank"], 1);

    VerifyReport v = verify_channel(transpose_channel(2), {});
    std::string vt = dump_canonical(verify_report_json(v));
    ASSERT_EQ(dump_canonical(parse_json(vt)), vt);
    Json vj = parse_json(vt);
    ASSERT_FALSE(vj["completely_positive"]["ok"].get<bool>());
    ASSERT_EQ(vj["completely_positive"]["witness"].size(), 4u);
    ASSERT_TRUE(vj["isometry_on_probes"]["ok"].get<bool>());
}
