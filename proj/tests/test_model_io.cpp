#include "mcat/model_io.hpp"

#include <gtest/gtest.h>

using namespace mcat;

namespace {

std::string pointer_of(const std::string& text) {
    try {
        load_model_text(text);
    } catch (const ModelError& e) {
        return e.pointer();
    }
    ADD_FAILURE() << "model accepted:\n" << text;
    return {};
}

std::string message_of(const std::string& text) {
    try {
        load_model_text(text);
    } catch (const ModelError& e) {
        return e.what();
    }
    ADD_FAILURE() << "model accepted:\n" << text;
    return {};
}

} // namespace

TEST(Range, Parse) {
    EXPECT_EQ(parse_range("3"), (std::pair<int, std::optional<int>>{3, 3}));
    EXPECT_EQ(parse_range("1..6"), (std::pair<int, std::optional<int>>{1, 6}));
    EXPECT_EQ(parse_range("2.."), (std::pair<int, std::optional<int>>{2, std::nullopt}));
    EXPECT_THROW(parse_range("0"), std::invalid_argument);
    EXPECT_THROW(parse_range("5..2"), std::invalid_argument);
    EXPECT_THROW(parse_range("a..b"), std::invalid_argument);
}

TEST(ModelFiles, ShippedModelsLoad) {
    for (const char* name : {"surfaces.json", "u2.json", "projective.json", "spheres.json"}) {
        const ModelFile m = load_model_file(std::string(MCAT_MODELS_DIR) + "/" + name);
        EXPECT_FALSE(m.queries.empty()) << name;
        EXPECT_NO_THROW(compute_tables(m.bundle)) << name;
    }
}

TEST(ModelFiles, ExplicitSurfaceMatchesConstructor) {
    const ModelFile m = load_model_file(std::string(MCAT_MODELS_DIR) + "/surfaces.json");
    EXPECT_TRUE(m.bundle.spaces.at("sigma2").algebra.same_structure(orientable_surface(2).algebra));
    EXPECT_EQ(m.bundle.spaces.at("sigma2").pi_vanish_from, 2);
}

TEST(ModelFiles, ExplicitU2MatchesExteriorAlgebra) {
    const ModelFile m = load_model_file(std::string(MCAT_MODELS_DIR) + "/u2.json");
    const SpaceModel& u2 = m.bundle.spaces.at("U2");
    EXPECT_EQ(u2.factors.size(), 2u);
    EXPECT_TRUE(u2.h_space_with_division);
    const MapPairModel& p = m.bundle.maps.at("idinv");
    EXPECT_EQ(p.f_kind, MapKind::Identity);
    EXPECT_EQ(p.g_kind, MapKind::General);
    EXPECT_EQ(m.queries.at(0).to, 4);
}

TEST(ModelFiles, CoefficientOverride) {
    const std::string text = R"({"schema": "mcat-model/1", "coeff": "Q", "spaces": {"S": {"construct": "sphere", "n": 2}}})";
    EXPECT_EQ(load_model_text(text).bundle.spaces.at("S").algebra.coeff().name(), "Q");
    const ModelFile f = load_model_text(text, CoefficientDomain::prime_field(3));
    EXPECT_EQ(f.bundle.spaces.at("S").algebra.coeff().characteristic(), 3);
}

TEST(ModelErrors, Schema) {
    EXPECT_EQ(pointer_of(R"({"spaces": {}})"), "");
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/9"})"), "/schema");
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "extra": 1})"), "/extra");
}

TEST(ModelErrors, SyntaxErrorHasPosition) {
    const std::string msg = message_of("{\n  \"schema\": \"mcat-model/1\",\n  \"spaces\": {,}\n}");
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
}

TEST(ModelErrors, CommutativityViolationPointsAtProduct) {
    const std::string text = R"({"schema": "mcat-model/1", "spaces": {"X": {"hdim": 2, "algebra": {
        "basis": [["1"], ["x", "y"], ["w"]], "products": [["x", "y", "w"], ["y", "x", "w"]]}}}})";
    EXPECT_EQ(pointer_of(text), "/spaces/X/algebra/products/0");
    EXPECT_NE(message_of(text).find("(x, y)"), std::string::npos);
}

TEST(ModelErrors, NonMultiplicativeMapNamesThePair) {
    const std::string text = R"({"schema": "mcat-model/1", "spaces": {
        "CP2": {"construct": "complex_projective", "n": 2},
        "T": {"hdim": 4, "algebra": {"basis": [["1"], [], ["a", "b"], [], ["ab"]], "products": [["a", "b", "ab"]]}}},
      "maps": {"f": {"domain": "T", "codomain": "CP2", "f": {"images": {"u": {"a": 1, "b": 1}}}, "g": "constant"}}})";
    EXPECT_EQ(pointer_of(text), "/maps/f/f");
    EXPECT_NE(message_of(text).find("(u, u)"), std::string::npos);
}

TEST(ModelErrors, References) {
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "spaces": {"P": {"construct": "product", "factors": ["A"]}}})"),
              "/spaces/P/factors/0");
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "spaces": {"A": {"construct": "product", "factors": ["A"]}}})"),
              "/spaces/A");
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "spaces": {"S": {"construct": "sphere", "n": 2}},
        "queries": [{"target": "T", "invariant": "cat"}]})"),
              "/queries/0/target");
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "spaces": {"S": {"construct": "sphere", "n": 2}},
        "queries": [{"target": "S", "invariant": "lscat"}]})"),
              "/queries/0/invariant");
}

TEST(ModelErrors, BadValues) {
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "coeff": "F4"})"), "/coeff");
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "spaces": {"S": {"construct": "sphere", "n": "two"}}})"),
              "/spaces/S/n");
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "spaces": {"S": {"construct": "torus"}}})"),
              "/spaces/S/construct");
    EXPECT_EQ(pointer_of(R"({"schema": "mcat-model/1", "spaces": {"S": {"construct": "sphere", "n": 3, "hdim": 2}}})"),
              "/spaces/S");
}

TEST(ModelErrors, DeclaredFactorsMustMatch) {
    const std::string text = R"({"schema": "mcat-model/1", "spaces": {
        "A": {"construct": "sphere", "n": 2}, "B": {"construct": "sphere", "n": 2},
        "X": {"algebra": {"basis": [["1"], [], ["a", "b"], [], ["ab"]]}, "factors": ["A", "B"]}}})";
    EXPECT_EQ(pointer_of(text), "/spaces/X/factors");
}

TEST(ModelFibrations, ExplicitFibration) {
    const std::string text = R"({"schema": "mcat-model/1", "spaces": {
        "CP1": {"construct": "complex_projective", "n": 1}, "S3": {"construct": "sphere", "n": 3}},
      "fibrations": {"h": {"base": "CP1", "total": "S3", "pstar": "constant", "fiber_pi_vanish_from": 2}}})";
    const ModelFile m = load_model_text(text);
    const TableSet set = compute_tables(m.bundle);
    EXPECT_EQ(set.get("secat:h").at(std::nullopt).value, (Interval{1, 1}));
}
