#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "tbt/pipeline.hpp"
#include "tbt/report.hpp"
#include "tbt/spec_io.hpp"

using namespace tbt;

namespace {

std::string schema_pointer(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const SchemaError& e) {
    return e.pointer();
  }
  return "<no error>";
}

}  // namespace

TEST(SpecIo, RoundTripsEveryClass) {
  for (auto c : {StructureClass::general, StructureClass::self_adjoint, StructureClass::dstu,
                 StructureClass::toeplitz3d}) {
    const SpecFile file{random_spec(DimTriple::make(2, 3, 2), 7, c), 7};
    const SpecFile back = parse_spec(dump_spec(file));
    EXPECT_TRUE(back.spec == file.spec) << to_string(c);
    EXPECT_EQ(back.seed, file.seed);
  }
}

TEST(SpecIo, FieldLayout) {
  const DimTriple d = DimTriple::make(2, 2, 2);
  BlockTbtSpec spec(d, StructureClass::general);
  Mat block(2, 2);
  block << cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(7, 8);
  spec = spec.with_coeff(-1, 0, block);
  const auto doc = spec_to_json({spec, std::nullopt});
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"dims", "class", "coeffs"}));
  // (r, s) = (-1, 0) is block 1; entries follow in row-major order.
  EXPECT_EQ(doc["coeffs"].size(), 36u);
  EXPECT_EQ(doc["coeffs"][4], nlohmann::json::array({1.0, 2.0}));
  EXPECT_EQ(doc["coeffs"][5], nlohmann::json::array({3.0, 4.0}));
  EXPECT_EQ(doc["coeffs"][6], nlohmann::json::array({5.0, 6.0}));
}

TEST(SpecIo, ToeplitzSpecsUseTaus) {
  const SpecFile file{random_spec(DimTriple::make(2, 2, 3), 3, StructureClass::toeplitz3d), 3};
  const auto doc = spec_to_json(file);
  ASSERT_TRUE(doc.contains("taus"));
  EXPECT_FALSE(doc.contains("coeffs"));
  EXPECT_EQ(doc["taus"].size(), 45u);
}

TEST(SpecIo, SchemaErrorsCarryPointers) {
  EXPECT_EQ(schema_pointer("[1, 2]"), "");
  EXPECT_EQ(schema_pointer("{not json"), "");
  EXPECT_EQ(schema_pointer(R"({"class": "general", "coeffs": []})"), "/dims");
  EXPECT_EQ(schema_pointer(R"({"dims": [2, 1, 2], "class": "general", "coeffs": []})"), "/dims/1");
  EXPECT_EQ(schema_pointer(R"({"dims": [2, "x", 2], "class": "general", "coeffs": []})"), "/dims/1");
  EXPECT_EQ(schema_pointer(R"({"dims": [2, 2, 2], "class": "circulant", "coeffs": []})"), "/class");
  EXPECT_EQ(schema_pointer(R"({"dims": [2, 2, 2], "class": "general", "coeffs": []})"), "/coeffs");
  EXPECT_EQ(schema_pointer(R"({"dims": [2, 2, 2], "class": "general"})"), "/coeffs");
  EXPECT_EQ(schema_pointer(R"({"dims": [2, 2, 2], "class": "general", "taus": []})"), "/taus");
  EXPECT_EQ(schema_pointer(R"({"dims": [2, 2, 2], "class": "general", "seed": -1, "coeffs": []})"),
            "/seed");

  auto doc = nlohmann::json::parse(dump_spec({random_spec(DimTriple::make(2, 2, 2), 1, StructureClass::general), std::nullopt}));
  doc["coeffs"][17] = nlohmann::json::array({1.0});
  EXPECT_EQ(schema_pointer(doc.dump()), "/coeffs/17");
  doc["coeffs"][17] = nlohmann::json::array({1.0, "two"});
  EXPECT_EQ(schema_pointer(doc.dump()), "/coeffs/17/1");
}

TEST(SpecIo, FileErrorsNameThePath) {
  const auto missing = std::filesystem::temp_directory_path() / "tbt-no-such-dir" / "spec.json";
  try {
    load_spec(missing);
    FAIL() << "expected IoError";
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("tbt-no-such-dir"), std::string::npos);
  }
  EXPECT_THROW(save_spec(missing, {BlockTbtSpec::identity(DimTriple::make(2, 2, 2)), std::nullopt}),
               IoError);
}

TEST(SpecIo, SaveThenLoad) {
  const auto path = std::filesystem::temp_directory_path() / "tbt-spec-io-test.json";
  const SpecFile file{random_spec(DimTriple::make(3, 2, 2), 9, StructureClass::dstu), 9};
  save_spec(path, file);
  EXPECT_TRUE(load_spec(path).spec == file.spec);
  std::filesystem::remove(path);
}

TEST(Report, VerdictAndLookup) {
  VerificationReport r({DimTriple::make(2, 2, 2), StructureClass::dstu, 7});
  EXPECT_FALSE(r.pass());
  r.add("a", 1e-14, 1e-12);
  EXPECT_TRUE(r.pass());
  r.add("b", std::nan(""), 1.0);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.find("b")->pass);
  EXPECT_EQ(r.find("c"), nullptr);
  r.add("c", 0.0, 0.0);
  EXPECT_TRUE(r.find("c")->pass);
}

TEST(Report, JsonRoundTrip) {
  VerificationReport r({DimTriple::make(3, 2, 2), StructureClass::self_adjoint, 12345});
  r.add("structure_class", 0.0, 1e-13);
  r.add("omega_p1", 1.2345678901234567e-14, 1e-9);
  r.add("failing", 0.25, 1e-3);
  r.add("nan", std::nan(""), 1e-9);
  const std::string text = report_to_json(r);
  EXPECT_TRUE(report_from_json(text) == r);
  EXPECT_EQ(report_to_json(report_from_json(text)), text);

  const auto doc = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [key, value] : doc.items()) keys.push_back(key);
  EXPECT_EQ(keys, (std::vector<std::string>{"spec", "checks", "pass"}));
  EXPECT_FALSE(doc["pass"].get<bool>());

  VerificationReport unseeded({DimTriple::make(2, 2, 2), StructureClass::general, std::nullopt});
  unseeded.add("x", 1e-16, 1e-15);
  EXPECT_TRUE(report_from_json(report_to_json(unseeded)) == unseeded);
  EXPECT_THROW(report_from_json("{}"), SchemaError);
}

TEST(Report, TextFormatListsEveryRow) {
  VerificationReport r({DimTriple::make(2, 2, 2), StructureClass::general, 1});
  r.add("identity_T_p1", 1e-16, 1e-12);
  r.add("omega_p1", 2.0, 1e-9);
  const std::string text = report_to_text(r);
  EXPECT_NE(text.find("PASS  identity_T_p1"), std::string::npos);
  EXPECT_NE(text.find("FAIL  omega_p1"), std::string::npos);
  EXPECT_NE(text.find("verdict: fail"), std::string::npos);
}

TEST(RunConfig, ValidationAndOverrides) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.tol("omega_p1", 1e-9), 1e-9);
  const auto [name, value] = parse_tol_override("omega_p1=1e-6");
  EXPECT_EQ(name, "omega_p1");
  EXPECT_EQ(value, 1e-6);
  c.tol_overrides[name] = value;
  EXPECT_EQ(c.tol("omega_p1", 1e-9), 1e-6);
  EXPECT_THROW(parse_tol_override("omega_p1"), std::invalid_argument);
  EXPECT_THROW(parse_tol_override("omega_p1=abc"), std::invalid_argument);
  c.tol_overrides["x"] = -1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  RunConfig d;
  d.samples = 0;
  EXPECT_THROW(d.validate(), std::invalid_argument);
}

TEST(Pipeline, IdentitySpecVerifiesToRounding) {
  const SpecFile file{BlockTbtSpec::identity(DimTriple::make(2, 2, 2)), std::nullopt};
  const VerificationReport r = run_verify(file, RunConfig{});
  EXPECT_TRUE(r.pass());
  for (const auto& c : r.checks()) EXPECT_LE(c.residual, 1e-15) << c.name;
}

TEST(Pipeline, RowsFollowTheClass) {
  const RunConfig config;
  auto names = [](const VerificationReport& r) {
    std::vector<std::string> out;
    for (const auto& c : r.checks()) out.push_back(c.name);
    return out;
  };
  auto has = [](const std::vector<std::string>& v, const std::string& n) {
    return std::find(v.begin(), v.end(), n) != v.end();
  };

  const auto general = names(run_recover({random_spec(DimTriple::make(2, 2, 2), 1, StructureClass::general), 1}, config));
  EXPECT_FALSE(has(general, "exchange_G21"));
  EXPECT_FALSE(has(general, "adjoint_G21"));

  const auto sa = names(run_recover({random_spec(DimTriple::make(3, 2, 2), 1, StructureClass::self_adjoint), 1}, config));
  EXPECT_TRUE(has(sa, "adjoint_u_from_uhat"));
  EXPECT_TRUE(has(sa, "adjoint_G21"));
  EXPECT_TRUE(has(sa, "pi_adjoint"));

  const VerificationReport dstu =
      run_recover({random_spec(DimTriple::make(2, 2, 2), 7, StructureClass::dstu), 7}, config);
  EXPECT_TRUE(dstu.pass());
  EXPECT_TRUE(has(names(dstu), "exchange_u_from_uhat"));

  const auto v3 = names(run_verify({random_spec(DimTriple::make(2, 2, 2), 1, StructureClass::toeplitz3d), 1}, config));
  EXPECT_TRUE(has(v3, "identity_T_p3"));
  const auto v2 = names(run_verify({random_spec(DimTriple::make(2, 2, 2), 1, StructureClass::dstu), 1}, config));
  EXPECT_FALSE(has(v2, "identity_T_p3"));
  EXPECT_EQ(v2.front(), "structure_class");
}

TEST(Pipeline, ToleranceOverridesApply) {
  RunConfig config;
  config.tol_overrides["omega_p1"] = 1e-30;
  const VerificationReport r =
      run_recover({random_spec(DimTriple::make(2, 2, 2), 2, StructureClass::general), 2}, config);
  EXPECT_FALSE(r.find("omega_p1")->pass);
  EXPECT_EQ(r.find("omega_p1")->tol, 1e-30);
}
