#include "tbt/spec_io.hpp"

#include <fstream>
#include <sstream>

namespace tbt {

namespace {

using nlohmann::json;

std::string ptr(const std::string& base, std::size_t index) {
  return base + "/" + std::to_string(index);
}

cplx read_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2)
    throw SchemaError(where, "expected a [re, im] pair");
  for (std::size_t k = 0; k < 2; ++k)
    if (!v[k].is_number()) throw SchemaError(ptr(where, k), "expected a number");
  const cplx z{v[0].get<double>(), v[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw SchemaError(where, "entry is not finite");
  return z;
}

DimTriple read_dims(const json& doc) {
  if (!doc.contains("dims")) throw SchemaError("/dims", "missing field");
  const json& d = doc["dims"];
  if (!d.is_array() || d.size() != 3) throw SchemaError("/dims", "expected [m1, m2, m3]");
  int m[3];
  for (std::size_t k = 0; k < 3; ++k) {
    if (!d[k].is_number_integer()) throw SchemaError(ptr("/dims", k), "expected an integer");
    const auto v = d[k].get<std::int64_t>();
    if (v < 2) throw SchemaError(ptr("/dims", k), "dimension must be at least 2");
    if (v > 4096) throw SchemaError(ptr("/dims", k), "dimension is too large");
    m[k] = static_cast<int>(v);
  }
  return DimTriple::make(m[0], m[1], m[2]);
}

StructureClass read_class(const json& doc) {
  if (!doc.contains("class")) throw SchemaError("/class", "missing field");
  const json& c = doc["class"];
  if (!c.is_string()) throw SchemaError("/class", "expected a string");
  try {
    return parse_structure_class(c.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError("/class", e.what());
  }
}

std::vector<cplx> read_array(const json& doc, const std::string& key, std::size_t expected) {
  const std::string where = "/" + key;
  const json& a = doc[key];
  if (!a.is_array()) throw SchemaError(where, "expected an array");
  if (a.size() != expected)
    throw SchemaError(where, "expected " + std::to_string(expected) + " entries, got " +
                                 std::to_string(a.size()));
  std::vector<cplx> out;
  out.reserve(expected);
  for (std::size_t k = 0; k < a.size(); ++k) out.push_back(read_complex(a[k], ptr(where, k)));
  return out;
}

nlohmann::ordered_json complex_json(cplx z) { return nlohmann::ordered_json::array({z.real(), z.imag()}); }

}  // namespace

SpecFile spec_from_json(const json& doc) {
  if (!doc.is_object()) throw SchemaError("", "spec must be a JSON object");
  const DimTriple dims = read_dims(doc);
  const StructureClass cls = read_class(doc);

  std::optional<std::uint64_t> seed;
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw SchemaError("/seed", "expected an unsigned integer");
    seed = doc["seed"].get<std::uint64_t>();
  }

  const bool has_coeffs = doc.contains("coeffs");
  const bool has_taus = doc.contains("taus");
  if (has_coeffs == has_taus)
    throw SchemaError(has_taus ? "/taus" : "/coeffs", "exactly one of coeffs and taus is required");

  if (has_taus) {
    if (cls != StructureClass::toeplitz3d)
      throw SchemaError("/taus", "taus are only valid for class toeplitz3d");
    const std::size_t count =
        static_cast<std::size_t>((2 * dims.m1 - 1) * (2 * dims.m2 - 1) * (2 * dims.m3 - 1));
    return {lift_3d(Toeplitz3dSpec(dims, read_array(doc, "taus", count))), seed};
  }

  const std::size_t blocks = static_cast<std::size_t>((2 * dims.m1 - 1) * (2 * dims.m2 - 1));
  const std::size_t per_block = static_cast<std::size_t>(dims.m3) * dims.m3;
  const std::vector<cplx> flat = read_array(doc, "coeffs", blocks * per_block);
  std::vector<Mat> coeffs;
  coeffs.reserve(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    Mat block(dims.m3, dims.m3);
    for (int i = 0; i < dims.m3; ++i)
      for (int j = 0; j < dims.m3; ++j)
        block(i, j) = flat[b * per_block + static_cast<std::size_t>(i * dims.m3 + j)];
    coeffs.push_back(std::move(block));
  }
  return {BlockTbtSpec(dims, cls, std::move(coeffs)), seed};
}

SpecFile parse_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return spec_from_json(doc);
}

nlohmann::ordered_json spec_to_json(const SpecFile& file) {
  const BlockTbtSpec& spec = file.spec;
  const DimTriple& d = spec.dims();
  nlohmann::ordered_json doc;
  doc["dims"] = {d.m1, d.m2, d.m3};
  doc["class"] = std::string(to_string(spec.class_tag()));
  if (file.seed) doc["seed"] = *file.seed;
  if (spec.class_tag() == StructureClass::toeplitz3d) {
    auto taus = nlohmann::ordered_json::array();
    const Toeplitz3dSpec spec3 = extract_3d(spec);
    for (const cplx& t : spec3.taus()) taus.push_back(complex_json(t));
    doc["taus"] = std::move(taus);
  } else {
    auto coeffs = nlohmann::ordered_json::array();
    for (const Mat& block : spec.coeffs())
      for (int i = 0; i < d.m3; ++i)
        for (int j = 0; j < d.m3; ++j) coeffs.push_back(complex_json(block(i, j)));
    doc["coeffs"] = std::move(coeffs);
  }
  return doc;
}

std::string dump_spec(const SpecFile& file) { return spec_to_json(file).dump() + "\n"; }

SpecFile load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open spec file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read spec file '" + path.string() + "'");
  return parse_spec(buf.str());
}

void save_spec(const std::filesystem::path& path, const SpecFile& file) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << dump_spec(file);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
}

}  // namespace tbt
