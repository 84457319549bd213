#include "cstar/io.hpp"

#include <cmath>
#include <initializer_list>

#include "json.hpp"

namespace cstar::io {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw SchemaError(path + ": " + message);
}

std::string at(const std::string& path, const char* key) { return path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const char* key : required)
    if (!obj.contains(key)) fail(at(path, key), "missing field");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : required) known = known || item.key() == key;
    for (const char* key : optional) known = known || item.key() == key;
    if (!known) fail(path + "." + item.key(), "unknown field");
  }
}

const Json& array_of(const Json& j, const std::string& path, std::optional<std::size_t> size = std::nullopt) {
  if (!j.is_array()) fail(path, "expected an array");
  if (size && j.size() != *size)
    fail(path, "expected " + std::to_string(*size) + " entries, found " + std::to_string(j.size()));
  return j;
}

double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Json parse_document(std::string_view input, const char* kind, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional = {}) {
  Json doc;
  try {
    doc = Json::parse(input.begin(), input.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail("$", std::string("invalid JSON: ") + e.what());
  }
  std::vector<const char*> keys{"version", "kind"};
  keys.insert(keys.end(), required.begin(), required.end());
  if (!doc.is_object()) fail("$", "expected an object");
  if (!doc.contains("version")) fail("$.version", "missing field");
  if (integer(doc["version"], "$.version") != kSchemaVersion)
    fail("$.version", "unsupported schema version " + doc["version"].dump());
  if (!doc.contains("kind")) fail("$.kind", "missing field");
  const std::string found = text(doc["kind"], "$.kind");
  if (found != kind) fail("$.kind", "expected \"" + std::string(kind) + "\", found \"" + found + "\"");
  for (const char* key : keys)
    if (!doc.contains(key)) fail(at("$", key), "missing field");
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* key : keys) known = known || item.key() == key;
    for (const char* key : optional) known = known || item.key() == key;
    if (!known) fail("$." + item.key(), "unknown field");
  }
  return doc;
}

Json header(const char* kind) {
  Json j;
  j["version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---- values ----

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix parse_matrix(const Json& j, const std::string& path, int n) {
  const auto size = static_cast<std::size_t>(n);
  array_of(j, path, size);
  Matrix m(n, n);
  for (std::size_t i = 0; i < size; ++i) {
    const std::string row_path = at(path, i);
    const Json& row = array_of(j[i], row_path, size);
    for (std::size_t k = 0; k < size; ++k) {
      const std::string entry_path = at(row_path, k);
      const Json& pair = array_of(row[k], entry_path, 2);
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          Complex(number(pair[0], at(entry_path, std::size_t{0})), number(pair[1], at(entry_path, std::size_t{1})));
    }
  }
  return m;
}

Json shape_json(const AlgebraShape& shape) {
  Json j;
  j["blocks"] = shape.block_dims();
  return j;
}

AlgebraShape parse_shape(const Json& j, const std::string& path) {
  require_keys(j, path, {"blocks"});
  const std::string blocks_path = at(path, "blocks");
  const Json& blocks = array_of(j["blocks"], blocks_path);
  std::vector<int> dims;
  for (std::size_t i = 0; i < blocks.size(); ++i) dims.push_back(integer(blocks[i], at(blocks_path, i)));
  try {
    return AlgebraShape(std::move(dims));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Json element_json(const AlgebraElement& a) {
  Json j = Json::array();
  for (const auto& b : a.blocks()) j.push_back(matrix_json(b));
  return j;
}

AlgebraElement parse_element(const Json& j, const std::string& path, const AlgebraShape& shape) {
  array_of(j, path, static_cast<std::size_t>(shape.num_blocks()));
  std::vector<Matrix> blocks;
  for (int k = 0; k < shape.num_blocks(); ++k)
    blocks.push_back(parse_matrix(j[static_cast<std::size_t>(k)], at(path, static_cast<std::size_t>(k)),
                                  shape.block_dim(k)));
  try {
    return AlgebraElement(shape, std::move(blocks));
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

Json vector_json(const ModuleVector& x) {
  Json j = Json::array();
  for (const auto& c : x.coords()) j.push_back(element_json(c));
  return j;
}

ModuleVector parse_vector(const Json& j, const std::string& path, const AlgebraShape& shape, int dim) {
  array_of(j, path, static_cast<std::size_t>(dim));
  std::vector<AlgebraElement> coords;
  for (std::size_t i = 0; i < j.size(); ++i) coords.push_back(parse_element(j[i], at(path, i), shape));
  return ModuleVector(shape, std::move(coords));
}

Json vectors_json(const std::vector<ModuleVector>& xs) {
  Json j = Json::array();
  for (const auto& x : xs) j.push_back(vector_json(x));
  return j;
}

std::vector<ModuleVector> parse_vectors(const Json& j, const std::string& path, const AlgebraShape& shape, int dim) {
  array_of(j, path);
  std::vector<ModuleVector> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_vector(j[i], at(path, i), shape, dim));
  return out;
}

int parse_dim(const Json& j, const std::string& path) {
  const int d = integer(j, path);
  if (d < 1) fail(path, "dimension must be at least 1");
  return d;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }
Json optional_json(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json certificate_json(const Certificate& c) {
  Json j;
  j["condition"] = to_string(c.condition);
  j["eps"] = c.eps;
  j["verdict"] = to_string(c.verdict);
  j["tail_index"] = optional_json(c.tail_index);
  j["coefficient_bound"] = optional_json(c.coefficient_bound);
  j["sup_error"] = c.sup_error;
  j["witness_point"] = optional_json(c.witness_point);
  j["residuals"] = c.residuals;
  j["coefficient_norms"] = c.coefficient_norms;
  j["distances"] = c.distances;
  j["profile"] = c.profile;
  j["generators"] = vectors_json(c.generators);
  Json terms = Json::array();
  for (const auto& t : c.approximant) terms.push_back(Json{{"x", vector_json(t.x)}, {"y", vector_json(t.y)}});
  j["approximant"] = std::move(terms);
  j["note"] = c.note;
  return j;
}

Json report_json(const EquivalenceReport& r) {
  Json j;
  j["eps"] = r.eps;
  j["eps_a"] = r.eps_a;
  j["c1"] = r.c1;
  j["c2"] = r.c2;
  j["verdict"] = to_string(r.verdict);
  j["violations"] = r.violations;
  j["a"] = certificate_json(r.a);
  j["b"] = certificate_json(r.b);
  j["cd"] = certificate_json(r.cd);
  return j;
}

void merge(Json& into, const Json& from) {
  for (const auto& item : from.items()) into[item.key()] = item.value();
}

}  // namespace

std::string peek_kind(std::string_view input) {
  Json doc;
  try {
    doc = Json::parse(input.begin(), input.end());
  } catch (const nlohmann::json::parse_error& e) {
    fail("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("kind")) fail("$.kind", "missing field");
  return text(doc["kind"], "$.kind");
}

FrameDocument parse_frame(std::string_view input) {
  const Json doc = parse_document(input, "frame", {"shape", "dim", "vectors"}, {"scope"});
  FrameDocument out{{parse_shape(doc["shape"], "$.shape"), parse_dim(doc["dim"], "$.dim"), {}}, FrameScope::Ambient};
  out.family.vectors = parse_vectors(doc["vectors"], "$.vectors", out.family.shape, out.family.dim);
  if (doc.contains("scope")) {
    const std::string scope = text(doc["scope"], "$.scope");
    if (scope == "span")
      out.scope = FrameScope::Span;
    else if (scope != "ambient")
      fail("$.scope", "expected \"ambient\" or \"span\"");
  }
  return out;
}

std::string serialize(const FrameDocument& doc) {
  Json j = header("frame");
  j["shape"] = shape_json(doc.family.shape);
  j["dim"] = doc.family.dim;
  j["scope"] = doc.scope == FrameScope::Span ? "span" : "ambient";
  j["vectors"] = vectors_json(doc.family.vectors);
  return dump(j);
}

VectorFamily parse_generators(std::string_view input) {
  const Json doc = parse_document(input, "generators", {"shape", "dim", "vectors"});
  VectorFamily out{parse_shape(doc["shape"], "$.shape"), parse_dim(doc["dim"], "$.dim"), {}};
  out.vectors = parse_vectors(doc["vectors"], "$.vectors", out.shape, out.dim);
  return out;
}

std::string serialize_generators(const VectorFamily& family) {
  Json j = header("generators");
  j["shape"] = shape_json(family.shape);
  j["dim"] = family.dim;
  j["vectors"] = vectors_json(family.vectors);
  return dump(j);
}

SampleSet parse_sample(std::string_view input) {
  const Json doc = parse_document(input, "sample", {"shape", "dim", "points"}, {"label"});
  SampleSet out = SampleSet::empty(parse_shape(doc["shape"], "$.shape"), parse_dim(doc["dim"], "$.dim"));
  if (doc.contains("label")) out.label = text(doc["label"], "$.label");
  out.points = parse_vectors(doc["points"], "$.points", out.shape, out.dim);
  return out;
}

std::string serialize(const SampleSet& sample) {
  Json j = header("sample");
  j["label"] = sample.label;
  j["shape"] = shape_json(sample.shape);
  j["dim"] = sample.dim;
  j["points"] = vectors_json(sample.points);
  return dump(j);
}

SeminormDocument parse_seminorm_spec(std::string_view input) {
  const Json doc = parse_document(input, "seminorm_spec", {"shape", "dim", "system", "states"});
  SeminormDocument out{parse_shape(doc["shape"], "$.shape"), parse_dim(doc["dim"], "$.dim"), {}};
  out.spec.system = parse_vectors(doc["system"], "$.system", out.shape, out.dim);
  const Json& states = array_of(doc["states"], "$.states", out.spec.system.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string path = at("$.states", i);
    require_keys(states[i], path, {"densities"});
    const std::string dpath = at(path, "densities");
    array_of(states[i]["densities"], dpath, static_cast<std::size_t>(out.shape.num_blocks()));
    std::vector<Matrix> densities;
    for (int k = 0; k < out.shape.num_blocks(); ++k) {
      const auto kk = static_cast<std::size_t>(k);
      densities.push_back(parse_matrix(states[i]["densities"][kk], at(dpath, kk), out.shape.block_dim(k)));
    }
    try {
      out.spec.states.emplace_back(out.shape, std::move(densities));
    } catch (const InvalidState& e) {
      fail(path, "state " + std::to_string(i) + " is invalid: " + e.what());
    }
  }
  return out;
}

std::string serialize(const SeminormDocument& doc) {
  Json j = header("seminorm_spec");
  j["shape"] = shape_json(doc.shape);
  j["dim"] = doc.dim;
  j["system"] = vectors_json(doc.spec.system);
  Json states = Json::array();
  for (const auto& s : doc.spec.states) {
    Json densities = Json::array();
    for (const auto& d : s.densities()) densities.push_back(matrix_json(d));
    states.push_back(Json{{"densities", std::move(densities)}});
  }
  j["states"] = std::move(states);
  return dump(j);
}

ModuleOperator parse_operator(std::string_view input) {
  const Json doc = parse_document(input, "operator", {"shape", "target_dim", "source_dim", "entries"});
  const AlgebraShape shape = parse_shape(doc["shape"], "$.shape");
  const int m = parse_dim(doc["target_dim"], "$.target_dim");
  const int n = parse_dim(doc["source_dim"], "$.source_dim");
  const Json& rows = array_of(doc["entries"], "$.entries", static_cast<std::size_t>(m));
  std::vector<AlgebraElement> entries;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string rpath = at("$.entries", i);
    const Json& row = array_of(rows[i], rpath, static_cast<std::size_t>(n));
    for (std::size_t k = 0; k < row.size(); ++k) entries.push_back(parse_element(row[k], at(rpath, k), shape));
  }
  return ModuleOperator(shape, m, n, std::move(entries));
}

std::string serialize(const ModuleOperator& op) {
  Json j = header("operator");
  j["shape"] = shape_json(op.shape());
  j["target_dim"] = op.target_dim();
  j["source_dim"] = op.source_dim();
  Json rows = Json::array();
  for (int i = 0; i < op.target_dim(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < op.source_dim(); ++k) row.push_back(element_json(op.entry(i, k)));
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return dump(j);
}

CounterexampleDocument parse_counterexample_setting(std::string_view input) {
  const Json doc = parse_document(input, "counterexample_setting", {"trunc", "dim"});
  CounterexampleDocument out{integer(doc["trunc"], "$.trunc"), integer(doc["dim"], "$.dim")};
  if (out.dim < 1) fail("$.dim", "must be at least 1");
  if (out.dim > out.trunc) fail("$.dim", "must not exceed trunc");
  return out;
}

std::string serialize(const CounterexampleDocument& doc) {
  Json j = header("counterexample_setting");
  j["trunc"] = doc.trunc;
  j["dim"] = doc.dim;
  return dump(j);
}

RunConfig parse_run_config(std::string_view input) {
  const Json doc = parse_document(input, "run_config", {"seed"}, {"tolerances", "eps_grid", "paths"});
  RunConfig out;
  if (!doc["seed"].is_number_unsigned()) fail("$.seed", "expected a non-negative integer");
  out.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("tolerances")) {
    const Json& t = doc["tolerances"];
    require_keys(t, "$.tolerances", {}, {"positivity", "residual", "norm"});
    auto read = [&](const char* key, double& into) {
      if (!t.contains(key)) return;
      into = number(t[key], at("$.tolerances", key));
      if (!(into > 0.0)) fail(at("$.tolerances", key), "must be positive");
    };
    read("positivity", out.tolerances.positivity);
    read("residual", out.tolerances.residual);
    read("norm", out.tolerances.norm);
  }
  if (doc.contains("eps_grid")) {
    const Json& grid = array_of(doc["eps_grid"], "$.eps_grid");
    out.eps_grid.clear();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double e = number(grid[i], at("$.eps_grid", i));
      if (!(e > 0.0)) fail(at("$.eps_grid", i), "must be positive");
      out.eps_grid.push_back(e);
    }
  }
  if (doc.contains("paths")) {
    const Json& paths = doc["paths"];
    if (!paths.is_object()) fail("$.paths", "expected an object");
    for (const auto& item : paths.items()) out.paths[item.key()] = text(item.value(), "$.paths." + item.key());
  }
  return out;
}

std::string serialize(const RunConfig& config) {
  Json j = header("run_config");
  j["seed"] = config.seed;
  j["tolerances"] = Json{{"positivity", config.tolerances.positivity},
                         {"residual", config.tolerances.residual},
                         {"norm", config.tolerances.norm}};
  j["eps_grid"] = config.eps_grid;
  Json paths = Json::object();
  for (const auto& [key, value] : config.paths) paths[key] = value;
  j["paths"] = std::move(paths);
  return dump(j);
}

std::string serialize(const Certificate& certificate) {
  Json j = header("certificate");
  merge(j, certificate_json(certificate));
  return dump(j);
}

std::string serialize(const EquivalenceReport& report) {
  Json j = header("equivalence_report");
  merge(j, report_json(report));
  return dump(j);
}

std::string serialize(const OperatorReport& report) {
  Json j = header("operator_report");
  j["samples"] = report.samples;
  j["rejected"] = report.rejected;
  j["operator"] = certificate_json(report.certificate);
  j["image"] = report_json(report.image);
  return dump(j);
}

std::string serialize(const SeriesDecomposition& series) {
  Json j = header("series");
  j["n_eps"] = optional_json(series.n_eps);
  j["floor"] = series.floor;
  j["covers_range"] = series.covers_range;
  j["residual_norms"] = series.residual_norms;
  Json terms = Json::array();
  for (const auto& t : series.terms) terms.push_back(Json{{"x", vector_json(t.x)}, {"y", vector_json(t.y)}});
  j["terms"] = std::move(terms);
  return dump(j);
}

std::string serialize_sweep(const std::vector<double>& eps, const std::vector<std::string>& documents) {
  if (eps.size() != documents.size()) throw Error("serialize_sweep: one document per eps expected");
  Json j = header("sweep");
  Json runs = Json::array();
  for (std::size_t i = 0; i < eps.size(); ++i)
    runs.push_back(Json{{"eps", eps[i]}, {"result", Json::parse(documents[i])}});
  j["runs"] = std::move(runs);
  return dump(j);
}

}  // namespace cstar::io
