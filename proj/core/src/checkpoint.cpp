#include "intergat/checkpoint.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "intergat/error.hpp"

namespace intergat {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "intergat-checkpoint";

json to_json(const Mat& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"values", m.values()}}; }

Mat mat_from_json(const json& j, const std::string& what) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != rows * cols)
    throw LoadError(what + ": shape header " + std::to_string(rows) + "x" + std::to_string(cols) + " does not match " +
                    std::to_string(values.size()) + " values");
  return Mat(rows, cols, std::move(values));
}

json spec_to_json(const ModelSpec& s) {
  return {{"nodes", s.spatial.nodes},
          {"in_features", s.spatial.in_features},
          {"heads", s.spatial.heads},
          {"head_dim", s.spatial.head_dim},
          {"variant", std::string(to_string(s.spatial.variant))},
          {"elu_alpha", s.spatial.elu_alpha},
          {"layer_norm_eps", s.spatial.layer_norm_eps},
          {"layer_norm_axis", s.spatial.layer_norm_axis == LayerNormAxis::rows ? "rows" : "matrix"},
          {"leaky_slope", s.spatial.leaky_slope},
          {"hidden", s.hidden},
          {"gate_bias", s.gate_bias},
          {"dropout", s.dropout},
          {"horizon", s.horizon},
          {"decode", std::string(to_string(s.decode))}};
}

ModelSpec spec_from_json(const json& j) {
  ModelSpec s;
  s.spatial.nodes = j.at("nodes").get<std::size_t>();
  s.spatial.in_features = j.at("in_features").get<std::size_t>();
  s.spatial.heads = j.at("heads").get<std::size_t>();
  s.spatial.head_dim = j.at("head_dim").get<std::size_t>();
  s.spatial.variant = parse_variant(j.at("variant").get<std::string>());
  s.spatial.elu_alpha = j.at("elu_alpha").get<double>();
  s.spatial.layer_norm_eps = j.at("layer_norm_eps").get<double>();
  s.spatial.layer_norm_axis = j.at("layer_norm_axis").get<std::string>() == "matrix" ? LayerNormAxis::matrix
                                                                                       : LayerNormAxis::rows;
  s.spatial.leaky_slope = j.at("leaky_slope").get<double>();
  s.hidden = j.at("hidden").get<std::size_t>();
  s.gate_bias = j.at("gate_bias").get<bool>();
  s.dropout = j.at("dropout").get<double>();
  s.horizon = j.at("horizon").get<std::size_t>();
  s.decode = parse_decode_mode(j.at("decode").get<std::string>());
  return s;
}

}  // namespace

Checkpoint make_checkpoint(const Model& model, const Normalization& norm, std::size_t history, const Graph& graph,
                           std::uint64_t seed, std::string config_text) {
  Checkpoint c;
  c.spec = model.spec();
  c.source = model.spatial().source();
  c.norm = norm;
  c.history = history;
  c.seed = seed;
  c.adjacency = graph.adjacency();
  for (const auto& [name, value] : model.parameters()) c.parameters.emplace_back(name, *value);
  c.config = std::move(config_text);
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  json params = json::array();
  for (const auto& [name, value] : c.parameters) {
    json p = to_json(value);
    p["name"] = name;
    params.push_back(std::move(p));
  }
  const json doc = {{"format", kFormat},
                    {"version", c.version},
                    {"spec", spec_to_json(c.spec)},
                    {"source", {{"variant", std::string(to_string(c.source.variant))}, {"base", to_json(c.source.base)}}},
                    {"normalization", {{"min", c.norm.min}, {"max", c.norm.max}}},
                    {"history", c.history},
                    {"seed", c.seed},
                    {"adjacency", to_json(c.adjacency)},
                    {"parameters", std::move(params)},
                    {"config", c.config}};
  std::ofstream out(path);
  if (!out) throw LoadError(path.string() + ": cannot write checkpoint");
  out << doc.dump(1) << '\n';
  if (!out) throw LoadError(path.string() + ": write failed");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string() + ": cannot open checkpoint");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kFormat)
    throw CompatibilityError(path.string() + ": not an intergat checkpoint");
  const int version = doc.value("version", 0);
  if (version != kCheckpointVersion)
    throw CompatibilityError(path.string() + ": unsupported checkpoint version " + std::to_string(version));
  Checkpoint c;
  try {
    c.version = version;
    c.spec = spec_from_json(doc.at("spec"));
    c.source.variant = parse_variant(doc.at("source").at("variant").get<std::string>());
    c.source.base = mat_from_json(doc.at("source").at("base"), "source.base");
    c.norm.min = doc.at("normalization").at("min").get<double>();
    c.norm.max = doc.at("normalization").at("max").get<double>();
    c.history = doc.at("history").get<std::size_t>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.adjacency = mat_from_json(doc.at("adjacency"), "adjacency");
    for (const auto& p : doc.at("parameters")) {
      const auto name = p.at("name").get<std::string>();
      c.parameters.emplace_back(name, mat_from_json(p, name));
    }
    c.config = doc.value("config", "");
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  return c;
}

Model restore_model(const Checkpoint& c) {
  Model model(c.spec, c.source, c.seed);
  auto params = model.parameters();
  if (params.size() != c.parameters.size())
    throw CompatibilityError("checkpoint stores " + std::to_string(c.parameters.size()) + " tensors, model expects " +
                             std::to_string(params.size()));
  for (auto& p : params) {
    auto it = std::find_if(c.parameters.begin(), c.parameters.end(),
                           [&](const auto& stored) { return stored.first == p.name; });
    if (it == c.parameters.end()) throw CompatibilityError("checkpoint is missing parameter " + p.name);
    if (!it->second.same_shape(*p.value))
      throw CompatibilityError("checkpoint parameter " + p.name + " has shape " + it->second.shape_string() +
                               ", model expects " + p.value->shape_string());
    *p.value = it->second;
  }
  return model;
}

void require_compatible(const Checkpoint& c, std::size_t nodes, std::size_t features) {
  if (c.spec.spatial.nodes != nodes || c.spec.spatial.in_features != features)
    throw CompatibilityError("checkpoint expects " + std::to_string(c.spec.spatial.nodes) + " nodes x " +
                             std::to_string(c.spec.spatial.in_features) + " features, data has " +
                             std::to_string(nodes) + " x " + std::to_string(features));
}

}  // namespace intergat
