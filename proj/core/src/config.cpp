#include "intergat/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <vector>

#include "intergat/error.hpp"

namespace intergat {

namespace {

namespace pt = boost::property_tree;

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(const std::string& field, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError(field + ": expected a number, got '" + text + "'");
  return value;
}

bool parse_bool(const std::string& field, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(field + ": expected true or false, got '" + text + "'");
}

struct Field {
  const char* section;
  const char* key;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string& path, const std::string&)> set;
};

template <typename T>
Field size_field(const char* section, const char* key, T RunConfig::*outer, std::size_t T::*member) {
  return {section, key, [=](const RunConfig& c) { return std::to_string(c.*outer.*member); },
          [=](RunConfig& c, const std::string& f, const std::string& v) {
            c.*outer.*member = parse_number<std::size_t>(f, v);
          }};
}

template <typename T>
Field real_field(const char* section, const char* key, T RunConfig::*outer, double T::*member) {
  return {section, key, [=](const RunConfig& c) { return format_double(c.*outer.*member); },
          [=](RunConfig& c, const std::string& f, const std::string& v) {
            c.*outer.*member = parse_number<double>(f, v);
          }};
}

template <typename T>
Field bool_field(const char* section, const char* key, T RunConfig::*outer, bool T::*member) {
  return {section, key, [=](const RunConfig& c) { return std::string(c.*outer.*member ? "true" : "false"); },
          [=](RunConfig& c, const std::string& f, const std::string& v) { c.*outer.*member = parse_bool(f, v); }};
}

Field string_field(const char* section, const char* key, std::string DataConfig::*member) {
  return {section, key, [=](const RunConfig& c) { return c.data.*member; },
          [=](RunConfig& c, const std::string&, const std::string& v) { c.data.*member = v; }};
}

template <typename T>
Field spatial_field(const char* key, T SpatialConfig::*member) {
  if constexpr (std::is_same_v<T, double>) {
    return {"model", key, [=](const RunConfig& c) { return format_double(c.model.spatial.*member); },
            [=](RunConfig& c, const std::string& f, const std::string& v) {
              c.model.spatial.*member = parse_number<double>(f, v);
            }};
  } else {
    return {"model", key, [=](const RunConfig& c) { return std::to_string(c.model.spatial.*member); },
            [=](RunConfig& c, const std::string& f, const std::string& v) {
              c.model.spatial.*member = parse_number<std::size_t>(f, v);
            }};
  }
}

template <typename Parse>
void set_enum(const std::string& field, Parse parse) {
  try {
    parse();
  } catch (const Error& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"data", "source",
                 [](const RunConfig& c) {
                   return std::string(c.data.source == DataConfig::Source::synth ? "synth" : "csv");
                 },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   if (v == "synth") c.data.source = DataConfig::Source::synth;
                   else if (v == "csv") c.data.source = DataConfig::Source::csv;
                   else throw ConfigError(p + ": expected synth or csv, got '" + v + "'");
                 }});
    f.push_back(string_field("data", "speeds", &DataConfig::speeds));
    f.push_back(string_field("data", "adjacency", &DataConfig::adjacency));
    f.push_back(bool_field("data", "zeros_missing", &RunConfig::data, &DataConfig::zeros_missing));
    f.push_back(size_field("data", "synth_nodes", &RunConfig::data, &DataConfig::synth_nodes));
    f.push_back(size_field("data", "synth_communities", &RunConfig::data, &DataConfig::synth_communities));
    f.push_back(size_field("data", "synth_steps", &RunConfig::data, &DataConfig::synth_steps));
    f.push_back({"data", "synth_seed", [](const RunConfig& c) { return std::to_string(c.data.synth_seed); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   c.data.synth_seed = parse_number<std::uint64_t>(p, v);
                 }});
    f.push_back(real_field("data", "train_ratio", &RunConfig::data, &DataConfig::train_ratio));
    f.push_back(real_field("data", "validation_fraction", &RunConfig::data, &DataConfig::validation_fraction));

    f.push_back({"model", "variant", [](const RunConfig& c) { return std::string(to_string(c.model.spatial.variant)); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   set_enum(p, [&] { c.model.spatial.variant = parse_variant(v); });
                 }});
    f.push_back(spatial_field("heads", &SpatialConfig::heads));
    f.push_back(spatial_field("head_dim", &SpatialConfig::head_dim));
    f.push_back(size_field("model", "hidden", &RunConfig::model, &ModelSpec::hidden));
    f.push_back(spatial_field("elu_alpha", &SpatialConfig::elu_alpha));
    f.push_back(real_field("model", "dropout", &RunConfig::model, &ModelSpec::dropout));
    f.push_back(bool_field("model", "gate_bias", &RunConfig::model, &ModelSpec::gate_bias));
    f.push_back({"model", "layer_norm_axis",
                 [](const RunConfig& c) {
                   return std::string(c.model.spatial.layer_norm_axis == LayerNormAxis::rows ? "rows" : "matrix");
                 },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   if (v == "rows") c.model.spatial.layer_norm_axis = LayerNormAxis::rows;
                   else if (v == "matrix") c.model.spatial.layer_norm_axis = LayerNormAxis::matrix;
                   else throw ConfigError(p + ": expected rows or matrix, got '" + v + "'");
                 }});
    f.push_back(spatial_field("layer_norm_eps", &SpatialConfig::layer_norm_eps));
    f.push_back(spatial_field("leaky_slope", &SpatialConfig::leaky_slope));
    f.push_back({"model", "decode", [](const RunConfig& c) { return std::string(to_string(c.model.decode)); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   set_enum(p, [&] { c.model.decode = parse_decode_mode(v); });
                 }});
    f.push_back({"model", "clusters", [](const RunConfig& c) { return std::to_string(c.clusters); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   c.clusters = parse_number<std::size_t>(p, v);
                 }});

    f.push_back(real_field("optim", "learning_rate", &RunConfig::optim, &OptimConfig::learning_rate));
    f.push_back(real_field("optim", "weight_decay", &RunConfig::optim, &OptimConfig::weight_decay));
    f.push_back(real_field("optim", "lambda_sparse", &RunConfig::optim, &OptimConfig::lambda_sparse));
    f.push_back(size_field("optim", "batch_size", &RunConfig::optim, &OptimConfig::batch_size));
    f.push_back(size_field("optim", "epochs", &RunConfig::optim, &OptimConfig::max_epochs));
    f.push_back(size_field("optim", "patience", &RunConfig::optim, &OptimConfig::patience));
    f.push_back({"optim", "teacher_forcing",
                 [](const RunConfig& c) { return std::string(to_string(c.optim.forcing.kind)); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   set_enum(p, [&] { c.optim.forcing.kind = parse_forcing_kind(v); });
                 }});
    f.push_back({"optim", "forcing_initial", [](const RunConfig& c) { return format_double(c.optim.forcing.initial); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   c.optim.forcing.initial = parse_number<double>(p, v);
                 }});
    f.push_back({"optim", "forcing_decay",
                 [](const RunConfig& c) { return format_double(c.optim.forcing.decay_per_epoch); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   c.optim.forcing.decay_per_epoch = parse_number<double>(p, v);
                 }});

    f.push_back({"task", "history", [](const RunConfig& c) { return std::to_string(c.history); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   c.history = parse_number<std::size_t>(p, v);
                 }});
    f.push_back(size_field("task", "horizon", &RunConfig::model, &ModelSpec::horizon));

    f.push_back({"run", "seed", [](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   c.seed = parse_number<std::uint64_t>(p, v);
                 }});
    f.push_back({"run", "seeds", [](const RunConfig& c) { return std::to_string(c.seeds); },
                 [](RunConfig& c, const std::string& p, const std::string& v) {
                   c.seeds = parse_number<std::size_t>(p, v);
                 }});
    f.push_back(size_field("run", "threads", &RunConfig::optim, &OptimConfig::threads));
    f.push_back({"run", "out", [](const RunConfig& c) { return c.out; },
                 [](RunConfig& c, const std::string&, const std::string& v) { c.out = v; }});
    return f;
  }();
  return table;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& other) const { return emit_config(*this) == emit_config(other); }

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  std::set<std::string> known;
  for (const auto& f : fields()) known.insert(std::string(f.section) + "." + f.key);

  RunConfig config;
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty())
      throw ConfigError(section + ": key outside of a section");
    for (const auto& [key, value] : entries) {
      const std::string path = section + "." + key;
      if (!known.count(path)) throw ConfigError(path + ": unknown key");
    }
  }
  for (const auto& f : fields()) {
    const std::string path = std::string(f.section) + "." + f.key;
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) f.set(config, path, *v);
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string emit_config(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    if (section != f.section) {
      if (!section.empty()) out << '\n';
      section = f.section;
      out << '[' << section << "]\n";
    }
    out << f.key << " = " << f.get(config) << '\n';
  }
  return out.str();
}

void validate(const RunConfig& c) {
  auto positive = [](const char* path, double v) {
    if (!(v > 0.0)) throw ConfigError(std::string(path) + ": must be positive");
  };
  auto non_negative = [](const char* path, double v) {
    if (!(v >= 0.0)) throw ConfigError(std::string(path) + ": must be non-negative");
  };
  if (c.data.source == DataConfig::Source::csv) {
    if (c.data.speeds.empty()) throw ConfigError("data.speeds: required for csv source");
    if (c.data.adjacency.empty()) throw ConfigError("data.adjacency: required for csv source");
  } else {
    positive("data.synth_nodes", static_cast<double>(c.data.synth_nodes));
    if (c.data.synth_communities < 2 || c.data.synth_communities > c.data.synth_nodes)
      throw ConfigError("data.synth_communities: must lie in [2, synth_nodes]");
    positive("data.synth_steps", static_cast<double>(c.data.synth_steps));
  }
  if (!(c.data.train_ratio > 0.0 && c.data.train_ratio < 1.0))
    throw ConfigError("data.train_ratio: must lie in (0, 1)");
  if (!(c.data.validation_fraction >= 0.0 && c.data.validation_fraction < 1.0))
    throw ConfigError("data.validation_fraction: must lie in [0, 1)");
  positive("model.heads", static_cast<double>(c.model.spatial.heads));
  positive("model.head_dim", static_cast<double>(c.model.spatial.head_dim));
  positive("model.hidden", static_cast<double>(c.model.hidden));
  positive("model.elu_alpha", c.model.spatial.elu_alpha);
  if (!(c.model.dropout >= 0.0 && c.model.dropout < 1.0)) throw ConfigError("model.dropout: must lie in [0, 1)");
  positive("model.layer_norm_eps", c.model.spatial.layer_norm_eps);
  non_negative("model.leaky_slope", c.model.spatial.leaky_slope);
  positive("model.clusters", static_cast<double>(c.clusters));
  positive("optim.learning_rate", c.optim.learning_rate);
  non_negative("optim.weight_decay", c.optim.weight_decay);
  non_negative("optim.lambda_sparse", c.optim.lambda_sparse);
  positive("optim.batch_size", static_cast<double>(c.optim.batch_size));
  positive("optim.epochs", static_cast<double>(c.optim.max_epochs));
  non_negative("optim.forcing_decay", c.optim.forcing.decay_per_epoch);
  if (!(c.optim.forcing.initial >= 0.0 && c.optim.forcing.initial <= 1.0))
    throw ConfigError("optim.forcing_initial: must lie in [0, 1]");
  positive("task.history", static_cast<double>(c.history));
  positive("task.horizon", static_cast<double>(c.model.horizon));
  positive("run.seeds", static_cast<double>(c.seeds));
  positive("run.threads", static_cast<double>(c.optim.threads));
  if (c.out.empty()) throw ConfigError("run.out: must not be empty");
}

}  // namespace intergat
