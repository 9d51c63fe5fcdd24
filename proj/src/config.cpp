#include "tneat/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tneat/error.hpp"
#include "tneat/text.hpp"

namespace tneat {

namespace {

struct Field {
  std::string name;
  std::function<void(NeatConfig&, std::string_view)> parse;
  std::function<std::string(const NeatConfig&)> format;
};

double parse_real(std::string_view key, std::string_view v) {
  auto parsed = text::parse_double(v);
  if (!parsed || std::isnan(*parsed)) {
    throw ConfigError("key '" + std::string(key) + "': expected a real number, got '" +
                      std::string(v) + "'");
  }
  return *parsed;
}

int parse_int(std::string_view key, std::string_view v) {
  // Integer-valued reals ("100.0") are accepted since some keys are
  // documented as floats.
  double d = parse_real(key, v);
  if (!std::isfinite(d) || d != std::floor(d) || std::fabs(d) > 2.0e9) {
    throw ConfigError("key '" + std::string(key) + "': expected an integer, got '" +
                      std::string(v) + "'");
  }
  return static_cast<int>(d);
}

std::uint64_t parse_u64(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("key '" + std::string(key) + "': expected a non-negative integer, got '" +
                      std::string(v) + "'");
  }
  return out;
}

int parse_activation(std::string_view key, std::string_view v) {
  auto id = FunctionRegistry::builtin().find_activation(v);
  if (!id) {
    throw ConfigError("key '" + std::string(key) + "': unknown activation '" + std::string(v) +
                      "'");
  }
  return *id;
}

int parse_aggregation(std::string_view key, std::string_view v) {
  auto id = FunctionRegistry::builtin().find_aggregation(v);
  if (!id) {
    throw ConfigError("key '" + std::string(key) + "': unknown aggregation '" + std::string(v) +
                      "'");
  }
  return *id;
}

std::vector<std::string_view> split_list(std::string_view v) {
  if (!v.empty() && v.front() == '[') v.remove_prefix(1);
  if (!v.empty() && v.back() == ']') v.remove_suffix(1);
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (start <= v.size()) {
    std::size_t end = v.find_first_of(", ", start);
    if (end == std::string_view::npos) end = v.size();
    auto item = v.substr(start, end - start);
    if (!item.empty()) items.push_back(item);
    start = end + 1;
  }
  return items;
}

Field real_field(std::string name, double NeatConfig::*member) {
  return {name,
          [member, name](NeatConfig& c, std::string_view v) { c.*member = parse_real(name, v); },
          [member](const NeatConfig& c) { return text::format_double(c.*member); }};
}

Field int_field(std::string name, int NeatConfig::*member) {
  return {name,
          [member, name](NeatConfig& c, std::string_view v) { c.*member = parse_int(name, v); },
          [member](const NeatConfig& c) { return std::to_string(c.*member); }};
}

Field string_field(std::string name, std::string NeatConfig::*member) {
  return {name, [member](NeatConfig& c, std::string_view v) { c.*member = std::string(v); },
          [member](const NeatConfig& c) { return c.*member; }};
}

void add_attr_fields(std::vector<Field>& fields, const std::string& prefix,
                     AttrConfig NeatConfig::*attr) {
  const std::pair<const char*, double AttrConfig::*> parts[] = {
      {"_init_mean", &AttrConfig::init_mean},
      {"_init_std", &AttrConfig::init_std},
      {"_mutate_power", &AttrConfig::mutate_power},
      {"_mutate_rate", &AttrConfig::mutate_rate},
      {"_replace_rate", &AttrConfig::replace_rate},
  };
  for (const auto& [suffix, member] : parts) {
    std::string name = prefix + suffix;
    fields.push_back({name,
                      [attr, member, name](NeatConfig& c, std::string_view v) {
                        (c.*attr).*member = parse_real(name, v);
                      },
                      [attr, member](const NeatConfig& c) {
                        return text::format_double((c.*attr).*member);
                      }});
  }
}

Field options_field(std::string name, std::vector<int> NeatConfig::*member, bool is_activation) {
  return {name,
          [member, name, is_activation](NeatConfig& c, std::string_view v) {
            std::vector<int> ids;
            for (auto item : split_list(v)) {
              ids.push_back(is_activation ? parse_activation(name, item)
                                          : parse_aggregation(name, item));
            }
            if (ids.empty()) throw ConfigError("key '" + name + "': empty option list");
            c.*member = std::move(ids);
          },
          [member, is_activation](const NeatConfig& c) {
            const auto& reg = FunctionRegistry::builtin();
            std::string out;
            for (int id : c.*member) {
              if (!out.empty()) out += ",";
              out += is_activation ? reg.activation_name(id) : reg.aggregation_name(id);
            }
            return out;
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"seed", [](NeatConfig& c, std::string_view v) { c.seed = parse_u64("seed", v); },
                 [](const NeatConfig& c) { return std::to_string(c.seed); }});
    f.push_back(real_field("fitness_target", &NeatConfig::fitness_target));
    f.push_back(int_field("generation_limit", &NeatConfig::generation_limit));
    f.push_back(int_field("pop_size", &NeatConfig::pop_size));
    f.push_back({"network_type",
                 [](NeatConfig& c, std::string_view v) {
                   if (v == "feedforward") {
                     c.network_type = NetworkType::feedforward;
                   } else if (v == "recurrent") {
                     c.network_type = NetworkType::recurrent;
                   } else {
                     throw ConfigError("key 'network_type': expected feedforward|recurrent, got '" +
                                       std::string(v) + "'");
                   }
                 },
                 [](const NeatConfig& c) { return std::string(to_string(c.network_type)); }});
    f.push_back(int_field("inputs", &NeatConfig::inputs));
    f.push_back(int_field("outputs", &NeatConfig::outputs));
    f.push_back(int_field("max_nodes", &NeatConfig::max_nodes));
    f.push_back(int_field("max_conns", &NeatConfig::max_conns));
    f.push_back(int_field("max_species", &NeatConfig::max_species));
    f.push_back(real_field("compatibility_disjoint", &NeatConfig::compatibility_disjoint));
    f.push_back(real_field("compatibility_homologous", &NeatConfig::compatibility_homologous));
    f.push_back(real_field("node_add", &NeatConfig::node_add));
    f.push_back(real_field("node_delete", &NeatConfig::node_delete));
    f.push_back(real_field("conn_add", &NeatConfig::conn_add));
    f.push_back(real_field("conn_delete", &NeatConfig::conn_delete));
    f.push_back(real_field("compatibility_threshold", &NeatConfig::compatibility_threshold));
    f.push_back(int_field("species_elitism", &NeatConfig::species_elitism));
    f.push_back(int_field("max_stagnation", &NeatConfig::max_stagnation));
    f.push_back(int_field("genome_elitism", &NeatConfig::genome_elitism));
    f.push_back(real_field("survival_threshold", &NeatConfig::survival_threshold));
    f.push_back(real_field("spawn_number_change_rate", &NeatConfig::spawn_number_change_rate));
    add_attr_fields(f, "bias", &NeatConfig::bias);
    add_attr_fields(f, "response", &NeatConfig::response);
    add_attr_fields(f, "weight", &NeatConfig::weight);
    f.push_back(real_field("enabled_mutate_rate", &NeatConfig::enabled_mutate_rate));
    f.push_back({"activation_default",
                 [](NeatConfig& c, std::string_view v) {
                   c.activation_default = parse_activation("activation_default", v);
                 },
                 [](const NeatConfig& c) {
                   return FunctionRegistry::builtin().activation_name(c.activation_default);
                 }});
    f.push_back(options_field("activation_options", &NeatConfig::activation_options, true));
    f.push_back(real_field("activation_replace_rate", &NeatConfig::activation_replace_rate));
    f.push_back({"aggregation_default",
                 [](NeatConfig& c, std::string_view v) {
                   c.aggregation_default = parse_aggregation("aggregation_default", v);
                 },
                 [](const NeatConfig& c) {
                   return FunctionRegistry::builtin().aggregation_name(c.aggregation_default);
                 }});
    f.push_back(options_field("aggregation_options", &NeatConfig::aggregation_options, false));
    f.push_back(real_field("aggregation_replace_rate", &NeatConfig::aggregation_replace_rate));
    f.push_back(real_field("attr_min", &NeatConfig::attr_min));
    f.push_back(real_field("attr_max", &NeatConfig::attr_max));
    f.push_back(string_field("problem", &NeatConfig::problem));
    f.push_back(string_field("regression_target", &NeatConfig::regression_target));
    f.push_back(int_field("regression_samples", &NeatConfig::regression_samples));
    return f;
  }();
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_probability(double p, const std::string& key) {
  require(p >= 0.0 && p <= 1.0, "key '" + key + "' must be a probability in [0, 1]");
}

}  // namespace

std::string_view to_string(NetworkType type) {
  return type == NetworkType::feedforward ? "feedforward" : "recurrent";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& f : fields()) k.push_back(f.name);
    return k;
  }();
  return keys;
}

NeatConfig parse_config(std::string_view text) {
  static const std::map<std::string, const Field*, std::less<>> index = [] {
    std::map<std::string, const Field*, std::less<>> m;
    for (const auto& f : fields()) m.emplace(f.name, &f);
    return m;
  }();

  NeatConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  for (std::string_view line : text::split_lines(text)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = text::trim(line.substr(0, eq));
    auto value = text::trim(line.substr(eq + 1));
    auto it = index.find(key);
    if (it == index.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) +
                        "'");
    }
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                        std::string(key) + "'");
    }
    try {
      it->second->parse(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

NeatConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string to_text(const NeatConfig& config) {
  std::string out;
  for (const auto& f : fields()) {
    out += f.name;
    out += " = ";
    out += f.format(config);
    out += '\n';
  }
  return out;
}

void NeatConfig::validate() const {
  require(inputs >= 1, "inputs must be >= 1");
  require(outputs >= 1, "outputs must be >= 1");
  require(pop_size >= 1, "pop_size must be >= 1");
  require(species_elitism >= 0, "species_elitism must be >= 0");
  require(pop_size >= 2 * species_elitism, "pop_size must be >= 2 * species_elitism");
  require(generation_limit >= 1, "generation_limit must be >= 1");
  require(max_nodes >= inputs + outputs, "max_nodes must be >= inputs + outputs");
  require(max_conns >= inputs * outputs, "max_conns must be >= inputs * outputs");
  require(max_species >= 1, "max_species must be >= 1");
  require(compatibility_disjoint >= 0.0, "compatibility_disjoint must be >= 0");
  require(compatibility_homologous >= 0.0, "compatibility_homologous must be >= 0");
  require(compatibility_threshold >= 0.0, "compatibility_threshold must be >= 0");
  require_probability(node_add, "node_add");
  require_probability(node_delete, "node_delete");
  require_probability(conn_add, "conn_add");
  require_probability(conn_delete, "conn_delete");
  require(max_stagnation >= 1, "max_stagnation must be >= 1");
  require(genome_elitism >= 0, "genome_elitism must be >= 0");
  require(survival_threshold > 0.0 && survival_threshold <= 1.0,
          "survival_threshold must be in (0, 1]");
  require(spawn_number_change_rate >= 0.0, "spawn_number_change_rate must be >= 0");
  const std::pair<const char*, const AttrConfig*> attrs[] = {
      {"bias", &bias}, {"response", &response}, {"weight", &weight}};
  for (const auto& [name, a] : attrs) {
    std::string p(name);
    require(std::isfinite(a->init_mean), p + "_init_mean must be finite");
    require(a->init_std >= 0.0, p + "_init_std must be >= 0");
    require(a->mutate_power >= 0.0, p + "_mutate_power must be >= 0");
    require_probability(a->mutate_rate, p + "_mutate_rate");
    require_probability(a->replace_rate, p + "_replace_rate");
  }
  require_probability(enabled_mutate_rate, "enabled_mutate_rate");
  require_probability(activation_replace_rate, "activation_replace_rate");
  require_probability(aggregation_replace_rate, "aggregation_replace_rate");
  require(!activation_options.empty(), "activation_options must not be empty");
  require(!aggregation_options.empty(), "aggregation_options must not be empty");
  require(attr_min <= attr_max, "attr_min must be <= attr_max");
  require(regression_samples >= 1, "regression_samples must be >= 1");
}

}  // namespace tneat
