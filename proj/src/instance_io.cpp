// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

#include "smatch/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace smatch {

using nlohmann::json;

const InstanceView& InstanceFile::view() const {
  if (weighted) return *weighted;
  if (points) return *points;
  throw std::logic_error("empty instance file");
}

namespace {

std::string id_string(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw FormatError("vertex ids must be strings or integers");
}

double weight_value(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity") return kInfinity;
    throw FormatError("weight string must be \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) throw FormatError("weight must be a number or \"inf\"");
  return j.get<double>();
}

std::vector<int> read_colors(const json& doc, std::size_t n) {
  std::vector<int> colors;
  if (!doc.contains("colors")) return colors;
  colors = doc.at("colors").get<std::vector<int>>();
  if (colors.size() != n) throw FormatError("colors must have one entry per vertex");
  for (int c : colors)
    if (c < 0) throw FormatError("colors must be nonnegative");
  return colors;
}

ColorRule make_rule(RuleKind kind, int k) {
  switch (kind) {
    case RuleKind::one_type: return ColorRule::one_type();
    case RuleKind::asymmetric_two_type: return ColorRule::asymmetric_two_type();
    case RuleKind::symmetric_k_type: return ColorRule::symmetric(k);
  }
  throw std::logic_error("unknown rule");
}

InstanceFile parse_weighted(const json& doc, bool check_ties) {
  InstanceFile out;
  std::unordered_map<std::string, std::size_t> index;
  for (const json& v : doc.at("vertices")) {
    std::string id = id_string(v);
    if (!index.emplace(id, out.ids.size()).second) throw FormatError("duplicate vertex id " + id);
    out.ids.push_back(std::move(id));
  }
  WeightedInstance inst(out.ids.size());
  if (doc.contains("weights")) {
    for (const json& e : doc.at("weights")) {
      if (!e.is_array() || e.size() != 3) throw FormatError("weights entries are [id, id, weight]");
      const auto a = index.find(id_string(e[0])), b = index.find(id_string(e[1]));
      if (a == index.end() || b == index.end()) throw FormatError("weight names an unknown vertex");
      if (a->second == b->second) throw FormatError("self-loop weight");
      try {
        inst.set_weight(a->second, b->second, weight_value(e[2]));
      } catch (const std::invalid_argument& ex) {
        throw FormatError(ex.what());
      }
    }
  }
  auto colors = read_colors(doc, out.ids.size());
  if (!colors.empty()) inst.set_colors(std::move(colors));
  inst.set_labels(out.ids);
  if (check_ties) {
    if (auto tie = find_weight_tie(inst))
      throw TieError(tie->vertex, tie->first, tie->second, tie->weight);
  }
  out.weighted = std::move(inst);
  return out;
}

InstanceFile parse_points(const json& doc, bool check_ties) {
  PointConfig config;
  const auto& positions = doc.at("positions");
  const MetricKind metric = parse_metric_kind(doc.value("metric", std::string("euclidean")));
  config.domain = metric == MetricKind::euclidean_torus ? Domain::torus : Domain::segment;
  config.dimension = doc.value("dimension", positions.empty() ? 1 : static_cast<int>(positions[0].size()));
  for (const json& p : positions) {
    const auto xs = p.is_array() ? p.get<std::vector<double>>() : std::vector<double>{p.get<double>()};
    if (static_cast<int>(xs.size()) != config.dimension)
      throw FormatError("position dimension differs from \"dimension\"");
    config.coords.insert(config.coords.end(), xs.begin(), xs.end());
  }
  const std::size_t n = positions.size();
  config.colors = read_colors(doc, n);
  if (config.colors.empty()) config.colors.assign(n, 0);
  if (doc.contains("side")) {
    config.side = doc.at("side").get<double>();
  } else {
    const double top = config.coords.empty() ? 0.0 : *std::max_element(config.coords.begin(), config.coords.end());
    config.side = metric == MetricKind::euclidean_torus ? std::max(1.0, std::floor(top) + 1.0)
                                                        : std::exp2(std::ceil(std::log2(std::max(1.0, top + 1.0))));
  }
  const RuleKind kind = parse_rule_kind(doc.at("rule").get<std::string>());
  int k = 1;
  for (int c : config.colors) k = std::max(k, c + 1);
  k = doc.value("k", std::max(k, 2));
  const ColorRule rule = make_rule(kind, k);
  for (int c : config.colors)
    if (c >= rule.colors()) throw FormatError("color outside the rule's palette");
  try {
    config.validate();
  } catch (const std::invalid_argument& ex) {
    throw FormatError(ex.what());
  }
  InstanceFile out;
  if (doc.contains("vertices")) {
    for (const json& v : doc.at("vertices")) out.ids.push_back(id_string(v));
    if (out.ids.size() != n) throw FormatError("vertices and positions differ in length");
  } else {
    for (std::size_t i = 0; i < n; ++i) out.ids.push_back(std::to_string(i));
  }
  out.points.emplace(build_instance(config, rule, metric, check_ties));
  return out;
}

}  // namespace

InstanceFile parse_instance_json(const std::string& text, bool check_ties) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& ex) {
    throw FormatError(std::string("invalid JSON: ") + ex.what());
  }
  if (!doc.is_object()) throw FormatError("instance must be a JSON object");
  try {
    if (doc.contains("positions")) return parse_points(doc, check_ties);
    if (doc.contains("vertices")) return parse_weighted(doc, check_ties);
  } catch (const json::exception& ex) {
    throw FormatError(std::string("malformed instance: ") + ex.what());
  }
  throw FormatError("instance needs \"vertices\" + \"weights\" or \"rule\" + \"positions\"");
}

InstanceFile load_instance(const std::string& path, bool check_ties) {
  return parse_instance_json(read_text_file(path), check_ties);
}

ColorRule SampleSpec::color_rule() const {
  return make_rule(rule, static_cast<int>(color_probs.size()));
}

Domain SampleSpec::domain() const {
  return metric == MetricKind::euclidean_torus ? Domain::torus : Domain::segment;
}

SampleSpec parse_sample_spec(const std::string& text) {
  SampleSpec s;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw FormatError("config must be a JSON object");
    s.rate = doc.value("rate", s.rate);
    s.dimension = doc.value("dimension", s.dimension);
    s.side = doc.value("side", s.side);
    if (doc.contains("color_probs")) s.color_probs = doc.at("color_probs").get<std::vector<double>>();
    if (doc.contains("rule")) s.rule = parse_rule_kind(doc.at("rule").get<std::string>());
    if (doc.contains("metric")) s.metric = parse_metric_kind(doc.at("metric").get<std::string>());
    s.seed = doc.value("seed", s.seed);
  } catch (const json::exception& ex) {
    throw FormatError(std::string("malformed config: ") + ex.what());
  } catch (const std::invalid_argument& ex) {
    throw FormatError(ex.what());
  }
  if (!(s.rate > 0.0) || s.dimension < 1 || !(s.side > 0.0)) throw FormatError("rate, dimension and side must be positive");
  if (s.metric != MetricKind::euclidean_torus && s.dimension != 1)
    throw FormatError("hierarchical metrics need dimension 1");
  try {
    check_probabilities(s.color_probs);
    (void)s.color_rule();
  } catch (const std::invalid_argument& ex) {
    throw FormatError(ex.what());
  }
  if (s.rule == RuleKind::asymmetric_two_type && s.color_probs.size() != 2)
    throw FormatError("asymmetric rule needs two color probabilities");
  if (s.rule == RuleKind::one_type && s.color_probs.size() != 1)
    throw FormatError("one-type rule needs a single color probability");
  return s;
}

SampleSpec load_sample_spec(const std::string& path) { return parse_sample_spec(read_text_file(path)); }

std::string to_json(const SampleSpec& spec) {
  json doc = {{"rate", spec.rate},
              {"dimension", spec.dimension},
              {"side", spec.side},
              {"color_probs", spec.color_probs},
              {"rule", spec.rule == RuleKind::one_type             ? "one"
                       : spec.rule == RuleKind::asymmetric_two_type ? "asym"
                                                                    : "sym"},
              {"metric", to_string(spec.metric)},
              {"seed", spec.seed}};
  return doc.dump(2);
}

PointConfig sample(const SampleSpec& spec) {
  return sample_config(spec.rate, spec.dimension, spec.side, spec.color_probs, spec.seed, spec.domain());
}

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_points_csv(std::ostream& out, const PointConfig& config, const Matching& matching) {
  if (matching.size() != config.size()) throw std::invalid_argument("matching size differs from point count");
  out << "index";
  for (int a = 0; a < config.dimension; ++a) out << ",x" << a;
  out << ",color,partner,distance\n";
  for (std::size_t i = 0; i < config.size(); ++i) {
    out << i;
    for (double x : config.point(i)) out << ',' << format_number(x);
    out << ',' << config.colors[i] << ',';
    if (matching.is_matched(i)) out << matching.partner[i];
    else out << -1;
    out << ',' << format_number(matching.match_weight[i]) << '\n';
  }
}

void write_matching_csv(std::ostream& out, const std::vector<std::string>& ids, const Matching& matching) {
  if (ids.size() != matching.size()) throw std::invalid_argument("id count differs from matching size");
  out << "vertex,partner,weight\n";
  for (std::size_t v = 0; v < ids.size(); ++v) {
    out << ids[v] << ',' << (matching.is_matched(v) ? ids[matching.partner[v]] : std::string()) << ','
        << format_number(matching.match_weight[v]) << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace smatch
