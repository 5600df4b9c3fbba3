// Copyright 2026 The smatch Authors.
// SPDX-License-Identifier: Apache-2.0

// File formats.
//
// Instance JSON, explicit weights:
//   {"vertices": ["a", "b", ...], "colors": [0, 1, ...],
//    "weights": [["a", "b", 1.5], ["b", "c", "inf"], ...]}
// Pairs that are not listed get weight +inf.
//
// Instance JSON, from points:
//   {"rule": "asym", "metric": "euclidean", "dimension": 2, "side": 10,
//    "positions": [[x, y], ...], "colors": [0, 1, ...]}
// "k" sets the number of colors of a symmetric rule (default: max color + 1).
//
// Sampling config JSON:
//   {"rate": 1, "dimension": 2, "side": 10, "color_probs": [0.75, 0.25],
//    "rule": "asym", "metric": "euclidean", "seed": 1}

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "smatch/matching.hpp"
#include "smatch/point_models.hpp"

namespace smatch {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct InstanceFile {
  std::vector<std::string> ids;
  std::optional<WeightedInstance> weighted;
  std::optional<PointInstance> points;

  const InstanceView& view() const;
};

/// Throws FormatError on malformed input and TieError when check_ties is
/// set and the weights are not distinct where it matters.
InstanceFile parse_instance_json(const std::string& text, bool check_ties = true);
InstanceFile load_instance(const std::string& path, bool check_ties = true);

struct SampleSpec {
  double rate = 1.0;
  int dimension = 2;
  double side = 10.0;
  std::vector<double> color_probs{1.0};
  RuleKind rule = RuleKind::one_type;
  MetricKind metric = MetricKind::euclidean_torus;
  std::uint64_t seed = 1;

  ColorRule color_rule() const;
  Domain domain() const;
};

SampleSpec parse_sample_spec(const std::string& text);
SampleSpec load_sample_spec(const std::string& path);
std::string to_json(const SampleSpec& spec);

/// Samples the configuration described by spec.
PointConfig sample(const SampleSpec& spec);

/// Shortest round-trip decimal for a double; "inf" for +infinity.
std::string format_number(double x);

/// index, x_0..x_{d-1}, color, partner (-1 if unmatched), distance ("inf").
void write_points_csv(std::ostream& out, const PointConfig& config, const Matching& matching);

/// vertex, partner ("" if unmatched), weight ("inf"), by vertex id.
void write_matching_csv(std::ostream& out, const std::vector<std::string>& ids,
                        const Matching& matching);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace smatch
