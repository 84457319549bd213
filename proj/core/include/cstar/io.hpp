#pragma once

// JSON documents for the command line tool. Every document is an object
// {"version": 1, "kind": ..., ...}; unknown fields are rejected and errors
// carry a path to the offending field ("$.vectors[2][0]"). Algebra elements
// are lists of blocks, each block a list of rows of [re, im] pairs. Numbers
// are written in shortest round-trip form, so serialize(parse(text)) == text
// for documents produced by serialize.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cstar/certifier.hpp"
#include "cstar/frame.hpp"
#include "cstar/seminorm.hpp"

namespace cstar::io {

inline constexpr int kSchemaVersion = 1;

struct VectorFamily {
  AlgebraShape shape;
  int dim;
  std::vector<ModuleVector> vectors;
};

struct FrameDocument {
  VectorFamily family;
  FrameScope scope = FrameScope::Ambient;
};

struct SeminormDocument {
  AlgebraShape shape;
  int dim;
  SeminormSpec spec;
};

struct CounterexampleDocument {
  int trunc;
  int dim;
};

struct Tolerances {
  double positivity = 1e-10;
  double residual = 1e-9;
  double norm = 1e-12;
};

struct RunConfig {
  std::uint64_t seed = 0;
  Tolerances tolerances;
  std::vector<double> eps_grid{1.0, 0.5, 0.25, 0.125};
  std::map<std::string, std::string> paths;
};

/// The "kind" of a document without validating the rest.
std::string peek_kind(std::string_view text);

FrameDocument parse_frame(std::string_view text);
std::string serialize(const FrameDocument& doc);

VectorFamily parse_generators(std::string_view text);
std::string serialize_generators(const VectorFamily& family);

SampleSet parse_sample(std::string_view text);
std::string serialize(const SampleSet& sample);

/// States are validated at parse time; an invalid density is reported with
/// the index of its state.
SeminormDocument parse_seminorm_spec(std::string_view text);
std::string serialize(const SeminormDocument& doc);

ModuleOperator parse_operator(std::string_view text);
std::string serialize(const ModuleOperator& op);

CounterexampleDocument parse_counterexample_setting(std::string_view text);
std::string serialize(const CounterexampleDocument& doc);

RunConfig parse_run_config(std::string_view text);
std::string serialize(const RunConfig& config);

// Output documents.
std::string serialize(const Certificate& certificate);
std::string serialize(const EquivalenceReport& report);
std::string serialize(const OperatorReport& report);
std::string serialize(const SeriesDecomposition& series);
/// Wraps already serialized documents (one per eps) into {"kind": "sweep"}.
std::string serialize_sweep(const std::vector<double>& eps, const std::vector<std::string>& documents);

}  // namespace cstar::io
