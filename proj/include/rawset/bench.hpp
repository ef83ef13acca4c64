#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rawset/sim.hpp"

namespace rawset {

enum class Variant : std::uint8_t { Naive, Optimized, OpBased, ORSet };

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(std::string_view name);

struct ExperimentConfig {
  WorkloadSpec workload;            // seed is the base; rep k runs with seed+k
  std::vector<Variant> variants;
  std::uint32_t repetitions = 5;
  std::string histories_dir;        // when non-empty, dump histories + manifest
};

/// One (variant, repetition, replica) measurement. message_bytes is the
/// run-wide wire traffic of the op-based variant, repeated on each of the
/// run's rows; state-based runs report 0.
struct SampleRow {
  Variant variant = Variant::Optimized;
  std::uint32_t rep = 0;
  ReplicaId replica = 0;
  std::uint64_t executed_ops = 0;
  double op_seconds = 0.0;
  double merge_seconds = 0.0;
  std::uint64_t state_bytes = 0;
  std::uint64_t live_elements = 0;
  std::uint64_t message_bytes = 0;
};

struct VariantSummary {
  Variant variant = Variant::Optimized;
  double mean_op_seconds = 0.0;
  double mean_merge_seconds = 0.0;
  double mean_total_seconds = 0.0;
  double mean_state_bytes = 0.0;
  double mean_live_elements = 0.0;
};

/// Cost of a variant relative to the add-wins baseline, from the means.
struct RatioVsORSet {
  Variant variant = Variant::Optimized;
  double op_time_ratio = 0.0;
  double total_time_ratio = 0.0;
  double metadata_ratio = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<SampleRow> samples;
  std::vector<VariantSummary> summaries;
  std::vector<RatioVsORSet> ratios;  // present only when orset was run
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

std::string to_csv(const ExperimentReport& report);
void write_csv(const ExperimentReport& report, const std::string& path);
std::string manifest_json(const ExperimentConfig& cfg);

std::uint64_t measure_state_size(const NaiveSet& s);
std::uint64_t measure_state_size(const OptimizedSet& s);
std::uint64_t measure_state_size(const ORSet& s);
std::uint64_t measure_state_size(const OpBasedSet& s);

/// CLI helpers. Throw std::invalid_argument on malformed input.
/// mix format "A:R:W" in percentages summing to 100.
void parse_mix(std::string_view text, WorkloadSpec& spec);
/// "never" or a positive op count.
std::uint64_t parse_sync_every(std::string_view text);
/// A variant name or "all".
std::vector<Variant> parse_variants(std::string_view text);

}  // namespace rawset
