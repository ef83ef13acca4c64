#include "rawset/bench.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rawset {

namespace {

constexpr Variant kAllVariants[] = {Variant::Naive, Variant::Optimized, Variant::OpBased,
                                    Variant::ORSet};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

template <typename State>
void collect_samples(ExperimentReport& report, Variant v, std::uint32_t rep,
                     const WorkloadSpec& w, const RunResult<State>& run) {
  for (ReplicaId r = 0; r < w.n_replicas; ++r) {
    SampleRow row;
    row.variant = v;
    row.rep = rep;
    row.replica = r;
    row.executed_ops = w.ops_per_replica;
    row.op_seconds = run.timings[r].op_seconds;
    row.merge_seconds = run.timings[r].merge_seconds;
    row.state_bytes = measure_state_size(run.states[r]);
    row.live_elements = run.states[r].live_count();
    row.message_bytes = run.message_bytes;
    report.samples.push_back(row);
  }
}

void dump_history(const ExperimentConfig& cfg, Variant v, std::uint32_t rep, const History& h) {
  namespace fs = std::filesystem;
  fs::path dir(cfg.histories_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory: " + dir.string());
  fs::path file = dir / (std::string(variant_name(v)) + "_rep" + std::to_string(rep) + ".history");
  write_text_file(file.string(), to_text(h));
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::Naive: return "naive";
    case Variant::Optimized: return "optimized";
    case Variant::OpBased: return "opbased";
    case Variant::ORSet: return "orset";
  }
  return "?";
}

std::optional<Variant> variant_from_name(std::string_view name) {
  for (Variant v : kAllVariants)
    if (name == variant_name(v)) return v;
  return std::nullopt;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.workload.validate();
  if (cfg.repetitions == 0) throw std::invalid_argument("repetitions must be positive");
  if (cfg.variants.empty()) throw std::invalid_argument("no variants selected");

  ExperimentReport report;
  report.config = cfg;
  bool record = !cfg.histories_dir.empty();
  if (record) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.histories_dir, ec);
    if (ec) throw std::runtime_error("cannot create directory: " + cfg.histories_dir);
    write_text_file((std::filesystem::path(cfg.histories_dir) / "manifest.json").string(),
                    manifest_json(cfg));
  }

  for (Variant v : cfg.variants) {
    for (std::uint32_t rep = 0; rep < cfg.repetitions; ++rep) {
      WorkloadSpec w = cfg.workload;
      w.seed = cfg.workload.seed + rep;
      SimProgram program = ring_program(w);
      switch (v) {
        case Variant::Naive: {
          auto run = run_naive(w, program, record);
          collect_samples(report, v, rep, w, run);
          if (record) dump_history(cfg, v, rep, run.history);
          break;
        }
        case Variant::Optimized: {
          auto run = run_optimized(w, program, record);
          collect_samples(report, v, rep, w, run);
          if (record) dump_history(cfg, v, rep, run.history);
          break;
        }
        case Variant::OpBased: {
          auto run = run_op_based(w, program, record);
          collect_samples(report, v, rep, w, run);
          if (record) dump_history(cfg, v, rep, run.history);
          break;
        }
        case Variant::ORSet: {
          auto run = run_orset(w, program, record);
          collect_samples(report, v, rep, w, run);
          if (record) dump_history(cfg, v, rep, run.history);
          break;
        }
      }
    }
  }

  for (Variant v : cfg.variants) {
    VariantSummary s;
    s.variant = v;
    std::size_t n = 0;
    for (const SampleRow& row : report.samples) {
      if (row.variant != v) continue;
      s.mean_op_seconds += row.op_seconds;
      s.mean_merge_seconds += row.merge_seconds;
      s.mean_state_bytes += static_cast<double>(row.state_bytes);
      s.mean_live_elements += static_cast<double>(row.live_elements);
      ++n;
    }
    if (n > 0) {
      s.mean_op_seconds /= static_cast<double>(n);
      s.mean_merge_seconds /= static_cast<double>(n);
      s.mean_state_bytes /= static_cast<double>(n);
      s.mean_live_elements /= static_cast<double>(n);
      s.mean_total_seconds = s.mean_op_seconds + s.mean_merge_seconds;
    }
    report.summaries.push_back(s);
  }

  const VariantSummary* orset = nullptr;
  for (const VariantSummary& s : report.summaries)
    if (s.variant == Variant::ORSet) orset = &s;
  if (orset && orset->mean_state_bytes > 0) {
    for (const VariantSummary& s : report.summaries) {
      if (s.variant == Variant::ORSet) continue;
      RatioVsORSet ratio;
      ratio.variant = s.variant;
      ratio.op_time_ratio = orset->mean_op_seconds > 0 ? s.mean_op_seconds / orset->mean_op_seconds : 0.0;
      ratio.total_time_ratio =
          orset->mean_total_seconds > 0 ? s.mean_total_seconds / orset->mean_total_seconds : 0.0;
      ratio.metadata_ratio = s.mean_state_bytes / orset->mean_state_bytes;
      report.ratios.push_back(ratio);
    }
  }
  return report;
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream os;
  os << "kind,variant,rep,replica,executed_ops,op_seconds,merge_seconds,total_seconds,"
        "state_bytes,live_elements,message_bytes\n";
  for (const SampleRow& r : report.samples) {
    os << "sample," << variant_name(r.variant) << ',' << r.rep << ',' << r.replica << ','
       << r.executed_ops << ',' << format_double(r.op_seconds) << ','
       << format_double(r.merge_seconds) << ',' << format_double(r.op_seconds + r.merge_seconds)
       << ',' << r.state_bytes << ',' << r.live_elements << ',' << r.message_bytes << '\n';
  }
  for (const VariantSummary& s : report.summaries) {
    os << "mean," << variant_name(s.variant) << ",,,," << format_double(s.mean_op_seconds) << ','
       << format_double(s.mean_merge_seconds) << ',' << format_double(s.mean_total_seconds) << ','
       << format_double(s.mean_state_bytes) << ',' << format_double(s.mean_live_elements) << ",\n";
  }
  for (const RatioVsORSet& r : report.ratios) {
    os << "ratio_vs_orset," << variant_name(r.variant) << ",,,," << format_double(r.op_time_ratio)
       << ",," << format_double(r.total_time_ratio) << ',' << format_double(r.metadata_ratio)
       << ",,\n";
  }
  return os.str();
}

void write_csv(const ExperimentReport& report, const std::string& path) {
  write_text_file(path, to_csv(report));
}

std::string manifest_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["workload"] = {{"n_replicas", cfg.workload.n_replicas},
                   {"ops_per_replica", cfg.workload.ops_per_replica},
                   {"alphabet_size", cfg.workload.alphabet_size},
                   {"p_add", cfg.workload.p_add},
                   {"p_remove", cfg.workload.p_remove},
                   {"p_remove_wins", cfg.workload.p_remove_wins},
                   {"sync_every", cfg.workload.sync_every},
                   {"seed", cfg.workload.seed}};
  j["repetitions"] = cfg.repetitions;
  j["schedule"] = "ring";
  std::vector<std::string> names;
  for (Variant v : cfg.variants) names.emplace_back(variant_name(v));
  j["variants"] = names;
  return j.dump(2) + "\n";
}

std::uint64_t measure_state_size(const NaiveSet& s) { return s.encoded_bytes(); }
std::uint64_t measure_state_size(const OptimizedSet& s) { return s.encoded_bytes(); }
std::uint64_t measure_state_size(const ORSet& s) { return s.encoded_bytes(); }
std::uint64_t measure_state_size(const OpBasedSet& s) { return s.encoded_bytes(); }

void parse_mix(std::string_view text, WorkloadSpec& spec) {
  double parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t colon = text.find(':', pos);
    bool last = i == 2;
    if (last != (colon == std::string_view::npos))
      throw std::invalid_argument("mix must be A:R:W");
    std::string field(text.substr(pos, last ? std::string_view::npos : colon - pos));
    try {
      std::size_t used = 0;
      parts[i] = std::stod(field, &used);
      if (used != field.size()) throw std::invalid_argument(field);
    } catch (const std::exception&) {
      throw std::invalid_argument("mix: bad number '" + field + "'");
    }
    if (parts[i] < 0) throw std::invalid_argument("mix: negative share");
    pos = colon + 1;
  }
  if (std::abs(parts[0] + parts[1] + parts[2] - 100.0) > 1e-6)
    throw std::invalid_argument("mix percentages must sum to 100");
  spec.p_add = parts[0] / 100.0;
  spec.p_remove = parts[1] / 100.0;
  spec.p_remove_wins = parts[2] / 100.0;
}

std::uint64_t parse_sync_every(std::string_view text) {
  if (text == "never") return 0;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || v == 0)
    throw std::invalid_argument("sync-every must be a positive count or 'never'");
  return v;
}

std::vector<Variant> parse_variants(std::string_view text) {
  if (text == "all") return {kAllVariants, kAllVariants + 4};
  auto v = variant_from_name(text);
  if (!v) throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
  return {*v};
}

}  // namespace rawset
