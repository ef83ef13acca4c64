#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "rawset/bench.hpp"

namespace {

void print_summary(const rawset::ExperimentReport& report) {
  std::printf("%-10s %12s %12s %12s %14s %12s\n", "variant", "op_s(mean)", "merge_s(mean)",
              "total_s", "state_bytes", "live");
  for (const auto& s : report.summaries)
    std::printf("%-10s %12.4f %12.4f %12.4f %14.1f %12.1f\n", rawset::variant_name(s.variant),
                s.mean_op_seconds, s.mean_merge_seconds, s.mean_total_seconds, s.mean_state_bytes,
                s.mean_live_elements);
  for (const auto& r : report.ratios)
    std::printf("%s vs orset: op time x%.3f, total time x%.3f, metadata x%.3f\n",
                rawset::variant_name(r.variant), r.op_time_ratio, r.total_time_ratio,
                r.metadata_ratio);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replicated-set workload benchmark: add-wins/remove-wins variants vs OR-Set"};

  std::string variant = "all";
  std::string mix = "50:25:25";
  std::string sync_every = "20000";
  std::string out_path = "results.csv";
  std::string histories_dir;
  rawset::ExperimentConfig cfg;
  cfg.workload.n_replicas = 3;
  cfg.workload.ops_per_replica = 400000;
  cfg.workload.alphabet_size = 20000;
  cfg.workload.seed = 1;
  cfg.repetitions = 5;

  app.add_option("--variant", variant, "naive|optimized|opbased|orset|all")->capture_default_str();
  app.add_option("--replicas", cfg.workload.n_replicas, "number of replicas")->capture_default_str();
  app.add_option("--ops", cfg.workload.ops_per_replica, "operations per replica")->capture_default_str();
  app.add_option("--alphabet", cfg.workload.alphabet_size, "element universe size")->capture_default_str();
  app.add_option("--sync-every", sync_every, "ops between syncs, or 'never'")->capture_default_str();
  app.add_option("--mix", mix, "add:remove:removeWins percentages")->capture_default_str();
  app.add_option("--seed", cfg.workload.seed, "base seed; repetition k uses seed+k")->capture_default_str();
  app.add_option("--reps", cfg.repetitions, "repetitions per variant")->capture_default_str();
  app.add_option("--out", out_path, "CSV output path")->capture_default_str();
  app.add_option("--histories", histories_dir, "directory for history dumps + manifest");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.variants = rawset::parse_variants(variant);
    rawset::parse_mix(mix, cfg.workload);
    cfg.workload.sync_every = rawset::parse_sync_every(sync_every);
    cfg.histories_dir = histories_dir;
    cfg.workload.validate();

    rawset::ExperimentReport report = rawset::run_experiment(cfg);
    rawset::write_csv(report, out_path);
    print_summary(report);
    std::printf("wrote %s\n", out_path.c_str());
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}
