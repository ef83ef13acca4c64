#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "rawset/history.hpp"
#include "rawset/naive_set.hpp"
#include "rawset/opbased_set.hpp"
#include "rawset/optimized_set.hpp"
#include "rawset/orset.hpp"

namespace rawset {

/// Everything a run depends on. Two runs with equal specs (and equal
/// programs) produce bit-identical histories and final states.
struct WorkloadSpec {
  std::uint32_t n_replicas = 3;
  std::uint64_t ops_per_replica = 0;
  std::uint64_t alphabet_size = 1;
  double p_add = 1.0;
  double p_remove = 0.0;
  double p_remove_wins = 0.0;
  std::uint64_t sync_every = 0;  // 0 = no periodic sync
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument on nonsense (empty alphabet, mix not
  /// summing to 1, zero replicas).
  void validate() const;
};

/// The add-wins baseline cannot express remove-wins removals, so its runs
/// fold that probability into plain removes.
WorkloadSpec orset_view(const WorkloadSpec& spec);

/// One scheduled chunk of work. Ops: `replica` executes `count` generated
/// operations. Sync: `replica` ships its state (or message log) to `target`.
struct SimStep {
  enum class Kind : std::uint8_t { Ops, Sync };
  Kind kind = Kind::Ops;
  ReplicaId replica = 0;
  std::uint64_t count = 0;
  ReplicaId target = 0;

  static SimStep ops(ReplicaId r, std::uint64_t count) { return {Kind::Ops, r, count, 0}; }
  static SimStep sync(ReplicaId source, ReplicaId target) { return {Kind::Sync, source, 0, target}; }

  friend bool operator==(const SimStep&, const SimStep&) = default;
};

using SimProgram = std::vector<SimStep>;

/// Periodic ring schedule: replicas run blocks of sync_every ops round-robin
/// and ship to their ring neighbour after each full block.
SimProgram ring_program(const WorkloadSpec& spec);

/// Random interleaving of short op bursts and random directed syncs.
/// Convergence does not depend on the drawn sync pairs because every run
/// ends with an all-pairs merge round.
SimProgram random_program(const WorkloadSpec& spec, std::uint64_t schedule_seed);

struct ReplicaTimings {
  double op_seconds = 0.0;
  double merge_seconds = 0.0;
};

template <typename State>
struct RunResult {
  std::vector<State> states;           // per replica, after the closing round
  History history;                     // filled iff history recording was on
  std::vector<ReplicaTimings> timings; // merge time is booked at the receiver
  std::uint64_t message_bytes = 0;     // op-based: encoded bytes of originated messages
  std::uint64_t degraded_to_add = 0;   // draws that fell back to add
};

RunResult<NaiveSet> run_naive(const WorkloadSpec& spec, const SimProgram& program, bool record_history);
RunResult<OptimizedSet> run_optimized(const WorkloadSpec& spec, const SimProgram& program, bool record_history);
RunResult<ORSet> run_orset(const WorkloadSpec& spec, const SimProgram& program, bool record_history);
RunResult<OpBasedSet> run_op_based(const WorkloadSpec& spec, const SimProgram& program, bool record_history);

/// Hand-written executions for scenario tests: explicit operations and syncs,
/// no generator, no implicit closing round, history always recorded.
struct ScriptStep {
  enum class Kind : std::uint8_t { Op, Sync };
  Kind kind = Kind::Op;
  ReplicaId replica = 0;
  OpKind op = OpKind::Add;
  Element e = 0;
  ReplicaId target = 0;

  static ScriptStep operation(ReplicaId r, OpKind op, Element e) { return {Kind::Op, r, op, e, 0}; }
  static ScriptStep sync(ReplicaId source, ReplicaId target) { return {Kind::Sync, source, OpKind::Add, 0, target}; }

  friend bool operator==(const ScriptStep&, const ScriptStep&) = default;
};

using Script = std::vector<ScriptStep>;

RunResult<NaiveSet> replay_naive(std::uint32_t n_replicas, const Script& script);
RunResult<OptimizedSet> replay_optimized(std::uint32_t n_replicas, const Script& script);
RunResult<ORSet> replay_orset(std::uint32_t n_replicas, const Script& script);
RunResult<OpBasedSet> replay_op_based(std::uint32_t n_replicas, const Script& script);

/// One generated operation. Draws (kind, element) until the draw is locally
/// executable: adds always are; remove and removeWins require the element to
/// be present. After 64 failed draws the op degrades to an add of the last
/// drawn element. Consumes exactly two RNG values per draw.
struct OpDraw {
  OpKind kind = OpKind::Add;
  Element e = 0;
  bool degraded = false;
};

OpDraw generate_op(std::mt19937_64& rng, const WorkloadSpec& spec,
                   const std::function<bool(Element)>& lookup);

/// Derived per-replica generator seed (also used with salts for schedule
/// randomness). Plain splitmix64 finalizer over seed and salt.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

/// Smoke-test runner: one thread per replica, states shipped through locked
/// mailboxes on the ring schedule. Thread interleaving makes the run
/// nondeterministic, so it asserts nothing beyond what it returns; callers
/// check convergence only. Never used for timing or reported numbers.
std::vector<OptimizedSet> run_threaded_smoke(const WorkloadSpec& spec);

}  // namespace rawset
