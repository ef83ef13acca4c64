#include "rawset/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace rawset {

namespace {

double now_cpu() {
  timespec ts{};
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

// Draw helpers are hand-rolled (not std distributions) so that a seed pins
// the run on any standard library; mt19937_64 itself is specified exactly.
inline double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

template <typename LookupFn>
OpDraw draw_op(std::mt19937_64& rng, const WorkloadSpec& spec, LookupFn&& lookup) {
  OpKind kind = OpKind::Add;
  Element e = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    double u = unit_double(rng);
    e = below(rng, spec.alphabet_size);
    kind = u < spec.p_add                ? OpKind::Add
           : u < spec.p_add + spec.p_remove ? OpKind::Remove
                                            : OpKind::RemoveWins;
    if (kind == OpKind::Add || lookup(e)) return {kind, e, false};
  }
  return {OpKind::Add, e, true};
}

void shuffle_ids(std::vector<ReplicaId>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[below(rng, i)]);
}

constexpr std::uint64_t kScheduleSalt = 0x736368656475ull;
constexpr std::uint64_t kShuffleSalt = 0x7368756666ull;

// ---- variant adapters -----------------------------------------------------

struct NaivePolicy {
  using State = NaiveSet;
  static State make(std::uint32_t) { return {}; }
  static bool lookup(const State& s, Element e) { return s.lookup(e); }
  static bool apply(State& s, OpKind k, Element e, ReplicaId r, VersionVector& idgen) {
    switch (k) {
      case OpKind::Add: s.add(e, fresh_id(r, idgen)); return true;
      case OpKind::Remove: return s.remove(e);
      case OpKind::RemoveWins: s.remove_wins(e, fresh_id(r, idgen)); return true;
    }
    return false;
  }
  static void merge_in(State& dst, const State& src) { dst.merge_in(src); }
};

struct OptimizedPolicy {
  using State = OptimizedSet;
  static State make(std::uint32_t n) { return State(n); }
  static bool lookup(const State& s, Element e) { return s.lookup(e); }
  static bool apply(State& s, OpKind k, Element e, ReplicaId r, VersionVector&) {
    switch (k) {
      case OpKind::Add: s.add(e, r); return true;
      case OpKind::Remove: return s.remove(e);
      case OpKind::RemoveWins: return s.remove_wins(e, r);
    }
    return false;
  }
  static void merge_in(State& dst, const State& src) { dst.merge_in(src); }
};

struct ORSetPolicy {
  using State = ORSet;
  static State make(std::uint32_t n) { return State(n); }
  static bool lookup(const State& s, Element e) { return s.lookup(e); }
  static bool apply(State& s, OpKind k, Element e, ReplicaId r, VersionVector&) {
    switch (k) {
      case OpKind::Add: s.add(e, r); return true;
      case OpKind::Remove: return s.remove(e);
      case OpKind::RemoveWins:
        throw std::logic_error("ORSet cannot execute removeWins");
    }
    return false;
  }
  static void merge_in(State& dst, const State& src) { dst.merge_in(src); }
};

// ---- state-based engine ---------------------------------------------------

template <typename Policy>
class StateEngine {
 public:
  using State = typename Policy::State;

  StateEngine(std::uint32_t n, bool record_history) : n_(n), record_(record_history) {
    for (std::uint32_t r = 0; r < n; ++r) result_.states.push_back(Policy::make(n));
    result_.timings.resize(n);
    vcs_.assign(n, VectorClock(n));
    idgens_.assign(n, VersionVector(n));
    executed_.assign(n, 0);
  }

  bool lookup(ReplicaId r, Element e) const { return Policy::lookup(result_.states[r], e); }

  void exec_op(ReplicaId r, OpKind k, Element e, bool degraded = false) {
    vcs_[r].tick(r);
    if (!Policy::apply(result_.states[r], k, e, r, idgens_[r]))
      throw std::logic_error("operation rejected by its precondition");
    if (degraded) ++result_.degraded_to_add;
    ++executed_[r];
    if (record_) result_.history.append(k, e, r, vcs_[r]);
  }

  void sync(ReplicaId p, ReplicaId q) {
    if (p == q) throw std::invalid_argument("sync source equals target");
    double t0 = now_cpu();
    Policy::merge_in(result_.states[q], result_.states[p]);
    result_.timings[q].merge_seconds += now_cpu() - t0;
    vcs_[q].join(vcs_[p]);
  }

  /// Everyone merges everyone's pre-round snapshot, each in its own order.
  void closing_round() {
    if (n_ < 2) return;
    std::vector<State> snaps = result_.states;
    std::vector<VectorClock> vc_snaps = vcs_;
    for (ReplicaId q = 0; q < n_; ++q) {
      double t0 = now_cpu();
      for (ReplicaId p = 0; p < n_; ++p)
        if (p != q) Policy::merge_in(result_.states[q], snaps[p]);
      result_.timings[q].merge_seconds += now_cpu() - t0;
      for (ReplicaId p = 0; p < n_; ++p)
        if (p != q) vcs_[q].join(vc_snaps[p]);
    }
  }

  void book_op_time(ReplicaId r, double seconds) { result_.timings[r].op_seconds += seconds; }
  std::uint64_t executed(ReplicaId r) const { return executed_[r]; }
  RunResult<State>&& take() { return std::move(result_); }

 private:
  std::uint32_t n_;
  bool record_;
  RunResult<State> result_;
  std::vector<VectorClock> vcs_;
  std::vector<VersionVector> idgens_;
  std::vector<std::uint64_t> executed_;
};

template <typename Policy>
RunResult<typename Policy::State> run_state(const WorkloadSpec& spec, const SimProgram& program,
                                            bool record_history) {
  spec.validate();
  StateEngine<Policy> eng(spec.n_replicas, record_history);
  std::vector<std::mt19937_64> rngs;
  rngs.reserve(spec.n_replicas);
  for (std::uint32_t r = 0; r < spec.n_replicas; ++r)
    rngs.emplace_back(derive_seed(spec.seed, r));

  for (const SimStep& step : program) {
    if (step.kind == SimStep::Kind::Ops) {
      ReplicaId r = step.replica;
      double t0 = now_cpu();
      for (std::uint64_t i = 0; i < step.count; ++i) {
        OpDraw d = draw_op(rngs[r], spec, [&](Element e) { return eng.lookup(r, e); });
        eng.exec_op(r, d.kind, d.e, d.degraded);
      }
      eng.book_op_time(r, now_cpu() - t0);
    } else {
      eng.sync(step.replica, step.target);
    }
  }
  for (std::uint32_t r = 0; r < spec.n_replicas; ++r)
    if (eng.executed(r) != spec.ops_per_replica)
      throw std::invalid_argument("program op counts do not match ops_per_replica");
  eng.closing_round();
  return eng.take();
}

template <typename Policy>
RunResult<typename Policy::State> replay_state(std::uint32_t n_replicas, const Script& script) {
  StateEngine<Policy> eng(n_replicas, true);
  for (const ScriptStep& step : script) {
    if (step.kind == ScriptStep::Kind::Op)
      eng.exec_op(step.replica, step.op, step.e);
    else
      eng.sync(step.replica, step.target);
  }
  return eng.take();
}

// ---- op-based engine ------------------------------------------------------

struct StoredMessage {
  OpMessage payload;
  ReplicaId origin = 0;
  VectorClock clock;
};

class OpEngine {
 public:
  OpEngine(std::uint32_t n, bool record_history, std::uint64_t shuffle_seed)
      : n_(n), record_(record_history), shuffle_rng_(shuffle_seed) {
    for (std::uint32_t r = 0; r < n; ++r) result_.states.emplace_back(n);
    result_.timings.resize(n);
    vcs_.assign(n, VectorClock(n));
    idgens_.assign(n, VersionVector(n));
    counts_.assign(n, std::vector<std::uint64_t>(n, 0));
    logs_.resize(n);
    executed_.assign(n, 0);
  }

  bool lookup(ReplicaId r, Element e) const { return result_.states[r].lookup(e); }

  void exec_op(ReplicaId r, OpKind k, Element e, bool degraded = false) {
    OpMessage msg;
    switch (k) {
      case OpKind::Add:
        msg = result_.states[r].prepare_add(e, r, idgens_[r]);
        break;
      case OpKind::Remove: {
        auto prepared = result_.states[r].prepare_remove(e);
        if (!prepared) throw std::logic_error("remove rejected by its precondition");
        msg = *prepared;
        break;
      }
      case OpKind::RemoveWins:
        msg = result_.states[r].prepare_remove_wins(e, r, idgens_[r]);
        break;
    }
    vcs_[r].tick(r);
    arena_.push_back(StoredMessage{std::move(msg), r, vcs_[r]});
    result_.message_bytes += arena_.back().payload.encoded_bytes();
    deliver(r, arena_.size() - 1);
    if (degraded) ++result_.degraded_to_add;
    ++executed_[r];
    if (record_) result_.history.append(k, e, r, vcs_[r]);
  }

  /// Anti-entropy relay: ship every message the source has delivered; the
  /// target delivers the ones it lacks in causal order.
  void sync(ReplicaId p, ReplicaId q) {
    if (p == q) throw std::invalid_argument("sync source equals target");
    double t0 = now_cpu();

    // Per-origin candidate queues; source log order preserves each origin's
    // mint order, which is the required delivery order per origin.
    std::vector<std::vector<std::size_t>> queues(n_);
    std::size_t pending = 0;
    for (std::size_t idx : logs_[p]) {
      const StoredMessage& m = arena_[idx];
      if (m.clock.at(m.origin) > counts_[q][m.origin]) {
        queues[m.origin].push_back(idx);
        ++pending;
      }
    }

    std::vector<ReplicaId> scan(n_);
    std::iota(scan.begin(), scan.end(), ReplicaId{0});
    shuffle_ids(scan, shuffle_rng_);

    std::vector<std::size_t> head(n_, 0);
    while (pending > 0) {
      bool progress = false;
      for (ReplicaId o : scan) {
        while (head[o] < queues[o].size() && ready(q, arena_[queues[o][head[o]]])) {
          deliver(q, queues[o][head[o]]);
          ++head[o];
          --pending;
          progress = true;
        }
      }
      if (!progress) throw std::logic_error("sync left undeliverable messages buffered");
    }

    result_.timings[q].merge_seconds += now_cpu() - t0;
  }

  void closing_round() {
    for (ReplicaId q = 0; q < n_; ++q)
      for (ReplicaId p = 0; p < n_; ++p)
        if (p != q) sync(p, q);
  }

  void book_op_time(ReplicaId r, double seconds) { result_.timings[r].op_seconds += seconds; }
  std::uint64_t executed(ReplicaId r) const { return executed_[r]; }
  std::uint64_t delivered_at(ReplicaId q) const { return logs_[q].size(); }
  RunResult<OpBasedSet>&& take() { return std::move(result_); }

 private:
  bool ready(ReplicaId q, const StoredMessage& m) const {
    if (m.clock.at(m.origin) != counts_[q][m.origin] + 1) return false;
    for (ReplicaId j = 0; j < n_; ++j)
      if (j != m.origin && m.clock.at(j) > counts_[q][j]) return false;
    return true;
  }

  void deliver(ReplicaId q, std::size_t idx) {
    const StoredMessage& m = arena_[idx];
    if (m.clock.at(m.origin) != counts_[q][m.origin] + 1)
      throw std::logic_error("delivery out of per-origin order (duplicate or gap)");
    for (ReplicaId j = 0; j < n_; ++j)
      if (j != m.origin && m.clock.at(j) > counts_[q][j])
        throw std::logic_error("delivery with missing causal dependency");
    result_.states[q].effect(m.payload);
    ++counts_[q][m.origin];
    vcs_[q].join(m.clock);
    logs_[q].push_back(idx);
  }

  std::uint32_t n_;
  bool record_;
  std::mt19937_64 shuffle_rng_;
  RunResult<OpBasedSet> result_;
  std::vector<VectorClock> vcs_;
  std::vector<VersionVector> idgens_;
  std::vector<std::vector<std::uint64_t>> counts_;  // per replica, per origin
  std::vector<std::vector<std::size_t>> logs_;      // delivery order, arena indices
  std::vector<StoredMessage> arena_;
  std::vector<std::uint64_t> executed_;
};

}  // namespace

void WorkloadSpec::validate() const {
  if (n_replicas == 0) throw std::invalid_argument("WorkloadSpec: n_replicas must be positive");
  if (n_replicas > 0xffff) throw std::invalid_argument("WorkloadSpec: too many replicas");
  if (alphabet_size == 0) throw std::invalid_argument("WorkloadSpec: alphabet must be non-empty");
  if (p_add < 0 || p_remove < 0 || p_remove_wins < 0)
    throw std::invalid_argument("WorkloadSpec: negative probability");
  if (std::abs(p_add + p_remove + p_remove_wins - 1.0) > 1e-9)
    throw std::invalid_argument("WorkloadSpec: mix must sum to 1");
}

WorkloadSpec orset_view(const WorkloadSpec& spec) {
  WorkloadSpec out = spec;
  out.p_remove += out.p_remove_wins;
  out.p_remove_wins = 0.0;
  return out;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

SimProgram ring_program(const WorkloadSpec& spec) {
  spec.validate();
  SimProgram prog;
  std::vector<std::uint64_t> remaining(spec.n_replicas, spec.ops_per_replica);
  std::uint64_t block = spec.sync_every == 0 ? spec.ops_per_replica : spec.sync_every;
  if (block == 0) return prog;
  bool work_left = spec.ops_per_replica > 0;
  while (work_left) {
    work_left = false;
    for (ReplicaId r = 0; r < spec.n_replicas; ++r) {
      if (remaining[r] == 0) continue;
      std::uint64_t take = std::min(block, remaining[r]);
      prog.push_back(SimStep::ops(r, take));
      remaining[r] -= take;
      if (spec.sync_every > 0 && take == spec.sync_every && spec.n_replicas > 1)
        prog.push_back(SimStep::sync(r, static_cast<ReplicaId>((r + 1) % spec.n_replicas)));
      if (remaining[r] > 0) work_left = true;
    }
  }
  return prog;
}

SimProgram random_program(const WorkloadSpec& spec, std::uint64_t schedule_seed) {
  spec.validate();
  SimProgram prog;
  std::mt19937_64 rng(derive_seed(schedule_seed, kScheduleSalt));
  std::vector<std::uint64_t> remaining(spec.n_replicas, spec.ops_per_replica);
  std::uint64_t left = spec.ops_per_replica * spec.n_replicas;
  while (left > 0) {
    std::vector<ReplicaId> alive;
    for (ReplicaId r = 0; r < spec.n_replicas; ++r)
      if (remaining[r] > 0) alive.push_back(r);
    ReplicaId r = alive[below(rng, alive.size())];
    std::uint64_t burst = 1 + below(rng, std::min<std::uint64_t>(remaining[r], 8));
    prog.push_back(SimStep::ops(r, burst));
    remaining[r] -= burst;
    left -= burst;
    if (spec.n_replicas > 1 && unit_double(rng) < 0.35) {
      ReplicaId p = static_cast<ReplicaId>(below(rng, spec.n_replicas));
      ReplicaId q = static_cast<ReplicaId>(below(rng, spec.n_replicas - 1));
      if (q >= p) ++q;
      prog.push_back(SimStep::sync(p, q));
    }
  }
  return prog;
}

OpDraw generate_op(std::mt19937_64& rng, const WorkloadSpec& spec,
                   const std::function<bool(Element)>& lookup) {
  return draw_op(rng, spec, lookup);
}

RunResult<NaiveSet> run_naive(const WorkloadSpec& spec, const SimProgram& program, bool record_history) {
  return run_state<NaivePolicy>(spec, program, record_history);
}

RunResult<OptimizedSet> run_optimized(const WorkloadSpec& spec, const SimProgram& program, bool record_history) {
  return run_state<OptimizedPolicy>(spec, program, record_history);
}

RunResult<ORSet> run_orset(const WorkloadSpec& spec, const SimProgram& program, bool record_history) {
  return run_state<ORSetPolicy>(orset_view(spec), program, record_history);
}

RunResult<OpBasedSet> run_op_based(const WorkloadSpec& spec, const SimProgram& program, bool record_history) {
  spec.validate();
  OpEngine eng(spec.n_replicas, record_history, derive_seed(spec.seed, kShuffleSalt));
  std::vector<std::mt19937_64> rngs;
  rngs.reserve(spec.n_replicas);
  for (std::uint32_t r = 0; r < spec.n_replicas; ++r)
    rngs.emplace_back(derive_seed(spec.seed, r));

  for (const SimStep& step : program) {
    if (step.kind == SimStep::Kind::Ops) {
      ReplicaId r = step.replica;
      double t0 = now_cpu();
      for (std::uint64_t i = 0; i < step.count; ++i) {
        OpDraw d = draw_op(rngs[r], spec, [&](Element e) { return eng.lookup(r, e); });
        eng.exec_op(r, d.kind, d.e, d.degraded);
      }
      eng.book_op_time(r, now_cpu() - t0);
    } else {
      eng.sync(step.replica, step.target);
    }
  }
  for (std::uint32_t r = 0; r < spec.n_replicas; ++r)
    if (eng.executed(r) != spec.ops_per_replica)
      throw std::invalid_argument("program op counts do not match ops_per_replica");
  eng.closing_round();
  return eng.take();
}

RunResult<NaiveSet> replay_naive(std::uint32_t n_replicas, const Script& script) {
  return replay_state<NaivePolicy>(n_replicas, script);
}

RunResult<OptimizedSet> replay_optimized(std::uint32_t n_replicas, const Script& script) {
  return replay_state<OptimizedPolicy>(n_replicas, script);
}

RunResult<ORSet> replay_orset(std::uint32_t n_replicas, const Script& script) {
  return replay_state<ORSetPolicy>(n_replicas, script);
}

std::vector<OptimizedSet> run_threaded_smoke(const WorkloadSpec& spec) {
  spec.validate();
  std::uint32_t n = spec.n_replicas;
  std::vector<OptimizedSet> states(n, OptimizedSet(n));

  struct Mailbox {
    std::mutex mu;
    std::vector<OptimizedSet> inbox;
  };
  std::vector<Mailbox> mail(n);

  auto worker = [&](ReplicaId r) {
    std::mt19937_64 rng(derive_seed(spec.seed, r));
    OptimizedSet& s = states[r];
    std::uint64_t block = spec.sync_every == 0 ? spec.ops_per_replica : spec.sync_every;
    std::uint64_t done = 0;
    while (done < spec.ops_per_replica) {
      {
        std::lock_guard<std::mutex> lk(mail[r].mu);
        for (const OptimizedSet& in : mail[r].inbox) s.merge_in(in);
        mail[r].inbox.clear();
      }
      std::uint64_t take = std::min(block, spec.ops_per_replica - done);
      for (std::uint64_t i = 0; i < take; ++i) {
        OpDraw d = draw_op(rng, spec, [&](Element e) { return s.lookup(e); });
        switch (d.kind) {
          case OpKind::Add: s.add(d.e, r); break;
          case OpKind::Remove: s.remove(d.e); break;
          case OpKind::RemoveWins: s.remove_wins(d.e, r); break;
        }
      }
      done += take;
      if (n > 1) {
        ReplicaId next = static_cast<ReplicaId>((r + 1) % n);
        std::lock_guard<std::mutex> lk(mail[next].mu);
        mail[next].inbox.push_back(s);
      }
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(n);
  for (std::uint32_t r = 0; r < n; ++r) threads.emplace_back(worker, static_cast<ReplicaId>(r));
  for (auto& t : threads) t.join();

  // Drain leftover mail, then close with an all-pairs round so the result
  // converges no matter how the threads interleaved.
  for (std::uint32_t r = 0; r < n; ++r)
    for (const OptimizedSet& in : mail[r].inbox) states[r].merge_in(in);
  std::vector<OptimizedSet> snaps = states;
  for (std::uint32_t q = 0; q < n; ++q)
    for (std::uint32_t p = 0; p < n; ++p)
      if (p != q) states[q].merge_in(snaps[p]);
  return states;
}

RunResult<OpBasedSet> replay_op_based(std::uint32_t n_replicas, const Script& script) {
  OpEngine eng(n_replicas, true, derive_seed(0, kShuffleSalt));
  for (const ScriptStep& step : script) {
    if (step.kind == ScriptStep::Kind::Op)
      eng.exec_op(step.replica, step.op, step.e);
    else
      eng.sync(step.replica, step.target);
  }
  return eng.take();
}

}  // namespace rawset
