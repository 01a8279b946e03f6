// Command-line driver: runs one decider per job, emits one certificate
// record per line on stdout, and replays previously emitted records.
// Exit: 0 certified yes / clean report, 1 certified no, 2 unknown,
// 3 malformed input (JSON diagnostic on stderr). Batches exit with the
// worst per-job outcome (3, then 1, then 2, then 0).

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gca/deciders.hpp"
#include "gca/group_ring.hpp"
#include "gca/replay.hpp"
#include "gca/serial.hpp"

namespace {

using namespace gca;

struct Options {
  uint32_t max_radius = 4;
  int32_t max_n = -1;  // negative: pick per universe
  uint32_t period_bound = 6;
  uint64_t budget = uint64_t(1) << 22;
  uint64_t cap = kDefaultCap;
  uint64_t seed = 0;
  uint32_t jobs = 1;
};

struct Outcome {
  int exit = 0;
  std::string out;  // one record line, or empty
  std::string err;  // one diagnostic line, or empty
};

int severity_of(Status s) {
  switch (s) {
    case Status::CertifiedYes: return 0;
    case Status::CertifiedNo: return 1;
    default: return 2;
  }
}

// Orders exit codes by how bad they are: 3 > 1 > 2 > 0.
int worse(int a, int b) {
  auto key = [](int e) { return e == 3 ? 3 : e == 1 ? 2 : e == 2 ? 1 : 0; };
  return key(b) > key(a) ? b : a;
}

uint32_t auto_max_n(const GroupPtr& G) {
  if (G->kind() == GroupKind::FreeAbelian) return G->rank() <= 1 ? 6 : 3;
  return 4;
}

const CellularAutomaton& need_ca(const JobConfig& job) {
  if (!job.ca) fail("MalformedConfig", "this operation needs a rule");
  return *job.ca;
}

const GroupRingMatrix& need_ring(const JobConfig& job) {
  if (!job.ring) fail("MalformedConfig", "this operation needs a ring");
  return *job.ring;
}

Json error_json(const Error& e) {
  Json err = Json::object();
  err["code"] = e.code();
  err["message"] = e.what();
  if (e.partial()) err["partial"] = *e.partial();
  if (!e.detail().empty()) {
    try {
      err["detail"] = Json::parse(e.detail());
    } catch (...) {
      err["detail"] = e.detail();
    }
  }
  return err;
}

Json exact_witness(const Exact1dResult& r) {
  Json w = Json::object();
  w["kind"] = "exact_1d";
  w["injective"] = r.injective;
  w["surjective"] = r.surjective;
  w["hull_offset"] = r.hull_offset;
  w["hull_width"] = r.hull_width;
  return w;
}

struct LeftSearch {
  std::optional<GroupRingMatrix> beta;
  uint32_t radius = 0;
};

LeftSearch escalate_left_inverse(const GroupRingMatrix& a, uint32_t max_radius) {
  for (uint32_t r = 0; r <= max_radius; ++r)
    if (auto b = find_left_inverse(a, r)) return {std::move(b), r};
  return {std::nullopt, max_radius};
}

// No left inverse with support in ball(max_radius). On a finite universe a
// singular regular representation promotes the miss to a refutation: left
// multiplication by the ring element is not injective, so no radius helps.
Verdict no_left_inverse_verdict(const GroupRingMatrix& a, uint32_t max_radius) {
  Verdict v;
  v.radius = int64_t(max_radius);
  if (a.G->kind() == GroupKind::Finite) {
    FpMat rep = regular_representation(a);
    uint32_t rk = rank_of(rep);
    if (rk < rep.rows()) {
      v.status = Status::CertifiedNo;
      v.witness = Json::object();
      v.witness["kind"] = "singular_regular_representation";
      v.witness["rank"] = rk;
      v.witness["rows"] = rep.rows();
      v.transcript["note"] = "left multiplication is singular, so no support radius suffices";
      return v;
    }
    v.transcript["regular_representation"] = "invertible";
    return v;
  }
  v.transcript["searched_radius"] = max_radius;
  return v;
}

struct Decision {
  std::string decider;
  Json parameters = Json::object();
  Verdict verdict;
};

Decision decide(const std::string& cmd, const JobConfig& job, const Options& opt) {
  Decision d;
  Json& p = d.parameters;
  if (cmd == "check-injective") {
    uint32_t max_n = opt.max_n < 0 ? auto_max_n(job.universe) : uint32_t(opt.max_n);
    d.decider = "certify_injective";
    p["max_n"] = max_n;
    p["budget"] = opt.budget;
    p["seed"] = opt.seed;
    d.verdict = certify_injective(need_ca(job), max_n, opt.budget);
  } else if (cmd == "refute-injective") {
    d.decider = "refute_injective";
    p["bound"] = opt.period_bound;
    p["cap"] = opt.cap;
    p["budget"] = opt.budget;
    p["seed"] = opt.seed;
    d.verdict = refute_injective(need_ca(job), opt.period_bound, opt.cap, opt.budget);
  } else if (cmd == "check-surjective") {
    const CellularAutomaton& ca = need_ca(job);
    if (ca.universe->kind() == GroupKind::Finite) {
      d.decider = "check_surjective_finite";
      p["cap"] = opt.cap;
      p["seed"] = opt.seed;
      d.verdict = check_surjective_finite(ca, opt.cap);
    } else if (ca.universe->kind() == GroupKind::FreeAbelian && ca.universe->rank() == 1) {
      d.decider = "exact_1d";
      p["cap"] = opt.cap;
      p["seed"] = opt.seed;
      Exact1dResult r = exact_1d_oracle(ca, opt.cap);
      d.verdict.status = r.surjective ? Status::CertifiedYes : Status::CertifiedNo;
      d.verdict.witness = exact_witness(r);
    } else {
      fail("UnsupportedUniverse", "no exact surjectivity oracle on this universe");
    }
  } else if (cmd == "goe") {
    d.decider = "goe_search";
    p["window_radius"] = opt.max_radius;
    p["cap"] = opt.cap;
    p["seed"] = opt.seed;
    const CellularAutomaton& ca = need_ca(job);
    d.verdict = goe_search(ca, ball(ca.universe, opt.max_radius), opt.cap);
  } else if (cmd == "invert") {
    d.decider = "synthesize_inverse";
    p["max_radius"] = opt.max_radius;
    p["cap"] = opt.cap;
    p["budget"] = opt.budget;
    p["seed"] = opt.seed;
    d.verdict = synthesize_inverse(need_ca(job), opt.max_radius, opt.cap, opt.budget).verdict;
  } else if (cmd == "pre-injective") {
    d.decider = "pre_injectivity";
    p["support_radius"] = opt.max_radius;
    p["cap"] = opt.cap;
    p["budget"] = opt.budget;
    p["seed"] = opt.seed;
    d.verdict = pre_injectivity(need_ca(job), opt.max_radius, opt.cap, opt.budget);
  } else if (cmd == "post-surjective") {
    d.decider = "post_surjectivity";
    p["deviation_radius"] = opt.max_radius;
    p["search_radius"] = opt.max_radius;
    p["cap"] = opt.cap;
    p["budget"] = opt.budget;
    p["seed"] = opt.seed;
    d.verdict =
        post_surjectivity(need_ca(job), opt.max_radius, opt.max_radius, opt.cap, opt.budget);
  } else if (cmd == "exact-1d") {
    d.decider = "exact_1d";
    p["cap"] = opt.cap;
    p["seed"] = opt.seed;
    Exact1dResult r = exact_1d_oracle(need_ca(job), opt.cap);
    d.verdict.status = Status::CertifiedYes;
    d.verdict.witness = exact_witness(r);
  } else if (cmd == "sweep") {
    if (!job.memory) fail("MalformedConfig", "a sweep needs a memory set");
    if (!job.alphabet) fail("MalformedConfig", "a sweep needs an alphabet");
    d.decider = "surjunctivity_sweep";
    p["budget"] = opt.budget;
    p["cap"] = opt.cap;
    p["seed"] = opt.seed;
    SweepReport rep = surjunctivity_sweep(job.universe, job.alphabet, *job.memory,
                                          opt.budget, opt.cap);
    d.verdict.status = rep.violations == 0 ? Status::CertifiedYes : Status::CertifiedNo;
    d.verdict.witness = rep.to_json();
  } else if (cmd == "phi") {
    d.decider = "phi";
    p["seed"] = opt.seed;
    CellularAutomaton ca = phi(need_ring(job));
    d.verdict.status = Status::CertifiedYes;
    d.verdict.witness = Json::object();
    d.verdict.witness["kind"] = "automaton";
    d.verdict.witness["rule"] = rule_to_json(ca.rule);
  } else if (cmd == "left-inverse") {
    d.decider = "find_left_inverse";
    p["max_radius"] = opt.max_radius;
    p["seed"] = opt.seed;
    const GroupRingMatrix& alpha = need_ring(job);
    LeftSearch ls = escalate_left_inverse(alpha, opt.max_radius);
    if (ls.beta) {
      d.verdict.status = Status::CertifiedYes;
      d.verdict.radius = int64_t(ls.radius);
      d.verdict.witness = Json::object();
      d.verdict.witness["kind"] = "left_inverse";
      d.verdict.witness["ring"] = ring_to_json(*ls.beta);
    } else {
      d.verdict = no_left_inverse_verdict(alpha, opt.max_radius);
    }
  } else if (cmd == "stable-finite") {
    const GroupRingMatrix& alpha = need_ring(job);
    std::optional<GroupRingMatrix> beta = job.ring_left;
    uint32_t found_at = 0;
    if (!beta) {
      LeftSearch ls = escalate_left_inverse(alpha, opt.max_radius);
      beta = std::move(ls.beta);
      found_at = ls.radius;
    }
    if (!beta) {
      d.decider = "find_left_inverse";
      p["max_radius"] = opt.max_radius;
      p["seed"] = opt.seed;
      d.verdict = no_left_inverse_verdict(alpha, opt.max_radius);
    } else {
      d.decider = "verify_stable_finiteness_instance";
      p["max_radius"] = opt.max_radius;
      p["cap"] = opt.cap;
      p["seed"] = opt.seed;
      d.verdict = verify_stable_finiteness_instance(alpha, *beta, opt.cap);
      if (!job.ring_left) d.verdict.transcript["left_inverse_radius"] = found_at;
    }
  } else {
    fail("MalformedConfig", "unrecognized operation: " + cmd);
  }
  return d;
}

Outcome run_one(const std::string& cmd, const Json& jdoc, const Options& opt,
                std::optional<size_t> index) {
  Outcome o;
  try {
    JobConfig job = job_from_json(jdoc);
    auto t0 = std::chrono::steady_clock::now();
    Decision d = decide(cmd, job, opt);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
    Json rec = make_record(d.decider, d.parameters, d.verdict, jdoc, ms);
    o.exit = severity_of(d.verdict.status);
    o.out = rec.dump() + "\n";
  } catch (const Error& e) {
    Json diag = Json::object();
    diag["error"] = error_json(e);
    if (index) diag["job_index"] = *index;
    o.exit = 3;
    o.err = diag.dump() + "\n";
  } catch (const std::exception& e) {
    Json diag = Json::object();
    diag["error"] = Json::object();
    diag["error"]["code"] = "MalformedConfig";
    diag["error"]["message"] = e.what();
    if (index) diag["job_index"] = *index;
    o.exit = 3;
    o.err = diag.dump() + "\n";
  }
  return o;
}

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) fail("MalformedConfig", "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_jobs(const std::string& cmd, const std::string& path, const Options& opt) {
  Json doc;
  try {
    doc = Json::parse(slurp(path));
  } catch (const Error& e) {
    Json diag = Json::object();
    diag["error"] = error_json(e);
    std::cerr << diag.dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    Json diag = Json::object();
    diag["error"] = Json::object();
    diag["error"]["code"] = "MalformedConfig";
    diag["error"]["message"] = e.what();
    std::cerr << diag.dump() << "\n";
    return 3;
  }

  std::vector<Json> jobs;
  bool batch = doc.is_object() && doc.contains("jobs");
  if (batch) {
    try {
      require_keys(doc, {"jobs"});
      if (!doc["jobs"].is_array()) fail("MalformedConfig", "jobs must be an array");
    } catch (const Error& e) {
      Json diag = Json::object();
      diag["error"] = error_json(e);
      std::cerr << diag.dump() << "\n";
      return 3;
    }
    for (const auto& j : doc["jobs"]) jobs.push_back(j);
  } else {
    jobs.push_back(doc);
  }

  std::vector<Outcome> results(jobs.size());
  uint32_t workers = std::min<uint32_t>(std::max(1u, opt.jobs), uint32_t(jobs.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i)
      results[i] = run_one(cmd, jobs[i], opt, batch ? std::optional(i) : std::nullopt);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (uint32_t w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (size_t i = next.fetch_add(1); i < jobs.size(); i = next.fetch_add(1))
          results[i] = run_one(cmd, jobs[i], opt, std::optional(i));
      });
    for (auto& t : pool) t.join();
  }

  int exit = 0;
  for (const auto& r : results) {
    std::cout << r.out;
    std::cerr << r.err;
    exit = worse(exit, r.exit);
  }
  return exit;
}

// Replays certificate records (one JSON object per line) without searching.
// A record that fails to replay exits 1; malformed input exits 3.
int run_verify(const std::string& path, const Options& opt) {
  std::string text;
  try {
    text = slurp(path);
  } catch (const Error& e) {
    Json diag = Json::object();
    diag["error"] = error_json(e);
    std::cerr << diag.dump() << "\n";
    return 3;
  }
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  int exit = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      Json rec = Json::parse(line);
      replay_record(rec, opt.cap, opt.budget);
      Json ok = Json::object();
      ok["line"] = lineno;
      ok["decider"] = rec.value("decider", std::string());
      ok["confirmed"] = true;
      std::cout << ok.dump() << "\n";
    } catch (const Error& e) {
      Json diag = Json::object();
      diag["line"] = lineno;
      diag["error"] = error_json(e);
      std::cerr << diag.dump() << "\n";
      exit = worse(exit, e.code() == "ReplayFailed" ? 1 : 3);
    } catch (const std::exception& e) {
      Json diag = Json::object();
      diag["line"] = lineno;
      diag["error"] = Json::object();
      diag["error"]["code"] = "MalformedConfig";
      diag["error"]["message"] = e.what();
      std::cerr << diag.dump() << "\n";
      exit = worse(exit, 3);
    }
  }
  return exit;
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  if (const char* env = std::getenv("GCA_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) opt.cap = v;
  }

  CLI::App app{"certificates for cellular automata over finitely generated groups"};
  app.require_subcommand(1);

  std::string path;
  auto attach = [&](CLI::App* sub, const char* positional_help) {
    sub->add_option("input", path, positional_help)->required();
    sub->add_option("--max-radius", opt.max_radius,
                    "radius bound for searches, synthesis, and windows")
        ->capture_default_str();
    sub->add_option("--max-n", opt.max_n,
                    "kernel-window escalation bound; negative picks 6 on Z, 3 on Z^d with "
                    "d > 1, 4 elsewhere")
        ->capture_default_str();
    sub->add_option("--period-bound", opt.period_bound,
                    "support and lattice-index bound for injectivity refutation")
        ->capture_default_str();
    sub->add_option("--budget", opt.budget, "backtracking node budget")
        ->capture_default_str();
    sub->add_option("--cap", opt.cap,
                    "dense enumeration cap; the GCA_CAP environment variable overrides the "
                    "built-in default")
        ->capture_default_str();
    sub->add_option("--seed", opt.seed, "echoed into records; reserved for samplers")
        ->capture_default_str();
    sub->add_option("--jobs", opt.jobs, "worker threads for batch documents")
        ->capture_default_str();
  };

  const char* job_help = "job document (JSON object, or {\"jobs\": [...]}); - reads stdin";
  std::vector<std::string> run_cmds = {
      "check-injective", "refute-injective", "check-surjective", "goe",
      "invert",          "pre-injective",    "post-surjective",  "exact-1d",
      "sweep",           "phi",              "left-inverse",     "stable-finite"};
  std::vector<std::string> run_help = {
      "certify injectivity through kernel-window emptiness",
      "search for an injectivity counterexample",
      "decide surjectivity exactly (finite universes and Z)",
      "search a window for a pattern with no preimage",
      "synthesize and certify an inverse rule",
      "decide pre-injectivity",
      "decide post-surjectivity",
      "exact injectivity and surjectivity on Z",
      "enumerate homomorphism rules and tally the surjunctivity implication",
      "turn a group-ring matrix into its automaton",
      "search for a left inverse in the group ring",
      "check whether a one-sided ring inverse is two-sided"};
  for (size_t i = 0; i < run_cmds.size(); ++i)
    attach(app.add_subcommand(run_cmds[i], run_help[i]), job_help);
  attach(app.add_subcommand("verify", "replay certificate records without searching"),
         "records file (one JSON record per line); - reads stdin");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    Json diag = Json::object();
    diag["error"] = Json::object();
    diag["error"]["code"] = "UsageError";
    diag["error"]["message"] = e.what();
    std::cerr << diag.dump() << "\n";
    return 3;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  if (cmd == "verify") return run_verify(path, opt);
  return run_jobs(cmd, path, opt);
}
