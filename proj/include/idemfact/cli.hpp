#pragma once

// Command-line front end. Everything writes to caller-supplied streams so the
// commands can be driven in-process by tests.
//
// Exit codes: 0 ok, 1 verification/internal failure, 2 parse or ring error,
// 3 budget exhausted.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <optional>
#include <sstream>
#include <thread>

#include "idemfact/certificate_json.hpp"
#include "idemfact/pipeline.hpp"

namespace idem::cli {

inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::NotPositive:
    case ErrorKind::NotSquareFree:
    case ErrorKind::AlphaIsOneModFourZero:
      return 2;
    case ErrorKind::BudgetExhausted:
    case ErrorKind::NoUnimodularSolutionInBudget:
      return 3;
    default:
      return 1;
  }
}

inline Budgets budgets_for(double multiplier) {
  return multiplier > 0 ? Budgets::scaled(multiplier) : Budgets::from_env();
}

inline RingSpec parse_ring(const std::string& text) {
  Int a;
  try {
    a = parse_int(text);
  } catch (const Error&) {
    fail(ErrorKind::ParseError, "alpha must be an integer, got '" + text + "'");
  }
  return RingSpec::make(a);
}

struct RunReport {
  int r = 0, s = 0;
  bool verified = false;
  bool conforming = false;
  Flags flags;
  int n0_max = 0;
  double wall_ms = 0;
  std::vector<std::string> phases;
  std::vector<std::string> annotations;
  std::optional<std::string> error;  ///< "Kind: message" for failed runs

  json to_json() const {
    json j;
    j["counts"] = {{"r", r}, {"s", s}};
    j["bounds"] = {{"r", kBoundR}, {"s", kBoundS}};
    j["verified"] = verified;
    j["verdict"] = error ? "failed" : (conforming ? "conforming" : "non-conforming");
    j["flags"] = flags.names();
    j["n0_max"] = n0_max;
    j["wall_ms"] = wall_ms;
    j["phases"] = phases;
    j["annotations"] = annotations;
    if (error) j["error"] = *error;
    return j;
  }
};

inline RunReport report_of(const FactorResult& res, double wall_ms) {
  RunReport rep;
  rep.r = res.cert.r();
  rep.s = res.cert.s();
  rep.verified = verify(res.cert);
  rep.conforming = res.conforming();
  rep.flags = res.cert.flags();
  rep.n0_max = res.trace.n0_max();
  rep.wall_ms = wall_ms;
  rep.phases = res.trace.phases;
  rep.annotations = res.cert.annotations();
  return rep;
}

// ---------------------------------------------------------------------------

struct FactorArgs {
  std::string alpha, x, y, out;
  double budget = 0;
};

inline int cmd_factor(const FactorArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<RingSpec> ring;
  QuadInt x(RingSpec::make(2)), y(RingSpec::make(2));
  try {
    ring = parse_ring(a.alpha);
    x = parse_element(*ring, a.x);
    y = parse_element(*ring, a.y);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  Trace partial;
  FactorOptions opt{budgets_for(a.budget), &partial};
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count(); };
  try {
    FactorResult res = factor_singular_row(x, y, opt);
    RunReport rep = report_of(res, elapsed());
    if (!rep.verified) {
      err << "certificate failed re-verification\n";
      return 1;
    }
    json cert = to_json(res.cert);
    if (!a.out.empty()) {
      std::ofstream f(a.out);
      if (!f) {
        err << "cannot write " << a.out << "\n";
        return 1;
      }
      f << cert.dump(2) << "\n";
      out << json{{"report", rep.to_json()}}.dump(2) << "\n";
    } else {
      out << json{{"certificate", cert}, {"report", rep.to_json()}}.dump(2) << "\n";
    }
    return 0;
  } catch (const Error& e) {
    RunReport rep;
    rep.error = e.what();
    rep.phases = partial.phases;
    rep.flags = partial.flags;
    rep.n0_max = partial.n0_max();
    rep.wall_ms = elapsed();
    out << json{{"report", rep.to_json()}}.dump(2) << "\n";
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

// ---------------------------------------------------------------------------

/// Accepts a bare certificate or the {"certificate": ...} document `factor` prints.
inline int cmd_verify(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream f(path);
  if (!f) {
    err << "cannot read " << path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  std::optional<ParsedCertificate> parsed;
  try {
    json j;
    try {
      j = json::parse(buf.str());
    } catch (const json::exception& e) {
      fail(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("certificate")) j = j["certificate"];
    parsed.emplace(certificate_from_json(j));
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  const ParsedCertificate& pc = *parsed;
  VerifyReport rep = verify_report(pc.data);
  if (!rep.ok) {
    out << "FAIL";
    if (rep.failing_idempotent >= 0) out << " idempotent " << rep.failing_idempotent;
    if (rep.failing_conjugator >= 0) out << " conjugator " << rep.failing_conjugator;
    out << ": " << rep.message << "\n";
    return 1;
  }
  if (pc.declared_r != pc.data.r() || pc.declared_s != pc.data.s()) {
    out << "FAIL declared counts (" << pc.declared_r << "," << pc.declared_s << ") differ from actual ("
        << pc.data.r() << "," << pc.data.s() << ")\n";
    return 1;
  }
  out << "OK r=" << pc.data.r() << " s=" << pc.data.s() << "\n";
  return 0;
}

// ---------------------------------------------------------------------------

struct BatchArgs {
  std::string alpha;
  int samples = 100;
  int height = 10;
  std::uint64_t seed = 0;
  std::string csv;
  int jobs = 1;
  bool timing = false;
  double budget = 0;
};

struct BatchRow {
  QuadInt x, y;
  RunReport rep;
  std::optional<ErrorKind> error_kind;
  double micros = 0;
};

/// Sample i depends only on (seed, i).
inline std::pair<QuadInt, QuadInt> batch_sample(const RingSpec& R, std::uint64_t seed, int index, int height) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<long> d(-height, height);
  long c[4];
  for (auto& v : c) v = d(rng);
  return {QuadInt::from_coords(R, c[0], c[1]), QuadInt::from_coords(R, c[2], c[3])};
}

inline BatchRow batch_run(const RingSpec& R, const BatchArgs& a, const Budgets& budgets, int index) {
  auto [x, y] = batch_sample(R, a.seed, index, a.height);
  BatchRow row{x, y, {}, {}, 0};
  Trace partial;
  auto t0 = std::chrono::steady_clock::now();
  try {
    FactorResult res = factor_singular_row(x, y, {budgets, &partial});
    row.rep = report_of(res, 0);
  } catch (const Error& e) {
    row.rep.error = e.what();
    row.rep.flags = partial.flags;
    row.rep.n0_max = partial.n0_max();
    row.error_kind = e.kind();
  }
  row.micros = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

inline std::string csv_quote(const std::string& s) { return "\"" + s + "\""; }

inline int cmd_batch(const BatchArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<RingSpec> ring;
  try {
    ring = parse_ring(a.alpha);
    require(a.samples >= 1, ErrorKind::ParseError, "--samples must be >= 1");
    require(a.height >= 1, ErrorKind::ParseError, "--height must be >= 1");
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  }
  const Budgets budgets = budgets_for(a.budget);
  std::vector<std::optional<BatchRow>> rows(a.samples);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < a.samples; i = next++) rows[i] = batch_run(*ring, a, budgets, i);
  };
  int jobs = std::max(1, std::min(a.jobs, a.samples));
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << "alpha,x,y,r,s,n0_max,flags,verdict,micros\n";
  int max_r = 0, max_s = 0, verified = 0, flag_free = 0, conforming = 0, flag_free_conforming = 0, max_r_free = 0,
      max_s_free = 0;
  bool unverified = false;
  std::map<std::string, int> taxonomy;
  for (const auto& row : rows) {
    const RunReport& rep = row->rep;
    std::string verdict = rep.error ? "failed" : (rep.conforming ? "conforming" : "non-conforming");
    csv << ring->alpha() << "," << csv_quote(row->x.to_pair_string()) << "," << csv_quote(row->y.to_pair_string())
        << ",";
    if (rep.error) {
      csv << ",,";
    } else {
      csv << rep.r << "," << rep.s << ",";
    }
    csv << rep.n0_max << "," << rep.flags.to_string() << "," << verdict << ",";
    if (a.timing) csv << static_cast<long long>(row->micros);
    csv << "\n";
    if (rep.error) {
      taxonomy[std::string(to_string(*row->error_kind))]++;
      continue;
    }
    if (!rep.verified) {
      unverified = true;
      taxonomy["VerificationFailed"]++;
      continue;
    }
    ++verified;
    max_r = std::max(max_r, rep.r);
    max_s = std::max(max_s, rep.s);
    if (rep.conforming) ++conforming;
    for (const auto& f : rep.flags.names()) taxonomy["flag:" + f]++;
    if (rep.flags.empty()) {
      ++flag_free;
      max_r_free = std::max(max_r_free, rep.r);
      max_s_free = std::max(max_s_free, rep.s);
      if (rep.r <= kBoundR && rep.s <= kBoundS) ++flag_free_conforming;
    }
  }
  if (!a.csv.empty()) {
    std::ofstream f(a.csv);
    if (!f) {
      err << "cannot write " << a.csv << "\n";
      return 1;
    }
    f << csv.str();
  } else {
    out << csv.str();
  }
  auto frac = [&](int k, int n) {
    std::ostringstream s;
    s << k << "/" << n << " (" << std::fixed << std::setprecision(1) << (n ? 100.0 * k / n : 0.0) << "%)";
    return s.str();
  };
  out << "samples: " << a.samples << "\n";
  out << "verified: " << frac(verified, a.samples) << "\n";
  out << "max r: " << max_r << "\n";
  out << "max s: " << max_s << "\n";
  out << "flag-free: " << frac(flag_free, a.samples) << "\n";
  out << "flag-free max r: " << max_r_free << " max s: " << max_s_free << " (bounds " << kBoundR << ", " << kBoundS
      << ")\n";
  out << "flag-free within bounds: " << frac(flag_free_conforming, flag_free) << "\n";
  out << "conformance rate: " << frac(conforming, a.samples) << "\n";
  out << "failure taxonomy:";
  if (taxonomy.empty()) out << " none";
  for (const auto& [k, n] : taxonomy) out << " " << k << "=" << n;
  out << "\n";
  if (unverified) return 1;
  for (const auto& [k, n] : taxonomy) {
    if (k.rfind("flag:", 0) == 0) continue;
    return k == "BudgetExhausted" || k == "NoUnimodularSolutionInBudget" ? 3 : 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------

inline bool known_norm_euclidean(long alpha) {
  static const long list[] = {2, 3, 5, 6, 7, 11, 13, 17, 19, 21, 29, 33, 37, 41, 57, 73};
  return std::find(std::begin(list), std::end(list), alpha) != std::end(list);
}

inline int cmd_ring_info(const std::string& alpha, std::ostream& out, std::ostream& err) {
  try {
    RingSpec R = parse_ring(alpha);
    QuadInt eps = fundamental_unit(R);
    out << "alpha: " << R.alpha() << "\n";
    out << "w: " << R.omega_description() << "\n";
    out << "w^2: " << (omega(R) * omega(R)).to_string() << "\n";
    out << "discriminant: " << R.discriminant() << "\n";
    out << "fundamental unit: " << eps.to_string() << " " << eps.to_pair_string() << " norm " << eps.norm() << "\n";
    out << "norm-euclidean: " << (known_norm_euclidean(R.alpha()) ? "yes" : "no") << "\n";
    return 0;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.kind());
  }
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Idempotent factorization of singular 2x2 rows over real quadratic integer rings"};
  app.require_subcommand(1);

  FactorArgs fa;
  auto* factor = app.add_subcommand("factor", "factor the row [x y; 0 0]");
  factor->add_option("--alpha", fa.alpha, "square-free alpha >= 2")->required();
  factor->add_option("--x", fa.x, "first entry, a+b*w or (c1,c2)")->required();
  factor->add_option("--y", fa.y, "second entry")->required();
  factor->add_option("--out", fa.out, "certificate file (default: stdout)");
  factor->add_option("--budget", fa.budget, "budget multiplier (default: $IDEMFACT_BUDGET or 1)");

  std::string cert_path;
  auto* verify_cmd = app.add_subcommand("verify", "re-verify a certificate file");
  verify_cmd->add_option("--cert", cert_path)->required();

  BatchArgs ba;
  auto* batch = app.add_subcommand("batch", "factor seeded random rows and summarize counts");
  batch->add_option("--alpha", ba.alpha)->required();
  batch->add_option("--samples", ba.samples)->capture_default_str();
  batch->add_option("--height", ba.height, "coordinate bound H, samples in [-H, H]")->capture_default_str();
  batch->add_option("--seed", ba.seed)->capture_default_str();
  batch->add_option("--csv", ba.csv, "per-sample rows (default: stdout)");
  batch->add_option("--jobs", ba.jobs, "worker threads")->capture_default_str();
  batch->add_flag("--timing", ba.timing, "fill the micros column");
  batch->add_option("--budget", ba.budget, "budget multiplier");

  std::string ring_alpha;
  auto* info = app.add_subcommand("ring-info", "describe the ring of integers");
  info->add_option("--alpha", ring_alpha)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  if (*factor) return cmd_factor(fa, out, err);
  if (*verify_cmd) return cmd_verify(cert_path, out, err);
  if (*batch) return cmd_batch(ba, out, err);
  return cmd_ring_info(ring_alpha, out, err);
}

}  // namespace idem::cli
