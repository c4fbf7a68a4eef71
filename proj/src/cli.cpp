#include "lccp/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "lccp/error.hpp"
#include "lccp/formulas.hpp"
#include "lccp/markov.hpp"
#include "lccp/simulate.hpp"

namespace lccp::cli {

namespace {

using nlohmann::json;

struct DistArgs {
  std::optional<double> p;
  std::string dist_json;

  void attach(CLI::App* cmd) {
    auto* p_opt = cmd->add_option("--p", p, "P(sample size 1) for sizes {1:p, 2:1-p}")
                      ->check(CLI::Range(0.0, 1.0));
    auto* d_opt = cmd->add_option("--dist", dist_json, R"(size distribution, e.g. {"sizes":{"1":0.5,"2":0.5}})");
    p_opt->excludes(d_opt);
  }

  SampleSizeDist resolve() const {
    if (p) return make_kp_dist(*p);
    if (!dist_json.empty()) return parse_dist_json(dist_json);
    throw CLI::ValidationError("one of --p or --dist is required");
  }
};

std::string fmt_double(double v) { return fmt::format("{}", v); }

RecoveryMode parse_mode(const std::string& text) {
  if (text == "unknown") return RecoveryMode::VerticesUnknown;
  if (text == "known") return RecoveryMode::VerticesKnown;
  throw CLI::ValidationError("--mode must be 'unknown' or 'known'");
}

RecoveryTarget parse_target(const std::string& text, RecoveryMode mode) {
  if (text == "complete") return RecoveryTarget::complete(mode);
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "arbitrary" && !rest.empty()) {
      return RecoveryTarget::arbitrary(std::stoul(rest), mode);
    }
    if (kind == "specific" && !rest.empty()) {
      std::vector<CouponId> ids;
      std::stringstream ss(rest);
      std::string item;
      while (std::getline(ss, item, ',')) ids.push_back(static_cast<CouponId>(std::stoul(item)));
      return RecoveryTarget::specific(std::move(ids), mode);
    }
  } catch (const std::logic_error&) {
    // fall through to the usage message
  }
  throw CLI::ValidationError("--target must be complete, arbitrary:R or specific:ID[,ID...]");
}

json stats_json(const SimulationStats& s) {
  return {{"reps", s.reps},
          {"mean", s.mean},
          {"std_error", s.std_error},
          {"five_number",
           {{"min", s.five_number.min},
            {"q25", s.five_number.q25},
            {"median", s.five_number.median},
            {"q75", s.five_number.q75},
            {"max", s.five_number.max}}},
          {"seed", s.seed}};
}

constexpr const char* kStatsCsvHeader = "reps,mean,std_error,min,q25,median,q75,max,seed\n";

std::string stats_csv_row(const SimulationStats& s) {
  return fmt::format("{},{},{},{},{},{},{},{},{}\n", s.reps, s.mean, s.std_error,
                     s.five_number.min, s.five_number.q25, s.five_number.median,
                     s.five_number.q75, s.five_number.max, s.seed);
}

void write_stats(std::ostream& out, const std::string& format, const SimulationStats& s) {
  if (format == "json") {
    out << stats_json(s).dump(2) << '\n';
  } else if (format == "csv") {
    out << kStatsCsvHeader << stats_csv_row(s);
  } else {
    out << fmt::format("mean {} ± {} (reps {}, seed {})\n", s.mean, s.std_error, s.reps, s.seed)
        << fmt::format("min {}  q25 {}  median {}  q75 {}  max {}\n", s.five_number.min,
                       s.five_number.q25, s.five_number.median, s.five_number.q75,
                       s.five_number.max);
  }
}

class Cli {
 public:
  Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {
    app_.require_subcommand(1);
    app_.set_help_all_flag("--help-all");
    add_exact();
    add_simulate();
    add_compare();
    add_formula();
    add_min_samples();
    add_sweep();
    add_verify();
  }

  int run(const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app_.parse(reversed);
    } catch (const CLI::ParseError& e) {
      const int code = app_.exit(e, out_, err_);
      return code == 0 ? kExitOk : kExitUsage;
    }
    try {
      return action_();
    } catch (const CLI::ValidationError& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitUsage;
    } catch (const Error& e) {
      err_ << "error: " << e.what() << '\n';
      return kExitUsage;
    }
  }

 private:
  CLI::App* command(const std::string& name, const std::string& help,
                    std::function<int()> action) {
    auto* cmd = app_.add_subcommand(name, help);
    cmd->callback([this, action] { action_ = action; });
    return cmd;
  }

  void add_format(CLI::App* cmd) {
    cmd->add_option("--format", format_, "text, json or csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
  }

  void add_exact() {
    auto* cmd = command("exact", "exact E[T] for complete recovery, sizes {1,2}", [this] {
      const auto dist = dist_.resolve();
      if (!dist.support_within(1, 2)) {
        err_ << "error: support beyond {1,2}; exact solving covers sizes 1 and 2 only, use "
                "`simulate`\n";
        return kExitUsage;
      }
      const double p = dist.probability(1);
      const double e = expected_complete(n_, p);
      std::vector<double> tail;
      if (tail_max_) tail = tail_distribution(n_, p, *tail_max_);
      if (format_ == "json") {
        json doc = {{"n", n_}, {"p", p}, {"expected_complete", e}};
        if (tail_max_) doc["tail"] = tail;
        out_ << doc.dump(2) << '\n';
      } else if (format_ == "csv") {
        if (tail_max_) {
          out_ << "n,p,expected_complete,t,tail\n";
          for (std::size_t t = 0; t < tail.size(); ++t) {
            out_ << fmt::format("{},{},{},{},{}\n", n_, p, e, t, tail[t]);
          }
        } else {
          out_ << "n,p,expected_complete\n" << fmt::format("{},{},{}\n", n_, p, e);
        }
      } else {
        out_ << fmt_double(e) << '\n';
        for (std::size_t t = 0; t < tail.size(); ++t) {
          out_ << fmt::format("P(T > {}) = {}\n", t, tail[t]);
        }
      }
      return kExitOk;
    });
    cmd->add_option("--n", n_, "number of coupons")->required()->check(CLI::PositiveNumber);
    dist_.attach(cmd);
    cmd->add_option("--tail", tail_max_, "also print P(T > t) for t = 0..T");
    add_format(cmd);
  }

  void add_simulate() {
    auto* cmd = command("simulate", "Monte Carlo estimate of the recovery time", [this] {
      const auto target = parse_target(target_, parse_mode(mode_));
      const auto stats = estimate(n_, dist_.resolve(), target, reps_, seed_, threads_from_env());
      write_stats(out_, format_, stats);
      return kExitOk;
    });
    cmd->add_option("--n", n_, "number of coupons")->required()->check(CLI::PositiveNumber);
    dist_.attach(cmd);
    cmd->add_option("--target", target_, "complete | arbitrary:R | specific:ID[,ID...]");
    cmd->add_option("--mode", mode_, "unknown | known");
    cmd->add_option("--reps", reps_, "replications");
    cmd->add_option("--seed", seed_, "master seed")->required();
    add_format(cmd);
  }

  void add_compare() {
    auto* cmd = command("compare", "LCCP complete recovery vs collecting n-1 coupons", [this] {
      const auto [lccp, ccp] =
          compare_lccp_ccp(n_, dist_.resolve(), reps_, seed_, threads_from_env());
      if (format_ == "json") {
        out_ << json{{"lccp", stats_json(lccp)}, {"ccp", stats_json(ccp)}}.dump(2) << '\n';
      } else if (format_ == "csv") {
        out_ << "model," << kStatsCsvHeader << "lccp," << stats_csv_row(lccp) << "ccp,"
             << stats_csv_row(ccp);
      } else {
        out_ << "lccp: ";
        write_stats(out_, format_, lccp);
        out_ << "ccp:  ";
        write_stats(out_, format_, ccp);
      }
      return kExitOk;
    });
    cmd->add_option("--n", n_, "number of coupons")->required()->check(CLI::PositiveNumber);
    dist_.attach(cmd);
    cmd->add_option("--reps", reps_, "replications");
    cmd->add_option("--seed", seed_, "master seed")->required();
    add_format(cmd);
  }

  void add_formula() {
    auto* cmd = command("formula", "evaluate a closed form or series", [this] {
      FormulaResult result;
      if (formula_ == "harmonic") {
        result = {harmonic(n_), Provenance::Baseline};
      } else if (formula_ == "ccp-full") {
        result = {ccp_expected_full(n_), Provenance::Baseline};
      } else if (formula_ == "ccp-partial") {
        result = {ccp_expected_partial(n_, r_), Provenance::Baseline};
      } else if (formula_ == "st1") {
        result = st1_expected(n_, variant_ == "printed" ? St1Variant::Printed : St1Variant::TailSum);
      } else if (formula_ == "st1-tail") {
        result = {st1_tail(n_, t_), Provenance::ProofTailSum};
      } else if (formula_ == "t1") {
        result = t1_expected_series(n_);
      } else if (formula_ == "kp3") {
        result = kp3_expected(p_, variant_ == "printed" ? Kp3Variant::Printed
                                                        : Kp3Variant::ProofSeries);
      } else {
        result = conjectured_2lccp_expected(n_);
      }
      if (format_ == "json") {
        out_ << json{{"formula", formula_},
                     {"value", result.value},
                     {"provenance", std::string(to_string(result.provenance))}}
                    .dump(2)
             << '\n';
      } else if (format_ == "csv") {
        out_ << "formula,value,provenance\n"
             << fmt::format("{},{},{}\n", formula_, result.value, to_string(result.provenance));
      } else {
        out_ << fmt::format("{} {}\n", result.value, to_string(result.provenance));
      }
      return kExitOk;
    });
    cmd->add_option("name", formula_, "formula name")
        ->required()
        ->check(CLI::IsMember(
            {"harmonic", "ccp-full", "ccp-partial", "st1", "st1-tail", "t1", "kp3", "conj2"}));
    cmd->add_option("--n", n_, "number of coupons");
    cmd->add_option("--r", r_, "coupons to collect (ccp-partial)");
    cmd->add_option("--t", t_, "number of samples (st1-tail)");
    cmd->add_option("--p", p_, "P(size 1) (kp3)")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--variant", variant_, "printed | tailsum (st1), printed | series (kp3)")
        ->check(CLI::IsMember({"printed", "tailsum", "series"}));
    add_format(cmd);
  }

  void add_min_samples() {
    auto* cmd = command("min-samples", "fewest samples that can recover every label", [this] {
      const auto m = min_samples(n_, dist_.resolve());
      const std::string status = m.proven ? "proven" : "conjecture";
      if (format_ == "json") {
        out_ << json{{"n", n_}, {"value", m.value}, {"k_m", m.k_m}, {"status", status}}.dump(2)
             << '\n';
      } else if (format_ == "csv") {
        out_ << "n,value,k_m,status\n" << fmt::format("{},{},{},{}\n", n_, m.value, m.k_m, status);
      } else {
        out_ << fmt::format("{} {}\n", m.value, status);
      }
      return kExitOk;
    });
    cmd->add_option("--n", n_, "number of coupons")->required()->check(CLI::PositiveNumber);
    dist_.attach(cmd);
    add_format(cmd);
  }

  void add_sweep() {
    auto* cmd = command("sweep", "exact and simulated E[T] over a grid of p", [this] {
      if (reps_ > 0 && !seed_given_) throw CLI::ValidationError("--seed is required when --reps > 0");
      const auto rows = sweep(n_, parse_grid(grid_), reps_, seed_, threads_from_env());
      const std::string text = format_ == "json" ? sweep_json(rows) : sweep_csv(rows);
      if (out_path_.empty()) {
        out_ << text;
      } else {
        std::ofstream file(out_path_, std::ios::binary);
        file << text;
        if (!file) {
          err_ << "error: cannot write " << out_path_ << '\n';
          return kExitUsage;
        }
      }
      return kExitOk;
    });
    cmd->add_option("--n", n_, "number of coupons")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--grid", grid_, "start:stop:step or comma list of p values")->required();
    cmd->add_option("--reps", reps_, "replications per grid point (0 = exact only)");
    cmd->add_option("--seed", seed_, "master seed")->each([this](const std::string&) {
      seed_given_ = true;
    });
    cmd->add_option("--out", out_path_, "output file (default stdout)");
    cmd->add_option("--format", format_, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  void add_verify() {
    auto* cmd = command("verify", "cross-check formulas, oracle, chain and simulator", [this] {
      VerifyOptions options;
      options.n_max = n_max_;
      options.seed = seed_given_ ? seed_ : options.seed;
      const auto results = verify(options);
      bool failed = false;
      json doc = json::array();
      for (const auto& r : results) {
        failed = failed || r.status == CheckStatus::Fail;
        if (format_ == "json") {
          doc.push_back({{"status", std::string(to_string(r.status))},
                         {"claim", r.claim},
                         {"detail", r.detail}});
        } else {
          out_ << fmt::format("{:<8}{}: {}\n", to_string(r.status), r.claim, r.detail);
        }
      }
      if (format_ == "json") out_ << doc.dump(2) << '\n';
      return failed ? kExitClaimFailed : kExitOk;
    });
    cmd->add_option("--n-max", n_max_, "largest n for oracle comparisons (3..7)")
        ->check(CLI::Range(3, 7));
    cmd->add_option("--seed", seed_, "seed for randomized checks")->each([this](const std::string&) {
      seed_given_ = true;
    });
    cmd->add_option("--format", format_, "text or json")->check(CLI::IsMember({"text", "json"}));
  }

  std::ostream& out_;
  std::ostream& err_;
  CLI::App app_{"Labeled coupon collector: exact solver, simulator and formula checks", "lccp"};
  std::function<int()> action_;

  std::size_t n_ = 0;
  DistArgs dist_;
  std::optional<std::size_t> tail_max_;
  std::string format_ = "text";
  std::string target_ = "complete";
  std::string mode_ = "unknown";
  std::size_t reps_ = 1000;
  std::uint64_t seed_ = 0;
  bool seed_given_ = false;
  std::string formula_;
  std::size_t r_ = 0;
  std::size_t t_ = 0;
  double p_ = 0;
  std::string variant_ = "tailsum";
  std::string grid_;
  std::string out_path_;
  std::size_t n_max_ = 5;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Cli cli(out, err);
  return cli.run(args);
}

}  // namespace lccp::cli
