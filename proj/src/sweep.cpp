#include <cmath>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "lccp/cli.hpp"
#include "lccp/error.hpp"
#include "lccp/formulas.hpp"
#include "lccp/markov.hpp"

namespace lccp::cli {

namespace {

double snap(double x) { return std::round(x * 1e12) / 1e12; }

double parse_number(std::string_view text) {
  const std::string s(text);
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty()) {
    throw Error(ErrorKind::OutOfRange, "bad grid number '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    const auto a = text.find(':');
    const auto b = text.find(':', a + 1);
    if (b == std::string_view::npos) throw Error(ErrorKind::OutOfRange, "grid is start:stop:step");
    const double start = parse_number(text.substr(0, a));
    const double stop = parse_number(text.substr(a + 1, b - a - 1));
    const double step = parse_number(text.substr(b + 1));
    if (!(step > 0) || stop < start) throw Error(ErrorKind::OutOfRange, "empty grid");
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(snap(start + static_cast<double>(i) * step));
  } else {
    std::size_t from = 0;
    while (from <= text.size()) {
      const auto comma = text.find(',', from);
      const auto piece = text.substr(from, comma == std::string_view::npos ? text.size() - from
                                                                          : comma - from);
      grid.push_back(snap(parse_number(piece)));
      if (comma == std::string_view::npos) break;
      from = comma + 1;
    }
  }
  for (double p : grid) {
    if (p < 0.0 || p > 1.0) throw Error(ErrorKind::OutOfRange, fmt::format("grid point {} outside [0,1]", p));
  }
  return grid;
}

std::vector<SweepRow> sweep(std::size_t n, const std::vector<double>& grid, std::size_t reps,
                            std::uint64_t seed, unsigned threads) {
  const double at_one = expected_complete(n, 1.0);
  const double at_zero = expected_complete(n, 0.0);
  const double nhn = ccp_expected_full(n);
  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (double p : grid) {
    SweepRow row;
    row.n = n;
    row.p = p;
    row.expected_exact = expected_complete(n, p);
    row.normalized_exact = row.expected_exact / nhn;
    row.convex_baseline = p * at_one + (1 - p) * at_zero;
    row.seed = seed;
    if (reps > 0) {
      row.sim = estimate(n, make_kp_dist(p), RecoveryTarget::complete(), reps, seed, threads);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "n,p,expected_exact,normalized_exact,convex_baseline,sim_mean,sim_std_error,sim_min,"
      "sim_q25,sim_median,sim_q75,sim_max,reps,seed\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}", r.n, r.p, r.expected_exact, r.normalized_exact,
                       r.convex_baseline);
    if (r.sim) {
      const auto& s = *r.sim;
      out += fmt::format(",{},{},{},{},{},{},{},{}", s.mean, s.std_error, s.five_number.min,
                         s.five_number.q25, s.five_number.median, s.five_number.q75,
                         s.five_number.max, s.reps);
    } else {
      out += ",,,,,,,,0";
    }
    out += fmt::format(",{}\n", r.seed);
  }
  return out;
}

std::string sweep_json(const std::vector<SweepRow>& rows) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"n", r.n},
                          {"p", r.p},
                          {"expected_exact", r.expected_exact},
                          {"normalized_exact", r.normalized_exact},
                          {"convex_baseline", r.convex_baseline},
                          {"seed", r.seed}};
    if (r.sim) {
      const auto& s = *r.sim;
      row["sim_mean"] = s.mean;
      row["sim_std_error"] = s.std_error;
      row["sim_min"] = s.five_number.min;
      row["sim_q25"] = s.five_number.q25;
      row["sim_median"] = s.five_number.median;
      row["sim_q75"] = s.five_number.q75;
      row["sim_max"] = s.five_number.max;
      row["reps"] = s.reps;
    } else {
      for (const char* key : {"sim_mean", "sim_std_error", "sim_min", "sim_q25", "sim_median",
                              "sim_q75", "sim_max"}) {
        row[key] = nullptr;
      }
      row["reps"] = 0;
    }
    doc.push_back(row);
  }
  return doc.dump(2) + "\n";
}

}  // namespace lccp::cli
