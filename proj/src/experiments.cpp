#include "epigrow/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "epigrow/errors.hpp"

namespace epigrow {

namespace {

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n') c = ';';
  }
  return s;
}

double output_of(const Model& model, const SteadyStateSolution& sol) {
  return model.production(sol.state.k, sol.state.labor()).value;
}

SweepRow row_from_solution(const Model& model, const SteadyStateSolution& sol,
                           const std::string& note = "") {
  SweepRow row;
  row.b = sol.b;
  row.theta = sol.theta;
  row.ok = true;
  row.note = sanitize(note);
  row.solution = sol;
  row.output = output_of(model, sol);
  return row;
}

SweepRow failure_row(double b, double theta, const std::string& why) {
  SweepRow row;
  row.b = b;
  row.theta = theta;
  row.ok = false;
  row.note = sanitize(why);
  return row;
}

/// Deterministic parallel map: out[k] = fn(k), chunked over jobs threads.
template <typename Fn>
std::vector<std::vector<SweepRow>> parallel_map(std::size_t n, int jobs, Fn&& fn) {
  std::vector<std::vector<SweepRow>> out(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t k = 0; k < n; ++k) out[k] = fn(k);
    return out;
  }
  const int workers = std::min<std::size_t>(jobs, n);
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next.fetch_add(1); k < n; k = next.fetch_add(1)) {
        out[k] = fn(k);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int k = 0; k < n; ++k) g[k] = std::exp(llo + (lhi - llo) * k / (n - 1));
  return g;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = lo + (hi - lo) * k / (n - 1);
  return g;
}

std::vector<SweepRow> theta_sweep(const Model& model, double b, std::span<const double> thetas,
                                  SweepMode mode, int jobs) {
  const double bar_beta = model.specs.beta.bar_beta();
  const double floor_gamma = model.specs.gamma.floor_value();
  const bool window = (1.0 - model.params.p) * bar_beta > b + floor_gamma;

  auto point = [&](std::size_t k) -> std::vector<SweepRow> {
    const double theta = thetas[k];
    std::vector<SweepRow> rows;
    if (mode == SweepMode::NoControl) {
      Model local = model;
      local.params.b = b;
      local.params.theta = theta;
      try {
        rows.push_back(row_from_solution(model, solve_disease_free_ss(local), "no-control"));
      } catch (const std::exception& e) {
        rows.push_back(failure_row(b, theta, e.what()));
      }
      if (window) {
        try {
          rows.push_back(
              row_from_solution(model, endemic_no_invest_candidate(model, b, theta), "no-control"));
        } catch (const std::exception& e) {
          rows.push_back(failure_row(b, theta, e.what()));
        }
      }
    } else {
      try {
        const Classification c = classify_steady_state(model, b, theta);
        if (c.solutions.empty()) {
          rows.push_back(failure_row(b, theta, "no consistent steady state"));
        }
        for (const auto& sol : c.solutions) {
          rows.push_back(row_from_solution(
              model, sol, sol.regime == c.predicted ? "predicted" : "also-consistent"));
        }
      } catch (const std::exception& e) {
        rows.push_back(failure_row(b, theta, e.what()));
      }
    }
    return rows;
  };

  std::vector<SweepRow> out;
  for (auto& rows : parallel_map(thetas.size(), jobs, point)) {
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<SweepRow> b_sweep(const Model& model, std::span<const double> bs, double theta,
                              int jobs) {
  const double bar_beta = model.specs.beta.bar_beta();
  const double floor_gamma = model.specs.gamma.floor_value();

  auto point = [&](std::size_t k) -> std::vector<SweepRow> {
    const double b = bs[k];
    const bool window = (1.0 - model.params.p) * bar_beta > b + floor_gamma;
    try {
      if (window) {
        return {row_from_solution(model, endemic_no_invest_candidate(model, b, theta),
                                  "endemic branch")};
      }
      Model local = model;
      local.params.b = b;
      local.params.theta = theta;
      return {row_from_solution(model, solve_disease_free_ss(local), "no endemic window")};
    } catch (const std::exception& e) {
      return {failure_row(b, theta, e.what())};
    }
  };

  std::vector<SweepRow> out;
  for (auto& rows : parallel_map(bs.size(), jobs, point)) {
    out.insert(out.end(), rows.begin(), rows.end());
  }
  return out;
}

std::vector<BifurcationRow> bifurcation_data(const Model& model, int n, double scale_lo,
                                             double scale_hi) {
  const double gamma0 = model.gamma(0.0, 0.0, 0.0).value;
  const double b = model.params.b;
  const double p = model.params.p;
  const double beta_crit = (b + gamma0) / (1.0 - p);
  const auto grid = linear_grid(scale_lo * beta_crit, scale_hi * beta_crit, n);
  return bifurcation_scan(SweepParameter::Beta, grid, model.beta(0, 0, 0).value, gamma0, b, p);
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t;
  t.header = kSteadyStateHeader;
  t.header.push_back("y");
  t.header.push_back("ok");
  t.header.push_back("note");
  for (const auto& row : rows) {
    std::vector<std::string> fields;
    if (row.solution) {
      fields = steady_state_fields(*row.solution);
    } else {
      fields.assign(kSteadyStateHeader.size(), "nan");
      fields[0] = "none";
      fields[1] = format_sig17(row.b);
      fields[2] = format_sig17(row.theta);
    }
    fields.push_back(row.solution ? format_sig17(row.output) : "nan");
    fields.push_back(row.ok ? "1" : "0");
    fields.push_back(row.note);
    t.rows.push_back(std::move(fields));
  }
  return t;
}

CsvTable bifurcation_table(const std::vector<BifurcationRow>& rows) {
  CsvTable t;
  t.header = {"r_vac", "i_df", "i_endemic", "df_stable", "endemic_stable"};
  for (const auto& row : rows) {
    t.rows.push_back({format_sig17(row.r_vac), format_sig17(row.i_df),
                      format_sig17(row.i_endemic), row.df_stable ? "1" : "0",
                      row.endemic_stable ? "1" : "0"});
  }
  return t;
}

std::string classification_summary(const Classification& c) {
  std::ostringstream os;
  os << "endemic window at zero investment: " << (c.endemic_window ? "open" : "closed") << "\n";
  if (c.thresholds) {
    const auto& th = *c.thresholds;
    os << "discount thresholds: theta1=";
    if (th.theta1_found) {
      os << format_sig17(th.theta1) << " (" << th.theta1_roots.size() << " root(s))";
    } else {
      os << "none";
    }
    os << ", theta2=";
    if (th.theta2_found) {
      os << format_sig17(th.theta2) << " (" << th.theta2_roots.size() << " root(s))";
    } else {
      os << "none";
    }
    os << ", theta_max=" << format_sig17(th.theta_max) << "\n";
  }
  os << "predicted regime: " << to_string(c.predicted) << "\n";
  for (const auto& sol : c.solutions) {
    os << "  solution " << to_string(sol.regime) << ": residual=" << format_sig17(sol.residual_norm)
       << " k=" << format_sig17(sol.state.k) << " c=" << format_sig17(sol.controls.c)
       << " m=" << format_sig17(sol.controls.m) << " A=" << format_sig17(sol.controls.A)
       << (sol.unique ? "" : " (one of several)") << "\n";
  }
  for (const auto& rej : c.rejected) {
    os << "  rejected " << to_string(rej.regime) << ": " << rej.reason << "\n";
  }
  return os.str();
}

}  // namespace epigrow
