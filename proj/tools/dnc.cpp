// Command-line front end. Exit codes: 0 ok, 1 verify found failures,
// 2 input error, 3 capacity exceeded, 4 solver failure.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dnc/errors.hpp"
#include "dnc/experiments.hpp"
#include "dnc/io.hpp"
#include "dnc/offers.hpp"
#include "dnc/oracle.hpp"
#include "dnc/parallel.hpp"
#include "dnc/risk.hpp"
#include "dnc/solver_discrete.hpp"
#include "dnc/solver_normal.hpp"
#include "dnc/verify.hpp"

namespace {

using dnc::Json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;
constexpr int kExitSolver = 4;

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw dnc::DomainError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void write_report(const std::string& out, const dnc::SolveReport& report, const Json& config, double seconds) {
  Output o(out);
  o.stream() << dnc::report_file(report, config, seconds).dump(2) << '\n';
}

std::string menu_text(const dnc::OfferMenu& menu) {
  std::ostringstream os;
  os << "menu=[";
  for (std::size_t k = 0; k < menu.alternatives.size(); ++k) {
    os << (k ? "," : "") << "[";
    for (std::size_t i = 0; i < menu.alternatives[k].size(); ++i) {
      os << (i ? "," : "") << dnc::csv_number(menu.alternatives[k][i]);
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

struct SolveArgs {
  std::string instance, method = "auto", out;
  std::optional<double> gamma;
  double resolution = 0.01;
};

dnc::SolveReport run_solve(const SolveArgs& a, const dnc::Instance& inst, std::string& used) {
  const double gamma = a.gamma.value_or(0.01 * dnc::abs_sum(inst.divider_values));
  if (!(gamma > 0.0)) throw dnc::DomainError("--gamma must be positive");
  std::string method = a.method;
  const dnc::JointDiscretePrior* joint = std::get_if<dnc::JointDiscretePrior>(&inst.prior);
  if (method == "auto") {
    if (std::holds_alternative<dnc::NormalPrior>(inst.prior)) {
      method = "normal";
    } else if (std::holds_alternative<dnc::Uniform01Prior>(inst.prior)) {
      method = "oracle";
    } else {
      // Exact when the flattened type count fits the cap, otherwise the grid.
      const std::size_t cap = dnc::DiscreteSolveConfig{}.max_types;
      std::size_t types = 1;
      if (joint) {
        types = joint->types.size();
      } else {
        for (const auto& s : std::get<dnc::DiscretePerGoodPrior>(inst.prior).goods) {
          types = std::min(types * s.size(), cap + 1);
        }
      }
      method = types <= cap ? "discrete" : "oracle";
    }
  }
  used = method;
  if (method == "normal") {
    dnc::NormalSolveConfig c;
    c.gamma = gamma;
    return dnc::solve_normal(inst, c);
  }
  if (method == "discrete") return dnc::solve_discrete(inst);
  if (method == "oracle") return dnc::grid_best_response(inst, a.resolution);
  throw dnc::DomainError("unknown --method '" + method + "'");
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != item.size() || v < 1) throw dnc::DomainError("--n expects a comma-separated list of positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw dnc::DomainError("--n must not be empty");
  return out;
}

dnc::RiskProfile parse_risk(const std::string& kind, double shift, double exponent) {
  if (kind == "neutral") return dnc::RiskProfile::neutral();
  if (kind == "sqrt") return dnc::RiskProfile::sqrt_shifted(shift);
  if (kind == "power") return dnc::RiskProfile::power(exponent);
  throw dnc::DomainError("unknown --utility '" + kind + "' (neutral, sqrt, power)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divide-and-choose with a Bayesian chooser: solvers and experiments"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: DNC_THREADS or all cores)");
  app.fallthrough();

  // solve
  SolveArgs solve;
  auto* cmd_solve = app.add_subcommand("solve", "Divider's optimal division for an instance file");
  cmd_solve->add_option("--instance", solve.instance, "Instance JSON")->required();
  cmd_solve->add_option("--gamma", solve.gamma, "Additive accuracy for the normal solver (default 0.01*sum|g|)");
  cmd_solve->add_option("--method", solve.method, "auto, normal, discrete or oracle")
      ->check(CLI::IsMember({"auto", "normal", "discrete", "oracle"}));
  cmd_solve->add_option("--resolution", solve.resolution, "Grid resolution for the oracle");
  cmd_solve->add_option("--out", solve.out, "Report path (default stdout)");

  // sweep
  std::string sweep_instance, sweep_out;
  std::uint64_t sweep_steps = 500;
  auto* cmd_sweep = app.add_subcommand("sweep", "Optimal utility as a function of the pile-1 probability cap");
  cmd_sweep->add_option("--instance", sweep_instance, "Instance JSON with a normal prior")->required();
  cmd_sweep->add_option("--steps", sweep_steps, "Grid points P = k/(2 steps), k = 1..steps");
  cmd_sweep->add_option("--out", sweep_out, "CSV path (default stdout)");

  // welfare
  dnc::ExperimentConfig welfare;
  std::string welfare_prior = "normal", welfare_n = "2", welfare_out;
  std::optional<std::uint64_t> welfare_seed;
  auto* cmd_welfare = app.add_subcommand("welfare", "Per-good utilities of both players across n");
  cmd_welfare->add_option("--prior", welfare_prior, "normal or uniform01")->check(CLI::IsMember({"normal", "uniform01"}));
  cmd_welfare->add_option("--n", welfare_n, "Comma-separated numbers of goods");
  cmd_welfare->add_option("--trials", welfare.trials, "Trials per n");
  cmd_welfare->add_option("--seed", welfare_seed, "Random seed")->required();
  cmd_welfare->add_option("--mean", welfare.mean, "Normal family mean");
  cmd_welfare->add_option("--stdev", welfare.stdev, "Normal family standard deviation");
  cmd_welfare->add_option("--gamma-rel", welfare.gamma_rel, "Solver accuracy relative to sum|g|");
  cmd_welfare->add_option("--mc-samples", welfare.mc_samples, "Monte-Carlo samples (uniform, n >= 3)");
  cmd_welfare->add_option("--out", welfare_out, "CSV path (default stdout)");

  // role
  dnc::ExperimentConfig role;
  std::size_t role_n = 10;
  std::string role_out;
  std::optional<std::uint64_t> role_seed;
  auto* cmd_role = app.add_subcommand("role", "Which role is better for a given value realization");
  cmd_role->add_option("--n", role_n, "Number of goods");
  cmd_role->add_option("--trials", role.trials, "Value vectors scored");
  cmd_role->add_option("--ensemble", role.ensemble, "Divider divisions the chooser side averages over");
  cmd_role->add_option("--seed", role_seed, "Random seed")->required();
  cmd_role->add_option("--mean", role.mean, "Normal family mean");
  cmd_role->add_option("--stdev", role.stdev, "Normal family standard deviation");
  cmd_role->add_option("--gamma-rel", role.gamma_rel, "Solver accuracy relative to sum|g|");
  cmd_role->add_option("--out", role_out, "CSV path (default stdout)");

  // offers
  std::string offers_instance, offers_out;
  auto* cmd_offers = app.add_subcommand("offers", "Optimal offer menu for a discrete instance");
  cmd_offers->add_option("--instance", offers_instance, "Instance JSON with a discrete prior")->required();
  cmd_offers->add_option("--out", offers_out, "Report path (default stdout)");

  // risk
  std::string risk_instance, risk_out, risk_utility = "sqrt", risk_how = "divisible";
  double risk_shift = 0.0, risk_exponent = 0.5, risk_resolution = 0.02;
  auto* cmd_risk = app.add_subcommand("risk", "Optimal division for a risk-averse divider");
  cmd_risk->add_option("--instance", risk_instance, "Instance JSON")->required();
  cmd_risk->add_option("--utility", risk_utility, "neutral, sqrt or power");
  cmd_risk->add_option("--shift", risk_shift, "Shift for sqrt(v - shift)");
  cmd_risk->add_option("--exponent", risk_exponent, "Exponent for v^e");
  cmd_risk->add_option("--interpretation", risk_how, "divisible or lottery")
      ->check(CLI::IsMember({"divisible", "lottery"}));
  cmd_risk->add_option("--resolution", risk_resolution, "Grid resolution");
  cmd_risk->add_option("--out", risk_out, "Report path (default stdout)");

  // diversify
  dnc::ExperimentConfig div;
  std::size_t div_n = 3;
  std::string div_out;
  std::optional<std::uint64_t> div_seed;
  auto* cmd_div = app.add_subcommand("diversify", "Goods split by risk-neutral and risk-averse dividers");
  cmd_div->add_option("--n", div_n, "Number of goods (at most 4)");
  cmd_div->add_option("--trials", div.trials, "Instances");
  cmd_div->add_option("--seed", div_seed, "Random seed")->required();
  cmd_div->add_option("--mean", div.mean, "Normal family mean");
  cmd_div->add_option("--stdev", div.stdev, "Normal family standard deviation");
  cmd_div->add_option("--resolution", div.resolution, "Grid resolution");
  cmd_div->add_option("--out", div_out, "CSV path (default stdout)");

  // verify
  std::vector<int> verify_only;
  auto* cmd_verify = app.add_subcommand("verify", "Run the acceptance criteria");
  cmd_verify->add_option("--criteria", verify_only, "Criterion numbers to run (default all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (threads > 0) dnc::set_thread_count(threads);
    const auto start = std::chrono::steady_clock::now();

    if (*cmd_solve) {
      const auto inst = dnc::load_instance(solve.instance);
      std::string used;
      const auto report = run_solve(solve, inst, used);
      Json config{{"command", "solve"},
                  {"instance", dnc::instance_to_json(inst)},
                  {"method", used},
                  {"gamma", solve.gamma.value_or(0.01 * dnc::abs_sum(inst.divider_values))},
                  {"resolution", solve.resolution},
                  {"threads", dnc::thread_count()}};
      write_report(solve.out, report, config, elapsed_since(start));
    } else if (*cmd_sweep) {
      const auto inst = dnc::load_instance(sweep_instance);
      const auto curve = dnc::sweep_p(inst, sweep_steps);
      Output o(sweep_out);
      o.stream() << "P,utility\n";
      for (const auto& [P, u] : curve) o.stream() << dnc::csv_number(P) << ',' << dnc::csv_number(u) << '\n';
    } else if (*cmd_welfare) {
      welfare.seed = *welfare_seed;
      welfare.family = welfare_prior == "uniform01" ? dnc::PriorFamily::uniform01 : dnc::PriorFamily::normal;
      welfare.n_values = parse_sizes(welfare_n);
      const auto rows = dnc::crossover_experiment(welfare);
      Output o(welfare_out);
      dnc::write_crossover_csv(o.stream(), rows);
    } else if (*cmd_role) {
      role.seed = *role_seed;
      role.n_values = {role_n};
      const auto study = dnc::deviation_role_experiment(role);
      Output o(role_out);
      dnc::write_role_csv(o.stream(), study);
      std::cerr << "spearman(deviation, divider better) = " << study.rank_correlation << '\n';
    } else if (*cmd_offers) {
      const auto inst = dnc::load_instance(offers_instance);
      dnc::JointDiscretePrior joint;
      if (const auto* j = std::get_if<dnc::JointDiscretePrior>(&inst.prior)) {
        joint = *j;
      } else if (const auto* d = std::get_if<dnc::DiscretePerGoodPrior>(&inst.prior)) {
        joint = dnc::flatten_to_joint(*d);
      } else {
        throw dnc::DomainError("offers needs a discrete prior");
      }
      auto [menu, report] = dnc::solve_multiple_offers(inst.divider_values, joint);
      report.notes += " " + menu_text(menu);
      Json config{{"command", "offers"}, {"instance", dnc::instance_to_json(inst)}};
      write_report(offers_out, report, config, elapsed_since(start));
    } else if (*cmd_risk) {
      const auto inst = dnc::load_instance(risk_instance);
      const auto f = parse_risk(risk_utility, risk_shift, risk_exponent);
      const auto how = risk_how == "lottery" ? dnc::RiskInterpretation::lottery : dnc::RiskInterpretation::divisible;
      const auto report = dnc::solve_risk_averse(inst, f, how, risk_resolution);
      Json config{{"command", "risk"},
                  {"instance", dnc::instance_to_json(inst)},
                  {"utility", f.describe()},
                  {"interpretation", risk_how},
                  {"resolution", risk_resolution}};
      write_report(risk_out, report, config, elapsed_since(start));
    } else if (*cmd_div) {
      div.seed = *div_seed;
      div.n_values = {div_n};
      const auto rows = dnc::diversification_experiment(div);
      Output o(div_out);
      dnc::write_diversification_csv(o.stream(), rows);
    } else if (*cmd_verify) {
      return dnc::run_acceptance(std::cout, verify_only) ? kExitOk : kExitVerifyFailed;
    }
    return kExitOk;
  } catch (const dnc::DomainError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const dnc::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const dnc::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitSolver;
  }
}
