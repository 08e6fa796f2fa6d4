#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tiering/analytic.hpp"
#include "tiering/market_data.hpp"
#include "tiering/model.hpp"
#include "tiering/numeric.hpp"
#include "tiering/simulation.hpp"

using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

struct CommonOpts {
    std::string output;
    std::string format = "csv";
    double lo = 0.0;
    double hi = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--output", opts.output, "Write to this path instead of stdout");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--lo", opts.lo, "Lower bound of the uniform liquidity support")
        ->capture_default_str();
    cmd->add_option("--hi", opts.hi, "Upper bound of the uniform liquidity support")
        ->capture_default_str();
}

// Resolves the exemption threshold from exactly one of -u / -E.
double resolve_threshold(const std::optional<double>& u, const std::optional<double>& share,
                         double lo, double hi) {
    if (u.has_value() == share.has_value())
        throw UsageError("provide exactly one of --threshold and --exemption-share");
    if (u) return *u;
    return tiering::threshold_from_share(*share, tiering::LiquidityDistribution::uniform(lo, hi));
}

json result_to_json(const tiering::EquilibriumResult& res,
                    const std::optional<double>& remuneration_pct) {
    json j;
    j["exemption_share"] = res.exemption_share;
    j["rate_magnitude"] = res.rate_magnitude;
    j["market_rate"] = res.market_rate;
    j["volume"] = res.volume;
    j["negative_share"] = res.negative_share;
    j["residual_imbalance"] = res.residual_imbalance;
    j["method"] = tiering::to_string(res.method);
    if (remuneration_pct)
        j["market_rate_pct"] = res.market_rate * std::fabs(*remuneration_pct);
    return j;
}

std::string record_csv(const json& j) {
    std::string header, row;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!header.empty()) {
            header += ',';
            row += ',';
        }
        header += it.key();
        row += it->is_number() ? fmt(it->get<double>()) : it->get<std::string>();
    }
    return header + "\n" + row + "\n";
}

std::string emit_record(const json& j, const std::string& format) {
    if (format == "json") return j.dump(2) + "\n";
    return record_csv(j);
}

int cmd_analytic(const CommonOpts& opts, const std::optional<double>& u,
                 const std::optional<double>& share, const std::optional<double>& remun_pct) {
    double threshold = resolve_threshold(u, share, opts.lo, opts.hi);
    if (threshold < opts.lo || threshold > opts.hi)
        throw std::domain_error("threshold " + fmt(threshold) + " outside liquidity support [" +
                                fmt(opts.lo) + ", " + fmt(opts.hi) + "]");
    auto res = tiering::equilibrium_shifted(threshold, opts.lo, opts.hi);
    json j = result_to_json(res, remun_pct);
    j.erase("residual_imbalance");  // exact closed form
    write_output(emit_record(j, opts.format), opts.output);
    return 0;
}

int cmd_solve(const CommonOpts& opts, const std::optional<double>& u,
              const std::optional<double>& share, const std::optional<double>& remun_pct) {
    double threshold = resolve_threshold(u, share, opts.lo, opts.hi);
    tiering::MarketModel model{tiering::TieringPolicy{threshold, 1.0},
                               tiering::LiquidityDistribution::uniform(opts.lo, opts.hi),
                               tiering::CostDistribution{}};
    auto res = tiering::solve_equilibrium(model);
    write_output(emit_record(result_to_json(res, remun_pct), opts.format), opts.output);
    return 0;
}

int cmd_sweep(const CommonOpts& opts, double e_min, double e_max, double e_step) {
    if (e_min < 0.0 || e_step <= 0.0 || e_max <= e_min)
        throw UsageError("sweep grid requires 0 <= e-min < e-max and e-step > 0");
    int points = static_cast<int>(std::llround((e_max - e_min) / e_step)) + 1;
    if (points < 2) throw UsageError("sweep grid must contain at least 2 points");

    auto liquidity = tiering::LiquidityDistribution::uniform(opts.lo, opts.hi);
    json rows = json::array();
    for (int i = 0; i < points; ++i) {
        double share = e_min + e_step * static_cast<double>(i);
        double threshold = tiering::threshold_from_share(share, liquidity);
        auto res = tiering::equilibrium_shifted(threshold, opts.lo, opts.hi);
        json row;
        row["exemption_share"] = share;
        row["threshold"] = threshold;
        row["rate_magnitude"] = res.rate_magnitude;
        row["market_rate"] = res.market_rate;
        row["volume"] = res.volume;
        row["negative_share"] = res.negative_share;
        rows.push_back(std::move(row));
    }

    std::string text;
    if (opts.format == "json") {
        text = rows.dump(2) + "\n";
    } else {
        text = "exemption_share,threshold,rate_magnitude,market_rate,volume,negative_share\n";
        for (const auto& row : rows) {
            std::string line;
            for (const auto& item : row.items()) {
                if (!line.empty()) line += ',';
                line += fmt(item.value().get<double>());
            }
            text += line + "\n";
        }
    }
    write_output(text, opts.output);
    return 0;
}

int cmd_simulate(const CommonOpts& opts, const std::optional<double>& u,
                 const std::optional<double>& share, int population, int replications,
                 std::uint64_t seed, bool per_replication) {
    double threshold = resolve_threshold(u, share, opts.lo, opts.hi);
    tiering::SimConfig config;
    config.population = population;
    config.replications = replications;
    config.seed = seed;
    config.model = tiering::MarketModel{tiering::TieringPolicy{threshold, 1.0},
                                        tiering::LiquidityDistribution::uniform(opts.lo, opts.hi),
                                        tiering::CostDistribution{}};
    auto summary = tiering::run_replications(config);

    json j;
    j["population"] = population;
    j["replications"] = replications;
    j["seed"] = seed;
    j["threshold"] = threshold;
    auto stat = [](const tiering::SummaryStat& s) {
        return json{{"mean", s.mean}, {"std_error", s.std_error}};
    };
    j["clearing_rate"] = stat(summary.clearing_rate);
    j["volume_per_bank"] = stat(summary.volume_per_bank);
    j["negative_share"] = stat(summary.negative_share);
    j["burden"] = stat(summary.burden);
    if (per_replication) {
        json recs = json::array();
        for (const auto& r : summary.records)
            recs.push_back(json{{"clearing_rate", r.clearing_rate},
                                {"volume_per_bank", r.volume_per_bank},
                                {"negative_share", r.negative_share},
                                {"burden", r.burden}});
        j["records"] = std::move(recs);
    }

    std::string text;
    if (opts.format == "json") {
        text = j.dump(2) + "\n";
    } else {
        text = "metric,mean,std_error\n";
        for (const char* name : {"clearing_rate", "volume_per_bank", "negative_share", "burden"})
            text += std::string(name) + "," + fmt(j[name]["mean"].get<double>()) + "," +
                    fmt(j[name]["std_error"].get<double>()) + "\n";
        if (per_replication) {
            text += "replication,clearing_rate,volume_per_bank,negative_share,burden\n";
            for (std::size_t k = 0; k < summary.records.size(); ++k) {
                const auto& r = summary.records[k];
                text += std::to_string(k) + "," + fmt(r.clearing_rate) + "," +
                        fmt(r.volume_per_bank) + "," + fmt(r.negative_share) + "," +
                        fmt(r.burden) + "\n";
            }
        }
    }
    write_output(text, opts.output);
    return 0;
}

int cmd_calibrate(const CommonOpts& opts, const std::string& observations_path, bool fit,
                  double center, int grid_points) {
    auto observations = tiering::load_observations(observations_path);
    auto liquidity = tiering::LiquidityDistribution::uniform(opts.lo, opts.hi);
    auto report = tiering::residual_report(observations, liquidity);

    json aggregates;
    aggregates["mean_abs_residual"] = report.mean_abs_residual;
    json per_currency;
    for (const auto& [currency, mean] : report.mean_residual_by_currency)
        per_currency[currency] = mean;
    aggregates["mean_residual_by_currency"] = std::move(per_currency);
    if (fit) {
        auto bounds = tiering::fit_support_bounds(observations, center, grid_points);
        aggregates["fitted_support"] = json{{"lo", bounds.lo},
                                            {"hi", bounds.hi},
                                            {"loss", bounds.loss},
                                            {"degenerate", bounds.degenerate}};
    }

    std::string text;
    if (opts.format == "json") {
        json j;
        json rows = json::array();
        for (const auto& row : report.rows)
            rows.push_back(json{{"currency", row.observation.currency},
                                {"period", row.observation.period},
                                {"exemption_share", row.observation.exemption_share},
                                {"rate_type", tiering::to_string(row.observation.rate_type)},
                                {"standardized_rate", row.standardized_rate},
                                {"model_rate", row.model_rate},
                                {"residual", row.residual},
                                {"corner", row.corner}});
        j["rows"] = std::move(rows);
        j["aggregates"] = std::move(aggregates);
        text = j.dump(2) + "\n";
    } else {
        text = "currency,period,exemption_share,rate_type,standardized_rate,model_rate,residual,corner\n";
        for (const auto& row : report.rows)
            text += row.observation.currency + "," + row.observation.period + "," +
                    fmt(row.observation.exemption_share) + "," +
                    tiering::to_string(row.observation.rate_type) + "," +
                    fmt(row.standardized_rate) + "," + fmt(row.model_rate) + "," +
                    fmt(row.residual) + "," + (row.corner ? "true" : "false") + "\n";
        text += "# aggregates: " + aggregates.dump() + "\n";
    }
    write_output(text, opts.output);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interbank market equilibrium under tiered reserve remuneration"};
    app.require_subcommand(1);

    CommonOpts analytic_opts, solve_opts, sweep_opts, sim_opts, cal_opts;
    std::optional<double> analytic_u, analytic_e, analytic_remun;
    std::optional<double> solve_u, solve_e, solve_remun;
    std::optional<double> sim_u, sim_e;
    double e_min = 0.0, e_max = 2.0, e_step = 0.01;
    int population = 10000, replications = 1, grid_points = 1000;
    std::uint64_t seed = 0;
    bool per_replication = false, fit = false;
    double center = 0.5;
    std::string observations_path;

    auto* analytic = app.add_subcommand("analytic", "Closed-form equilibrium at one point");
    add_common(analytic, analytic_opts);
    analytic->add_option("-u,--threshold", analytic_u, "Exemption threshold u");
    analytic->add_option("-E,--exemption-share", analytic_e, "Exemption share E");
    analytic->add_option("--remuneration-rate-pct", analytic_remun,
                         "Negative remuneration rate in percent, for rescaled output");

    auto* solve = app.add_subcommand("solve", "Numeric equilibrium at one point");
    add_common(solve, solve_opts);
    solve->add_option("-u,--threshold", solve_u, "Exemption threshold u");
    solve->add_option("-E,--exemption-share", solve_e, "Exemption share E");
    solve->add_option("--remuneration-rate-pct", solve_remun,
                      "Negative remuneration rate in percent, for rescaled output");

    auto* sweep = app.add_subcommand("sweep", "Equilibrium over a grid of exemption shares");
    add_common(sweep, sweep_opts);
    sweep->add_option("--e-min", e_min, "Grid start")->capture_default_str();
    sweep->add_option("--e-max", e_max, "Grid end (inclusive)")->capture_default_str();
    sweep->add_option("--e-step", e_step, "Grid step")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Finite-N Monte Carlo clearing");
    add_common(simulate, sim_opts);
    simulate->add_option("-u,--threshold", sim_u, "Exemption threshold u");
    simulate->add_option("-E,--exemption-share", sim_e, "Exemption share E");
    simulate->add_option("--population", population, "Banks per replication")
        ->check(CLI::Range(2, std::numeric_limits<int>::max()))
        ->capture_default_str();
    simulate->add_option("--replications", replications, "Replication count")
        ->check(CLI::Range(1, std::numeric_limits<int>::max()))
        ->capture_default_str();
    simulate->add_option("--seed", seed, "Root RNG seed")->capture_default_str();
    simulate->add_flag("--per-replication", per_replication, "Include per-replication rows");

    auto* calibrate = app.add_subcommand("calibrate", "Residual report against observed rates");
    add_common(calibrate, cal_opts);
    calibrate->add_option("--observations", observations_path, "Observation CSV path")->required();
    calibrate->add_flag("--fit", fit, "Fit symmetric uniform support bounds");
    calibrate->add_option("--center", center, "Fixed support midpoint for fitting")
        ->capture_default_str();
    calibrate->add_option("--grid-points", grid_points, "Half-width grid resolution")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (analytic->parsed())
            return cmd_analytic(analytic_opts, analytic_u, analytic_e, analytic_remun);
        if (solve->parsed()) return cmd_solve(solve_opts, solve_u, solve_e, solve_remun);
        if (sweep->parsed()) return cmd_sweep(sweep_opts, e_min, e_max, e_step);
        if (simulate->parsed())
            return cmd_simulate(sim_opts, sim_u, sim_e, population, replications, seed,
                                per_replication);
        if (calibrate->parsed())
            return cmd_calibrate(cal_opts, observations_path, fit, center, grid_points);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
