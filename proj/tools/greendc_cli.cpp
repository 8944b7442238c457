// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "greendc/greendc.hpp"

namespace fs = std::filesystem;
using namespace greendc;

namespace {

StrategyId parse_strategy(const std::string& name) {
    if (name == "dlb") return StrategyId::Dlb;
    if (name == "dvmc") return StrategyId::Dvmc;
    if (name == "jop") return StrategyId::Jop;
    throw ConfigError("unknown strategy '" + name + "', expected dlb, dvmc, or jop");
}

TraceSet obtain_traces(const Scenario& sc, const std::string& traces_dir) {
    if (traces_dir.empty()) {
        log_info("synthesizing traces (seed " + std::to_string(sc.rng_seed) + ")");
        return synthesize_traces(sc, sc.rng_seed);
    }
    const fs::path dir(traces_dir);
    TraceSet traces = load_traces(dir / "demand.csv", dir / "solar.csv",
                                  dir / "temperature.csv");
    if (traces.demand_mips.size() != sc.n_slots) {
        throw ConfigError("trace files cover " + std::to_string(traces.demand_mips.size()) +
                          " slots but the scenario expects " + std::to_string(sc.n_slots));
    }
    if (!traces.demand_mips.empty() && traces.demand_mips[0].size() != sc.n_vms) {
        throw ConfigError("trace files cover " +
                          std::to_string(traces.demand_mips[0].size()) +
                          " VMs but the scenario expects " + std::to_string(sc.n_vms));
    }
    return traces;
}

Scenario load_scenario(const std::string& config_path, std::optional<long long> seed,
                       const std::string& strategy) {
    Scenario sc = config_path.empty() ? Scenario{} : load_config(config_path);
    if (seed) sc.rng_seed = static_cast<std::uint64_t>(*seed);
    if (!strategy.empty()) sc.strategy = parse_strategy(strategy);
    return sc;
}

void print_run_summary(const RunReport& report) {
    std::cout << strategy_name(report.strategy)
              << ": accumulated net $" << format_double(report.accumulated_net_dollars)
              << ", green utilization " << format_double(report.green_utilization)
              << ", migrations " << report.total_migrations
              << ", wakeups " << report.total_wakeups << "\n";
}

int cmd_run(const std::string& config_path, const std::string& strategy,
            const std::string& traces_dir, std::optional<long long> seed,
            const std::string& out_dir) {
    Scenario sc = load_scenario(config_path, seed, strategy);
    const TraceSet traces = obtain_traces(sc, traces_dir);
    const RunReport report = run(sc, traces);
    write_report(report, sc, out_dir);
    print_run_summary(report);
    std::cout << "report written to " << out_dir << "\n";
    return 0;
}

int cmd_compare(const std::string& config_path, const std::string& traces_dir,
                std::optional<long long> seed, const std::string& out_dir) {
    Scenario sc = load_scenario(config_path, seed, "");
    const TraceSet traces = obtain_traces(sc, traces_dir);

    const StrategyId order[] = {StrategyId::Dlb, StrategyId::Dvmc, StrategyId::Jop};
    std::vector<RunReport> reports;
    for (StrategyId s : order) {
        Scenario variant = sc;
        variant.strategy = s;
        reports.push_back(run(variant, traces));
        write_report(reports.back(), variant, fs::path(out_dir) / strategy_name(s));
        print_run_summary(reports.back());
    }

    const double dlb = reports[0].accumulated_net_dollars;
    const double dvmc = reports[1].accumulated_net_dollars;
    const double jop = reports[2].accumulated_net_dollars;
    const double gain_vs_dlb = dlb != 0.0 ? 100.0 * (jop - dlb) / std::abs(dlb) : 0.0;
    const double gain_vs_dvmc = dvmc != 0.0 ? 100.0 * (jop - dvmc) / std::abs(dvmc) : 0.0;

    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "compare_summary.csv", std::ios::binary);
        if (!out) throw IoError("cannot write compare_summary.csv in " + out_dir);
        out << "strategy,accumulated_net_dollars,total_revenue_dollars,"
               "total_energy_cost_dollars,green_utilization,min_active_pms\n";
        for (const RunReport& r : reports) {
            const auto mn = *std::min_element(r.active_pm_counts.begin(),
                                              r.active_pm_counts.end());
            out << strategy_name(r.strategy) << ','
                << format_double(r.accumulated_net_dollars) << ','
                << format_double(r.total_revenue_dollars) << ','
                << format_double(r.total_energy_cost_dollars) << ','
                << format_double(r.green_utilization) << ',' << mn << '\n';
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "margins.txt", std::ios::binary);
        if (!out) throw IoError("cannot write margins.txt in " + out_dir);
        out << "jop_over_dlb_pct: " << format_double(gain_vs_dlb) << "\n";
        out << "jop_over_dvmc_pct: " << format_double(gain_vs_dvmc) << "\n";
    }
    std::printf("JOP gain over DLB: %.1f%%, over DVMC: %.1f%%\n", gain_vs_dlb, gain_vs_dvmc);
    std::cout << "reports written to " << out_dir << "\n";
    return 0;
}

int cmd_forecast_eval(const std::string& solar_path, const std::string& out_dir,
                      const ForecastConfig& cfg) {
    const std::vector<double> series = load_solar_csv(solar_path);
    const std::size_t warmup = forecast_warmup_slots(cfg);
    if (series.size() <= warmup) {
        throw ConfigError("solar series has " + std::to_string(series.size()) +
                          " slots; need more than " + std::to_string(warmup) +
                          " to evaluate the forecaster");
    }

    std::vector<double> predicted;
    std::vector<double> actual;
    predicted.reserve(series.size() - warmup);
    for (std::size_t t = warmup; t < series.size(); ++t) {
        predicted.push_back(
            forecast_slot(std::span<const double>(series).subspan(0, t), t, cfg));
        actual.push_back(series[t]);
    }
    const ApeStats stats = ape_stats(predicted, actual, cfg);

    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "forecast_eval.csv", std::ios::binary);
        if (!out) throw IoError("cannot write forecast_eval.csv in " + out_dir);
        out << "slot,predicted_w,actual_w,ape\n";
        for (std::size_t i = 0; i < predicted.size(); ++i) {
            out << (warmup + i) << ',' << format_double(predicted[i]) << ','
                << format_double(actual[i]) << ',';
            if (actual[i] >= cfg.zero_ape_floor_w) {
                out << format_double(std::abs(predicted[i] - actual[i]) / actual[i]);
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(fs::path(out_dir) / "aape_summary.txt", std::ios::binary);
        if (!out) throw IoError("cannot write aape_summary.txt in " + out_dir);
        out << "evaluated_slots: " << predicted.size() << "\n";
        out << "included_slots: " << stats.n_included << "\n";
        out << "fraction_under_30pct: "
            << (stats.fraction_under_30pct ? format_double(*stats.fraction_under_30pct)
                                           : std::string("n/a"))
            << "\n";
        out << "mean_ape: "
            << (stats.mean_ape ? format_double(*stats.mean_ape) : std::string("n/a")) << "\n";
    }
    if (stats.fraction_under_30pct) {
        std::printf("%.2f%% of %zu daytime slots under 30%% error (mean APE %.4f)\n",
                    100.0 * *stats.fraction_under_30pct, stats.n_included,
                    stats.mean_ape.value_or(0.0));
    } else {
        std::cout << "no slots above the generation floor; nothing to evaluate\n";
    }
    std::cout << "report written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"greendc: VM migration simulator for a hybrid-energy datacenter"};
    app.require_subcommand(1);

    std::string config_path;
    std::string strategy;
    std::string traces_dir;
    std::string out_dir;
    std::string solar_path;
    long long seed_flag = -1;
    bool synth = false;

    ForecastConfig forecast_cfg;

    auto* run_cmd = app.add_subcommand("run", "simulate one strategy");
    run_cmd->add_option("--config", config_path, "scenario config file");
    run_cmd->add_option("--strategy", strategy, "dlb, dvmc, or jop");
    auto* traces_opt = run_cmd->add_option(
        "--traces", traces_dir, "directory with demand.csv, solar.csv, temperature.csv");
    run_cmd->add_flag("--synth", synth, "synthesize traces (default)")->excludes(traces_opt);
    run_cmd->add_option("--seed", seed_flag, "override the scenario RNG seed");
    run_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* compare_cmd =
        app.add_subcommand("compare", "run dlb, dvmc, and jop on identical traces");
    compare_cmd->add_option("--config", config_path, "scenario config file");
    compare_cmd->add_option("--traces", traces_dir, "trace directory (default: synthesize)");
    compare_cmd->add_option("--seed", seed_flag, "override the scenario RNG seed");
    compare_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* fc_cmd = app.add_subcommand("forecast-eval", "evaluate the k-NN solar forecaster");
    fc_cmd->add_option("--solar", solar_path, "CSV with header slot,power_w")->required();
    fc_cmd->add_option("--out", out_dir, "output directory")->required();
    fc_cmd->add_option("--k", forecast_cfg.k_neighbors, "neighbor count");
    fc_cmd->add_option("--window", forecast_cfg.window_len, "trailing feature window");
    fc_cmd->add_option("--floor", forecast_cfg.zero_ape_floor_w,
                       "minimum actual watts for APE inclusion");
    fc_cmd->add_option("--slots-per-day", forecast_cfg.slots_per_day, "diurnal period");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    const std::optional<long long> seed =
        seed_flag >= 0 ? std::optional<long long>(seed_flag) : std::nullopt;

    try {
        if (run_cmd->parsed()) {
            return cmd_run(config_path, strategy, traces_dir, seed, out_dir);
        }
        if (compare_cmd->parsed()) {
            return cmd_compare(config_path, traces_dir, seed, out_dir);
        }
        if (fc_cmd->parsed()) {
            if (forecast_cfg.k_neighbors < 1) {
                throw ConfigError("--k must be >= 1");
            }
            return cmd_forecast_eval(solar_path, out_dir, forecast_cfg);
        }
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
