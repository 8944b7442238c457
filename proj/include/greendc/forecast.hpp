// Copyright 2026 greendc contributors
// SPDX-License-Identifier: Apache-2.0

#ifndef GREENDC_FORECAST_HPP
#define GREENDC_FORECAST_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "greendc/errors.hpp"

namespace greendc {

/// One historical generation observation with its lookup features
/// (time-of-day slot followed by a trailing window of recent power values).
struct SolarSample {
    long slot_index = 0;
    double power_w = 0.0;
    std::vector<double> feature_vec;
};

struct ForecastConfig {
    std::size_t k_neighbors = 5;
    std::size_t window_len = 3;      // trailing samples in the feature vector
    double zero_ape_floor_w = 10.0;  // minimum actual power for APE inclusion
    std::size_t slots_per_day = 24;  // time-of-day feature period

    bool operator==(const ForecastConfig&) const = default;
};

/// Inverse-distance weights, normalized to sum to one.
inline std::vector<double> knn_weights(std::span<const double> distances) {
    if (distances.empty()) {
        throw std::domain_error("knn_weights: empty distance list");
    }
    std::vector<double> w(distances.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0.0)) {
            throw std::domain_error("knn_weights: nonpositive distance " +
                                    std::to_string(distances[i]));
        }
        w[i] = 1.0 / distances[i];
        sum += w[i];
    }
    for (double& x : w) x /= sum;
    return w;
}

namespace detail {

inline double euclidean(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace detail

/// Weighted k-NN regression over the history. An exact feature match
/// short-circuits to that sample's power.
inline double forecast_next(std::span<const SolarSample> history,
                            std::span<const double> query_features,
                            const ForecastConfig& cfg) {
    if (history.size() < cfg.k_neighbors) {
        throw HistoryError("forecast_next: " + std::to_string(history.size()) +
                           " samples, need at least " + std::to_string(cfg.k_neighbors));
    }
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(history.size());
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (history[i].feature_vec.size() != query_features.size()) {
            throw std::invalid_argument("forecast_next: feature length mismatch at sample " +
                                        std::to_string(i));
        }
        const double d = detail::euclidean(history[i].feature_vec, query_features);
        if (d == 0.0) return history[i].power_w;
        dist.emplace_back(d, i);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(cfg.k_neighbors),
                      dist.end());
    std::vector<double> distances(cfg.k_neighbors);
    for (std::size_t i = 0; i < cfg.k_neighbors; ++i) distances[i] = dist[i].first;
    const std::vector<double> w = knn_weights(distances);
    double pred = 0.0;
    for (std::size_t i = 0; i < cfg.k_neighbors; ++i) {
        pred += w[i] * history[dist[i].second].power_w;
    }
    return pred;
}

struct ApeStats {
    std::optional<double> fraction_under_30pct;
    std::optional<double> mean_ape;
    std::size_t n_included = 0;
};

/// Absolute percentage errors over slots whose actual output clears the
/// floor; near-zero generation (night) is excluded rather than blowing up.
inline ApeStats ape_stats(std::span<const double> predicted, std::span<const double> actual,
                          const ForecastConfig& cfg) {
    if (predicted.size() != actual.size()) {
        throw std::invalid_argument("ape_stats: series lengths differ (" +
                                    std::to_string(predicted.size()) + " vs " +
                                    std::to_string(actual.size()) + ")");
    }
    ApeStats stats;
    double sum = 0.0;
    std::size_t under = 0;
    for (std::size_t t = 0; t < actual.size(); ++t) {
        if (actual[t] < cfg.zero_ape_floor_w) continue;
        const double ape = std::abs(predicted[t] - actual[t]) / actual[t];
        sum += ape;
        if (ape < 0.30) ++under;
        ++stats.n_included;
    }
    if (stats.n_included > 0) {
        stats.mean_ape = sum / static_cast<double>(stats.n_included);
        stats.fraction_under_30pct =
            static_cast<double>(under) / static_cast<double>(stats.n_included);
    }
    return stats;
}

/// Feature vector for slot t of a power series: (time-of-day slot, last
/// window_len observed powers, most recent first). Requires t >= window_len.
inline std::vector<double> forecast_features(std::span<const double> series, std::size_t t,
                                             const ForecastConfig& cfg) {
    if (t < cfg.window_len) {
        throw HistoryError("forecast_features: slot " + std::to_string(t) +
                           " has no full trailing window of " +
                           std::to_string(cfg.window_len));
    }
    std::vector<double> f;
    f.reserve(1 + cfg.window_len);
    f.push_back(static_cast<double>(t % cfg.slots_per_day));
    for (std::size_t w = 1; w <= cfg.window_len; ++w) {
        f.push_back(series[t - w]);
    }
    return f;
}

/// Samples for every slot of the series that has a full trailing window.
inline std::vector<SolarSample> build_solar_history(std::span<const double> series,
                                                    const ForecastConfig& cfg) {
    std::vector<SolarSample> samples;
    if (series.size() <= cfg.window_len) return samples;
    samples.reserve(series.size() - cfg.window_len);
    for (std::size_t t = cfg.window_len; t < series.size(); ++t) {
        samples.push_back({static_cast<long>(t), series[t], forecast_features(series, t, cfg)});
    }
    return samples;
}

/// First slot index for which a k-NN forecast is possible given a series
/// that grows one observation per slot.
inline std::size_t forecast_warmup_slots(const ForecastConfig& cfg) {
    return cfg.k_neighbors + cfg.window_len;
}

/// Predicts slot t from the observations in series[0, t).
inline double forecast_slot(std::span<const double> series_so_far, std::size_t t,
                            const ForecastConfig& cfg) {
    if (series_so_far.size() < t) {
        throw HistoryError("forecast_slot: series has " +
                           std::to_string(series_so_far.size()) + " observations, slot " +
                           std::to_string(t) + " requested");
    }
    const auto past = series_so_far.subspan(0, t);
    const auto history = build_solar_history(past, cfg);
    const auto query = forecast_features(past, t, cfg);
    return forecast_next(history, query, cfg);
}

}  // namespace greendc

#endif  // GREENDC_FORECAST_HPP
