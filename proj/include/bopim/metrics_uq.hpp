#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bopim/optimizer.hpp"
#include "bopim/shrinkage_gibbs.hpp"

namespace bopim {

/// Mean absolute difference. Throws Error{DimensionMismatch} on unequal or
/// empty inputs.
double mape(std::span<const double> y_hat, std::span<const double> y);

struct IntervalCoverage {
  double coverage = 0.0;    // share of y_i inside (q_0.025, q_0.975)
  double mean_width = 0.0;  // mean of q_0.975 - q_0.025
};

/// Posterior-predictive 95% intervals (observation noise included) for each
/// test row. An interval with zero width never covers.
IntervalCoverage interval_coverage(const PosteriorDraws& draws, const std::vector<SeedSet>& x_test,
                                   std::span<const double> y_test, std::uint64_t seed = 0);

enum class Sampling { Random, Degree };
std::string_view to_string(Sampling sampling) noexcept;
Sampling parse_sampling(std::string_view name);

struct ValidationReport {
  double mape = 0.0;
  double mape_se = 0.0;
  double coverage = 0.0;
  double width = 0.0;
  std::size_t n_test = 0;
  std::optional<RunResult> run;  // set by validate_surrogate
};

inline constexpr std::size_t kDefaultTestSets = 100;

/// Fits the surrogate with a full BOPIM run, then scores it on `n_test` fresh
/// seed sets drawn by `sampling` whose true spreads come from Monte Carlo.
/// Point predictions are x . median(beta) + y_mean.
ValidationReport validate_surrogate(const TemporalGraph& graph, const BopimConfig& cfg,
                                    std::size_t n_test, Sampling sampling, std::uint64_t seed);

/// Scores an existing posterior against given test rows.
ValidationReport score_surrogate(const PosteriorDraws& draws, const std::vector<SeedSet>& x_test,
                                 std::span<const double> y_test, std::uint64_t seed);

/// Share of draws in which each coefficient ranks among the k largest of
/// that draw (ties to the smaller index).
std::vector<double> topk_inclusion_proportions(const PosteriorDraws& draws, std::size_t k);

struct BoxStats {
  double min, q1, median, q3, max;
};

/// Five-number summary of each coefficient; quartiles by linear
/// interpolation between order statistics.
std::vector<BoxStats> posterior_box_stats(const PosteriorDraws& draws);

void write_validation_csv_header(std::ostream& out);
void write_validation_csv_row(std::ostream& out, const std::string& dataset, Sampling sampling,
                              Prior prior, const ValidationReport& report);

}  // namespace bopim
