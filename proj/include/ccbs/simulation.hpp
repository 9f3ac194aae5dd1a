#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ccbs/pricing.hpp"

namespace ccbs {

enum class Measure { domestic, foreign };

struct SimConfig {
    std::size_t n_paths = 10000;
    std::uint64_t seed = 20240601;
    int steps_per_year = 250;
    Measure measure = Measure::domestic;
    unsigned threads = 0;  // 0: CCBS_THREADS, else hardware concurrency
    void validate() const;
};

// One simulated path. int_r_* hold int_0^t r du; deflator[k] is the time-0 AUD value of 1 AUD paid at times[k]
// along this path (B^beta discounting under the domestic measure, converted through Q and B^f under the foreign one).
struct PathGrid {
    std::vector<double> times;
    std::vector<double> r_d;
    std::vector<double> r_f;
    std::vector<double> int_r_d;
    std::vector<double> int_r_f;
    std::vector<double> q;
    std::vector<double> deflator;
    std::size_t index_of(double t) const;  // throws DomainError when t is not a grid time
};

struct SimResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
};

struct SimState {
    double r_d = 0.0;
    double r_f = 0.0;
    double int_d = 0.0;
    double int_f = 0.0;
    double log_q = 0.0;
};

// Exact transition over [t, t+dt] driven by five iid standard normals.
SimState exact_step(const SimState& x, double t, double dt, const std::array<double, 5>& z, const MarketModel& model,
                    Measure measure);

// k/steps_per_year for k = 0.. up to horizon, merged with the required times in [0, horizon]
std::vector<double> make_grid(double horizon, int steps_per_year, const std::vector<double>& required);

std::vector<PathGrid> simulate_paths(const SimConfig& config, const std::vector<double>& grid,
                                     const MarketModel& model);

unsigned resolve_threads(unsigned requested);

// deterministic pairwise summation
double tree_sum(const std::vector<double>& v);
SimResult summarize(const std::vector<double>& samples);

// present value at time 0 (AUD) of a path functional; use PathGrid::deflator to discount
using Claim = std::function<double(const PathGrid&)>;

std::vector<SimResult> mc_price(const std::vector<Claim>& claims, double maturity, const SimConfig& config,
                                const MarketModel& model, const std::vector<double>& event_times = {});
SimResult mc_price(const Claim& claim, double maturity, const SimConfig& config, const MarketModel& model,
                   const std::vector<double>& event_times = {});

enum class ClaimPart { interest, principal, total };
// realized cash flows of the long position, discounted with the path deflator
Claim ccbs_claim(const CcbsSpec& spec, ClaimPart part);

struct SwaptionResult {
    SimResult payer;
    SimResult receiver;
    SimResult forward;         // MC of the discounted CCBS value at T0
    double forward_closed;     // closed-form forward CCBS price at t = 0
    double parity_residual;    // payer - receiver - forward_closed
    double parity_std_error;
};

// simulate to T0, value the swap there in closed form, apply the payoff and discount
SwaptionResult mc_swaption(const CcbsSpec& spec, double strike, const SimConfig& config, const MarketModel& model);

// diagnostic: option on the sum of realized cash flows discounted to T0 instead of on the T0 swap value
SwaptionResult mc_realized_cashflow_option(const CcbsSpec& spec, double strike, const SimConfig& config,
                                           const MarketModel& model);

struct PnLProfile {
    std::vector<double> times;
    std::vector<double> q25;
    std::vector<double> q50;
    std::vector<double> q75;
    double iqr(std::size_t k) const { return q75[k] - q25[k]; }
};

// linear-interpolation quantile of an unsorted sample
double quantile_type7(std::vector<double> v, double p);
PnLProfile pnl_quantiles(const std::vector<double>& times, const std::vector<std::vector<double>>& samples_per_time);

struct BacktestOptions {
    std::vector<double> rebalance_intervals{1.0 / 52.0};
    bool hedged = true;
    double report_interval = 1.0 / 52.0;  // 0: report at tenor dates only
    std::size_t keep_paths = 0;           // per-path trajectories retained for illustration
};

struct BacktestRun {
    double interval = 0.0;
    PnLProfile profile;                       // wealth minus closed-form price
    std::vector<double> terminal_error;       // per path, AUD
    std::vector<std::vector<double>> sample_wealth;
};

struct BacktestResult {
    std::vector<double> report_times;
    double price0 = 0.0;
    double interest0 = 0.0;
    std::vector<std::vector<double>> sample_price;
    std::vector<BacktestRun> runs;
};

// Starts with the t=0 price, trades the per-period futures with positions frozen between rebalances,
// pays the contract cash flows, and tracks wealth against the closed-form price. All intervals share paths.
BacktestResult hedge_backtest(const CcbsSpec& spec, const MarketModel& model, const BacktestOptions& options,
                              const SimConfig& config);

}  // namespace ccbs
