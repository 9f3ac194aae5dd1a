#include "ccbs/simulation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "expint.hpp"
#include "frame.hpp"
#include "rng.hpp"

namespace ccbs {

namespace {

constexpr double kTimeTol = 1e-9;

using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec5 = Eigen::Matrix<double, 5, 1>;

struct Drifts {
    double mu_d, mu_f, c_q;
};

Drifts drifts(const MarketModel& m, Measure measure) {
    const double sq = m.sigma_q;
    if (measure == Measure::domestic) return {m.domestic.a, m.c_hat(), -0.5 * sq * sq};
    return {m.domestic.a + m.domestic.sigma * sq * m.corr.rho13, m.foreign.a, 0.5 * sq * sq};
}

// deterministic coefficients of one step for one rate: e^{-b h}, n(h), int_0^h n
struct RateStep {
    double decay, n, int_n;
};

RateStep rate_step(double b, double h) {
    const auto n = detail::n_poly(b, 0.0, h);
    return {std::exp(-b * h), affine_n(0.0, h, b), n.integrate(h)};
}

// factor L with L L' = covariance of (dr_d, dI_d, dr_f, dI_f, sigma_q dZ3) noise over a step of length h
Mat5 step_factor(double h, const MarketModel& m) {
    using detail::ExpPoly;
    const std::array<ExpPoly, 5> f = {ExpPoly::exponential(1.0, m.domestic.b), detail::n_poly(m.domestic.b, 0.0, h),
                                      ExpPoly::exponential(1.0, m.foreign.b), detail::n_poly(m.foreign.b, 0.0, h),
                                      ExpPoly::constant(1.0)};
    const std::array<double, 5> s = {m.domestic.sigma, m.domestic.sigma, m.foreign.sigma, m.foreign.sigma, m.sigma_q};
    const std::array<int, 5> z = {0, 0, 1, 1, 2};
    const double rho[3][3] = {{1.0, m.corr.rho12, m.corr.rho13},
                              {m.corr.rho12, 1.0, m.corr.rho23},
                              {m.corr.rho13, m.corr.rho23, 1.0}};
    Mat5 c;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j <= i; ++j) {
            const double v = s[i] * s[j] * rho[z[i]][z[j]] * (f[i] * f[j]).integrate(h);
            c(i, j) = v;
            c(j, i) = v;
        }
    Eigen::SelfAdjointEigenSolver<Mat5> es(c);
    if (es.info() != Eigen::Success) throw NumericError("step covariance eigen-decomposition failed");
    Vec5 ev = es.eigenvalues();
    for (int i = 0; i < 5; ++i) {
        if (ev(i) < -1e-10) throw NumericError("step covariance is not positive semidefinite");
        ev(i) = std::sqrt(std::max(ev(i), 0.0));
    }
    return es.eigenvectors() * ev.asDiagonal();
}

struct Step {
    RateStep d, f;
    double lam;    // int lambda_Q over the step
    double alpha;  // int alpha^beta over the step
    double dt;
    std::size_t factor;
};

// Everything about a grid that does not depend on the path.
struct Plan {
    std::vector<double> times;
    std::vector<Step> steps;
    std::vector<Mat5> factors;
    Drifts dr{};
    Measure measure = Measure::domestic;
    double r_d0 = 0.0, r_f0 = 0.0, q0 = 1.0;

    Plan(const std::vector<double>& grid, const MarketModel& m, Measure ms)
        : times(grid), dr(drifts(m, ms)), measure(ms), r_d0(m.r_d0), r_f0(m.r_f0), q0(m.q0) {
        if (times.empty() || times.front() != 0.0) throw DomainError("simulation grid must start at 0");
        std::vector<double> keys;
        for (std::size_t k = 0; k + 1 < times.size(); ++k) {
            const double t = times[k], h = times[k + 1] - t;
            if (!(h > 0.0)) throw DomainError("simulation grid must increase strictly");
            std::size_t idx = keys.size();
            for (std::size_t i = 0; i < keys.size(); ++i)
                if (std::abs(keys[i] - h) <= 1e-12 * h) {
                    idx = i;
                    break;
                }
            if (idx == keys.size()) {
                keys.push_back(h);
                factors.push_back(step_factor(h, m));
            }
            steps.push_back({rate_step(m.domestic.b, h), rate_step(m.foreign.b, h),
                             m.spreads.int_lambda_q(t, t + h), m.spreads.int_alpha_beta(t, t + h), h, idx});
        }
    }

    SimState advance(const SimState& x, const Step& st, const Vec5& g) const {
        SimState y;
        y.r_d = x.r_d * st.d.decay + dr.mu_d * st.d.n + g(0);
        const double di_d = x.r_d * st.d.n + dr.mu_d * st.d.int_n + g(1);
        y.r_f = x.r_f * st.f.decay + dr.mu_f * st.f.n + g(2);
        const double di_f = x.r_f * st.f.n + dr.mu_f * st.f.int_n + g(3);
        y.int_d = x.int_d + di_d;
        y.int_f = x.int_f + di_f;
        y.log_q = x.log_q + di_d - di_f + st.lam + dr.c_q * st.dt + g(4);
        return y;
    }

    void generate(std::uint64_t seed, std::size_t path, PathGrid& out) const {
        const std::size_t n = times.size();
        if (out.times.size() != n) {
            out.times = times;
            for (auto* v : {&out.r_d, &out.r_f, &out.int_r_d, &out.int_r_f, &out.q, &out.deflator}) v->resize(n);
        }
        const detail::NormalStream rng(seed, path);
        SimState x{r_d0, r_f0, 0.0, 0.0, std::log(q0)};
        double int_alpha = 0.0, int_lam = 0.0;
        std::array<double, 5> z{};
        for (std::size_t k = 0;; ++k) {
            out.r_d[k] = x.r_d;
            out.r_f[k] = x.r_f;
            out.int_r_d[k] = x.int_d;
            out.int_r_f[k] = x.int_f;
            out.q[k] = std::exp(x.log_q);
            out.deflator[k] = measure == Measure::domestic
                                  ? std::exp(-x.int_d - int_alpha)
                                  : q0 * std::exp(-x.int_f - int_alpha + int_lam) / out.q[k];
            if (k + 1 == n) break;
            const Step& st = steps[k];
            rng.fill(static_cast<std::uint32_t>(k), z);
            const Vec5 g = factors[st.factor] * Eigen::Map<const Vec5>(z.data());
            x = advance(x, st, g);
            int_alpha += st.alpha;
            int_lam += st.lam;
        }
    }
};

// body(begin, end) over contiguous chunks; the first exception is rethrown
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body) {
    const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
    if (w == 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < w; ++i) {
        pool.emplace_back([&, i] {
            try {
                body(n * i / w, n * (i + 1) / w);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

double tree_sum_range(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return tree_sum_range(v, h) + tree_sum_range(v + h, n - h);
}

std::vector<double> tenor_union(const CcbsSpec& spec, std::vector<double> extra = {}) {
    extra.insert(extra.end(), spec.tenor.begin(), spec.tenor.end());
    return extra;
}

bool on_schedule(double t, double interval) {
    const double m = std::round(t / interval);
    return std::abs(m * interval - t) <= kTimeTol;
}

}  // namespace

void SimConfig::validate() const {
    if (n_paths < 1) throw ConfigError("n_paths must be >= 1");
    if (steps_per_year < 1) throw ConfigError("steps_per_year must be >= 1");
}

std::size_t PathGrid::index_of(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t - kTimeTol);
    if (it == times.end() || std::abs(*it - t) > kTimeTol) throw DomainError("time is not on the simulation grid");
    return static_cast<std::size_t>(it - times.begin());
}

SimState exact_step(const SimState& x, double t, double dt, const std::array<double, 5>& z, const MarketModel& model,
                    Measure measure) {
    if (!(dt > 0.0)) throw DomainError("dt must be > 0");
    const Plan plan({0.0, dt}, model, measure);
    Step st = plan.steps[0];
    st.lam = model.spreads.int_lambda_q(t, t + dt);
    const Vec5 g = plan.factors[0] * Eigen::Map<const Vec5>(z.data());
    return plan.advance(x, st, g);
}

std::vector<double> make_grid(double horizon, int steps_per_year, const std::vector<double>& required) {
    if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw DomainError("grid horizon must be finite and >= 0");
    if (steps_per_year < 1) throw ConfigError("steps_per_year must be >= 1");
    std::vector<double> req{0.0, horizon};
    for (double r : required)
        if (r >= 0.0 && r <= horizon + kTimeTol) req.push_back(std::min(r, horizon));
    std::sort(req.begin(), req.end());
    std::vector<double> fixed;
    for (double r : req)
        if (fixed.empty() || r - fixed.back() > kTimeTol) fixed.push_back(r);
    std::vector<double> out = fixed;
    for (long k = 1;; ++k) {
        const double t = static_cast<double>(k) / steps_per_year;
        if (t >= horizon - kTimeTol) break;
        auto it = std::lower_bound(fixed.begin(), fixed.end(), t - kTimeTol);
        if (it != fixed.end() && std::abs(*it - t) <= kTimeTol) continue;
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    return out;
}

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("CCBS_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<PathGrid> simulate_paths(const SimConfig& config, const std::vector<double>& grid,
                                     const MarketModel& model) {
    config.validate();
    model.validate();
    const Plan plan(grid, model, config.measure);
    std::vector<PathGrid> out(config.n_paths);
    parallel_for(config.n_paths, resolve_threads(config.threads), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) plan.generate(config.seed, i, out[i]);
    });
    return out;
}

double tree_sum(const std::vector<double>& v) { return tree_sum_range(v.data(), v.size()); }

SimResult summarize(const std::vector<double>& samples) {
    SimResult r;
    r.n_paths = samples.size();
    if (samples.empty()) return r;
    const double n = static_cast<double>(samples.size());
    r.estimate = tree_sum(samples) / n;
    if (samples.size() > 1) {
        std::vector<double> d(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) d[i] = (samples[i] - r.estimate) * (samples[i] - r.estimate);
        r.std_error = std::sqrt(tree_sum(d) / (n - 1.0) / n);
    }
    return r;
}

std::vector<SimResult> mc_price(const std::vector<Claim>& claims, double maturity, const SimConfig& config,
                                const MarketModel& model, const std::vector<double>& event_times) {
    config.validate();
    model.validate();
    const Plan plan(make_grid(maturity, config.steps_per_year, event_times), model, config.measure);
    std::vector<std::vector<double>> vals(claims.size(), std::vector<double>(config.n_paths));
    parallel_for(config.n_paths, resolve_threads(config.threads), [&](std::size_t b, std::size_t e) {
        PathGrid path;
        for (std::size_t i = b; i < e; ++i) {
            plan.generate(config.seed, i, path);
            for (std::size_t c = 0; c < claims.size(); ++c) vals[c][i] = claims[c](path);
        }
    });
    std::vector<SimResult> out;
    for (const auto& v : vals) out.push_back(summarize(v));
    return out;
}

SimResult mc_price(const Claim& claim, double maturity, const SimConfig& config, const MarketModel& model,
                   const std::vector<double>& event_times) {
    return mc_price(std::vector<Claim>{claim}, maturity, config, model, event_times).front();
}

Claim ccbs_claim(const CcbsSpec& spec, ClaimPart part) {
    spec.validate();
    return [spec, part](const PathGrid& p) {
        const std::size_t n = spec.periods();
        const double qs = p.q[p.index_of(spec.start())];
        double v = 0.0;
        if (part != ClaimPart::principal) {
            std::size_t k0 = p.index_of(spec.tenor[0]);
            for (std::size_t j = 0; j < n; ++j) {
                const std::size_t k1 = p.index_of(spec.tenor[j + 1]);
                const double gf = std::expm1(p.int_r_f[k1] - p.int_r_f[k0]);
                const double gd = std::expm1(p.int_r_d[k1] - p.int_r_d[k0]);
                v += (gf * p.q[k1] - (gd + spec.kappa * spec.delta(j)) * qs) * p.deflator[k1];
                k0 = k1;
            }
        }
        if (part != ClaimPart::interest) {
            const std::size_t kn = p.index_of(spec.maturity());
            v += (p.q[kn] - qs) * p.deflator[kn];
        }
        return spec.notional_f * v;
    };
}

namespace {

SwaptionResult swaption_from_values(std::vector<double> values, const std::vector<double>& defl, double fwd_closed) {
    const std::size_t n = values.size();
    std::vector<double> pay(n), rec(n), fwd(n);
    for (std::size_t i = 0; i < n; ++i) {
        pay[i] = swaption_payoff(values[i], Side::payer) * defl[i];
        rec[i] = swaption_payoff(values[i], Side::receiver) * defl[i];
        fwd[i] = (pay[i] - rec[i]);
    }
    SwaptionResult r;
    r.payer = summarize(pay);
    r.receiver = summarize(rec);
    r.forward = summarize(fwd);
    r.forward_closed = fwd_closed;
    r.parity_residual = r.payer.estimate - r.receiver.estimate - fwd_closed;
    r.parity_std_error = r.forward.std_error;
    return r;
}

CcbsSpec struck(const CcbsSpec& spec, double strike) {
    if (!std::isfinite(strike)) throw DomainError("strike must be finite");
    CcbsSpec s = spec;
    s.kappa = strike;
    s.q_at_inception = kNaN;
    s.validate();
    if (!(s.start() > 0.0)) throw DomainError("a swaption needs a forward-start swap (T0 > 0)");
    return s;
}

}  // namespace

SwaptionResult mc_swaption(const CcbsSpec& spec_in, double strike, const SimConfig& config, const MarketModel& model) {
    config.validate();
    model.validate();
    const CcbsSpec spec = struck(spec_in, strike);
    const double t0 = spec.start();
    const Plan plan(make_grid(t0, config.steps_per_year, {}), model, config.measure);
    const detail::SwapFrame frame(t0, spec, model);
    std::vector<double> vals(config.n_paths), defl(config.n_paths);
    parallel_for(config.n_paths, resolve_threads(config.threads), [&](std::size_t b, std::size_t e) {
        PathGrid path;
        SwapState x;
        x.t = t0;
        x.int_d.assign(spec.periods(), 0.0);
        x.int_f.assign(spec.periods(), 0.0);
        for (std::size_t i = b; i < e; ++i) {
            plan.generate(config.seed, i, path);
            const std::size_t k = path.times.size() - 1;
            x.r_d = path.r_d[k];
            x.r_f = path.r_f[k];
            x.q = path.q[k];
            x.q_s = path.q[k];
            vals[i] = frame.price(x).total;
            defl[i] = path.deflator[k];
        }
    });
    const double fwd = price_ccbs(SwapState::initial(model, spec), spec, model).total;
    return swaption_from_values(std::move(vals), defl, fwd);
}

SwaptionResult mc_realized_cashflow_option(const CcbsSpec& spec_in, double strike, const SimConfig& config,
                                           const MarketModel& model) {
    config.validate();
    model.validate();
    const CcbsSpec spec = struck(spec_in, strike);
    const Plan plan(make_grid(spec.maturity(), config.steps_per_year, spec.tenor), model, config.measure);
    const Claim claim = ccbs_claim(spec, ClaimPart::total);
    std::vector<double> vals(config.n_paths), defl(config.n_paths);
    parallel_for(config.n_paths, resolve_threads(config.threads), [&](std::size_t b, std::size_t e) {
        PathGrid path;
        for (std::size_t i = b; i < e; ++i) {
            plan.generate(config.seed, i, path);
            defl[i] = path.deflator[path.index_of(spec.start())];
            vals[i] = claim(path) / defl[i];
        }
    });
    const double fwd = price_ccbs(SwapState::initial(model, spec), spec, model).total;
    return swaption_from_values(std::move(vals), defl, fwd);
}

double quantile_type7(std::vector<double> v, double p) {
    if (v.empty()) throw DomainError("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
    std::sort(v.begin(), v.end());
    const double h = static_cast<double>(v.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= v.size()) return v.back();
    return v[lo] + (h - static_cast<double>(lo)) * (v[lo + 1] - v[lo]);
}

PnLProfile pnl_quantiles(const std::vector<double>& times, const std::vector<std::vector<double>>& samples) {
    if (times.size() != samples.size()) throw DomainError("one sample set per time is required");
    PnLProfile p;
    p.times = times;
    for (const auto& s : samples) {
        p.q25.push_back(quantile_type7(s, 0.25));
        p.q50.push_back(quantile_type7(s, 0.50));
        p.q75.push_back(quantile_type7(s, 0.75));
    }
    return p;
}

BacktestResult hedge_backtest(const CcbsSpec& spec_in, const MarketModel& model_in, const BacktestOptions& opt,
                              const SimConfig& config) {
    config.validate();
    model_in.validate();
    spec_in.validate();
    if (config.measure != Measure::domestic) throw ConfigError("hedging backtests run under the domestic measure");
    if (opt.rebalance_intervals.empty()) throw ConfigError("at least one rebalance interval is required");
    const double grid_step = 1.0 / config.steps_per_year;
    for (double h : opt.rebalance_intervals)
        if (!(h >= grid_step * (1.0 - 1e-9))) throw ConfigError("rebalance interval is finer than the simulation grid");
    if (opt.report_interval < 0.0) throw ConfigError("report_interval must be >= 0");

    const CcbsSpec spec = spec_in;
    const MarketModel model = model_in;
    const std::size_t n = spec.periods();
    const double tn = spec.maturity();

    std::vector<double> req = tenor_union(spec);
    auto add_schedule = [&](double h) {
        for (long m = 1; m * h < tn - kTimeTol; ++m) req.push_back(static_cast<double>(m) * h);
    };
    for (double h : opt.rebalance_intervals)
        if (h > grid_step * (1.0 + 1e-9)) add_schedule(h);
    if (opt.report_interval > 0.0) add_schedule(opt.report_interval);
    const Plan plan(make_grid(tn, config.steps_per_year, req), model, Measure::domestic);
    const auto& times = plan.times;
    const std::size_t kmax = times.size() - 1;

    std::vector<detail::SwapFrame> frames;
    frames.reserve(times.size());
    for (double t : times) frames.emplace_back(t, spec, model);

    const std::size_t nr = opt.rebalance_intervals.size();
    std::vector<std::vector<char>> rebalance(nr, std::vector<char>(times.size(), 0));
    for (std::size_t r = 0; r < nr; ++r) {
        const double h = opt.rebalance_intervals[r];
        const bool every = h <= grid_step * (1.0 + 1e-9);
        for (std::size_t k = 0; k < kmax; ++k) rebalance[r][k] = every || on_schedule(times[k], h);
    }
    std::vector<std::size_t> report_idx;
    std::vector<char> is_payment(times.size(), 0);
    std::vector<std::size_t> tenor_idx(spec.tenor.size());
    for (std::size_t k = 0; k <= kmax; ++k) {
        const double t = times[k];
        bool tenor = false;
        for (std::size_t j = 0; j < spec.tenor.size(); ++j)
            if (std::abs(spec.tenor[j] - t) <= kTimeTol) {
                tenor = true;
                tenor_idx[j] = k;
                if (j > 0) is_payment[k] = 1;
            }
        if (k == 0 || k == kmax || tenor || (opt.report_interval > 0.0 && on_schedule(t, opt.report_interval)))
            report_idx.push_back(k);
    }
    std::vector<std::size_t> report_slot(times.size(), SIZE_MAX);
    for (std::size_t i = 0; i < report_idx.size(); ++i) report_slot[report_idx[i]] = i;

    BacktestResult res;
    for (std::size_t k : report_idx) res.report_times.push_back(times[k]);
    {
        const auto p0 = frames[0].price(SwapState::initial(model, spec));
        res.price0 = p0.total;
        res.interest0 = p0.interest();
    }
    const std::size_t np = config.n_paths;
    const std::size_t keep = std::min(opt.keep_paths, np);
    std::vector<std::vector<std::vector<double>>> pnl(nr, std::vector<std::vector<double>>(report_idx.size(),
                                                                                             std::vector<double>(np)));
    res.runs.resize(nr);
    for (std::size_t r = 0; r < nr; ++r) {
        res.runs[r].interval = opt.rebalance_intervals[r];
        res.runs[r].terminal_error.assign(np, 0.0);
        res.runs[r].sample_wealth.assign(keep, std::vector<double>(report_idx.size()));
    }
    res.sample_price.assign(keep, std::vector<double>(report_idx.size()));

    parallel_for(np, resolve_threads(config.threads), [&](std::size_t b, std::size_t e) {
        PathGrid path;
        SwapState x;
        x.int_d.assign(n, 0.0);
        x.int_f.assign(n, 0.0);
        std::vector<detail::LegFutures> fut_prev(n), fut(n);
        std::vector<double> wealth(nr);
        std::vector<HedgePosition> pos(nr);
        auto fill = [&](std::size_t k) {
            const double t = times[k];
            x.t = t;
            x.r_d = path.r_d[k];
            x.r_f = path.r_f[k];
            x.q = path.q[k];
            x.q_s = t >= spec.start() - kTimeTol ? path.q[tenor_idx[0]] : kNaN;
            for (std::size_t j = 0; j < n; ++j) {
                const bool started = t >= spec.tenor[j] - kTimeTol;
                x.int_d[j] = started ? path.int_r_d[k] - path.int_r_d[tenor_idx[j]] : 0.0;
                x.int_f[j] = started ? path.int_r_f[k] - path.int_r_f[tenor_idx[j]] : 0.0;
            }
        };
        for (std::size_t i = b; i < e; ++i) {
            plan.generate(config.seed, i, path);
            fill(0);
            fut_prev.assign(n, detail::LegFutures{});
            frames[0].futures(x, fut_prev);
            HedgePosition h0;
            if (opt.hedged) h0 = frames[0].hedge(x, 1.0);
            for (std::size_t r = 0; r < nr; ++r) {
                wealth[r] = res.price0;
                pos[r] = h0;
            }
            auto record = [&](std::size_t k, double price) {
                const std::size_t s = report_slot[k];
                if (s == SIZE_MAX) return;
                for (std::size_t r = 0; r < nr; ++r) {
                    pnl[r][s][i] = wealth[r] - price;
                    if (i < keep) res.runs[r].sample_wealth[i][s] = wealth[r];
                }
                if (i < keep) res.sample_price[i][s] = price;
            };
            record(0, res.price0);
            for (std::size_t k = 0; k < kmax; ++k) {
                const std::size_t k1 = k + 1;
                fill(k1);
                fut = fut_prev;
                frames[k1].futures(x, fut);
                const double growth =
                    std::exp(path.int_r_d[k1] - path.int_r_d[k] + plan.steps[k].alpha);
                const double qn = path.q[k1];
                for (std::size_t r = 0; r < nr; ++r) {
                    double gain = 0.0;
                    if (opt.hedged) {
                        const auto& p = pos[r];
                        for (std::size_t j = 0; j < n; ++j) {
                            gain += p.phi_d[j] * (fut[j].fd - fut_prev[j].fd);
                            gain += p.phi_f[j] * qn * (fut[j].ff - fut_prev[j].ff);
                            gain += p.phi_q[j] * (fut[j].fq - fut_prev[j].fq);
                        }
                    }
                    wealth[r] = wealth[r] * growth + gain;
                }
                if (is_payment[k1]) {
                    double cf = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        if (tenor_idx[j + 1] != k1) continue;
                        cf += std::expm1(x.int_f[j]) * x.q - (std::expm1(x.int_d[j]) + spec.kappa * spec.delta(j)) * x.q_s;
                        if (j + 1 == n) cf += x.q - x.q_s;
                    }
                    cf *= spec.notional_f;
                    for (auto& w : wealth) w -= cf;
                }
                const bool any_rebalance = opt.hedged && [&] {
                    for (std::size_t r = 0; r < nr; ++r)
                        if (rebalance[r][k1]) return true;
                    return false;
                }();
                double price = 0.0;
                if (any_rebalance) {
                    const HedgePosition h = frames[k1].hedge(x, 1.0);
                    price = h.value;
                    for (std::size_t r = 0; r < nr; ++r)
                        if (rebalance[r][k1]) pos[r] = h;
                } else if (report_slot[k1] != SIZE_MAX && k1 < kmax) {
                    price = frames[k1].price(x).total;
                }
                record(k1, price);
                std::swap(fut_prev, fut);
            }
            for (std::size_t r = 0; r < nr; ++r) res.runs[r].terminal_error[i] = wealth[r];
        }
    });
    for (std::size_t r = 0; r < nr; ++r) res.runs[r].profile = pnl_quantiles(res.report_times, pnl[r]);
    return res;
}

}  // namespace ccbs
