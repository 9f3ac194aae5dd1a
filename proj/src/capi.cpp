#include "ccbs/ccbs.h"

#include <cmath>
#include <new>
#include <string>

#include "ccbs/hedging.hpp"
#include "ccbs/pricing.hpp"
#include "ccbs/simulation.hpp"

struct ccbs_model {
    ccbs::MarketModel m;
};

struct ccbs_contract {
    ccbs::CcbsSpec spec;
};

struct ccbs_backtest {
    ccbs::BacktestResult r;
};

namespace {

thread_local std::string last_error;

struct NullArg : std::exception {
    const char* what() const noexcept override { return "null argument"; }
};

template <class F>
ccbs_status guard(F&& f) {
    try {
        last_error.clear();
        f();
        return CCBS_OK;
    } catch (const NullArg& e) {
        last_error = e.what();
        return CCBS_ERR_NULL;
    } catch (const ccbs::ConfigError& e) {
        last_error = e.what();
        return CCBS_ERR_CONFIG;
    } catch (const ccbs::DomainError& e) {
        last_error = e.what();
        return CCBS_ERR_DOMAIN;
    } catch (const ccbs::NumericError& e) {
        last_error = e.what();
        return CCBS_ERR_NUMERIC;
    } catch (const ccbs::StateError& e) {
        last_error = e.what();
        return CCBS_ERR_STATE;
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
        return CCBS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        last_error = e.what();
        return CCBS_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return CCBS_ERR_INTERNAL;
    }
}

template <class... P>
void need(const P*... p) {
    if (((p == nullptr) || ...)) throw NullArg();
}

ccbs::SwapState to_state(const ccbs_model* model, const ccbs_contract* c, const ccbs_state* s) {
    if (s == nullptr) return ccbs::SwapState::initial(model->m, c->spec);
    ccbs::SwapState x;
    x.t = s->t;
    x.r_d = s->r_d;
    x.r_f = s->r_f;
    x.q = s->q;
    x.q_s = s->q_s;
    const std::size_t n = c->spec.periods();
    if (s->t > c->spec.start() && (!s->int_d || !s->int_f))
        throw ccbs::StateError("realized integrals are required once the swap has started");
    x.int_d.assign(n, 0.0);
    x.int_f.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (s->int_d) x.int_d[j] = s->int_d[j];
        if (s->int_f) x.int_f[j] = s->int_f[j];
    }
    return x;
}

ccbs::SimConfig to_config(const ccbs_sim_config* c) {
    ccbs::SimConfig s;
    if (c == nullptr) return s;
    s.n_paths = c->n_paths;
    s.seed = c->seed;
    s.steps_per_year = c->steps_per_year;
    if (c->measure != CCBS_DOMESTIC && c->measure != CCBS_FOREIGN) throw ccbs::ConfigError("unknown measure");
    s.measure = c->measure == CCBS_FOREIGN ? ccbs::Measure::foreign : ccbs::Measure::domestic;
    s.threads = c->threads;
    return s;
}

ccbs_sim_result to_result(const ccbs::SimResult& r) { return {r.estimate, r.std_error, r.n_paths}; }

ccbs_swaption_result to_swaption(const ccbs::SwaptionResult& r) {
    return {to_result(r.payer), to_result(r.receiver), to_result(r.forward), r.forward_closed, r.parity_residual,
            r.parity_std_error};
}

const ccbs::BacktestRun& run_at(const ccbs_backtest* bt, size_t run) {
    if (run >= bt->r.runs.size()) throw ccbs::DomainError("backtest run index out of range");
    return bt->r.runs[run];
}

}  // namespace

extern "C" {

const char* ccbs_last_error(void) { return last_error.c_str(); }

const char* ccbs_version(void) { return "0.1.0"; }

ccbs_status ccbs_model_reference_params(ccbs_model_params* out) {
    return guard([&] {
        need(out);
        const auto m = ccbs::reference_model();
        *out = {m.domestic.a,
                m.domestic.b,
                m.domestic.sigma,
                m.foreign.a,
                m.foreign.b,
                m.foreign.sigma,
                m.sigma_q,
                m.corr.rho12,
                m.corr.rho13,
                m.corr.rho23,
                m.spreads.alpha_h(0.0),
                m.spreads.alpha_c(0.0),
                m.spreads.alpha_d(0.0),
                m.spreads.alpha_f(0.0),
                m.spreads.beta,
                m.r_d0,
                m.r_f0,
                m.q0};
    });
}

ccbs_status ccbs_model_create(const ccbs_model_params* p, ccbs_model** out) {
    return guard([&] {
        need(p, out);
        *out = nullptr;
        ccbs::MarketModel m;
        m.domestic = {p->a, p->b, p->sigma};
        m.foreign = {p->a_f, p->b_f, p->sigma_f};
        m.sigma_q = p->sigma_q;
        m.corr = ccbs::CorrelationSet::make(p->rho12, p->rho13, p->rho23);
        m.spreads.alpha_h = p->alpha_h;
        m.spreads.alpha_c = p->alpha_c;
        m.spreads.alpha_d = p->alpha_d;
        m.spreads.alpha_f = p->alpha_f;
        m.spreads.beta = p->beta;
        m.r_d0 = p->r_d0;
        m.r_f0 = p->r_f0;
        m.q0 = p->q0;
        m.validate();
        *out = new ccbs_model{m};
    });
}

ccbs_status ccbs_model_set_spread_curve(ccbs_model* model, ccbs_spread_curve which, const double* knots,
                                        size_t n_knots, const double* values) {
    return guard([&] {
        need(model, values);
        if (n_knots > 0) need(knots);
        ccbs::PiecewiseConstant c(std::vector<double>(knots, knots + n_knots),
                                  std::vector<double>(values, values + n_knots + 1));
        auto& s = model->m.spreads;
        switch (which) {
            case CCBS_ALPHA_H: s.alpha_h = c; break;
            case CCBS_ALPHA_C: s.alpha_c = c; break;
            case CCBS_ALPHA_D: s.alpha_d = c; break;
            case CCBS_ALPHA_F: s.alpha_f = c; break;
            default: throw ccbs::DomainError("unknown spread curve");
        }
    });
}

void ccbs_model_destroy(ccbs_model* model) { delete model; }

ccbs_status ccbs_contract_create(const double* tenor, size_t n_dates, double kappa, double notional_f,
                                 double q_at_inception, ccbs_contract** out) {
    return guard([&] {
        need(out);
        *out = nullptr;
        if (n_dates > 0) need(tenor);
        ccbs::CcbsSpec s;
        s.tenor.assign(tenor, tenor + n_dates);
        s.kappa = kappa;
        s.notional_f = notional_f;
        s.q_at_inception = q_at_inception;
        s.validate();
        *out = new ccbs_contract{s};
    });
}

ccbs_status ccbs_contract_set_kappa(ccbs_contract* contract, double kappa) {
    return guard([&] {
        need(contract);
        if (!std::isfinite(kappa)) throw ccbs::ConfigError("kappa must be finite");
        contract->spec.kappa = kappa;
    });
}

size_t ccbs_contract_periods(const ccbs_contract* contract) { return contract ? contract->spec.periods() : 0; }

void ccbs_contract_destroy(ccbs_contract* contract) { delete contract; }

ccbs_status ccbs_price(const ccbs_model* model, const ccbs_contract* contract, const ccbs_state* state,
                       ccbs_price_summary* out, double* x_f, double* x_d) {
    return guard([&] {
        need(model, contract, out);
        const auto p = ccbs::price_ccbs(to_state(model, contract, state), contract->spec, model->m);
        *out = {p.interest(), p.principal, p.total, p.kappa_coeff};
        for (std::size_t j = 0; j < p.x_f.size(); ++j) {
            if (x_f) x_f[j] = p.x_f[j];
            if (x_d) x_d[j] = p.x_d[j];
        }
    });
}

ccbs_status ccbs_fair_spread(const ccbs_model* model, const ccbs_contract* contract, const ccbs_state* state,
                             ccbs_spread_quote* out) {
    return guard([&] {
        need(model, contract, out);
        const auto q = ccbs::fair_spread(to_state(model, contract, state), contract->spec, model->m);
        *out = {q.value, q.i_f, q.i_d, q.i_p, q.k_d};
    });
}

ccbs_status ccbs_hedge(const ccbs_model* model, const ccbs_contract* contract, const ccbs_state* state,
                       double bank_h, ccbs_hedge_summary* out, double* phi_d, double* phi_f, double* phi_q) {
    return guard([&] {
        need(model, contract, out);
        const auto h = ccbs::hedge_ccbs(to_state(model, contract, state), contract->spec, model->m, bank_h);
        *out = {h.phi0, h.collateral, h.value};
        for (std::size_t j = 0; j < h.phi_d.size(); ++j) {
            if (phi_d) phi_d[j] = h.phi_d[j];
            if (phi_f) phi_f[j] = h.phi_f[j];
            if (phi_q) phi_q[j] = h.phi_q[j];
        }
    });
}

void ccbs_sim_config_default(ccbs_sim_config* out) {
    if (out == nullptr) return;
    const ccbs::SimConfig s;
    *out = {s.n_paths, s.seed, s.steps_per_year, CCBS_DOMESTIC, s.threads};
}

ccbs_status ccbs_mc_price(const ccbs_model* model, const ccbs_contract* contract, const ccbs_sim_config* config,
                          ccbs_sim_result* interest, ccbs_sim_result* principal, ccbs_sim_result* total) {
    return guard([&] {
        need(model, contract);
        const auto& s = contract->spec;
        const auto r = ccbs::mc_price({ccbs::ccbs_claim(s, ccbs::ClaimPart::interest),
                                       ccbs::ccbs_claim(s, ccbs::ClaimPart::principal),
                                       ccbs::ccbs_claim(s, ccbs::ClaimPart::total)},
                                      s.maturity(), to_config(config), model->m, s.tenor);
        if (interest) *interest = to_result(r[0]);
        if (principal) *principal = to_result(r[1]);
        if (total) *total = to_result(r[2]);
    });
}

ccbs_status ccbs_mc_swaption(const ccbs_model* model, const ccbs_contract* contract, double strike,
                             const ccbs_sim_config* config, ccbs_swaption_result* out) {
    return guard([&] {
        need(model, contract, out);
        *out = to_swaption(ccbs::mc_swaption(contract->spec, strike, to_config(config), model->m));
    });
}

ccbs_status ccbs_mc_realized_cashflow_option(const ccbs_model* model, const ccbs_contract* contract, double strike,
                                             const ccbs_sim_config* config, ccbs_swaption_result* out) {
    return guard([&] {
        need(model, contract, out);
        *out = to_swaption(ccbs::mc_realized_cashflow_option(contract->spec, strike, to_config(config), model->m));
    });
}

ccbs_status ccbs_backtest_run(const ccbs_model* model, const ccbs_contract* contract, const double* intervals,
                              size_t n_intervals, const ccbs_backtest_options* options,
                              const ccbs_sim_config* config, ccbs_backtest** out) {
    return guard([&] {
        need(model, contract, out);
        *out = nullptr;
        if (n_intervals > 0) need(intervals);
        ccbs::BacktestOptions o;
        o.rebalance_intervals.assign(intervals, intervals + n_intervals);
        if (options) {
            o.hedged = options->hedged != 0;
            o.report_interval = options->report_interval;
            o.keep_paths = options->keep_paths;
        }
        *out = new ccbs_backtest{ccbs::hedge_backtest(contract->spec, model->m, o, to_config(config))};
    });
}

size_t ccbs_backtest_report_count(const ccbs_backtest* bt) { return bt ? bt->r.report_times.size() : 0; }

size_t ccbs_backtest_path_count(const ccbs_backtest* bt) {
    return bt && !bt->r.runs.empty() ? bt->r.runs.front().terminal_error.size() : 0;
}

size_t ccbs_backtest_sample_count(const ccbs_backtest* bt) { return bt ? bt->r.sample_price.size() : 0; }

ccbs_status ccbs_backtest_initial(const ccbs_backtest* bt, double* price0, double* interest0) {
    return guard([&] {
        need(bt);
        if (price0) *price0 = bt->r.price0;
        if (interest0) *interest0 = bt->r.interest0;
    });
}

ccbs_status ccbs_backtest_profile(const ccbs_backtest* bt, size_t run, double* times, double* q25, double* q50,
                                  double* q75) {
    return guard([&] {
        need(bt);
        const auto& p = run_at(bt, run).profile;
        for (std::size_t k = 0; k < p.times.size(); ++k) {
            if (times) times[k] = p.times[k];
            if (q25) q25[k] = p.q25[k];
            if (q50) q50[k] = p.q50[k];
            if (q75) q75[k] = p.q75[k];
        }
    });
}

ccbs_status ccbs_backtest_terminal_errors(const ccbs_backtest* bt, size_t run, double* out) {
    return guard([&] {
        need(bt, out);
        const auto& e = run_at(bt, run).terminal_error;
        for (std::size_t i = 0; i < e.size(); ++i) out[i] = e[i];
    });
}

ccbs_status ccbs_backtest_sample(const ccbs_backtest* bt, size_t run, size_t path, double* wealth, double* price) {
    return guard([&] {
        need(bt);
        const auto& r = run_at(bt, run);
        if (path >= r.sample_wealth.size()) throw ccbs::DomainError("sample path index out of range");
        for (std::size_t k = 0; k < bt->r.report_times.size(); ++k) {
            if (wealth) wealth[k] = r.sample_wealth[path][k];
            if (price) price[k] = bt->r.sample_price[path][k];
        }
    });
}

void ccbs_backtest_destroy(ccbs_backtest* bt) { delete bt; }

ccbs_status ccbs_quantile(const double* v, size_t n, double p, double* out) {
    return guard([&] {
        need(out);
        if (n > 0) need(v);
        *out = ccbs::quantile_type7(std::vector<double>(v, v + n), p);
    });
}

}  // extern "C"
