#ifndef CCBS_H
#define CCBS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CCBS_API __declspec(dllexport)
#else
#define CCBS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    CCBS_OK = 0,
    CCBS_ERR_DOMAIN = 1,
    CCBS_ERR_CONFIG = 2,
    CCBS_ERR_NUMERIC = 3,
    CCBS_ERR_STATE = 4,
    CCBS_ERR_NULL = 5,
    CCBS_ERR_INTERNAL = 6
} ccbs_status;

typedef enum { CCBS_DOMESTIC = 0, CCBS_FOREIGN = 1 } ccbs_measure;

typedef enum { CCBS_ALPHA_H = 0, CCBS_ALPHA_C = 1, CCBS_ALPHA_D = 2, CCBS_ALPHA_F = 3 } ccbs_spread_curve;

typedef struct ccbs_model ccbs_model;
typedef struct ccbs_contract ccbs_contract;
typedef struct ccbs_backtest ccbs_backtest;

/* message of the last failed call on this thread; empty after success */
CCBS_API const char* ccbs_last_error(void);
CCBS_API const char* ccbs_version(void);

/* a, b, sigma: domestic rate; a_f, b_f, sigma_f: foreign rate (foreign-measure drift level) */
typedef struct {
    double a, b, sigma;
    double a_f, b_f, sigma_f;
    double sigma_q;
    double rho12, rho13, rho23;
    double alpha_h, alpha_c, alpha_d, alpha_f;
    double beta;
    double r_d0, r_f0, q0;
} ccbs_model_params;

CCBS_API ccbs_status ccbs_model_reference_params(ccbs_model_params* out);
CCBS_API ccbs_status ccbs_model_create(const ccbs_model_params* params, ccbs_model** out);
/* replaces one spread by a right-continuous step function with n_knots knots and n_knots + 1 values */
CCBS_API ccbs_status ccbs_model_set_spread_curve(ccbs_model* model, ccbs_spread_curve which, const double* knots,
                                                 size_t n_knots, const double* values);
CCBS_API void ccbs_model_destroy(ccbs_model* model);

/* tenor T_0 < ... < T_n; q_at_inception may be NaN when unknown */
CCBS_API ccbs_status ccbs_contract_create(const double* tenor, size_t n_dates, double kappa, double notional_f,
                                          double q_at_inception, ccbs_contract** out);
CCBS_API ccbs_status ccbs_contract_set_kappa(ccbs_contract* contract, double kappa);
CCBS_API size_t ccbs_contract_periods(const ccbs_contract* contract);
CCBS_API void ccbs_contract_destroy(ccbs_contract* contract);

/* int_d, int_f: per period int_{T_j}^t r du (length = periods), or NULL when t <= T_0.
   Passing a NULL state prices at t = 0 from the model's initial values. */
typedef struct {
    double t;
    double r_d, r_f, q;
    double q_s;
    const double* int_d;
    const double* int_f;
} ccbs_state;

typedef struct {
    double interest, principal, total, kappa_coeff;
} ccbs_price_summary;

typedef struct {
    double value, i_f, i_d, i_p, k_d;
} ccbs_spread_quote;

typedef struct {
    double phi0, collateral, value;
} ccbs_hedge_summary;

/* x_f, x_d, phi_*: optional caller buffers of length ccbs_contract_periods */
CCBS_API ccbs_status ccbs_price(const ccbs_model* model, const ccbs_contract* contract, const ccbs_state* state,
                                ccbs_price_summary* out, double* x_f, double* x_d);
CCBS_API ccbs_status ccbs_fair_spread(const ccbs_model* model, const ccbs_contract* contract,
                                      const ccbs_state* state, ccbs_spread_quote* out);
CCBS_API ccbs_status ccbs_hedge(const ccbs_model* model, const ccbs_contract* contract, const ccbs_state* state,
                                double bank_h, ccbs_hedge_summary* out, double* phi_d, double* phi_f, double* phi_q);

typedef struct {
    uint64_t n_paths;
    uint64_t seed;
    int steps_per_year;
    ccbs_measure measure;
    unsigned threads; /* 0: CCBS_THREADS or hardware concurrency */
} ccbs_sim_config;

typedef struct {
    double estimate, std_error;
    uint64_t n_paths;
} ccbs_sim_result;

typedef struct {
    ccbs_sim_result payer, receiver, forward;
    double forward_closed, parity_residual, parity_std_error;
} ccbs_swaption_result;

CCBS_API void ccbs_sim_config_default(ccbs_sim_config* out);
/* any of interest, principal, total may be NULL */
CCBS_API ccbs_status ccbs_mc_price(const ccbs_model* model, const ccbs_contract* contract,
                                   const ccbs_sim_config* config, ccbs_sim_result* interest,
                                   ccbs_sim_result* principal, ccbs_sim_result* total);
CCBS_API ccbs_status ccbs_mc_swaption(const ccbs_model* model, const ccbs_contract* contract, double strike,
                                      const ccbs_sim_config* config, ccbs_swaption_result* out);
CCBS_API ccbs_status ccbs_mc_realized_cashflow_option(const ccbs_model* model, const ccbs_contract* contract,
                                                      double strike, const ccbs_sim_config* config,
                                                      ccbs_swaption_result* out);

typedef struct {
    int hedged;
    double report_interval; /* years; 0 reports at tenor dates only */
    uint64_t keep_paths;
} ccbs_backtest_options;

CCBS_API ccbs_status ccbs_backtest_run(const ccbs_model* model, const ccbs_contract* contract,
                                       const double* intervals, size_t n_intervals,
                                       const ccbs_backtest_options* options, const ccbs_sim_config* config,
                                       ccbs_backtest** out);
CCBS_API size_t ccbs_backtest_report_count(const ccbs_backtest* bt);
CCBS_API size_t ccbs_backtest_path_count(const ccbs_backtest* bt);
CCBS_API size_t ccbs_backtest_sample_count(const ccbs_backtest* bt);
CCBS_API ccbs_status ccbs_backtest_initial(const ccbs_backtest* bt, double* price0, double* interest0);
/* buffers of length ccbs_backtest_report_count; any may be NULL */
CCBS_API ccbs_status ccbs_backtest_profile(const ccbs_backtest* bt, size_t run, double* times, double* q25,
                                           double* q50, double* q75);
/* buffer of length ccbs_backtest_path_count */
CCBS_API ccbs_status ccbs_backtest_terminal_errors(const ccbs_backtest* bt, size_t run, double* out);
/* buffers of length ccbs_backtest_report_count */
CCBS_API ccbs_status ccbs_backtest_sample(const ccbs_backtest* bt, size_t run, size_t path, double* wealth,
                                          double* price);
CCBS_API void ccbs_backtest_destroy(ccbs_backtest* bt);

CCBS_API ccbs_status ccbs_quantile(const double* v, size_t n, double p, double* out);

#ifdef __cplusplus
}
#endif

#endif
