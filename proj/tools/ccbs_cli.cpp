#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccbs/ccbs.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr double kBp = 1e-4;

struct Failure {
    int code;
    std::string msg;
};

[[noreturn]] void config_error(const std::string& msg) { throw Failure{kExitConfig, msg}; }

// setup calls and requests the inputs cannot satisfy exit 2; failures inside a computation exit 3
void check(ccbs_status s, bool setup) {
    if (s == CCBS_OK) return;
    const bool bad_input = setup || s == CCBS_ERR_CONFIG || s == CCBS_ERR_DOMAIN || s == CCBS_ERR_NULL;
    const int code = bad_input ? kExitConfig : kExitNumeric;
    throw Failure{code, ccbs_last_error()};
}

struct ModelDeleter {
    void operator()(ccbs_model* m) const { ccbs_model_destroy(m); }
};
struct ContractDeleter {
    void operator()(ccbs_contract* c) const { ccbs_contract_destroy(c); }
};
struct BacktestDeleter {
    void operator()(ccbs_backtest* b) const { ccbs_backtest_destroy(b); }
};
using ModelPtr = std::unique_ptr<ccbs_model, ModelDeleter>;
using ContractPtr = std::unique_ptr<ccbs_contract, ContractDeleter>;
using BacktestPtr = std::unique_ptr<ccbs_backtest, BacktestDeleter>;

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const std::vector<std::string> kSpreads = {"alpha_h", "alpha_c", "alpha_d", "alpha_f"};

void only_keys(const json& j, const std::string& where, const std::vector<std::string>& allowed) {
    if (!j.is_object()) config_error(where + " must be an object");
    for (const auto& [k, v] : j.items()) {
        (void)v;
        if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
            config_error("unknown key '" + k + "' in " + where);
    }
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) config_error(where + " must be a number");
    return j.get<double>();
}

json default_config() {
    ccbs_model_params p;
    ccbs_model_reference_params(&p);
    ccbs_sim_config s;
    ccbs_sim_config_default(&s);
    return {
        {"model",
         {{"domestic", {{"a", p.a}, {"b", p.b}, {"sigma", p.sigma}}},
          {"foreign", {{"a", p.a_f}, {"b", p.b_f}, {"sigma", p.sigma_f}}},
          {"sigma_q", p.sigma_q},
          {"rho12", p.rho12},
          {"rho13", p.rho13},
          {"rho23", p.rho23},
          {"alpha_h", p.alpha_h},
          {"alpha_c", p.alpha_c},
          {"alpha_d", p.alpha_d},
          {"alpha_f", p.alpha_f},
          {"beta", p.beta},
          {"r_d0", p.r_d0},
          {"r_f0", p.r_f0},
          {"q0", p.q0}}},
        {"contract", {{"start", 0.0}, {"periods", 6}, {"step", 0.5}, {"kappa_bps", 0.0}, {"notional_f", 1e7}}},
        {"simulation",
         {{"n_paths", s.n_paths}, {"seed", s.seed}, {"steps_per_year", s.steps_per_year}, {"measure", "domestic"},
          {"threads", 0}}},
        {"output", {{"dir", "."}, {"formats", {"json", "csv"}}}},
    };
}

// Checks keys and types, then merges the user document over the defaults.
json normalize(const json& user) {
    json cfg = default_config();
    only_keys(user, "config", {"model", "contract", "simulation", "output"});
    if (user.contains("model")) {
        const json& m = user["model"];
        only_keys(m, "model", {"domestic", "foreign", "sigma_q", "rho12", "rho13", "rho23", "alpha_h", "alpha_c",
                               "alpha_d", "alpha_f", "beta", "r_d0", "r_f0", "q0"});
        for (const char* side : {"domestic", "foreign"}) {
            if (!m.contains(side)) continue;
            only_keys(m[side], std::string("model.") + side, {"a", "b", "sigma"});
            for (const auto& [k, v] : m[side].items())
                cfg["model"][side][k] = number(v, std::string("model.") + side + "." + k);
        }
        for (const auto& [k, v] : m.items()) {
            if (k == "domestic" || k == "foreign") continue;
            const bool spread = std::find(kSpreads.begin(), kSpreads.end(), k) != kSpreads.end();
            if (spread && v.is_object()) {
                only_keys(v, "model." + k, {"knots", "values"});
                if (!v.contains("values") || !v["values"].is_array()) config_error("model." + k + ".values must be an array");
                if (v.contains("knots") && !v["knots"].is_array()) config_error("model." + k + ".knots must be an array");
                for (const auto& x : v["values"]) number(x, "model." + k + ".values[]");
                if (v.contains("knots"))
                    for (const auto& x : v["knots"]) number(x, "model." + k + ".knots[]");
                cfg["model"][k] = v;
            } else {
                cfg["model"][k] = number(v, "model." + k);
            }
        }
    }
    if (user.contains("contract")) {
        const json& c = user["contract"];
        only_keys(c, "contract", {"tenor", "start", "periods", "step", "kappa_bps", "notional_f", "q_at_inception"});
        if (c.contains("tenor")) {
            if (c.contains("start") || c.contains("periods") || c.contains("step"))
                config_error("contract takes either tenor or start/periods/step, not both");
            if (!c["tenor"].is_array()) config_error("contract.tenor must be an array");
            for (const auto& x : c["tenor"]) number(x, "contract.tenor[]");
            cfg["contract"].erase("start");
            cfg["contract"].erase("periods");
            cfg["contract"].erase("step");
        }
        for (const auto& [k, v] : c.items()) {
            if (k == "tenor") {
                cfg["contract"][k] = v;
            } else if (k == "q_at_inception" && v.is_null()) {
                cfg["contract"].erase(k);
            } else if (k == "periods") {
                if (!v.is_number_integer() || v.get<long>() < 1) config_error("contract.periods must be an integer >= 1");
                cfg["contract"][k] = v;
            } else {
                cfg["contract"][k] = number(v, "contract." + k);
            }
        }
    }
    if (user.contains("simulation")) {
        const json& s = user["simulation"];
        only_keys(s, "simulation", {"n_paths", "seed", "steps_per_year", "measure", "threads"});
        for (const auto& [k, v] : s.items()) {
            if (k == "measure") {
                if (!v.is_string() || (v != "domestic" && v != "foreign"))
                    config_error("simulation.measure must be \"domestic\" or \"foreign\"");
            } else if (!v.is_number_integer() || v.get<long long>() < 0) {
                config_error("simulation." + k + " must be a non-negative integer");
            }
            cfg["simulation"][k] = v;
        }
    }
    if (user.contains("output")) {
        const json& o = user["output"];
        only_keys(o, "output", {"dir", "formats"});
        if (o.contains("dir")) {
            if (!o["dir"].is_string()) config_error("output.dir must be a string");
            cfg["output"]["dir"] = o["dir"];
        }
        if (o.contains("formats")) {
            if (!o["formats"].is_array()) config_error("output.formats must be an array");
            for (const auto& f : o["formats"])
                if (!f.is_string() || (f != "json" && f != "csv")) config_error("output.formats entries must be json or csv");
            cfg["output"]["formats"] = o["formats"];
        }
    }
    return cfg;
}

json load_config(const std::string& path) {
    if (path.empty()) return default_config();
    std::ifstream in(path);
    if (!in) config_error("cannot open config file " + path);
    json user;
    try {
        user = json::parse(in);
    } catch (const json::parse_error& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
    }
    return normalize(user);
}

std::vector<double> tenor_of(const json& c) {
    std::vector<double> t;
    if (c.contains("tenor")) {
        for (const auto& x : c["tenor"]) t.push_back(x.get<double>());
        return t;
    }
    const double start = c["start"].get<double>(), step = c["step"].get<double>();
    const long n = c["periods"].get<long>();
    for (long j = 0; j <= n; ++j) t.push_back(start + step * static_cast<double>(j));
    return t;
}

struct Run {
    json cfg;
    ModelPtr model;
    ContractPtr contract;
    ccbs_sim_config sim{};
    std::vector<double> tenor;
    fs::path out_dir;
    bool want_json = true, want_csv = true;
};

void set_spread(ccbs_model* m, ccbs_spread_curve which, const json& v) {
    if (v.is_number()) return;
    std::vector<double> knots, values;
    if (v.contains("knots"))
        for (const auto& x : v["knots"]) knots.push_back(x.get<double>());
    for (const auto& x : v["values"]) values.push_back(x.get<double>());
    if (values.size() != knots.size() + 1) config_error("a spread step function needs one more value than knots");
    check(ccbs_model_set_spread_curve(m, which, knots.data(), knots.size(), values.data()), true);
}

double scalar_spread(const json& v) {
    if (v.is_number()) return v.get<double>();
    return v["values"][0].get<double>();
}

Run build(json cfg) {
    Run r;
    const json& m = cfg["model"];
    ccbs_model_params p{};
    p.a = m["domestic"]["a"];
    p.b = m["domestic"]["b"];
    p.sigma = m["domestic"]["sigma"];
    p.a_f = m["foreign"]["a"];
    p.b_f = m["foreign"]["b"];
    p.sigma_f = m["foreign"]["sigma"];
    p.sigma_q = m["sigma_q"];
    p.rho12 = m["rho12"];
    p.rho13 = m["rho13"];
    p.rho23 = m["rho23"];
    p.alpha_h = scalar_spread(m["alpha_h"]);
    p.alpha_c = scalar_spread(m["alpha_c"]);
    p.alpha_d = scalar_spread(m["alpha_d"]);
    p.alpha_f = scalar_spread(m["alpha_f"]);
    p.beta = m["beta"];
    p.r_d0 = m["r_d0"];
    p.r_f0 = m["r_f0"];
    p.q0 = m["q0"];
    ccbs_model* model = nullptr;
    check(ccbs_model_create(&p, &model), true);
    r.model.reset(model);
    const ccbs_spread_curve curves[] = {CCBS_ALPHA_H, CCBS_ALPHA_C, CCBS_ALPHA_D, CCBS_ALPHA_F};
    for (std::size_t i = 0; i < kSpreads.size(); ++i) set_spread(model, curves[i], m[kSpreads[i]]);

    const json& c = cfg["contract"];
    r.tenor = tenor_of(c);
    const double qi = c.contains("q_at_inception") ? c["q_at_inception"].get<double>()
                                                   : std::numeric_limits<double>::quiet_NaN();
    ccbs_contract* contract = nullptr;
    check(ccbs_contract_create(r.tenor.data(), r.tenor.size(), c["kappa_bps"].get<double>() * kBp,
                               c["notional_f"].get<double>(), qi, &contract),
          true);
    r.contract.reset(contract);

    const json& s = cfg["simulation"];
    r.sim.n_paths = s["n_paths"].get<std::uint64_t>();
    r.sim.seed = s["seed"].get<std::uint64_t>();
    r.sim.steps_per_year = s["steps_per_year"].get<int>();
    r.sim.measure = s["measure"] == "foreign" ? CCBS_FOREIGN : CCBS_DOMESTIC;
    r.sim.threads = s["threads"].get<unsigned>();
    if (r.sim.n_paths < 1) config_error("simulation.n_paths must be >= 1");
    if (r.sim.steps_per_year < 1) config_error("simulation.steps_per_year must be >= 1");

    r.out_dir = cfg["output"]["dir"].get<std::string>();
    r.want_json = r.want_csv = false;
    for (const auto& f : cfg["output"]["formats"]) {
        if (f == "json") r.want_json = true;
        if (f == "csv") r.want_csv = true;
    }
    r.cfg = std::move(cfg);
    return r;
}


void write_file(const Run& r, const std::string& name, const std::string& body) {
    std::error_code ec;
    fs::create_directories(r.out_dir, ec);
    std::ofstream out(r.out_dir / name, std::ios::binary);
    if (!out) throw Failure{kExitConfig, "cannot write " + (r.out_dir / name).string()};
    out << body;
}

// nlohmann prints doubles with the shortest round-trip form, which is deterministic
std::string dump(const json& j) { return j.dump(2) + "\n"; }

json sim_json(const ccbs_sim_result& s) {
    return {{"estimate", s.estimate}, {"std_error", s.std_error}, {"n_paths", s.n_paths}};
}


int cmd_price(Run& r) {
    const std::size_t n = ccbs_contract_periods(r.contract.get());
    std::vector<double> xf(n), xd(n);
    ccbs_price_summary p{};
    check(ccbs_price(r.model.get(), r.contract.get(), nullptr, &p, xf.data(), xd.data()), false);
    json j = {{"interest", p.interest}, {"principal", p.principal}, {"total", p.total},
              {"kappa_coeff", p.kappa_coeff}, {"kappa_bps", r.cfg["contract"]["kappa_bps"]}, {"periods", json::array()}};
    std::ostringstream csv;
    csv << "period_index,X_f_beta,X_d_beta,cumulative,principal,total\n";
    double cum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cum += xf[i] - xd[i];
        j["periods"].push_back({{"index", i + 1}, {"X_f_beta", xf[i]}, {"X_d_beta", xd[i]}, {"cumulative", cum}});
        csv << i + 1 << ',' << num(xf[i]) << ',' << num(xd[i]) << ',' << num(cum) << ",,\n";
    }
    csv << "total,,,"
        << num(cum) << ',' << num(p.principal) << ',' << num(p.total) << '\n';
    if (r.want_json) write_file(r, "price.json", dump(j));
    if (r.want_csv) write_file(r, "price.csv", csv.str());
    std::cout << dump(j);
    return 0;
}

json spread_json(const ccbs_spread_quote& q) {
    return {{"spread", q.value}, {"spread_bps", q.value / kBp}, {"I_f", q.i_f}, {"I_d", q.i_d}, {"I_p", q.i_p},
            {"K_d", q.k_d}};
}

int cmd_spread(Run& r) {
    ccbs_spread_quote q{};
    check(ccbs_fair_spread(r.model.get(), r.contract.get(), nullptr, &q), false);
    const json j = spread_json(q);
    if (r.want_json) write_file(r, "spread.json", dump(j));
    std::cout << dump(j);
    return 0;
}

json swaption_json(const ccbs_swaption_result& s, const std::string& side) {
    json j;
    if (side != "receiver") j["payer"] = sim_json(s.payer);
    if (side != "payer") j["receiver"] = sim_json(s.receiver);
    if (side == "both") {
        j["forward_mc"] = sim_json(s.forward);
        j["forward_closed"] = s.forward_closed;
        j["parity_residual"] = s.parity_residual;
        j["parity_std_error"] = s.parity_std_error;
    }
    return j;
}

int cmd_swaption(Run& r, double strike_bps, const std::string& side, bool diagnostic) {
    ccbs_swaption_result s{};
    check(ccbs_mc_swaption(r.model.get(), r.contract.get(), strike_bps * kBp, &r.sim, &s), false);
    json j = swaption_json(s, side);
    j["strike_bps"] = strike_bps;
    j["expiry"] = r.tenor.front();
    if (diagnostic) {
        ccbs_swaption_result d{};
        check(ccbs_mc_realized_cashflow_option(r.model.get(), r.contract.get(), strike_bps * kBp, &r.sim, &d), false);
        j["realized_cashflow_option"] = swaption_json(d, side);
    }
    if (r.want_json) write_file(r, "swaption.json", dump(j));
    std::cout << dump(j);
    return 0;
}

double frequency_interval(const std::string& f, int steps_per_year) {
    static const std::map<std::string, double> k = {
        {"weekly", 1.0 / 52.0}, {"monthly", 1.0 / 12.0}, {"quarterly", 0.25}, {"biannual", 0.5}};
    if (f == "grid") return 1.0 / steps_per_year;
    const auto it = k.find(f);
    if (it == k.end()) config_error("unknown frequency '" + f + "'");
    return it->second;
}

int cmd_hedgesim(Run& r, const std::vector<std::string>& freqs, bool unhedged, std::uint64_t samples) {
    std::vector<double> intervals;
    for (const auto& f : freqs) intervals.push_back(frequency_interval(f, r.sim.steps_per_year));
    ccbs_backtest_options o{!unhedged, 1.0 / 52.0, std::min<std::uint64_t>(samples, r.sim.n_paths)};
    ccbs_backtest* raw = nullptr;
    const ccbs_status st =
        ccbs_backtest_run(r.model.get(), r.contract.get(), intervals.data(), intervals.size(), &o, &r.sim, &raw);
    check(st, false);
    const BacktestPtr bt(raw);
    const std::size_t nt = ccbs_backtest_report_count(bt.get());
    const std::size_t np = ccbs_backtest_path_count(bt.get());
    const std::size_t ns = ccbs_backtest_sample_count(bt.get());
    double price0 = 0.0, interest0 = 0.0;
    check(ccbs_backtest_initial(bt.get(), &price0, &interest0), false);
    json summary = {{"price0", price0}, {"interest0", interest0}, {"hedged", !unhedged}, {"n_paths", np},
                    {"runs", json::array()}};
    const std::string tag = unhedged ? "unhedged" : "hedged";
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        std::vector<double> t(nt), q25(nt), q50(nt), q75(nt), err(np), abs_err(np);
        check(ccbs_backtest_profile(bt.get(), i, t.data(), q25.data(), q50.data(), q75.data()), false);
        check(ccbs_backtest_terminal_errors(bt.get(), i, err.data()), false);
        std::size_t within = 0;
        const double tol = 0.005 * std::abs(interest0);
        for (std::size_t k = 0; k < np; ++k) {
            abs_err[k] = std::abs(err[k]);
            if (abs_err[k] < tol) ++within;
        }
        double e25, e50, e75, med_abs;
        check(ccbs_quantile(err.data(), np, 0.25, &e25), false);
        check(ccbs_quantile(err.data(), np, 0.50, &e50), false);
        check(ccbs_quantile(err.data(), np, 0.75, &e75), false);
        check(ccbs_quantile(abs_err.data(), np, 0.50, &med_abs), false);
        summary["runs"].push_back({{"frequency", freqs[i]},
                                   {"interval", intervals[i]},
                                   {"terminal_q25", e25},
                                   {"terminal_median", e50},
                                   {"terminal_q75", e75},
                                   {"terminal_iqr", e75 - e25},
                                   {"median_abs_error", med_abs},
                                   {"median_abs_error_rel", interest0 != 0.0 ? med_abs / std::abs(interest0) : 0.0},
                                   {"share_within_half_percent", static_cast<double>(within) / np}});
        if (r.want_csv) {
            std::ostringstream csv;
            csv << "time,q25,q50,q75,iqr\n";
            for (std::size_t k = 0; k < nt; ++k)
                csv << num(t[k]) << ',' << num(q25[k]) << ',' << num(q50[k]) << ',' << num(q75[k]) << ','
                    << num(q75[k] - q25[k]) << '\n';
            write_file(r, "hedgesim_" + tag + "_" + freqs[i] + ".csv", csv.str());
            if (ns > 0) {
                std::vector<std::vector<double>> w(ns, std::vector<double>(nt)), p(ns, std::vector<double>(nt));
                for (std::size_t s = 0; s < ns; ++s)
                    check(ccbs_backtest_sample(bt.get(), i, s, w[s].data(), p[s].data()), false);
                std::ostringstream sc;
                sc << "time";
                for (std::size_t s = 0; s < ns; ++s) sc << ",price_" << s << ",wealth_" << s;
                sc << '\n';
                for (std::size_t k = 0; k < nt; ++k) {
                    sc << num(t[k]);
                    for (std::size_t s = 0; s < ns; ++s) sc << ',' << num(p[s][k]) << ',' << num(w[s][k]);
                    sc << '\n';
                }
                write_file(r, "hedgesim_" + tag + "_" + freqs[i] + "_samples.csv", sc.str());
            }
        }
    }
    if (r.want_json) write_file(r, "hedgesim_" + tag + ".json", dump(summary));
    std::cout << dump(summary);
    return 0;
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            config_error("sweep value '" + tok + "' is not a number");
        }
    }
    if (out.empty()) config_error("sweep needs at least one value");
    return out;
}

// named sweeps keep the long-run means fixed where the comparative statics require it
void apply_sweep(json& cfg, const std::string& param, double v) {
    json& m = cfg["model"];
    if (param == "delta_alpha") {
        if (!m["alpha_f"].is_number()) config_error("delta_alpha sweeps need a constant alpha_f");
        m["alpha_d"] = m["alpha_f"].get<double>() + v;
    } else if (param == "b") {
        const double th_d = m["domestic"]["a"].get<double>() / m["domestic"]["b"].get<double>();
        const double th_f = m["foreign"]["a"].get<double>() / m["foreign"]["b"].get<double>();
        m["domestic"]["b"] = v;
        m["foreign"]["b"] = v;
        m["domestic"]["a"] = th_d * v;
        m["foreign"]["a"] = th_f * v;
    } else if (param == "theta_q") {
        const double th_d = m["domestic"]["a"].get<double>() / m["domestic"]["b"].get<double>();
        m["foreign"]["a"] = m["foreign"]["b"].get<double>() * (th_d - v);
    } else {
        json::json_pointer ptr;
        try {
            std::string path = "/" + param;
            std::replace(path.begin(), path.end(), '.', '/');
            ptr = json::json_pointer(path);
        } catch (const std::exception&) {
            config_error("bad sweep parameter '" + param + "'");
        }
        if (!cfg.contains(ptr) || !cfg[ptr].is_number())
            config_error("sweep parameter '" + param + "' does not name a numeric config key");
        cfg[ptr] = v;
    }
}

int cmd_sensitivity(const json& base, const std::string& sweep) {
    const auto eq = sweep.find('=');
    if (eq == std::string::npos) config_error("--sweep expects param=v1,v2,...");
    const std::string param = sweep.substr(0, eq);
    const auto values = parse_list(sweep.substr(eq + 1));
    std::ostringstream csv;
    csv << param << ",interest,principal,total,spread_bps\n";
    json rows = json::array();
    Run first = build(base);
    for (double v : values) {
        json cfg = base;
        apply_sweep(cfg, param, v);
        Run r = build(normalize(cfg));
        ccbs_price_summary p{};
        ccbs_spread_quote q{};
        check(ccbs_price(r.model.get(), r.contract.get(), nullptr, &p, nullptr, nullptr), false);
        check(ccbs_fair_spread(r.model.get(), r.contract.get(), nullptr, &q), false);
        csv << num(v) << ',' << num(p.interest) << ',' << num(p.principal) << ',' << num(p.total) << ','
            << num(q.value / kBp) << '\n';
        rows.push_back({{param, v}, {"interest", p.interest}, {"principal", p.principal}, {"total", p.total},
                        {"spread_bps", q.value / kBp}});
    }
    if (first.want_csv) write_file(first, "sensitivity_" + param + ".csv", csv.str());
    if (first.want_json) write_file(first, "sensitivity_" + param + ".json", dump(rows));
    std::cout << csv.str();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-currency basis swap pricing, hedging and simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out_dir;
    std::uint64_t seed = 0, paths = 0;
    unsigned threads = 0;
    double kappa_bps = std::numeric_limits<double>::quiet_NaN();
    app.add_option("-c,--config", config_path, "JSON run configuration (defaults when omitted)");
    app.add_option("--out", out_dir, "output directory (overrides output.dir)");
    app.add_option("--seed", seed, "simulation seed (overrides simulation.seed)");
    app.add_option("--paths", paths, "number of paths (overrides simulation.n_paths)");
    app.add_option("--threads", threads, "worker threads (overrides simulation.threads and CCBS_THREADS)");
    app.add_option("--kappa-bps", kappa_bps, "contract spread in bps (overrides contract.kappa_bps)");

    auto* price = app.add_subcommand("price", "closed-form price breakdown");
    auto* spread = app.add_subcommand("spread", "fair basis spread");
    auto* swaption = app.add_subcommand("swaption", "Monte Carlo swaption price at the contract start");
    double strike_bps = std::numeric_limits<double>::quiet_NaN();
    std::string side = "both";
    bool diagnostic = false;
    swaption->add_option("--strike", strike_bps, "strike in bps (defaults to contract.kappa_bps)");
    swaption->add_option("--side", side, "payer, receiver or both")->check(CLI::IsMember({"payer", "receiver", "both"}));
    swaption->add_flag("--realized-diagnostic", diagnostic, "also price the option on realized cash flows");
    auto* hedgesim = app.add_subcommand("hedgesim", "hedging backtest with P&L quantiles");
    std::vector<std::string> freqs{"weekly"};
    bool unhedged = false;
    std::uint64_t samples = 30;
    hedgesim->add_option("--frequency", freqs, "weekly, monthly, quarterly, biannual or grid")->delimiter(',');
    hedgesim->add_flag("--unhedged", unhedged, "hold no futures");
    hedgesim->add_option("--samples", samples, "illustration paths written to CSV");
    auto* sensitivity = app.add_subcommand("sensitivity", "sweep one parameter and report prices and spreads");
    std::string sweep;
    sensitivity->add_option("--sweep", sweep, "param=v1,v2,... (delta_alpha, b, theta_q or a dotted config key)")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        json cfg = load_config(config_path);
        if (!out_dir.empty()) cfg["output"]["dir"] = out_dir;
        if (app.count("--seed")) cfg["simulation"]["seed"] = seed;
        if (app.count("--paths")) cfg["simulation"]["n_paths"] = paths;
        if (app.count("--threads")) cfg["simulation"]["threads"] = threads;
        if (!std::isnan(kappa_bps)) cfg["contract"]["kappa_bps"] = kappa_bps;
        if (*sensitivity) return cmd_sensitivity(cfg, sweep);
        Run r = build(cfg);
        if (*price) return cmd_price(r);
        if (*spread) return cmd_spread(r);
        if (*swaption) {
            if (std::isnan(strike_bps)) strike_bps = r.cfg["contract"]["kappa_bps"].get<double>();
            return cmd_swaption(r, strike_bps, side, diagnostic);
        }
        if (*hedgesim) return cmd_hedgesim(r, freqs, unhedged, samples);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.msg << '\n';
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
