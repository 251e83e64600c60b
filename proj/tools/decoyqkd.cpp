// decoyqkd: rate scans, Monte Carlo runs and property suites from the shell.
//
// Exit codes: 0 success, 1 verification failure, 2 config error, 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "decoy/attacks.hpp"
#include "decoy/config.hpp"
#include "decoy/errors.hpp"
#include "decoy/scan.hpp"
#include "decoy/simulator.hpp"
#include "decoy/verify.hpp"

namespace {

using namespace decoy;

constexpr int kExitVerify = 1;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

// CLI11 rejects "1e7" for integer options; pulse counts are often written that way
CLI::Validator const integral(
    [](std::string& text) {
        try
        {
            text = std::to_string(parse_uint(text, "value"));
            return std::string();
        }
        catch (Error const& e)
        {
            return std::string(e.what());
        }
    },
    "UINT", "integral");

struct SourceFlags
{
    IntensityProfile profile;
    double pd{1e-6};
    double eta{0.1};
    double delta_db{0.2};
    double f{1.0};
    std::string mode{"paper"};
    std::string out;
    std::string config;
    unsigned workers{0};
};

void add_common(CLI::App* cmd, SourceFlags& s)
{
    cmd->add_option("--config", s.config, "key=value config file; flags override it");
    cmd->add_option("--mu", s.profile.mu, "signal intensity");
    cmd->add_option("--nu1", s.profile.nu1, "first decoy intensity");
    cmd->add_option("--nu2", s.profile.nu2, "second decoy intensity");
    cmd->add_option("--p-s", s.profile.p_s, "signal selection probability");
    cmd->add_option("--p-d1", s.profile.p_d1, "decoy-1 selection probability");
    cmd->add_option("--p-d2", s.profile.p_d2, "decoy-2 selection probability");
    cmd->add_option("--p-z", s.profile.p_z, "z-basis probability");
    cmd->add_option("--pd", s.pd, "dark count probability per gate");
    cmd->add_option("--eta", s.eta, "detector efficiency");
    cmd->add_option("--delta-db", s.delta_db, "fiber loss in dB/km");
    cmd->add_option("--f", s.f, "error-correction inefficiency");
    cmd->add_option("--mode", s.mode, "yield model")->check(CLI::IsMember({"paper", "exact"}));
    cmd->add_option("--out", s.out, "output file (default stdout)");
    cmd->add_option("--workers", s.workers, "worker threads, 0 = all cores");
}

// Fill options absent from the command line with config values. A config key
// is a flag name, optionally inside a [section].
void apply_config(CLI::App* cmd, std::string const& path)
{
    if (path.empty())
        return;
    auto const cfg = Config::load(path);
    for (auto const& [key, entry] : cfg.entries())
    {
        auto const dot = key.rfind('.');
        std::string const name = dot == std::string::npos ? key : key.substr(dot + 1);
        if (name == "config")
            throw ConfigError(entry.origin + ": 'config' cannot be nested");
        CLI::Option* opt = cmd->get_option_no_throw("--" + name);
        if (!opt)
            throw ConfigError(entry.origin + ": unknown key '" + key + "' for "
                              + cmd->get_name());
        if (opt->count() > 0)
            continue;
        try
        {
            opt->add_result(entry.value);
            opt->run_callback();
        }
        catch (CLI::Error const& e)
        {
            throw ConfigError(entry.origin + ": " + key + ": " + e.what());
        }
    }
}

void write_output(std::string const& path, std::string const& content)
{
    if (path.empty() || path == "-")
    {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out)
        throw IoError("failed writing '" + path + "'");
}

// Fail before long computations rather than after them
void check_writable(std::string const& path)
{
    if (path.empty() || path == "-")
        return;
    std::ofstream probe(path, std::ios::binary | std::ios::app);
    if (!probe)
        throw IoError("cannot open '" + path + "' for writing");
}

YieldMode parse_mode(std::string const& m)
{
    return m == "exact" ? YieldMode::exact : YieldMode::paper;
}

int run_scan(SourceFlags const& s,
             double l_min,
             double l_max,
             double l_step,
             std::string const& curves,
             std::string const& svg,
             bool log_y)
{
    ScanConfig cfg;
    cfg.l_min = l_min;
    cfg.l_max = l_max;
    cfg.l_step = l_step;
    cfg.profile = s.profile;
    cfg.delta_db_per_km = s.delta_db;
    cfg.eta = s.eta;
    cfg.p_d = s.pd;
    cfg.rate.f = s.f;
    cfg.curves = parse_curves(curves);
    cfg.out = s.out;
    cfg.mode = parse_mode(s.mode);
    check_writable(cfg.out);
    check_writable(svg);

    auto const rows = rate_scan(cfg, s.workers);
    std::ostringstream csv;
    write_scan_csv(csv, rows);
    write_output(cfg.out, csv.str());
    if (!svg.empty())
    {
        std::ostringstream plot;
        write_scan_svg(plot, rows, cfg.curves, log_y);
        write_output(svg, plot.str());
    }
    return 0;
}

struct SimFlags
{
    std::string attack{"none"};
    std::uint64_t seed{1};
    std::uint64_t n_pulses{1'000'000};
    std::uint64_t chunk_size{1u << 16};
    double length{50};
    double beta{-1};
    double multi_block{0};
    std::string bs_mode{"eta_T"};
    double t{1};
    std::string double_click{"squash"};
    double n_sigma{3};
    bool strict{false};
};

void emit(std::ostream& os,
          std::string const& section,
          std::string const& pulse,
          std::string const& quantity,
          std::string const& value)
{
    os << section << ',' << pulse << ',' << quantity << ',' << value << '\n';
}

void emit_stats(std::ostream& os, std::string const& section, ObservedStatistics const& st)
{
    for (auto v : kPulseTypes)
    {
        emit(os, section, std::string(to_string(v)), "gain", format_number(st.gain[v]));
        emit(os, section, std::string(to_string(v)), "error_x", format_number(st.error_x[v]));
    }
    emit(os, section, "signal", "error_z", format_number(st.error_sz));
}

void emit_bounds(std::ostream& os, std::string const& section, DecoyBounds const& b)
{
    emit(os, section, "all", "Y0_L", format_number(b.y0_lower));
    emit(os, section, "all", "Y1_L", format_number(b.y1_lower));
    emit(os, section, "all", "Q1s_L", format_number(b.q1s_lower));
    emit(os, section, "all", "e1x_U", b.e1x_upper ? format_number(*b.e1x_upper) : "unbounded");
    emit(os, section, "all", "saturated", b.saturated ? "1" : "0");
}

void emit_rate(std::ostream& os, std::string const& section, RatePoint const& r)
{
    emit(os, section, "all", "R_decoy_raw", format_number(r.raw));
    emit(os, section, "all", "R_decoy", format_number(r.secure));
}

int run_simulate(SourceFlags const& s, SimFlags const& f)
{
    ChannelParams const ch{s.delta_db, f.length, s.eta, s.pd};
    validate_channel(ch);
    auto const profile = validate_profile(s.profile);

    SimConfig cfg;
    cfg.n_pulses = f.n_pulses;
    cfg.seed = f.seed;
    cfg.profile = profile;
    cfg.channel = ch;
    cfg.rate.f = s.f;
    cfg.chunk_size = f.chunk_size;
    cfg.workers = s.workers;
    cfg.double_click =
        f.double_click == "discard" ? DoubleClickPolicy::discard : DoubleClickPolicy::squash;
    if (f.attack == "pns")
    {
        PnsConfig pns;
        if (f.beta < 0)
            pns = pns_solve_beta(profile, ch);
        else
            pns = {f.beta, f.multi_block, 1.0};
        validate_pns(pns);
        cfg.attack = pns;
    }
    else if (f.attack == "bs")
    {
        BsConfig bs = f.bs_mode == "fixed" ? BsConfig{f.t, BsMode::fixed}
                      : bs_config(f.bs_mode == "T_only" ? BsMode::T_only : BsMode::eta_T, ch);
        validate_bs(bs);
        cfg.attack = bs;
    }
    validate_sim(cfg);
    check_writable(s.out);

    auto const report = end_to_end_report(cfg);
    auto const honest = honest_statistics(profile, ch, YieldMode::exact);
    auto const honest_rate =
        rate_decoy(honest, estimate_bounds(honest, profile), cfg.rate);

    std::ostringstream csv;
    csv << "section,pulse_type,quantity,value\n";
    emit(csv, "config", "all", "n_pulses", std::to_string(cfg.n_pulses));
    emit(csv, "config", "all", "seed", std::to_string(cfg.seed));
    emit(csv, "config", "all", "L_km", format_number(ch.length_km));
    emit(csv, "config", "all", "attack", attack_name(cfg.attack));
    if (auto const* p = std::get_if<PnsConfig>(&cfg.attack))
    {
        emit(csv, "config", "all", "beta", format_number(p->beta));
        emit(csv, "config", "all", "multi_block", format_number(p->multi_block));
    }
    if (auto const* b = std::get_if<BsConfig>(&cfg.attack))
        emit(csv, "config", "all", "t", format_number(b->t));
    for (auto v : kPulseTypes)
    {
        auto const& t = report.tally.per_type[v];
        std::string const p(to_string(v));
        emit(csv, "tally", p, "sent", std::to_string(t.sent));
        emit(csv, "tally", p, "detected", std::to_string(t.detected));
        emit(csv, "tally", p, "detected_z", std::to_string(t.detected_z));
        emit(csv, "tally", p, "detected_x", std::to_string(t.detected_x));
        emit(csv, "tally", p, "errors_z", std::to_string(t.errors_z));
        emit(csv, "tally", p, "errors_x", std::to_string(t.errors_x));
    }
    emit(csv, "tally", "all", "double_clicks", std::to_string(report.tally.double_clicks));
    emit_stats(csv, "empirical", report.empirical);
    emit_bounds(csv, "bounds", report.bounds);
    emit_rate(csv, "rate", report.rate);
    emit_stats(csv, "analytic", report.analytic);
    emit_bounds(csv, "analytic_bounds", report.analytic_bounds);
    emit_rate(csv, "analytic_rate", report.analytic_rate);
    emit_rate(csv, "honest_rate", honest_rate);
    emit(csv, "truth", "all", "Y0", format_number(report.truth.y0));
    emit(csv, "truth", "all", "Y1", format_number(report.truth.y1));
    emit(csv, "truth", "all", "Q1s", format_number(report.truth.q1s));
    emit(csv, "truth", "all", "e1x", format_number(report.truth.e1x));
    write_output(s.out, csv.str());

    // keep stdout clean when the CSV goes there
    std::ostream& log = s.out.empty() || s.out == "-" ? std::cerr : std::cout;
    bool ok = true;
    for (auto const& line : audit(report, f.n_sigma))
    {
        ok = ok && line.pass;
        char buf[200];
        std::snprintf(buf, sizeof buf, "audit %-14s empirical=%.6e analytic=%.6e sigma=%.2e %s\n",
                      line.quantity.c_str(), line.empirical, line.analytic, line.sigma,
                      line.pass ? "PASS" : "FAIL");
        log << buf;
    }
    log << "R_decoy=" << format_number(report.rate.secure)
        << " honest_R_decoy=" << format_number(honest_rate.secure) << '\n';
    return ok || !f.strict ? 0 : kExitVerify;
}

int run_verify(std::vector<std::string> const& suites,
               std::uint64_t seed,
               unsigned workers,
               std::string const& out)
{
    check_writable(out);
    std::vector<std::string> names;
    for (auto const& s : suites)
    {
        if (s == "all")
            for (auto const& n : verify_suite_names())
                names.push_back(n);
        else
            names.push_back(s);
    }

    nlohmann::json summary;
    summary["seed"] = seed;
    summary["suites"] = nlohmann::json::array();
    bool all_pass = true;
    for (auto const& name : names)
    {
        auto const rep = run_verify_suite(name, seed, workers);
        all_pass = all_pass && rep.passed;
        nlohmann::json j;
        j["suite"] = rep.suite;
        j["passed"] = rep.passed;
        j["cases"] = rep.cases;
        j["failures"] = rep.failures;
        for (auto const& [k, v] : rep.metrics)
            j["metrics"][k] = v;
        summary["suites"].push_back(j);
        std::cerr << (rep.passed ? "PASS " : "FAIL ") << rep.suite << " (" << rep.cases
                  << " cases)\n";
        for (auto const& fmsg : rep.failures)
            std::cerr << "  " << fmsg << '\n';
    }
    summary["passed"] = all_pass;
    write_output(out, summary.dump(2) + "\n");
    return all_pass ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Decoy-state BB84 key rates, attacks and Monte Carlo"};
    app.require_subcommand(1);

    SourceFlags scan_flags;
    double l_min = 0, l_max = 200, l_step = 1;
    std::string curves = "all", svg;
    bool log_y = false;
    auto* scan = app.add_subcommand("rate-scan", "key rate versus fiber length (CSV)");
    add_common(scan, scan_flags);
    scan->add_option("--l-min", l_min, "first length in km");
    scan->add_option("--l-max", l_max, "last length in km");
    scan->add_option("--l-step", l_step, "length step in km");
    scan->add_option("--curves", curves, "curves drawn in the SVG: decoy,gllp_truth,bs_etaT,bs_T|all");
    scan->add_option("--svg", svg, "also write an SVG plot here");
    scan->add_flag("--log-y", log_y, "log-scale rate axis in the SVG");

    SourceFlags sim_flags;
    SimFlags sim;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo run with analytic audit");
    add_common(simulate, sim_flags);
    simulate->add_option("--attack", sim.attack, "none|pns|bs")
        ->check(CLI::IsMember({"none", "pns", "bs"}));
    simulate->add_option("--seed", sim.seed, "64-bit seed");
    simulate->add_option("--n-pulses", sim.n_pulses, "number of pulses")->transform(integral);
    simulate->add_option("--chunk-size", sim.chunk_size, "pulses per seeded chunk")->transform(integral);
    simulate->add_option("--length", sim.length, "fiber length in km");
    simulate->add_option("--beta", sim.beta, "PNS single-photon blocking (default: solved)");
    simulate->add_option("--multi-block", sim.multi_block, "PNS multiphoton blocking with --beta");
    simulate->add_option("--bs-mode", sim.bs_mode, "eta_T|T_only|fixed")
        ->check(CLI::IsMember({"eta_T", "T_only", "fixed"}));
    simulate->add_option("--t", sim.t, "beam-splitter transmittance for --bs-mode fixed");
    simulate->add_option("--double-click", sim.double_click, "squash|discard")
        ->check(CLI::IsMember({"squash", "discard"}));
    simulate->add_option("--n-sigma", sim.n_sigma, "audit tolerance in standard errors");
    simulate->add_flag("--strict", sim.strict, "exit 1 when the audit fails");

    std::vector<std::string> suites;
    std::uint64_t verify_seed = 20240601;
    unsigned verify_workers = 0;
    std::string verify_out;
    auto* verify = app.add_subcommand("verify", "property suites; JSON summary");
    verify->add_option("suite", suites, "inequality|convexity|encoding|bounds|all")
        ->required()
        ->check(CLI::IsMember({"inequality", "convexity", "encoding", "bounds", "all"}));
    verify->add_option("--seed", verify_seed, "seed for randomized suites");
    verify->add_option("--workers", verify_workers, "worker threads, 0 = all cores");
    verify->add_option("--out", verify_out, "summary file (default stdout)");

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try
    {
        if (*scan)
        {
            apply_config(scan, scan_flags.config);
            return run_scan(scan_flags, l_min, l_max, l_step, curves, svg, log_y);
        }
        if (*simulate)
        {
            apply_config(simulate, sim_flags.config);
            return run_simulate(sim_flags, sim);
        }
        return run_verify(suites, verify_seed, verify_workers, verify_out);
    }
    catch (IoError const& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    }
    catch (AssertionFailure const& e)
    {
        std::cerr << "verification failed: " << e.what() << '\n';
        return kExitVerify;
    }
    catch (Error const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
}
