#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zdsi/examples.hpp"
#include "zdsi/io.hpp"

namespace zdsi {

namespace cli {

/// Bad flags or flag combinations; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// "3/10", "-2" or a plain decimal such as "0.125" (taken exactly).
inline Rational parse_number(const std::string& text, const std::string& flag)
{
    try {
        auto dot = text.find('.');
        if (dot == std::string::npos) return Rational::parse(text);
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        if (digits.empty() || digits == "-" || text.find('/') != std::string::npos) throw UsageError("");
        std::string den = "1" + std::string(text.size() - dot - 1, '0');
        return Rational::parse(digits + "/" + den);
    } catch (const std::exception&) {
        throw UsageError(flag + ": cannot read '" + text + "' as a number");
    }
}

inline std::array<Rational, 4> parse_query(const std::string& text)
{
    std::array<Rational, 4> q;
    std::stringstream ss(text);
    std::string tok;
    std::size_t k = 0;
    while (std::getline(ss, tok, ',')) {
        if (k == 4) throw UsageError("--query expects four comma-separated values Rx,Ry,Dx,Dy");
        q[k++] = parse_number(tok, "--query");
    }
    if (k != 4) throw UsageError("--query expects four comma-separated values Rx,Ry,Dx,Dy");
    return q;
}

struct Flags {
    std::string file, example, p = "1/5", D, alpha, R, query, out, mode = "fixed";
    std::string format = "exact";
    std::size_t M = 4;
    std::uint64_t seed = 1;
    std::size_t trials = 500;
    std::size_t n = 0; // 0: command default
    double epsilon = 0.1;
    bool trace = false, cloud = false, mix_orders = false, simultaneous = false;

    NumberFormat number_format() const { return format == "float" ? NumberFormat::Float : NumberFormat::Exact; }

    ProblemSpec problem() const
    {
        if (!file.empty() && !example.empty()) throw UsageError("give either --file or --example, not both");
        if (!file.empty()) return load_problem(file);
        if (!example.empty()) return make_example(example, M, parse_number(p, "--p"));
        throw UsageError("a problem is required: --file PATH or --example NAME");
    }

    Rational distortion() const
    {
        if (D.empty()) throw UsageError("--D is required");
        return parse_number(D, "--D");
    }
};

inline void solve_ri_cmd(const Flags& f, std::ostream& os)
{
    auto spec = f.problem();
    write_protocol_table(os, spec.pmf, solve_ri(spec.pmf), f.number_format());
}

inline void rd_curve_cmd(const Flags& f, std::ostream& os)
{
    auto spec = f.problem();
    auto cloud = rd_points(spec.pmf, spec.distortion);
    if (f.cloud) {
        write_cloud_csv(os, cloud, f.number_format());
        return;
    }
    auto curve = rd_curve(cloud);
    if (!f.D.empty()) {
        auto d = f.distortion();
        os << "D,R\n" << format_number(d, f.number_format()) << ',' << format_number(query(curve, d), f.number_format()) << '\n';
        return;
    }
    write_curve_csv(os, curve, f.number_format());
}

inline void causal_curve_cmd(const Flags& f, std::ostream& os)
{
    auto spec = f.problem();
    write_curve_csv(os, causal_rd_curve(spec.pmf, spec.distortion));
}

inline void encoder_si_curve_cmd(const Flags& f, std::ostream& os)
{
    auto spec = f.problem();
    write_curve_csv(os, encoder_si_rd_curve(spec.encoder_si(), spec.distortion), f.number_format());
}

inline void mt_region_cmd(const Flags& f, std::ostream& os)
{
    auto spec = f.problem();
    MTOptions o;
    o.simultaneous = f.simultaneous;
    auto region = enumerate_mt_points(spec.pmf, spec.distortion, spec.y_distortion(), o);
    if (f.query.empty()) {
        write_region_csv(os, region, f.number_format());
        return;
    }
    MembershipOptions mo;
    mo.mix_orders = f.mix_orders;
    write_membership(os, region, is_achievable(region, parse_query(f.query), mo), f.number_format());
}

inline void simulate_stream_cmd(const Flags& f, std::ostream& os)
{
    auto spec = f.problem();
    auto plan = build_plan(rd_points(spec.pmf, spec.distortion), f.distortion());
    SimOptions o;
    o.trace = f.trace;
    auto rep = run_simulation(plan, f.n ? f.n : 100000, f.seed, o);
    write_sim_csv(os, rep);
    if (f.trace) {
        os << '\n';
        write_trace_csv(os, rep.trace);
    }
}

inline void simulate_seq_cmd(const Flags& f, std::ostream& os)
{
    auto spec = f.problem();
    auto px = marginal_source(spec.pmf);
    std::size_t n = f.n ? f.n : 24;
    if (!f.R.empty()) {
        if (f.alpha.empty()) throw UsageError("--R needs --alpha");
        double R = parse_number(f.R, "--R").to_double();
        double alpha = parse_number(f.alpha, "--alpha").to_double();
        auto prior = detail::doubles(px);
        auto est = simulate_prefix_uniqueness(prior, n, R, alpha, f.trials, f.seed);
        write_prefix_csv(os, alpha, n, R, pc_lower_bound(static_cast<double>(n), alpha, entropy_bits(prior), R), est);
        return;
    }
    SchemeConfig cfg;
    cfg.D = f.distortion().to_double();
    cfg.n = n;
    cfg.epsilon = f.epsilon;
    if (!f.alpha.empty()) cfg.alpha = parse_number(f.alpha, "--alpha").to_double();
    cfg.mode = f.mode == "variable" ? RateMode::Variable : RateMode::Fixed;
    cfg.trials = f.trials;
    cfg.seed = f.seed;
    write_scheme_csv(os, simulate_scheme(px, spec.distortion, cfg));
}

inline void examples_cmd(const Flags& f, std::ostream& os)
{
    if (f.example.empty() && f.file.empty()) {
        for (const auto& e : example_catalog()) os << e.name << ": " << e.summary << '\n';
        return;
    }
    os << format_problem(f.problem());
}

} // namespace cli

/// Entry point behind the `zdsi` binary; `args` excludes the program name.
/// Returns 0 on success, 1 on a domain error, 2 on a usage error.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Zero-delay lossy coding with decoder side information", "zdsi"};
    app.require_subcommand(1);
    cli::Flags f;

    using Handler = void (*)(const cli::Flags&, std::ostream&);
    struct Command {
        const char* name;
        const char* help;
        Handler run;
    };
    const std::vector<Command> commands{
        {"solve-ri", "optimal restricted-input code and its average length", cli::solve_ri_cmd},
        {"rd-curve", "zero-delay rate-distortion envelope (CSV)", cli::rd_curve_cmd},
        {"causal-curve", "causal rate-distortion envelope (CSV, binary64 rates)", cli::causal_curve_cmd},
        {"encoder-si-curve", "envelope when the encoder also observes S (CSV)", cli::encoder_si_curve_cmd},
        {"mt-region", "multiterminal base points or a membership query", cli::mt_region_cmd},
        {"simulate-stream", "bit-exact streaming simulation of the time-sharing plan", cli::simulate_stream_cmd},
        {"simulate-seq", "Monte Carlo of the sequential prefix scheme", cli::simulate_seq_cmd},
        {"examples", "list built-in fixtures, or print one as a problem file", cli::examples_cmd},
    };

    std::vector<std::pair<CLI::App*, Handler>> subs;
    for (const auto& c : commands) {
        auto* s = app.add_subcommand(c.name, c.help);
        s->add_option("--file", f.file, "problem file (JSON)");
        s->add_option("--example", f.example, "built-in fixture")
            ->check(CLI::IsMember({"pentagon", "c6", "fully-connected", "mt-binary", "split-channel"}));
        s->add_option("--M", f.M, "alphabet size for fully-connected")->check(CLI::Range(2, 12));
        s->add_option("--p", f.p, "crossover mass for fully-connected and split-channel");
        s->add_option("--format", f.format, "exact or float")->check(CLI::IsMember({"exact", "float"}));
        s->add_option("--out", f.out, "write output to this file");
        subs.emplace_back(s, c.run);
    }
    auto sub = [&](const char* name) { return app.get_subcommand(name); };
    sub("rd-curve")->add_option("--D", f.D, "report the envelope rate at this distortion");
    sub("rd-curve")->add_flag("--cloud", f.cloud, "emit every quantizer point instead of the envelope");
    auto* mt = sub("mt-region");
    mt->add_option("--query", f.query, "Rx,Ry,Dx,Dy");
    mt->add_flag("--mix-orders", f.mix_orders, "allow time-sharing across decoding orders");
    mt->add_flag("--simultaneous", f.simultaneous, "also list simultaneous-decoding points");
    auto* ss = sub("simulate-stream");
    ss->add_option("--D", f.D, "target distortion")->required();
    ss->add_option("--n", f.n, "block length (default 100000)");
    ss->add_option("--seed", f.seed);
    ss->add_flag("--trace", f.trace, "append the per-symbol trace");
    auto* sq = sub("simulate-seq");
    sq->add_option("--D", f.D, "target distortion");
    sq->add_option("--n", f.n, "block length (default 24)");
    sq->add_option("--R", f.R, "prefix-uniqueness experiment at this codebook rate");
    sq->add_option("--alpha", f.alpha, "prefix fraction");
    sq->add_option("--epsilon", f.epsilon, "codebook rate slack");
    sq->add_option("--mode", f.mode, "fixed or variable")->check(CLI::IsMember({"fixed", "variable"}));
    sq->add_option("--trials", f.trials);
    sq->add_option("--seed", f.seed);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        for (auto& [s, run] : subs) {
            if (!s->parsed()) continue;
            std::ostringstream buf; // nothing is emitted when the command fails
            run(f, buf);
            if (f.out.empty()) {
                out << buf.str();
            } else {
                std::ofstream file(f.out);
                if (!file) throw cli::UsageError("cannot write '" + f.out + "'");
                file << buf.str();
            }
        }
    } catch (const cli::UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace zdsi
