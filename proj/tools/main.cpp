/*
 * CLI entry point: spectrum | solve | compare | decay over a scenario built
 * from an optional JSON config plus flag overrides (flags win).
 */
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oneway/errors.hpp"
#include "oneway/scenario.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& s, const char* what) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const std::size_t comma = s.find(',', pos);
        const std::string tok =
            s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": bad number '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
    std::vector<int> out;
    for (double x : parse_double_list(s, what)) {
        const int i = static_cast<int>(x);
        if (static_cast<double>(i) != x)
            throw std::invalid_argument(std::string(what) + ": expected integer");
        out.push_back(i);
    }
    return out;
}

oneway::InitialCondition parse_ic(const std::string& s) {
    const std::size_t colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : s.substr(colon + 1);
    if (kind == "sine") {
        const auto v = parse_int_list(args, "--ic sine");
        if (v.size() != 1) throw std::invalid_argument("--ic sine:J takes one index");
        return oneway::InitialCondition::sine(v[0]);
    }
    if (kind == "char" || kind == "characteristic") {
        const auto v = parse_double_list(args, "--ic char");
        if (v.size() != 2) throw std::invalid_argument("--ic char:a,b takes two bounds");
        return oneway::InitialCondition::characteristic(v[0], v[1]);
    }
    throw std::invalid_argument("--ic must be sine:J or char:a,b, got '" + s + "'");
}

struct Opts {
    std::string config, alphas, rhos, ic, method, out, cache;
    std::string rf, N;  // strings so compare can take comma lists
    int terms = 0;
    int nref = 0;
};

void add_common(CLI::App* cmd, Opts& o) {
    cmd->add_option("--config", o.config, "JSON scenario file");
    cmd->add_option("--alphas", o.alphas, "piece values, e.g. 2,1,2");
    cmd->add_option("--rhos", o.rhos, "interface fractions of pi, e.g. 0.333,0.667");
    cmd->add_option("--ic", o.ic, "initial data: sine:J or char:a,b");
    cmd->add_option("--rf", o.rf, "final range (comma list for compare)");
    cmd->add_option("--N", o.N, "grid size (comma list for compare)");
    cmd->add_option("--method", o.method, "eigexp or schur_ref");
    cmd->add_option("--terms", o.terms, "expansion cap (m_max override)");
    cmd->add_option("--out", o.out, "output directory (default .)");
    cmd->add_option("--cache", o.cache, "decomposition cache directory");
    cmd->add_option("--nref", o.nref, "reference grid size (default 8191)");
}

int dispatch(const CLI::App* sub, const Opts& o) {
    oneway::Scenario sc;
    if (!o.config.empty()) sc = oneway::scenario_from_json_file(o.config);
    if (sub->count("--alphas")) sc.pw.alphas = parse_double_list(o.alphas, "--alphas");
    if (sub->count("--rhos")) sc.pw.rhos = parse_double_list(o.rhos, "--rhos");
    if (sub->count("--ic")) sc.ic = parse_ic(o.ic);
    if (sub->count("--method")) {
        if (o.method == "eigexp") sc.method = oneway::Scenario::Method::EigExp;
        else if (o.method == "schur_ref") sc.method = oneway::Scenario::Method::SchurRef;
        else throw std::invalid_argument("--method must be eigexp or schur_ref");
    }
    if (sub->count("--terms")) sc.cfg.m_max = o.terms;
    if (sub->count("--out")) sc.out_dir = o.out;
    if (sub->count("--cache")) sc.cache_dir = o.cache;
    if (sub->count("--nref")) sc.n_ref = o.nref;

    std::vector<double> rfs{sc.r_f};
    std::vector<int> Ns{sc.N};
    if (sub->count("--rf")) rfs = parse_double_list(o.rf, "--rf");
    if (sub->count("--N")) Ns = parse_int_list(o.N, "--N");

    const std::string name = sub->get_name();
    std::vector<std::string> written;
    if (name == "compare") {
        written = oneway::cmd_compare(sc, rfs, Ns);
    } else {
        if (rfs.size() != 1 || Ns.size() != 1)
            throw std::invalid_argument(name + " takes a single --rf and --N");
        sc.r_f = rfs[0];
        sc.N = Ns[0];
        if (name == "spectrum") written = oneway::cmd_spectrum(sc);
        else if (name == "solve") written = oneway::cmd_solve(sc);
        else written = oneway::cmd_decay(sc);
    }
    for (const auto& path : written) std::printf("%s\n", path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-way wide-angle solver: modal expansion with an FD comparator"};
    app.require_subcommand(1);
    Opts o;
    add_common(app.add_subcommand("spectrum", "eigenvalue table CSV"), o);
    add_common(app.add_subcommand("solve", "solution CSV + JSON summary"), o);
    add_common(app.add_subcommand("compare", "method comparison over r_f x N grid"), o);
    add_common(app.add_subcommand("decay", "change-of-basis first-column decay"), o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return dispatch(app.get_subcommands().front(), o);
    } catch (const oneway::NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::out_of_range& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
