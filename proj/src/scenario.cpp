/*
 * Scenario implementation: the two solve pipelines, JSON configuration, and
 * the CSV/JSON emitters behind the CLI commands.
 */
#include "oneway/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "oneway/eigensolver.hpp"
#include "oneway/errors.hpp"

namespace oneway {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
    return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::ofstream open_out(const std::string& dir, const std::string& name,
                       std::string* path_out) {
    fs::create_directories(dir);
    const fs::path p = fs::path(dir) / name;
    *path_out = p.string();
    std::ofstream os(p, std::ios::trunc);
    if (!os) throw std::invalid_argument("cannot open output file: " + p.string());
    return os;
}

void write_json(const std::string& dir, const std::string& name, const json& j,
                std::vector<std::string>* written) {
    std::string path;
    auto os = open_out(dir, name, &path);
    os << j.dump(2) << '\n';
    written->push_back(path);
}

/// Initial data sampled on the interior grid of the scenario.
std::vector<double> sample_ic(const InitialCondition& ic, int N) {
    const double h = kPi / (N + 1);
    std::vector<double> f(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) f[static_cast<std::size_t>(i - 1)] = ic.eval(i * h);
    return f;
}

std::optional<double> reference_error(const Scenario& sc, const GridSolution& sol) {
    if (!sc.with_reference) return std::nullopt;
    if ((sc.n_ref + 1) % (sc.N + 1) != 0) return std::nullopt;
    const GridSolution ref = reference_solve(sc.pw, sc.ic, sc.n_ref, sc.r_f,
                                             sc.cache_dir, sc.cfg.propagation_sign);
    return relative_error(sol, ref);
}

}  // namespace

// ---------------------------------------------------------------------------
// pipelines
// ---------------------------------------------------------------------------

void validate(const Scenario& sc) {
    validate(sc.pw);
    validate(sc.cfg);
    if (!(sc.r_f >= 0.0)) throw std::invalid_argument("scenario: r_f must be >= 0");
    if (sc.N < 3) throw std::invalid_argument("scenario: N must be >= 3");
    if (sc.n_ref < 3) throw std::invalid_argument("scenario: n_ref must be >= 3");
}

SolveResult run_eigexp(const Scenario& sc) {
    const auto t0 = clock_type::now();
    const int m_cap = std::min(sc.cfg.m_max, sc.N + 1);
    SpectrumResult spec = compute_spectrum(sc.pw, m_cap, sc.cfg);

    // project the grid-sampled data through its sine series (type-I DST)
    const auto sampled = InitialCondition::samples(sample_ic(sc.ic, sc.N));
    const auto fj = project_initial(spec.modes, sampled, sc.cfg);

    const double tol_eff = sc.cfg.truncation_tol / std::max(sc.r_f, 0.01);
    const int m_eff = truncate(spec.modes, fj, sc.r_f, tol_eff);

    ModalExpansion exp;
    exp.modes.assign(spec.modes.begin(), spec.modes.begin() + m_eff);
    exp.fj.assign(fj.begin(), fj.begin() + m_eff);
    exp.sign = sc.cfg.propagation_sign;

    SolveResult out;
    out.solution.N = sc.N;
    out.solution.r = sc.r_f;
    out.solution.values = evaluate_on_grid(exp, sc.N, sc.r_f);
    out.terms = m_eff;
    out.wall_time_ms = ms_since(t0);
    return out;
}

SolveResult run_schur(const Scenario& sc) {
    const auto t0 = clock_type::now();
    const FdMatrix A = fd_matrix(sc.pw, sc.N);
    const int N = sc.N;
    std::vector<double> dense(static_cast<std::size_t>(N) * static_cast<std::size_t>(N),
                              0.0);
    for (int i = 0; i < N; ++i) {
        dense[static_cast<std::size_t>(i) * N + i] = A.diag[static_cast<std::size_t>(i)];
        if (i + 1 < N) {
            dense[static_cast<std::size_t>(i) * N + i + 1] = A.off;
            dense[static_cast<std::size_t>(i + 1) * N + i] = A.off;
        }
    }
    const DenseEig eig = dense_eig(dense, N);
    const auto P = spectral_propagator(eig, sc.r_f, sc.cfg.propagation_sign);
    const auto f = sample_ic(sc.ic, N);

    SolveResult out;
    out.solution.N = N;
    out.solution.r = sc.r_f;
    out.solution.values.assign(static_cast<std::size_t>(N), cplx(0.0));
    for (int i = 0; i < N; ++i) {
        cplx acc(0.0);
        const cplx* row = P.data() + static_cast<std::size_t>(i) * N;
        for (int j = 0; j < N; ++j) acc += row[j] * f[static_cast<std::size_t>(j)];
        out.solution.values[static_cast<std::size_t>(i)] = acc;
    }
    out.terms = N;
    out.wall_time_ms = ms_since(t0);
    return out;
}

SolveResult run_scenario(const Scenario& sc) {
    validate(sc);
    SolveResult out =
        (sc.method == Scenario::Method::EigExp) ? run_eigexp(sc) : run_schur(sc);
    out.error_vs_reference = reference_error(sc, out.solution);
    return out;
}

// ---------------------------------------------------------------------------
// configuration
// ---------------------------------------------------------------------------

namespace {

InitialCondition ic_from_json(const json& j) {
    if (!j.contains("kind")) throw std::invalid_argument("ic: missing kind");
    const std::string kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::array());
    if (kind == "sine") {
        if (params.size() != 1) throw std::invalid_argument("ic sine: params = [j]");
        return InitialCondition::sine(params.at(0).get<int>());
    }
    if (kind == "characteristic" || kind == "char") {
        if (params.size() != 2)
            throw std::invalid_argument("ic characteristic: params = [a, b]");
        return InitialCondition::characteristic(params.at(0).get<double>(),
                                                params.at(1).get<double>());
    }
    if (kind == "samples") {
        return InitialCondition::samples(params.get<std::vector<double>>());
    }
    throw std::invalid_argument("ic: unknown kind '" + kind + "'");
}

void solver_from_json(const json& j, SolverConfig* cfg) {
    for (const auto& [key, value] : j.items()) {
        if (key == "secant_tol") cfg->secant_tol = value.get<double>();
        else if (key == "secant_max_iter") cfg->secant_max_iter = value.get<int>();
        else if (key == "secant_perturbation") cfg->secant_perturbation = value.get<double>();
        else if (key == "cutoff_threshold") cfg->cutoff_threshold = value.get<double>();
        else if (key == "truncation_tol") cfg->truncation_tol = value.get<double>();
        else if (key == "propagation_sign") cfg->propagation_sign = value.get<int>();
        else if (key == "quadrature_panels") cfg->quadrature_panels = value.get<int>();
        else if (key == "m_max") cfg->m_max = value.get<int>();
        else throw std::invalid_argument("solver: unknown key '" + key + "'");
    }
}

Scenario::Method method_from_string(const std::string& s) {
    if (s == "eigexp") return Scenario::Method::EigExp;
    if (s == "schur_ref") return Scenario::Method::SchurRef;
    throw std::invalid_argument("method must be eigexp or schur_ref, got '" + s + "'");
}

}  // namespace

Scenario scenario_from_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot read config file: " + path);
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config parse error: " + std::string(e.what()));
    }

    Scenario sc;
    for (const auto& [key, value] : j.items()) {
        if (key == "alphas") sc.pw.alphas = value.get<std::vector<double>>();
        else if (key == "rhos") sc.pw.rhos = value.get<std::vector<double>>();
        else if (key == "ic") sc.ic = ic_from_json(value);
        else if (key == "r_f") sc.r_f = value.get<double>();
        else if (key == "N") sc.N = value.get<int>();
        else if (key == "method") sc.method = method_from_string(value.get<std::string>());
        else if (key == "solver") solver_from_json(value, &sc.cfg);
        else if (key == "out") sc.out_dir = value.get<std::string>();
        else if (key == "cache") sc.cache_dir = value.get<std::string>();
        else if (key == "n_ref") sc.n_ref = value.get<int>();
        else if (key == "with_reference") sc.with_reference = value.get<bool>();
        else throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    return sc;
}

// ---------------------------------------------------------------------------
// commands
// ---------------------------------------------------------------------------

std::vector<std::string> cmd_spectrum(const Scenario& sc) {
    validate(sc.pw);
    validate(sc.cfg);
    const SpectrumResult spec = compute_spectrum(sc.pw, sc.cfg.m_max, sc.cfg);

    std::vector<std::string> written;
    std::string path;
    auto os = open_out(sc.out_dir, "spectrum.csv", &path);
    os << "j,lambda,sign_lambda,omega_n_re,omega_n_im,secant_iters,det_residual\n";
    for (std::size_t i = 0; i < spec.modes.size(); ++i) {
        const EigenMode& m = spec.modes[i];
        const cplx wn = m.omegas.back();
        const int sgn = (m.lambda > 0.0) - (m.lambda < 0.0);
        os << m.index << ',' << fmt17(m.lambda) << ',' << sgn << ','
           << fmt17(wn.real()) << ',' << fmt17(wn.imag()) << ','
           << spec.diagnostics[i].secant_iters << ','
           << fmt17(spec.diagnostics[i].det_residual) << '\n';
    }
    written.push_back(path);
    return written;
}

std::vector<std::string> cmd_solve(const Scenario& sc) {
    const SolveResult res = run_scenario(sc);
    const double h = kPi / (sc.N + 1);

    std::vector<std::string> written;
    std::string path;
    auto os = open_out(sc.out_dir, "solution.csv", &path);
    os << "z,re_u,im_u,abs_u\n";
    for (int i = 1; i <= sc.N; ++i) {
        const cplx u = res.solution.values[static_cast<std::size_t>(i - 1)];
        os << fmt17(i * h) << ',' << fmt17(u.real()) << ',' << fmt17(u.imag()) << ','
           << fmt17(std::abs(u)) << '\n';
    }
    written.push_back(path);

    json summary = {
        {"method", sc.method == Scenario::Method::EigExp ? "eigexp" : "schur_ref"},
        {"N", sc.N},
        {"r_f", sc.r_f},
        {"terms", res.terms},
        {"wall_time_ms", res.wall_time_ms},
    };
    if (res.error_vs_reference)
        summary["error_vs_reference"] = *res.error_vs_reference;
    write_json(sc.out_dir, "summary.json", summary, &written);
    return written;
}

std::vector<std::string> cmd_compare(const Scenario& base, std::vector<double> rfs,
                                     std::vector<int> Ns) {
    if (rfs.empty() || Ns.empty())
        throw std::invalid_argument("compare needs at least one r_f and one N");
    std::sort(rfs.begin(), rfs.end());
    std::sort(Ns.begin(), Ns.end());

    // one reference decomposition serves every cell of a given r_f
    std::vector<GridSolution> refs;
    if (base.with_reference)
        refs = reference_solve_multi(base.pw, base.ic, base.n_ref, rfs, base.cache_dir,
                                     base.cfg.propagation_sign);

    struct Row {
        double r_f;
        int N;
        int eig_terms;
        std::optional<double> eig_err, schur_err;
        double eig_ms, schur_ms;
    };
    std::vector<Row> rows;
    for (std::size_t ir = 0; ir < rfs.size(); ++ir) {
        for (int N : Ns) {
            Scenario sc = base;
            sc.r_f = rfs[ir];
            sc.N = N;
            sc.with_reference = false;
            validate(sc);
            const SolveResult eig = run_eigexp(sc);
            const SolveResult schur = run_schur(sc);
            Row row{rfs[ir], N, eig.terms, std::nullopt, std::nullopt,
                    eig.wall_time_ms, schur.wall_time_ms};
            if (base.with_reference && (base.n_ref + 1) % (N + 1) == 0) {
                row.eig_err = relative_error(eig.solution, refs[ir]);
                row.schur_err = relative_error(schur.solution, refs[ir]);
            }
            rows.push_back(row);
        }
    }

    std::vector<std::string> written;
    std::string path;
    auto os = open_out(base.out_dir, "compare.csv", &path);
    os << "r_f,N,eigexp_terms,eigexp_error,schur_error\n";
    for (const Row& row : rows) {
        os << fmt17(row.r_f) << ',' << row.N << ',' << row.eig_terms << ',';
        if (row.eig_err) os << fmt17(*row.eig_err);
        os << ',';
        if (row.schur_err) os << fmt17(*row.schur_err);
        os << '\n';
    }
    written.push_back(path);

    json jrows = json::array();
    for (const Row& row : rows) {
        json cell = {{"r_f", row.r_f},
                     {"N", row.N},
                     {"eigexp_terms", row.eig_terms},
                     {"eigexp_wall_time_ms", row.eig_ms},
                     {"schur_wall_time_ms", row.schur_ms}};
        if (row.eig_err) cell["eigexp_error"] = *row.eig_err;
        if (row.schur_err) cell["schur_error"] = *row.schur_err;
        jrows.push_back(cell);
    }
    write_json(base.out_dir, "compare.json", json{{"rows", jrows}}, &written);
    return written;
}

std::vector<std::string> cmd_decay(const Scenario& sc) {
    validate(sc.pw);
    validate(sc.cfg);
    const int m = std::min(sc.N, sc.cfg.m_max);
    const SpectrumResult spec = compute_spectrum(sc.pw, m, sc.cfg);

    std::vector<double> entries(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j)
        entries[static_cast<std::size_t>(j)] =
            std::abs(mode_sine_inner(spec.modes[static_cast<std::size_t>(j)], 1));

    std::vector<std::string> written;
    std::string path;
    auto os = open_out(sc.out_dir, "decay.csv", &path);
    os << "row_index,abs_entry\n";
    for (int j = 0; j < m; ++j)
        os << (j + 1) << ',' << fmt17(entries[static_cast<std::size_t>(j)]) << '\n';
    written.push_back(path);

    // log-log fit over nonzero entries past the initial transient (j >= 5)
    constexpr double kZero = 1e-10;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0, nonzero = 0;
    for (int j = 0; j < m; ++j) {
        if (entries[static_cast<std::size_t>(j)] <= kZero) continue;
        ++nonzero;
        if (j + 1 < 5) continue;
        const double x = std::log(static_cast<double>(j + 1));
        const double y = std::log(entries[static_cast<std::size_t>(j)]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    bool even_zero = true, odd_zero = true, even_nonzero = true, odd_nonzero = true;
    for (int j = 1; j <= m; ++j) {
        const bool zero = entries[static_cast<std::size_t>(j - 1)] <= kZero;
        if (j % 2 == 0) { even_zero &= zero; even_nonzero &= !zero; }
        else { odd_zero &= zero; odd_nonzero &= !zero; }
    }
    const bool alternating = (m >= 4) && ((even_zero && odd_nonzero) ||
                                          (odd_zero && even_nonzero));
    json summary = {{"nonzero_entries", nonzero},
                    {"alternating_zeros", alternating},
                    {"degenerate", cnt < 8}};
    if (cnt >= 8) {
        const double denom = cnt * sxx - sx * sx;
        summary["slope"] = (cnt * sxy - sx * sy) / denom;
    } else {
        summary["slope"] = nullptr;
    }
    write_json(sc.out_dir, "decay.json", summary, &written);
    return written;
}

}  // namespace oneway
