// Command-line front end: threshold tables, density-evolution runs, potential
// sweeps, coefficient dumps. Outputs are deterministic for a fixed flag set
// and seed; every file written with --out gets a sidecar run manifest.
//
// Exit codes: 0 success, 2 argument error, 3 oracle-check failure,
// 4 non-convergence in a required computation, 1 internal failure.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manifest.hpp"
#include "nbde/coupled.hpp"
#include "nbde/de.hpp"
#include "nbde/poly.hpp"
#include "nbde/potential.hpp"
#include "nbde/subspace.hpp"

using nlohmann::json;
using namespace nbde;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitArgument = 2;
constexpr int kExitOracle = 3;
constexpr int kExitNonConvergence = 4;

std::string fmt10(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

template <typename Fn>
void parallel_for(int jobs, std::size_t n, Fn&& fn) {
    if (n == 0) return;
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = static_cast<int>(std::min<std::size_t>(jobs, n));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

// Shared flag set. A plain key=value config file may preset the solver knobs;
// explicit flags override it.
struct Options {
    int dv = 3, dc = 6, m = 1;
    int L = 100, w = 3;
    double eps = 0.5;
    DeConfig cfg;
    unsigned seed = 12345;
    int jobs = 0;  // 0: one per hardware thread
    double cell_timeout = 0.0;
    bool long_runs = false;
    std::string out;
    std::string format = "csv";

    json params_json(const std::string& command) const {
        json p{{"command", command}, {"dv", dv},     {"dc", dc},   {"m", m},
               {"L", L},             {"w", w},       {"eps", eps}, {"jobs", jobs},
               {"format", format},   {"long", long_runs}};
        return p;
    }
    json tolerances_json() const {
        return json{{"fp_tol", cfg.fp_tol},
                    {"zero_tol", cfg.zero_tol},
                    {"max_iters", cfg.max_iters},
                    {"bisect_tol", cfg.bisect_tol},
                    {"cell_timeout", cell_timeout}};
    }
};

void load_config_file(const std::string& path, Options& opt) {
    std::ifstream is(path);
    if (!is) throw ArgumentError("config file not readable: " + path);
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) continue;
        if (key == "fp_tol") {
            opt.cfg.fp_tol = std::stod(value);
        } else if (key == "zero_tol") {
            opt.cfg.zero_tol = std::stod(value);
        } else if (key == "bisect_tol") {
            opt.cfg.bisect_tol = std::stod(value);
        } else if (key == "max_iters") {
            opt.cfg.max_iters = std::stoi(value);
        } else if (key == "seed") {
            opt.seed = static_cast<unsigned>(std::stoul(value));
        } else if (key == "jobs") {
            opt.jobs = std::stoi(value);
        } else {
            throw ArgumentError("config file: unknown key '" + key + "'");
        }
    }
}

struct Emitter {
    Emitter(const Options& o, std::string cmd) : opt(o), command(std::move(cmd)) {}

    const Options& opt;
    std::string command;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    std::vector<nbdecli::OutputRecord> records;

    // with --out, `suffix` distinguishes multiple files (e.g. ".csv", ".json")
    void emit(const std::string& content, const std::string& suffix) {
        if (opt.out.empty()) {
            std::cout << content;
            return;
        }
        records.push_back(nbdecli::write_output_file(opt.out + suffix, content));
    }

    void finish() {
        if (opt.out.empty()) return;
        nbdecli::RunManifest man;
        man.command = command;
        man.params = opt.params_json(command);
        man.tolerances = opt.tolerances_json();
        man.seed = opt.seed;
        man.jobs = opt.jobs;
        man.outputs = records;
        man.wall_clock_sec =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::ofstream os(opt.out + ".manifest.json");
        os << man.to_json().dump(2) << "\n";
    }
};

void require_long_gate(const Options& opt) {
    if (opt.m >= 5 && !opt.long_runs) {
        throw ArgumentError("m >= 5 is a long-running computation; pass --long to confirm");
    }
}

// ---------------------------------------------------------------------------

int run_coeffs(Options& opt, bool skip_oracle) {
    Emitter em{opt, "coeffs"};
    if (opt.m > kMaxOracleM && !skip_oracle) {
        throw ArgumentError("the enumeration check is capped at m <= 4; pass --skip-oracle for m = " +
                            std::to_string(opt.m));
    }
    const CoeffTensors t(opt.m);
    json j;
    j["m"] = opt.m;
    auto tensor_json = [&](bool v) {
        json out = json::array();
        for (int i = 0; i <= opt.m; ++i) {
            json ji = json::array();
            for (int jj = 0; jj <= opt.m; ++jj) {
                json jk = json::array();
                for (int k = 0; k <= opt.m; ++k) {
                    jk.push_back(v ? t.v(i, jj, k) : t.c(i, jj, k));
                }
                ji.push_back(jk);
            }
            out.push_back(ji);
        }
        return out;
    };
    j["V"] = tensor_json(true);
    j["C"] = tensor_json(false);

    bool oracle_failed = false;
    if (!skip_oracle && opt.m <= kMaxOracleM) {
        const double err = oracle_max_error(opt.m);
        oracle_failed = !(err < 1e-12);
        j["oracle"] = {{"checked", true}, {"max_abs_error", err}, {"passed", !oracle_failed}};
    } else {
        j["oracle"] = {{"checked", false}};
    }
    em.emit(j.dump(2) + "\n", ".json");
    em.finish();
    if (oracle_failed) {
        std::cerr << "coeffs: closed form disagrees with the enumeration oracle" << std::endl;
        return kExitOracle;
    }
    return kExitOk;
}

int run_de(Options& opt, bool coupled, int profile_stride) {
    Emitter em{opt, coupled ? "de-run-coupled" : "de-run"};
    const EnsembleParams params(opt.dv, opt.dc, opt.m);
    const int L = coupled ? opt.L : 1;
    const int w = coupled ? opt.w : 1;
    if (profile_stride <= 0) {
        // keep auto profiles to a few thousand snapshots
        profile_stride = L == 1 ? 1 : std::max(1, opt.cfg.max_iters / 2000);
    }
    const CoupledResult res =
        coupled_fixed_point(opt.eps, params, L, w, opt.cfg, profile_stride);

    std::ostringstream csv;
    csv << "iteration,position,max_tail";
    for (int k = 1; k <= opt.m; ++k) csv << ",x_" << k;
    csv << "\n";
    for (const auto& snap : res.profile) {
        const int N = L + w - 1;
        for (int i = 0; i < N; ++i) {
            double maxv = 0.0;
            for (int k = 0; k < opt.m; ++k) {
                maxv = std::max(maxv, std::abs(snap.X[i * opt.m + k]));
            }
            csv << snap.iteration << "," << (i + 1) << "," << fmt10(maxv);
            for (int k = 0; k < opt.m; ++k) csv << "," << fmt10(snap.X[i * opt.m + k]);
            csv << "\n";
        }
    }
    em.emit(csv.str(), ".csv");

    json summary{{"eps", opt.eps},
                 {"decoded", res.decoded},
                 {"converged", res.converged},
                 {"iterations", res.iterations},
                 {"final_max", res.X.max_abs()}};
    if (opt.out.empty()) {
        std::cerr << summary.dump(2) << std::endl;
    } else {
        em.records.push_back(
            nbdecli::write_output_file(opt.out + ".summary.json", summary.dump(2) + "\n"));
    }
    em.finish();
    if (!res.decoded && !res.converged) {
        std::cerr << "de-run: no fixed point within max_iters" << std::endl;
        return kExitNonConvergence;
    }
    return kExitOk;
}

int run_threshold(Options& opt, bool coupled) {
    Emitter em{opt, coupled ? "threshold-coupled" : "threshold"};
    const EnsembleParams params(opt.dv, opt.dc, opt.m);
    const double value = coupled ? bp_threshold_coupled(params, opt.L, opt.w, opt.cfg)
                                 : bp_threshold_uncoupled(params, opt.cfg);
    if (opt.format == "json") {
        json j{{"dv", opt.dv}, {"dc", opt.dc}, {"m", opt.m},
               {"bisect_tol", opt.cfg.bisect_tol}, {"eps_bp", value}};
        if (coupled) {
            j["L"] = opt.L;
            j["w"] = opt.w;
        }
        em.emit(j.dump(2) + "\n", ".json");
    } else {
        std::ostringstream csv;
        csv << "dv,dc,m" << (coupled ? ",L,w" : "") << ",bisect_tol,eps_bp\n";
        csv << opt.dv << "," << opt.dc << "," << opt.m;
        if (coupled) csv << "," << opt.L << "," << opt.w;
        csv << "," << fmt10(opt.cfg.bisect_tol) << "," << fmt10(value) << "\n";
        em.emit(csv.str(), ".csv");
    }
    em.finish();
    return kExitOk;
}

DMatrix make_D(const Options& opt, const EnsembleParams& params) {
    DConstructionOptions dopts;
    dopts.seed = opt.seed;
    return construct_D(params, dopts);
}

int run_potential(Options& opt, double eps_min, double eps_max, double eps_step) {
    require_long_gate(opt);
    Emitter em{opt, "potential"};
    const EnsembleParams params(opt.dv, opt.dc, opt.m);
    const DMatrix D = make_D(opt, params);
    const double eps_bp = bp_threshold_uncoupled(params, opt.cfg);
    const double eps_star = potential_threshold(D, params, opt.cfg, eps_bp);

    std::vector<double> grid;
    for (double e = eps_min; e <= eps_max + 1e-12; e += eps_step) grid.push_back(e);
    std::vector<DeltaEResult> sweep(grid.size());
    parallel_for(opt.jobs, grid.size(),
                 [&](std::size_t i) { sweep[i] = delta_E(grid[i], D, params, opt.cfg); });

    std::ostringstream csv;
    csv << "eps,delta_E,U_at_fp\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = sweep[i];
        double u_at_fp = std::numeric_limits<double>::infinity();
        for (double u : r.U_values) u_at_fp = std::min(u_at_fp, u);
        csv << fmt10(grid[i]) << ","
            << (r.infinite ? "inf" : fmt10(r.value)) << ","
            << (r.U_values.empty() ? "inf" : fmt10(u_at_fp)) << "\n";
    }

    json report{{"dv", opt.dv}, {"dc", opt.dc},     {"m", opt.m},
                {"eps_bp", eps_bp}, {"eps_star", eps_star}};
    report["D"] = json::array();
    for (int a = 0; a < opt.m; ++a) {
        json row = json::array();
        for (int b = 0; b < opt.m; ++b) row.push_back(D.mat(a, b));
        report["D"].push_back(row);
    }
    report["sweep"] = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = sweep[i];
        json entry{{"eps", grid[i]}, {"delta_E_infinite", r.infinite}};
        if (!r.infinite) entry["delta_E"] = r.value;
        entry["U_values"] = r.U_values;
        entry["fixed_points"] = json::array();
        for (const auto& fp : r.fixed_points) entry["fixed_points"].push_back(fp.tail);
        report["sweep"].push_back(entry);
    }

    if (opt.out.empty()) {
        if (opt.format == "json") {
            std::cout << report.dump(2) << "\n";
        } else {
            std::cout << csv.str();
        }
    } else {
        em.records.push_back(nbdecli::write_output_file(opt.out + ".csv", csv.str()));
        em.records.push_back(
            nbdecli::write_output_file(opt.out + ".json", report.dump(2) + "\n"));
    }
    em.finish();
    return kExitOk;
}

int run_potential_threshold(Options& opt) {
    require_long_gate(opt);
    Emitter em{opt, "potential-threshold"};
    const EnsembleParams params(opt.dv, opt.dc, opt.m);
    const DMatrix D = make_D(opt, params);
    const double eps_bp = bp_threshold_uncoupled(params, opt.cfg);
    const double eps_star = potential_threshold(D, params, opt.cfg, eps_bp);
    if (opt.format == "json") {
        json j{{"dv", opt.dv}, {"dc", opt.dc}, {"m", opt.m},
               {"eps_bp", eps_bp}, {"eps_star", eps_star}};
        j["D"] = json::array();
        for (int a = 0; a < opt.m; ++a) {
            json row = json::array();
            for (int b = 0; b < opt.m; ++b) row.push_back(D.mat(a, b));
            j["D"].push_back(row);
        }
        em.emit(j.dump(2) + "\n", ".json");
    } else {
        std::ostringstream csv;
        csv << "dv,dc,m,eps_bp,eps_star\n"
            << opt.dv << "," << opt.dc << "," << opt.m << "," << fmt10(eps_bp) << ","
            << fmt10(eps_star) << "\n";
        em.emit(csv.str(), ".csv");
    }
    em.finish();
    return kExitOk;
}

int run_kbound(Options& opt) {
    require_long_gate(opt);
    Emitter em{opt, "k-bound"};
    const EnsembleParams params(opt.dv, opt.dc, opt.m);
    const DMatrix D = make_D(opt, params);
    const KBoundReport rep = k_bound(opt.eps, D, params, opt.cfg, 64, opt.seed);
    json j{{"eps", rep.eps},
           {"K", rep.K},
           {"delta_E", rep.delta_e_infinite ? json("inf") : json(rep.delta_e)},
           {"w_min", rep.w_min},
           {"hessian_norm", KBoundReport::norm}};
    em.emit(j.dump(2) + "\n", ".json");
    em.finish();
    return kExitOk;
}

struct TableSpec {
    std::vector<std::pair<int, int>> ensembles;
    std::vector<int> m_list;
};

TableSpec parse_table_spec(const std::string& ensembles, const std::string& m_list) {
    TableSpec spec;
    std::stringstream es(ensembles);
    std::string item;
    while (std::getline(es, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw ArgumentError("--ensembles entries must look like dv:dc, got '" + item + "'");
        }
        spec.ensembles.emplace_back(std::stoi(item.substr(0, colon)),
                                    std::stoi(item.substr(colon + 1)));
    }
    std::stringstream ms(m_list);
    while (std::getline(ms, item, ',')) spec.m_list.push_back(std::stoi(item));
    if (spec.ensembles.empty() || spec.m_list.empty()) {
        throw ArgumentError("table1 needs at least one ensemble and one m value");
    }
    return spec;
}

int run_table1(Options& opt, const std::string& ensembles, const std::string& m_list) {
    Emitter em{opt, "table1"};
    const TableSpec spec = parse_table_spec(ensembles, m_list);

    struct Cell {
        int dv, dc, m;
        double value = std::numeric_limits<double>::quiet_NaN();
        bool timed_out = false;
    };
    std::vector<Cell> cells;
    for (const auto& [dv, dc] : spec.ensembles) {
        for (int m : spec.m_list) cells.push_back(Cell{dv, dc, m});
    }

    parallel_for(opt.jobs, cells.size(), [&](std::size_t i) {
        Cell& cell = cells[i];
        DeConfig cfg = opt.cfg;
        if (opt.cell_timeout > 0.0) {
            cfg.deadline = std::chrono::steady_clock::now() +
                           std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                               std::chrono::duration<double>(opt.cell_timeout));
        }
        try {
            cell.value =
                bp_threshold_coupled(EnsembleParams(cell.dv, cell.dc, cell.m), opt.L, opt.w, cfg);
        } catch (const TimeoutError&) {
            cell.timed_out = true;
        }
    });

    auto cell_at = [&](int dv, int dc, int m) -> const Cell& {
        for (const auto& c : cells) {
            if (c.dv == dv && c.dc == dc && c.m == m) return c;
        }
        throw std::logic_error("table1: missing cell");
    };

    const int m_last = spec.m_list.back();
    std::ostringstream csv;
    csv << "dv,dc,rate";
    for (int m : spec.m_list) csv << ",eps_bp_m" << m;
    csv << ",shannon_gap_m" << m_last << "\n";
    json jrows = json::array();
    for (const auto& [dv, dc] : spec.ensembles) {
        const double rate = 1.0 - static_cast<double>(dv) / dc;
        csv << dv << "," << dc << "," << fmt10(rate);
        json jrow{{"dv", dv}, {"dc", dc}, {"rate", rate}};
        for (int m : spec.m_list) {
            const Cell& c = cell_at(dv, dc, m);
            csv << "," << (c.timed_out ? "TIMEOUT" : fmt10(c.value));
            jrow["eps_bp"][std::to_string(m)] =
                c.timed_out ? json("TIMEOUT") : json(c.value);
        }
        // gap to the channel capacity limit at the largest field size
        const Cell& last = cell_at(dv, dc, m_last);
        const double gap = static_cast<double>(dv) / dc - last.value;
        csv << "," << (last.timed_out ? "TIMEOUT" : fmt10(gap)) << "\n";
        jrow["shannon_gap"] = last.timed_out ? json("TIMEOUT") : json(gap);
        jrows.push_back(jrow);
    }

    if (opt.format == "json") {
        json j{{"L", opt.L}, {"w", opt.w}, {"bisect_tol", opt.cfg.bisect_tol}, {"rows", jrows}};
        em.emit(j.dump(2) + "\n", ".json");
    } else {
        em.emit(csv.str(), ".csv");
    }
    em.finish();
    return kExitOk;
}

void add_common(CLI::App* cmd, Options& opt, bool ensemble = true) {
    if (ensemble) {
        cmd->add_option("--dv", opt.dv, "variable node degree");
        cmd->add_option("--dc", opt.dc, "check node degree");
        cmd->add_option("--m", opt.m, "field dimension (symbols in GF(2^m))");
    }
    cmd->add_option("--tol", opt.cfg.bisect_tol, "bisection tolerance for threshold searches");
    cmd->add_option("--fp-tol", opt.cfg.fp_tol, "fixed-point stop tolerance");
    cmd->add_option("--zero-tol", opt.cfg.zero_tol, "decoding success tolerance");
    cmd->add_option("--max-iters", opt.cfg.max_iters, "iteration cap per fixed-point run");
    cmd->add_option("--jobs", opt.jobs, "worker threads (0 = all hardware threads)");
    cmd->add_option("--seed", opt.seed, "seed for randomized validation and sampling");
    cmd->add_option("--out", opt.out, "output path prefix; also writes <out>.manifest.json");
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    // key=value presets, applied before flag parsing so flags win
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                load_config_file(argv[i + 1], opt);
            } catch (const std::exception& e) {
                std::cerr << "nbde: " << e.what() << std::endl;
                return kExitArgument;
            }
        }
    }

    CLI::App app{"density evolution and potential analysis for nonbinary (SC-)LDPC ensembles "
                 "on the binary erasure channel"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "key=value file presetting solver options")
        ->expected(1);

    bool skip_oracle = false;
    auto* c_coeffs = app.add_subcommand("coeffs", "dump the V/C coefficient tensors as JSON");
    c_coeffs->add_flag("--skip-oracle", skip_oracle, "skip the enumeration check (m > 4)");
    add_common(c_coeffs, opt);

    int profile_stride = 0;
    bool de_coupled = false;
    auto* c_derun = app.add_subcommand("de-run", "run density evolution at one eps and dump the profile");
    c_derun->add_option("--eps", opt.eps, "channel erasure probability")->required();
    c_derun->add_flag("--coupled", de_coupled, "run the spatially-coupled chain");
    c_derun->add_option("--L", opt.L, "chain length (with --coupled)");
    c_derun->add_option("--w", opt.w, "smoothing width (with --coupled)");
    c_derun->add_option("--profile-stride", profile_stride,
                        "record every Nth iteration (0 = auto)");
    add_common(c_derun, opt);

    auto* c_thr = app.add_subcommand("threshold", "uncoupled BP threshold by bisection");
    add_common(c_thr, opt);

    auto* c_thrc = app.add_subcommand("threshold-coupled", "coupled BP threshold by bisection");
    c_thrc->add_option("--L", opt.L, "chain length");
    c_thrc->add_option("--w", opt.w, "smoothing width");
    add_common(c_thrc, opt);

    double eps_min = 0.30, eps_max = 0.60, eps_step = 0.01;
    auto* c_pot = app.add_subcommand("potential", "energy-gap sweep plus threshold report");
    c_pot->add_option("--eps-min", eps_min, "sweep start");
    c_pot->add_option("--eps-max", eps_max, "sweep end");
    c_pot->add_option("--eps-step", eps_step, "sweep step");
    c_pot->add_flag("--long", opt.long_runs, "allow long-running m >= 5 computations");
    add_common(c_pot, opt);

    auto* c_pthr = app.add_subcommand("potential-threshold", "potential threshold by bisection");
    c_pthr->add_flag("--long", opt.long_runs, "allow long-running m >= 5 computations");
    add_common(c_pthr, opt);

    std::string ensembles = "3:6,3:9,3:12,3:15";
    std::string m_list = "1,3";
    auto* c_tab = app.add_subcommand("table1", "coupled BP threshold table");
    c_tab->add_option("--ensembles", ensembles, "comma-separated dv:dc pairs");
    c_tab->add_option("--m-list", m_list, "comma-separated field dimensions");
    c_tab->add_option("--L", opt.L, "chain length");
    c_tab->add_option("--w", opt.w, "smoothing width");
    c_tab->add_option("--cell-timeout", opt.cell_timeout,
                      "per-cell wall-clock budget in seconds (0 = none); expired cells are "
                      "reported as TIMEOUT");
    add_common(c_tab, opt, /*ensemble=*/false);

    auto* c_kb = app.add_subcommand("k-bound", "smoothing-width bound from the potential Hessian");
    c_kb->add_option("--eps", opt.eps, "channel erasure probability")->required();
    c_kb->add_flag("--long", opt.long_runs, "allow long-running m >= 5 computations");
    add_common(c_kb, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitArgument;
    }

    try {
        if (*c_coeffs) return run_coeffs(opt, skip_oracle);
        if (*c_derun) return run_de(opt, de_coupled, profile_stride);
        if (*c_thr) return run_threshold(opt, /*coupled=*/false);
        if (*c_thrc) return run_threshold(opt, /*coupled=*/true);
        if (*c_pot) return run_potential(opt, eps_min, eps_max, eps_step);
        if (*c_pthr) return run_potential_threshold(opt);
        if (*c_tab) return run_table1(opt, ensembles, m_list);
        if (*c_kb) return run_kbound(opt);
    } catch (const ArgumentError& e) {
        std::cerr << "nbde: " << e.what() << std::endl;
        return kExitArgument;
    } catch (const UnsupportedScaleError& e) {
        std::cerr << "nbde: " << e.what() << std::endl;
        return kExitArgument;
    } catch (const UndefinedBoundError& e) {
        std::cerr << "nbde: " << e.what() << std::endl;
        return kExitArgument;
    } catch (const TimeoutError& e) {
        std::cerr << "nbde: " << e.what() << std::endl;
        return kExitNonConvergence;
    } catch (const std::exception& e) {
        std::cerr << "nbde: internal failure: " << e.what() << std::endl;
        return kExitInternal;
    }
    return kExitArgument;
}
