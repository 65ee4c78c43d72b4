// commands.hpp: Subcommands of the cca_sim tool
//
// Each command is a pure function of a RunConfig and returns everything it
// would write (files, stdout, stderr) together with its exit code:
//   0  success
//   1  invalid input
//   2  a mathematical identity failed (verify only)

#pragma once

#include <cmath>
#include <cstdlib>
#include <future>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cca/effective.hpp"
#include "cca/identities.hpp"
#include "cca/io.hpp"
#include "cca/oracle.hpp"
#include "cca/params.hpp"
#include "cca/spectral.hpp"

namespace cca::cli {

enum class InitialKind { Atom, Photon };
enum class Method { Exact, Effective, Both };

struct InitialSpec {
    InitialKind kind{InitialKind::Atom};
    int site{1};
};

inline constexpr const char* kSymbolicTMax = "4pi_over_omega";

// Defaults reproduce the canonical snapshot configuration:
// N = 101, eta = -0.25, kappa = 100 J, omega_f = 1000 J, Delta = 0, atom at site 1.
struct RunConfig {
    ArrayParams::Spec params{.n_cavities = 101, .eta = -0.25, .kappa = 100.0, .omega_f = 1000.0,
                             .delta = 0.0, .coupling_j = 1.0};
    InitialSpec initial{};
    Method method{Method::Both};
    std::string t_max{kSymbolicTMax};
    int steps{401};
    std::string out;      // main output path; empty -> stdout
    std::string summary;  // evolve summary path; empty -> derived from out
    std::vector<double> etas;  // modes / sweep
    bool all_modes{false};
    bool explicit_params{false};  // verify: single point instead of the default grid
    bool corrupt_modes{false};    // verify negative control
};

struct CommandResult {
    int exit_code{0};
    std::string stdout_text;
    std::string stderr_text;
    std::vector<std::pair<std::string, std::string>> files;
};

inline InitialSpec parse_initial(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("--initial expects <atom|photon>:<site>");
    const std::string kind = text.substr(0, colon);
    InitialSpec s;
    if (kind == "atom") s.kind = InitialKind::Atom;
    else if (kind == "photon") s.kind = InitialKind::Photon;
    else throw std::invalid_argument("--initial kind must be atom or photon, got '" + kind + "'");
    std::size_t used = 0;
    const std::string site = text.substr(colon + 1);
    try {
        s.site = std::stoi(site, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != site.size()) throw std::invalid_argument("--initial site must be an integer");
    return s;
}

inline std::string to_string(const InitialSpec& s) {
    return std::string(s.kind == InitialKind::Atom ? "atom" : "photon") + ":" + std::to_string(s.site);
}

inline Method parse_method(const std::string& m) {
    if (m == "exact") return Method::Exact;
    if (m == "effective") return Method::Effective;
    if (m == "both") return Method::Both;
    throw std::invalid_argument("--method must be exact, effective or both, got '" + m + "'");
}

inline const char* to_string(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Effective: return "effective";
        case Method::Both: return "both";
    }
    return "both";
}

// Fills config fields from a JSON object whose keys match the flag names.
inline void apply_json(RunConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "n") { cfg.params.n_cavities = value.get<int>(); cfg.explicit_params = true; }
        else if (key == "eta") { cfg.params.eta = value.get<double>(); cfg.explicit_params = true; }
        else if (key == "kappa") { cfg.params.kappa = value.get<double>(); cfg.explicit_params = true; }
        else if (key == "omega-f") { cfg.params.omega_f = value.get<double>(); cfg.explicit_params = true; }
        else if (key == "delta") { cfg.params.delta = value.get<double>(); cfg.explicit_params = true; }
        else if (key == "j") { cfg.params.coupling_j = value.get<double>(); cfg.explicit_params = true; }
        else if (key == "initial") cfg.initial = parse_initial(value.get<std::string>());
        else if (key == "method") cfg.method = parse_method(value.get<std::string>());
        else if (key == "t-max") cfg.t_max = value.is_string() ? value.get<std::string>() : io::format_double(value.get<double>());
        else if (key == "steps") cfg.steps = value.get<int>();
        else if (key == "out") cfg.out = value.get<std::string>();
        else if (key == "summary") cfg.summary = value.get<std::string>();
        else if (key == "etas") cfg.etas = value.get<std::vector<double>>();
        else if (key == "all") cfg.all_modes = value.get<bool>();
        else throw std::invalid_argument("unknown config key '" + key + "'");
    }
}

inline double resolve_t_max(const RunConfig& cfg) {
    double t = 0.0;
    if (cfg.t_max == kSymbolicTMax) {
        const double omega = rabi(cfg.params.coupling_j, cfg.params.delta);
        if (!(omega > 0.0)) throw std::invalid_argument("t-max 4pi_over_omega undefined when J = Delta = 0");
        t = 4.0 * std::numbers::pi / omega;
    } else {
        std::size_t used = 0;
        try {
            t = std::stod(cfg.t_max, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cfg.t_max.size())
            throw std::invalid_argument("t-max must be a number or '4pi_over_omega'");
    }
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("t-max must resolve to a finite value > 0");
    return t;
}

inline SingleExcitationState initial_state(const RunConfig& cfg) {
    const int n = cfg.params.n_cavities;
    if (cfg.initial.site < 1 || cfg.initial.site > n)
        throw std::invalid_argument("initial site " + std::to_string(cfg.initial.site) + " outside 1.."
                                    + std::to_string(n));
    return cfg.initial.kind == InitialKind::Atom ? SingleExcitationState::atom_at(n, cfg.initial.site)
                                                 : SingleExcitationState::photon_at(n, cfg.initial.site);
}

namespace detail {

inline std::string note(const RunConfig& cfg) { return io::params_note(cfg.params); }

// Header note for commands that loop over an eta list.
inline std::string swept_note(const RunConfig& cfg) {
    std::string s = io::params_note(cfg.params);
    const auto from = s.find(" eta=");
    const auto to = s.find(' ', from + 1);
    return s.replace(from, to - from, " eta=swept");
}

inline std::string summary_path(const RunConfig& cfg) {
    if (!cfg.summary.empty()) return cfg.summary;
    std::string base = cfg.out;
    if (base.size() > 4 && base.substr(base.size() - 4) == ".csv") base.resize(base.size() - 4);
    return base + "_summary.csv";
}

inline void emit(CommandResult& r, const RunConfig& cfg, std::string content) {
    if (cfg.out.empty()) r.stdout_text += content;
    else r.files.emplace_back(cfg.out, std::move(content));
}

template <typename F>
CommandResult guarded(F&& body) {
    CommandResult r;
    try {
        body(r);
    } catch (const std::invalid_argument& e) {
        r = CommandResult{};
        r.exit_code = 1;
        r.stderr_text = std::string("error: ") + e.what() + "\n";
    } catch (const std::out_of_range& e) {
        r = CommandResult{};
        r.exit_code = 1;
        r.stderr_text = std::string("error: ") + e.what() + "\n";
    } catch (const std::domain_error& e) {
        r = CommandResult{};
        r.exit_code = 1;
        r.stderr_text = std::string("error: ") + e.what() + "\n";
    }
    return r;
}

inline void warn_regime(CommandResult& r, const ArrayParams& p) {
    const auto rv = regime_validity(p);
    if (!rv.ok)
        r.stderr_text += "warning: outside the strong-hopping regime of the effective model (J/(kappa|eta|) = "
                         + io::format_double(rv.ratio) + ")\n";
}

} // namespace detail

inline CommandResult cmd_spectrum(const RunConfig& cfg) {
    return detail::guarded([&](CommandResult& r) {
        const ArrayParams p(cfg.params);
        const ModeTable table = full_spectrum(p);
        io::CsvWriter csv("spectrum", detail::note(cfg), {"label", "m", "branch", "k", "epsilon", "theta", "frequency"});
        for (const auto& mode : table.modes()) {
            if (mode.is_bound()) {
                csv.cell("bound").empty().empty().empty().empty().empty().cell(mode.frequency);
            } else {
                csv.cell("band").cell(mode.band().m).cell(sign_of(mode.band().branch))
                    .cell(*mode.wavevector).cell(*mode.epsilon).cell(*mode.theta).cell(mode.frequency);
            }
            csv.end_row();
        }
        detail::emit(r, cfg, csv.str());
    });
}

inline CommandResult cmd_modes(const RunConfig& cfg) {
    return detail::guarded([&](CommandResult& r) {
        const std::vector<double> etas = cfg.etas.empty() ? std::vector<double>{cfg.params.eta} : cfg.etas;
        io::CsvWriter csv("modes", cfg.etas.empty() ? detail::note(cfg) : detail::swept_note(cfg),
                          {"eta", "label", "site", "amplitude"});
        for (double eta : etas) {
            const ArrayParams p = ArrayParams(cfg.params).with_eta(eta);
            const ModeTable table = full_spectrum(p);
            for (const auto& mode : table.modes()) {
                if (!cfg.all_modes && !mode.is_bound()) continue;
                const std::string name = mode.name();
                for (int x = 1; x <= p.n(); ++x)
                    csv.cell(eta).cell(name).cell(x).cell(mode.amplitudes[x - 1]).end_row();
            }
        }
        detail::emit(r, cfg, csv.str());
    });
}

inline CommandResult cmd_evolve(const RunConfig& cfg) {
    return detail::guarded([&](CommandResult& r) {
        const ArrayParams p(cfg.params);
        if (cfg.method != Method::Exact) {
            require_analytic(p, "effective method (use --method exact for |eta| = 1)");
            detail::warn_regime(r, p);
        }
        const SingleExcitationState psi0 = initial_state(cfg);
        const auto times = time_grid(resolve_t_max(cfg), cfg.steps);

        std::optional<EvolutionTrace> exact, effective;
        if (cfg.method != Method::Effective) exact = evolve_exact_trace(p, psi0, times);
        if (cfg.method != Method::Exact) {
            const EffectiveModel model(p);
            effective = evolve_effective(model, psi0, times);
        }

        const std::string note = detail::note(cfg) + " initial=" + to_string(cfg.initial);
        const int n = p.n();
        if (cfg.method == Method::Both) {
            io::CsvWriter trace("evolve trace (exact and effective)", note,
                                {"t", "site", "p_field_exact", "p_atom_exact", "p_field_effective",
                                 "p_atom_effective", "abs_diff_field", "abs_diff_atom"});
            io::CsvWriter summary("evolve summary (exact and effective)", note,
                                  {"t", "total_field_exact", "total_atom_exact", "total_field_effective",
                                   "total_atom_effective"});
            for (std::size_t i = 0; i < times.size(); ++i) {
                const auto row = static_cast<Eigen::Index>(i);
                for (int x = 0; x < n; ++x) {
                    const double fe = exact->p_field(row, x), ae = exact->p_atom(row, x);
                    const double ff = effective->p_field(row, x), af = effective->p_atom(row, x);
                    trace.cell(times[i]).cell(x + 1).cell(fe).cell(ae).cell(ff).cell(af)
                        .cell(std::abs(fe - ff)).cell(std::abs(ae - af)).end_row();
                }
                summary.cell(times[i]).cell(exact->total_field[row]).cell(exact->total_atom[row])
                    .cell(effective->total_field[row]).cell(effective->total_atom[row]).end_row();
            }
            if (!cfg.out.empty()) {
                r.files.emplace_back(cfg.out, trace.str());
                r.files.emplace_back(detail::summary_path(cfg), summary.str());
            } else {
                r.stdout_text += summary.str();
            }
            return;
        }

        const EvolutionTrace& tr = exact ? *exact : *effective;
        const std::string label = std::string("evolve ") + to_string(cfg.method);
        io::CsvWriter trace(label + " trace", note, {"t", "site", "p_field", "p_atom"});
        io::CsvWriter summary(label + " summary", note, {"t", "total_field", "total_atom"});
        for (std::size_t i = 0; i < times.size(); ++i) {
            const auto row = static_cast<Eigen::Index>(i);
            for (int x = 0; x < n; ++x)
                trace.cell(times[i]).cell(x + 1).cell(tr.p_field(row, x)).cell(tr.p_atom(row, x)).end_row();
            summary.cell(times[i]).cell(tr.total_field[row]).cell(tr.total_atom[row]).end_row();
        }
        if (!cfg.out.empty()) {
            r.files.emplace_back(cfg.out, trace.str());
            r.files.emplace_back(detail::summary_path(cfg), summary.str());
        } else {
            r.stdout_text += summary.str();
        }
    });
}

// Overall excitation probabilities for a list of eta values. |eta| = 1 points
// use the exact propagator only. Points are computed concurrently and written
// in input order.
inline CommandResult cmd_sweep(const RunConfig& cfg) {
    return detail::guarded([&](CommandResult& r) {
        const std::vector<double> etas =
            cfg.etas.empty() ? std::vector<double>{-0.125, -0.25, -0.5, -1.0} : cfg.etas;
        const auto times = time_grid(resolve_t_max(cfg), cfg.steps);
        // Validate every point before launching work.
        std::vector<ArrayParams> points;
        for (double eta : etas) {
            points.push_back(ArrayParams(cfg.params).with_eta(eta));
            (void)initial_state(cfg);
        }

        struct Block {
            std::optional<EvolutionTrace> exact, effective;
        };
        std::vector<std::future<Block>> jobs;
        for (const auto& p : points) {
            jobs.push_back(std::async(std::launch::async, [&cfg, &times, p] {
                Block b;
                const SingleExcitationState psi0 = initial_state(cfg);
                const bool analytic = p.analytic();
                if (cfg.method != Method::Effective || !analytic) b.exact = evolve_exact_trace(p, psi0, times);
                if (cfg.method != Method::Exact && analytic) {
                    const EffectiveModel model(p);
                    b.effective = evolve_effective(model, psi0, times);
                }
                return b;
            }));
        }

        io::CsvWriter csv("sweep", detail::swept_note(cfg) + " initial=" + to_string(cfg.initial),
                          {"eta", "method", "t", "total_field", "total_atom"});
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const Block b = jobs[i].get();
            const auto write = [&](const char* method, const EvolutionTrace& tr) {
                for (std::size_t t = 0; t < times.size(); ++t) {
                    const auto row = static_cast<Eigen::Index>(t);
                    csv.cell(etas[i]).cell(method).cell(times[t]).cell(tr.total_field[row])
                        .cell(tr.total_atom[row]).end_row();
                }
            };
            if (b.exact) write("exact", *b.exact);
            if (b.effective) write("effective", *b.effective);
            if (cfg.method != Method::Exact && !points[i].analytic())
                r.stderr_text += "note: eta = " + io::format_double(etas[i]) + " evaluated with the exact method only\n";
            else if (cfg.method != Method::Exact)
                detail::warn_regime(r, points[i]);
        }
        detail::emit(r, cfg, csv.str());
    });
}

inline nlohmann::json report_to_json(const ResidualReport& report) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : report.entries) {
        nlohmann::json params = nlohmann::json::object();
        params["n"] = e.params.n_cavities;
        params["eta"] = e.params.eta;
        params["kappa"] = e.params.kappa;
        params["omega_f"] = e.params.omega_f;
        params["delta"] = e.params.delta;
        params["j"] = e.params.coupling_j;
        nlohmann::json item = nlohmann::json::object();
        item["identity"] = e.identity;
        item["params"] = std::move(params);
        item["residual"] = e.residual;
        item["tolerance"] = e.tolerance;
        item["pass"] = e.pass;
        entries.push_back(std::move(item));
    }
    nlohmann::json doc = nlohmann::json::object();
    doc["units"] = std::string(io::kUnitsNote);
    doc["all_pass"] = report.all_pass();
    doc["failures"] = report.failures();
    doc["entries"] = std::move(entries);
    return doc;
}

// Perturbs one amplitude of the first band mode (the bound mode when N = 1).
inline ModeTable corrupt_mode_table(const ModeTable& table) {
    std::vector<NormalMode> modes = table.modes();
    NormalMode& target = modes.size() > 1 ? modes[1] : modes[0];
    target.amplitudes[0] += 1e-6;
    return ModeTable(table.params(), std::move(modes));
}

inline CommandResult cmd_verify(const RunConfig& cfg) {
    return detail::guarded([&](CommandResult& r) {
        std::vector<ArrayParams> points;
        if (cfg.explicit_params) {
            const ArrayParams p(cfg.params);
            require_analytic(p, "verify");
            points.push_back(p);
        } else {
            points = default_identity_grid();
        }
        ModeTableTransform transform;
        if (cfg.corrupt_modes) transform = corrupt_mode_table;
        const ResidualReport report = run_identity_suite(points, transform);
        detail::emit(r, cfg, report_to_json(report).dump(2) + "\n");
        if (!report.all_pass()) {
            r.exit_code = 2;
            r.stderr_text += "verify: " + std::to_string(report.failures()) + " of "
                             + std::to_string(report.entries.size()) + " identity checks failed\n";
        }
    });
}

inline CommandResult run_command(const std::string& name, const RunConfig& cfg) {
    if (name == "spectrum") return cmd_spectrum(cfg);
    if (name == "modes") return cmd_modes(cfg);
    if (name == "evolve") return cmd_evolve(cfg);
    if (name == "sweep") return cmd_sweep(cfg);
    if (name == "verify") return cmd_verify(cfg);
    CommandResult r;
    r.exit_code = 1;
    r.stderr_text = "error: unknown subcommand '" + name + "'\n";
    return r;
}

} // namespace cca::cli
