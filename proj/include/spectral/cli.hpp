#pragma once

// Batch front-end.
//
//   spectral --spec FILE [--format table|csv|json] [--out FILE] [--tol X] [--terms N] COMMAND ...
//
// Commands and their fixed CSV columns:
//   zeta GRID                      s,value,status,abs_err,residue,principal_part
//   heat GRID                      t,K,abs_err
//   laplace GRID                   beta,value,status,abs_err,residue
//   moments N                      n,E_n,status,log_abs
//   density-moments J              j,zeta_neg_j,status
//   classify                       verdict,criterion,outcome,detail
//   krein [GRID]                   T,I,slope,intercept,relative_residual,e1,diverges
//   reconstruct char --beta GRID   beta,series,direct,abs_err,terms,radius_exceeded
//   reconstruct negzeta --t GRID   t,reconstructed,direct,abs_err,delta
//   asym ORDER                     kind,t_power,coefficient
//   report                         one JSON document holding every section
//
// GRID is "a,b,c" or "lo:hi:n" (n evenly spaced points, both ends included).
// Numbers are written with 17 significant digits. Exit status: 0 on success,
// 1 on a domain error, 2 on a parse error (bad arguments or spectrum file).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spectral/error.hpp"
#include "spectral/heat_kernel.hpp"
#include "spectral/heat_trace.hpp"
#include "spectral/moment_analysis.hpp"
#include "spectral/reconstruction.hpp"
#include "spectral/spec_io.hpp"
#include "spectral/spectral_zeta.hpp"
#include "spectral/spectrum.hpp"

namespace spectral::cli {

enum class Command {
    Zeta,
    Heat,
    Laplace,
    Moments,
    DensityMoments,
    Classify,
    Krein,
    ReconstructChar,
    ReconstructNegZeta,
    Asym,
    Report,
};

enum class OutputFormat { Table, Csv, Json };

struct RunConfig {
    Command command = Command::Report;
    std::string spec_path;
    double tolerance = 1e-10;               // absolute target for heat traces
    std::optional<std::vector<double>> grid;
    std::optional<long> terms;              // series terms for reconstruct; adaptive when unset
    long count = 0;                         // n-max, j-max or expansion order
    OutputFormat output = OutputFormat::Table;
    std::string out_path;
};

// Grids used by `report`.
inline const std::vector<double> kReportZetaGrid{-3.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
inline const std::vector<double> kReportHeatGrid{0.01, 0.1, 0.5, 1.0, 2.0, 10.0};
inline const std::vector<double> kReportLaplaceGrid{0.0, 0.5, 1.0, 2.0};
inline const std::vector<double> kReportCharGrid{0.1, 0.25, 0.5};
inline const std::vector<double> kDefaultKreinCutoffs{1e2, 1e3, 1e4};
inline constexpr long kReportMoments = 10;
inline constexpr long kReportDensityMoments = 4;
inline constexpr long kReportAsymOrder = 4;

/// "a,b,c" or "lo:hi:n".
inline std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& tok) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != tok.size()) raise(Errc::ParseError, "grid '" + text + "': bad number '" + tok + "'");
        return v;
    };
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, sep);) parts.push_back(tok);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    if (parts.empty()) raise(Errc::ParseError, "grid is empty");
    if (sep == ',') {
        std::vector<double> out;
        for (const auto& p : parts) out.push_back(number(p));
        return out;
    }
    if (parts.size() != 3) raise(Errc::ParseError, "grid '" + text + "': range form is lo:hi:n");
    const double lo = number(parts[0]), hi = number(parts[1]);
    const double nd = number(parts[2]);
    if (!(nd >= 1.0) || nd != std::floor(nd) || nd > 1e6)
        raise(Errc::ParseError, "grid '" + text + "': n must be a positive integer");
    const long n = static_cast<long>(nd);
    if (n == 1) return {lo};
    std::vector<double> out;
    for (long i = 0; i < n; ++i)
        out.push_back(i == n - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    return out;
}

using Cell = std::variant<double, long, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
};

inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_cell(const Cell& c) {
    struct {
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(long v) const { return std::to_string(v); }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    } f;
    return std::visit(f, c);
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    struct {
        nlohmann::ordered_json operator()(double v) const {
            if (std::isfinite(v)) return v;
            return format_double(v);
        }
        nlohmann::ordered_json operator()(long v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
    } f;
    return std::visit(f, c);
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline nlohmann::ordered_json table_json(const std::string& command, const Table& t) {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json row;
        for (std::size_t i = 0; i < r.size(); ++i) row[t.columns[i]] = cell_json(r[i]);
        rows.push_back(row);
    }
    j["rows"] = rows;
    for (auto it = t.meta.begin(); it != t.meta.end(); ++it) j[it.key()] = it.value();
    return j;
}

inline std::string render(const std::string& command, const Table& t, OutputFormat fmt) {
    std::ostringstream os;
    if (fmt == OutputFormat::Json) {
        os << table_json(command, t).dump(2) << "\n";
        return os.str();
    }
    if (fmt == OutputFormat::Csv) {
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
        os << "\n";
        for (const auto& r : t.rows) {
            for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(format_cell(r[i]));
            os << "\n";
        }
        return os.str();
    }
    std::vector<std::vector<std::string>> text;
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t i = 0; i < t.columns.size(); ++i) width[i] = t.columns[i].size();
    for (const auto& r : t.rows) {
        text.emplace_back();
        for (std::size_t i = 0; i < r.size(); ++i) {
            text.back().push_back(format_cell(r[i]));
            width[i] = std::max(width[i], text.back().back().size());
        }
    }
    auto line = [&](const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            s += cells[i];
            if (i + 1 < cells.size()) s += std::string(width[i] - cells[i].size() + 2, ' ');
        }
        os << s << "\n";
    };
    line(t.columns);
    for (const auto& r : text) line(r);
    for (auto it = t.meta.begin(); it != t.meta.end(); ++it) {
        os << it.key() << ": ";
        if (it.value().is_string()) {
            os << it.value().get<std::string>();
        } else if (it.value().is_number_float()) {
            os << format_double(it.value().get<double>());
        } else {
            os << it.value().dump();
        }
        os << "\n";
    }
    return os.str();
}

namespace detail {

inline const std::vector<double>& need_grid(const RunConfig& cfg, const char* what) {
    if (!cfg.grid || cfg.grid->empty()) raise(Errc::ParseError, std::string(what) + ": a grid is required");
    return *cfg.grid;
}

inline Table zeta_table(const SpectrumSpec& spec, const std::vector<double>& grid) {
    Table t{{"s", "value", "status", "abs_err", "residue", "principal_part"}, {}, {}};
    const auto vals = zeta_grid(spec, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& v = vals[i];
        const bool pole = v.status == ValueStatus::Pole;
        t.rows.push_back({grid[i], v.value, std::string(status_name(v.status)), v.abs_error, v.residue,
                          pole ? v.principal_part : std::nan("")});
    }
    return t;
}

inline Table heat_table(const SpectrumSpec& spec, const std::vector<double>& grid, double tol) {
    for (double x : grid)
        if (!(x > 0.0)) raise(Errc::DomainError, "heat: t must be > 0, got " + format_double(x));
    Table t{{"t", "K", "abs_err"}, {}, {}};
    const auto vals = heat_trace_grid(spec, grid, tol);
    for (std::size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], vals[i].value, vals[i].abs_error});
    return t;
}

inline Table laplace_table(const SpectrumSpec& spec, const std::vector<double>& grid) {
    Table t{{"beta", "value", "status", "abs_err", "residue"}, {}, {}};
    const auto vals = laplace_grid(spec, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& v = vals[i];
        t.rows.push_back({grid[i], v.value, std::string(status_name(v.status)), v.abs_error, v.residue});
    }
    return t;
}

inline Table moments_table(const SpectrumSpec& spec, long n_max) {
    if (n_max < 0) raise(Errc::DomainError, "moments: n-max must be >= 0");
    Table t{{"n", "E_n", "status", "log_abs"}, {}, {}};
    const auto m = partition_moments(spec, n_max);
    for (const auto& e : m.entries)
        t.rows.push_back({e.n, e.value, std::string(moment_status_name(e.status)), e.log_abs});
    auto skipped = nlohmann::ordered_json::array();
    for (long n = 0; n <= n_max; ++n)
        if (!m.find(n)) skipped.push_back(n);
    if (!skipped.empty()) t.meta["pole_indices"] = skipped;
    if (m.growth_fit) {
        t.meta["growth_C"] = m.growth_fit->C;
        t.meta["growth_R"] = m.growth_fit->R;
    }
    return t;
}

inline Table density_table(const SpectrumSpec& spec, long j_max) {
    if (j_max < 0) raise(Errc::DomainError, "density-moments: j-max must be >= 0");
    Table t{{"j", "zeta_neg_j", "status"}, {}, {}};
    for (long j = 0; j <= j_max; ++j) {
        try {
            const auto m = density_moment(spec, j);
            t.rows.push_back({j, m.value, std::string(moment_status_name(m.status))});
        } catch (const Error& e) {
            if (e.code() != Errc::MomentAtPole) throw;
            t.rows.push_back({j, std::nan(""), std::string("Pole")});
        }
    }
    return t;
}

inline Table classify_table(const SpectrumSpec& spec) {
    const auto v = classify(spec);
    Table t{{"verdict", "criterion", "outcome", "detail"}, {}, {}};
    for (const auto& e : v.evidence)
        t.rows.push_back({std::string(verdict_name(v.verdict)), std::string(criterion_name(e.criterion)),
                          std::string(outcome_name(e.outcome)), e.detail});
    t.meta["verdict"] = verdict_name(v.verdict);
    auto ev = nlohmann::ordered_json::object();
    for (const auto& e : v.evidence) {
        auto nums = nlohmann::ordered_json::object();
        for (const auto& [k, x] : e.numbers) nums[k] = cell_json(x);
        ev[criterion_name(e.criterion)] = nums;
    }
    t.meta["evidence_numbers"] = ev;
    t.meta["notes"] = v.notes;
    return t;
}

inline Table krein_table(const SpectrumSpec& spec, const std::vector<double>& cutoffs) {
    const auto r = krein_check(spec, KreinSupport::HalfLine, cutoffs);
    Table t{{"T", "I", "slope", "intercept", "relative_residual", "e1", "diverges"}, {}, {}};
    for (const auto& [T, I] : r.partial_values)
        t.rows.push_back({T, I, r.slope, r.intercept, r.relative_residual, r.e1_estimate, r.diverges});
    t.meta["quadrature_ok"] = r.quadrature_ok;
    t.meta["notes"] = r.notes;
    return t;
}

inline Table char_table(const SpectrumSpec& spec, const std::vector<double>& grid, std::optional<long> terms) {
    Table t{{"beta", "series", "direct", "abs_err", "terms", "radius_exceeded"}, {}, {}};
    const auto rows = spectral::detail::parallel_map(grid, [&](double beta) {
        const auto cs = char_series(spec, beta, terms.value_or(0));
        const double direct = laplace_transform(spec, beta).value;
        return std::vector<Cell>{beta, cs.value, direct, std::abs(cs.value - direct), cs.terms_used,
                                 cs.radius_exceeded};
    });
    t.rows = rows;
    t.meta["radius"] = spec.lowest_level();
    return t;
}

inline Table negzeta_table(const SpectrumSpec& spec, const std::vector<double>& grid, std::optional<long> terms) {
    if (spec.family() != Family::Power)
        raise(Errc::UnsupportedSpec, "reconstruct negzeta: needs a power spectrum n^alpha");
    const auto& p = spec.as_power();
    if (p.a != 1.0 || p.c != 0.0 || p.q != 0.0 || p.n_start != 1)
        raise(Errc::UnsupportedSpec, "reconstruct negzeta: needs a = 1, c = 0, q = 0, n_start = 1");
    Table t{{"t", "reconstructed", "direct", "abs_err", "delta"}, {}, {}};
    std::vector<std::string> notes;
    for (double x : grid) {
        const auto r = negative_zeta_reconstruction(p.alpha, x, terms.value_or(0));
        const auto& e = r.report.eval_points.front();
        t.rows.push_back({x, e.reconstructed, e.direct, e.abs_err, r.report.delta_correction});
        notes = r.report.notes;
    }
    t.meta["alpha"] = p.alpha;
    t.meta["notes"] = notes;
    return t;
}

inline Table asym_table(const SpectrumSpec& spec, long order) {
    if (order < 0 || order > 50) raise(Errc::DomainError, "asym: order must be in [0, 50]");
    const auto x = asymptotic_expansion(spec, static_cast<int>(order));
    struct Row {
        double power;
        std::string kind;
        double coefficient;
    };
    std::vector<Row> rows;
    for (const auto& p : x.power_terms) rows.push_back({-p.exponent, "power", p.coefficient});
    rows.push_back({0.0, "constant", x.constant_term});
    for (const auto& l : x.log_terms) rows.push_back({static_cast<double>(l.k), "log", l.coefficient});
    for (const auto& k : x.taylor_terms) rows.push_back({k.exponent, "taylor", k.coefficient});
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.power < b.power; });
    Table t{{"kind", "t_power", "coefficient"}, {}, {}};
    const bool constant_kept = static_cast<long>(x.power_terms.size() + x.log_terms.size() + x.taylor_terms.size()) <
                               x.order;
    for (const auto& r : rows) {
        if (r.kind == "constant" && !constant_kept) continue;
        t.rows.push_back({r.kind, r.power, r.coefficient});
    }
    t.meta["order"] = static_cast<long>(x.order);
    if (x.next_omitted) {
        t.meta["next_omitted_t_power"] = x.next_omitted->exponent;
        t.meta["next_omitted_coefficient"] = x.next_omitted->coefficient;
    }
    return t;
}

inline nlohmann::ordered_json spec_json(const SpectrumSpec& spec) {
    nlohmann::ordered_json j;
    auto power = [](const PowerSpec& p) {
        return nlohmann::ordered_json{{"a", p.a}, {"c", p.c}, {"alpha", p.alpha}, {"q", p.q}, {"n_start", p.n_start}};
    };
    switch (spec.family()) {
        case Family::Power:
            j = power(spec.as_power());
            j["family"] = "power";
            break;
        case Family::MultiPower: {
            j["family"] = "multipower";
            j["q"] = spec.as_multipower().q;
            auto terms = nlohmann::ordered_json::array();
            for (const auto& t : spec.as_multipower().terms)
                terms.push_back({{"a", t.a}, {"c", t.c}, {"alpha", t.alpha}, {"n_start", t.n_start}});
            j["terms"] = terms;
            break;
        }
        case Family::Explicit:
            j["family"] = "explicit";
            j["levels"] = spec.as_explicit().levels;
            if (spec.as_explicit().tail) j["tail"] = power(*spec.as_explicit().tail);
            break;
    }
    const auto ps = pole_structure(spec);
    j["abscissa"] = ps.abscissa;
    auto poles = nlohmann::ordered_json::array();
    for (const auto& p : ps.poles) poles.push_back({{"location", p.location}, {"residue", p.residue}});
    j["poles"] = poles;
    return j;
}

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Zeta: return "zeta";
        case Command::Heat: return "heat";
        case Command::Laplace: return "laplace";
        case Command::Moments: return "moments";
        case Command::DensityMoments: return "density-moments";
        case Command::Classify: return "classify";
        case Command::Krein: return "krein";
        case Command::ReconstructChar: return "reconstruct-char";
        case Command::ReconstructNegZeta: return "reconstruct-negzeta";
        case Command::Asym: return "asym";
        case Command::Report: return "report";
    }
    return "?";
}

inline Table command_table(const SpectrumSpec& spec, const RunConfig& cfg) {
    switch (cfg.command) {
        case Command::Zeta: return zeta_table(spec, need_grid(cfg, "zeta"));
        case Command::Heat: return heat_table(spec, need_grid(cfg, "heat"), cfg.tolerance);
        case Command::Laplace: return laplace_table(spec, need_grid(cfg, "laplace"));
        case Command::Moments: return moments_table(spec, cfg.count);
        case Command::DensityMoments: return density_table(spec, cfg.count);
        case Command::Classify: return classify_table(spec);
        case Command::Krein: return krein_table(spec, cfg.grid ? *cfg.grid : kDefaultKreinCutoffs);
        case Command::ReconstructChar: return char_table(spec, need_grid(cfg, "reconstruct char"), cfg.terms);
        case Command::ReconstructNegZeta:
            return negzeta_table(spec, need_grid(cfg, "reconstruct negzeta"), cfg.terms);
        case Command::Asym: return asym_table(spec, cfg.count);
        case Command::Report: break;
    }
    raise(Errc::ParseError, "report has no single table");
}

inline std::string report_document(const SpectrumSpec& spec, const RunConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["schema"] = 1;
    doc["spec_path"] = cfg.spec_path;
    doc["spec"] = spec_json(spec);
    auto sections = nlohmann::ordered_json::object();
    auto section = [&](Command c, auto&& build) {
        try {
            sections[command_name(c)] = table_json(command_name(c), build());
        } catch (const Error& e) {
            sections[command_name(c)] = {{"command", command_name(c)}, {"error", e.what()},
                                         {"code", std::string(errc_name(e.code()))}};
        }
    };
    section(Command::Zeta, [&] { return zeta_table(spec, kReportZetaGrid); });
    section(Command::Heat, [&] { return heat_table(spec, kReportHeatGrid, cfg.tolerance); });
    section(Command::Laplace, [&] { return laplace_table(spec, kReportLaplaceGrid); });
    section(Command::Moments, [&] { return moments_table(spec, kReportMoments); });
    section(Command::DensityMoments, [&] { return density_table(spec, kReportDensityMoments); });
    section(Command::Classify, [&] { return classify_table(spec); });
    section(Command::Krein, [&] { return krein_table(spec, kDefaultKreinCutoffs); });
    section(Command::ReconstructChar, [&] { return char_table(spec, kReportCharGrid, cfg.terms); });
    section(Command::Asym, [&] { return asym_table(spec, kReportAsymOrder); });
    doc["sections"] = sections;
    return doc.dump(2) + "\n";
}

inline int exit_code(Errc e) { return e == Errc::ParseError || e == Errc::InvariantViolation ? 2 : 1; }

}  // namespace detail

/// Runs one command. Data goes to `out` (or cfg.out_path), diagnostics to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (!(cfg.tolerance > 0.0)) raise(Errc::ParseError, "tolerance must be > 0");
        const auto spec = load_spec(cfg.spec_path);
        std::string text;
        if (cfg.command == Command::Report) {
            text = detail::report_document(spec, cfg);
        } else {
            text = render(detail::command_name(cfg.command), detail::command_table(spec, cfg), cfg.output);
        }
        if (cfg.out_path.empty()) {
            out << text;
        } else {
            std::ofstream f(cfg.out_path, std::ios::binary);
            if (!(f << text)) raise(Errc::DomainError, "cannot write " + cfg.out_path);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return detail::exit_code(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

/// Parses command-line arguments (without the program name) and runs.
inline int main_entry(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heat traces, spectral zeta functions and moment determinacy for positive spectra."};
    app.name("spectral");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string format = "table";
    std::string grid_text;
    long terms = 0;
    app.add_option("-s,--spec", cfg.spec_path, "spectrum JSON file")->required();
    app.add_option("-f,--format", format, "table, csv or json")->check(CLI::IsMember({"table", "csv", "json"}));
    app.add_option("-o,--out", cfg.out_path, "write data here instead of stdout");
    app.add_option("--tol", cfg.tolerance, "absolute tolerance for heat traces")->check(CLI::PositiveNumber);
    auto* terms_opt = app.add_option("--terms", terms, "series terms for reconstruct (default: adaptive)")
                          ->check(CLI::PositiveNumber);

    auto grid_cmd = [&](const char* name, Command c, const char* help, bool required) {
        auto* sub = app.add_subcommand(name, help);
        auto* opt = sub->add_option("grid", grid_text, "a,b,c or lo:hi:n");
        if (required) opt->required();
        sub->callback([&cfg, c] { cfg.command = c; });
        return sub;
    };
    auto count_cmd = [&](const char* name, Command c, const char* help, const char* arg) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option(arg, cfg.count)->required();
        sub->callback([&cfg, c] { cfg.command = c; });
    };
    grid_cmd("zeta", Command::Zeta, "spectral zeta at each s", true);
    grid_cmd("heat", Command::Heat, "heat trace K(t) at each t", true);
    grid_cmd("laplace", Command::Laplace, "Laplace transform of K at each beta", true);
    count_cmd("moments", Command::Moments, "partition moments E_0..E_n", "n-max");
    count_cmd("density-moments", Command::DensityMoments, "zeta(-j) for j = 0..j-max", "j-max");
    app.add_subcommand("classify", "moment-problem determinacy verdict")->callback([&cfg] {
        cfg.command = Command::Classify;
    });
    grid_cmd("krein", Command::Krein, "Krein log-integral at the cutoffs (default 1e2,1e3,1e4)", false);
    auto* rec = app.add_subcommand("reconstruct", "rebuild K or its Laplace transform from zeta values");
    rec->require_subcommand(1);
    auto* rc = rec->add_subcommand("char", "moment series for the Laplace transform");
    rc->add_option("--beta", grid_text, "beta grid")->required();
    rc->callback([&cfg] { cfg.command = Command::ReconstructChar; });
    auto* rn = rec->add_subcommand("negzeta", "K(t) from negative zeta values");
    rn->add_option("--t", grid_text, "t grid")->required();
    rn->callback([&cfg] { cfg.command = Command::ReconstructNegZeta; });
    count_cmd("asym", Command::Asym, "small-t expansion of K", "order");
    app.add_subcommand("report", "every analysis as one JSON document")->callback([&cfg] {
        cfg.command = Command::Report;
    });

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
        if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    if (terms_opt->count() > 0) cfg.terms = terms;
    cfg.output = format == "csv" ? OutputFormat::Csv : format == "json" ? OutputFormat::Json : OutputFormat::Table;
    return run(cfg, out, err);
}

}  // namespace spectral::cli
