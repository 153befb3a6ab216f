#pragma once
/**
 * @file sweep.hpp
 * @brief Grid sweeps behind the command-line tool: scans, death-time tables
 *        and trajectory verification, plus CSV/JSON rendering.
 *
 * Gamma is fixed to 1, so every time in a sweep is the dimensionless Gamma t.
 */

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcorr/closed_forms.hpp"
#include "qcorr/death.hpp"
#include "qcorr/mc.hpp"
#include "qcorr/parallel.hpp"
#include "qcorr/pipeline.hpp"

namespace qcorr {

/// Invalid user input (bad flag value, unknown name, inconsistent grid).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepConfig {
    Family family = Family::GHZ;
    std::vector<double> r_grid{0.98};
    std::vector<double> gamma_ratio_grid{kMarkovianRatio};
    std::vector<double> t_grid; ///< Gamma t
    std::vector<Measure> measures{Measure::N, Measure::C, Measure::D, Measure::MABK, Measure::Svetlichny};
    std::optional<double> theta_bc; ///< explicit theta_BC for both Bell operators; empty = optimal
    bool numeric = false;
    unsigned threads = 0;

    bool wants(Measure m) const { return std::find(measures.begin(), measures.end(), m) != measures.end(); }
    void validate() const;
};

namespace detail {

inline void require_usage(bool condition, const std::string& message)
{
    if (!condition) throw UsageError(message);
}

inline void require_increasing(const std::vector<double>& grid, const char* name)
{
    require_usage(!grid.empty(), std::string(name) + " grid is empty");
    for (double x : grid) require_usage(std::isfinite(x), std::string(name) + " grid contains a non-finite value");
    for (std::size_t i = 1; i < grid.size(); ++i)
        require_usage(grid[i] > grid[i - 1], std::string(name) + " grid must be strictly increasing");
}

} // namespace detail

inline void SweepConfig::validate() const
{
    detail::require_increasing(r_grid, "r");
    detail::require_usage(r_grid.front() >= 0.0 && r_grid.back() <= 1.0, "r must lie in [0, 1]");
    detail::require_increasing(gamma_ratio_grid, "gamma-ratio");
    detail::require_usage(gamma_ratio_grid.front() > 0.0, "gamma-ratio must be positive");
    detail::require_increasing(t_grid, "time");
    detail::require_usage(t_grid.front() >= 0.0, "times must be non-negative");
    detail::require_usage(!measures.empty(), "no measures selected");
    detail::require_usage(!theta_bc || std::isfinite(*theta_bc), "theta-bc must be finite");
}

/// {0, t_max/steps, ..., t_max}: `steps` intervals, steps + 1 points.
inline std::vector<double> make_time_grid(double t_max, int steps)
{
    detail::require_usage(std::isfinite(t_max) && t_max >= 0.0, "t-max must be non-negative");
    detail::require_usage(steps >= 0, "t-steps must be non-negative");
    detail::require_usage(steps > 0 || t_max == 0.0, "t-steps must be positive when t-max > 0");
    if (steps == 0) return {0.0};
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) grid[static_cast<std::size_t>(i)] = t_max * i / steps;
    return grid;
}

// ---------------------------------------------------------------------------
// Parsing helpers

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::string lowercase(std::string_view s)
{
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline Family parse_family(std::string_view text)
{
    const std::string s = lowercase(trim(text));
    if (s == "ghz") return Family::GHZ;
    if (s == "w") return Family::W;
    throw UsageError("unknown family '" + std::string(text) + "' (expected GHZ or W)");
}

inline Measure parse_measure(std::string_view text)
{
    const std::string s = lowercase(trim(text));
    if (s == "n") return Measure::N;
    if (s == "c") return Measure::C;
    if (s == "d") return Measure::D;
    if (s == "mabk") return Measure::MABK;
    if (s == "svetlichny" || s == "svet") return Measure::Svetlichny;
    throw UsageError("unknown measure '" + std::string(text) + "' (expected N, C, D, mabk or svetlichny)");
}

inline PhaseMode parse_mode(std::string_view text)
{
    const std::string s = lowercase(trim(text));
    if (s == "exact-phase") return PhaseMode::ExactPhase;
    if (s == "ou-path") return PhaseMode::OuPath;
    throw UsageError("unknown mode '" + std::string(text) + "' (expected exact-phase or ou-path)");
}

inline double parse_double(std::string_view text)
{
    const std::string_view s = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw UsageError("not a number: '" + std::string(text) + "'");
    return value;
}

/// Splits a comma-separated list; empty items are rejected.
inline std::vector<std::string> split_list(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        const std::string_view item = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
        detail::require_usage(!item.empty(), "empty item in list '" + std::string(text) + "'");
        out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::vector<double> parse_double_list(std::string_view text)
{
    std::vector<double> out;
    for (const auto& item : split_list(text)) out.push_back(parse_double(item));
    return out;
}

inline std::vector<Measure> parse_measures(std::string_view text)
{
    std::vector<Measure> out;
    for (const auto& item : split_list(text)) {
        const Measure m = parse_measure(item);
        if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
    }
    return out;
}

/// Flat key=value text. Blank lines and lines starting with '#' are skipped;
/// a key may repeat, and its values are kept in order.
using ConfigMap = std::map<std::string, std::vector<std::string>>;

inline ConfigMap parse_config_text(std::string_view text)
{
    ConfigMap out;
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        const std::string_view line = trim(text.substr(start, end == std::string_view::npos ? end : end - start));
        ++line_no;
        if (!line.empty() && line.front() != '#') {
            const auto eq = line.find('=');
            detail::require_usage(eq != std::string_view::npos,
                                  "config line " + std::to_string(line_no) + ": expected key=value");
            const std::string key = lowercase(trim(line.substr(0, eq)));
            detail::require_usage(!key.empty(), "config line " + std::to_string(line_no) + ": empty key");
            out[key].emplace_back(trim(line.substr(eq + 1)));
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return out;
}

inline ConfigMap read_config_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    detail::require_usage(static_cast<bool>(in), "cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Tables

/// A cell is blank (not computed), a number, or text.
using Cell = std::variant<std::monostate, double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Shortest round-trip-free decimal with 12 significant digits; independent of
/// the C locale.
inline std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) x = 0.0; // drop the sign of -0
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return {};
}

inline void write_csv(std::ostream& out, const Table& table)
{
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
        out << '\n';
    }
}

inline nlohmann::json cell_json(const Cell& c)
{
    if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? nlohmann::json(*d) : nlohmann::json();
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    return nullptr;
}

inline nlohmann::json table_json(const Table& table)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[table.header[i]] = cell_json(row[i]);
        rows.push_back(std::move(obj));
    }
    return rows;
}

// ---------------------------------------------------------------------------
// scan

namespace detail {

struct GridPoint {
    double r, ratio, t;
};

inline std::vector<GridPoint> grid_points(const SweepConfig& cfg)
{
    std::vector<GridPoint> points;
    for (double r : cfg.r_grid)
        for (double ratio : cfg.gamma_ratio_grid)
            for (double t : cfg.t_grid) points.push_back({r, ratio, t});
    return points;
}

} // namespace detail

/// One row per (r, gamma/Gamma, Gamma t) with N, C, D, |<B>| - 1, |<S>| - 4 and
/// the active discord branch. Unselected measures are left blank.
inline Table cmd_scan(const SweepConfig& cfg)
{
    cfg.validate();
    Table table;
    table.header = {"family", "r", "gamma_ratio", "Gt", "N", "C", "D", "mabk_minus_1", "svet_minus_4", "D_branch"};
    const auto points = detail::grid_points(cfg);
    table.rows.resize(points.size());

    // Bell angles per purity for the numeric route, found once per r.
    std::map<double, BellTheta> numeric_theta;
    if (cfg.numeric)
        for (double r : cfg.r_grid) {
            const Matrix8 rho0 = make_state(cfg.family, r);
            numeric_theta[r] = {optimize_bell_angles(cfg.family, BellKind::MABK, rho0).theta_bc(),
                                optimize_bell_angles(cfg.family, BellKind::Svetlichny, rho0).theta_bc()};
        }

    const bool bipartite = cfg.wants(Measure::C) || cfg.wants(Measure::D);
    parallel_for(
        points.size(),
        [&](std::size_t i) {
            const auto [r, ratio, t] = points[i];
            const NoiseParams noise = NoiseParams::from_ratio(ratio);
            CorrelationReport rep;
            if (cfg.numeric) {
                const BellTheta theta = cfg.theta_bc ? BellTheta{*cfg.theta_bc, *cfg.theta_bc} : numeric_theta.at(r);
                rep = numeric_report(cfg.family, noise, r, t, theta, {bipartite, {}});
                if (cfg.family == Family::GHZ) rep.branch = DiscordBranch::None;
            } else {
                const BellTheta theta = cfg.theta_bc ? BellTheta{*cfg.theta_bc, *cfg.theta_bc} : optimal_theta(cfg.family);
                const ClosedFormReport c = closed_form(cfg.family, noise, r, t, theta);
                rep = {c.negativity, c.concurrence, c.discord, c.branch, c.mabk, c.svetlichny};
            }
            auto pick = [&](Measure m, double v) -> Cell { return cfg.wants(m) ? Cell{v} : Cell{}; };
            table.rows[i] = {std::string(to_string(cfg.family)),
                             r,
                             ratio,
                             t,
                             pick(Measure::N, rep.negativity),
                             pick(Measure::C, rep.concurrence),
                             pick(Measure::D, rep.discord),
                             pick(Measure::MABK, rep.mabk - kMabkLocalBound),
                             pick(Measure::Svetlichny, rep.svetlichny - kSvetlichnyLocalBound),
                             cfg.wants(Measure::D) ? Cell{std::string(to_string(rep.branch))} : Cell{}};
        },
        cfg.threads);
    return table;
}

// ---------------------------------------------------------------------------
// death-time

/// Rows (family, measure, r, gamma_ratio, Gt_death); "none" when the measure
/// never crosses its threshold. The time grid is not used.
inline Table cmd_death_time(const SweepConfig& cfg)
{
    SweepConfig checked = cfg;
    if (checked.t_grid.empty()) checked.t_grid = {0.0};
    checked.validate();
    if (cfg.numeric)
        detail::require_usage(!cfg.wants(Measure::D), "death-time --numeric does not support measure D");

    struct Job {
        Measure m;
        double r, ratio;
    };
    std::vector<Job> jobs;
    for (Measure m : cfg.measures)
        for (double r : cfg.r_grid)
            for (double ratio : cfg.gamma_ratio_grid) jobs.push_back({m, r, ratio});

    Table table;
    table.header = {"family", "measure", "r", "gamma_ratio", "Gt_death"};
    table.rows.resize(jobs.size());
    parallel_for(
        jobs.size(),
        [&](std::size_t i) {
            const Job& j = jobs[i];
            const auto td = death_time(cfg.family, j.m, NoiseParams::from_ratio(j.ratio), j.r,
                                       cfg.numeric ? DeathRoute::Numeric : DeathRoute::ClosedForm);
            table.rows[i] = {std::string(to_string(cfg.family)), std::string(to_string(j.m)), j.r, j.ratio,
                             td ? Cell{*td} : Cell{std::string("none")}};
        },
        cfg.threads);
    return table;
}

// ---------------------------------------------------------------------------
// mc-verify

enum class Verdict { Pass, Fail, Insufficient };

inline std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    default: return "insufficient statistics";
    }
}

inline Verdict verdict_of(const McVerification& v)
{
    if (!v.sufficient) return Verdict::Insufficient;
    return v.passed ? Verdict::Pass : Verdict::Fail;
}

struct McPointReport {
    double r = 0.0, ratio = 0.0, t = 0.0;
    McVerification check;
};

struct McReport {
    Family family = Family::GHZ;
    TrajectoryConfig trajectories;
    std::vector<McPointReport> points;

    /// Fail if any point fails; otherwise insufficient if any point is; else pass.
    Verdict verdict() const
    {
        Verdict out = Verdict::Pass;
        for (const auto& p : points) {
            const Verdict v = verdict_of(p.check);
            if (v == Verdict::Fail) return Verdict::Fail;
            if (v == Verdict::Insufficient) out = Verdict::Insufficient;
        }
        return out;
    }
};

/// Trajectory ensemble against the exact dephased state at each grid point,
/// judged element-wise at 4 standard errors. Points run one after another;
/// trajectories inside a point run in parallel.
inline McReport cmd_mc_verify(const SweepConfig& cfg, const TrajectoryConfig& traj)
{
    cfg.validate();
    McReport report{cfg.family, traj, {}};
    for (const auto& [r, ratio, t] : detail::grid_points(cfg)) {
        const NoiseParams noise = NoiseParams::from_ratio(ratio);
        try {
            traj.validate(noise);
        } catch (const ContractError& e) {
            throw UsageError(e.what());
        }
        const Matrix8 rho0 = make_state(cfg.family, r);
        const EnsembleStatistics stats = ensemble_statistics(rho0, noise, t, traj);
        report.points.push_back({r, ratio, t, verify_ensemble(stats, evolve_dephasing(rho0, noise, t))});
    }
    return report;
}

/// One row per density-matrix element per grid point.
inline Table mc_table(const McReport& report)
{
    Table table;
    table.header = {"family", "r",          "gamma_ratio", "Gt", "row", "col", "estimate_re", "estimate_im",
                    "expected_re", "expected_im", "z",      "pass"};
    for (const auto& p : report.points)
        for (const auto& e : p.check.elements)
            table.rows.push_back({std::string(to_string(report.family)), p.r, p.ratio, p.t,
                                  static_cast<double>(e.row + 1), static_cast<double>(e.col + 1), e.estimate.real(),
                                  e.estimate.imag(), e.expected.real(), e.expected.imag(), e.z,
                                  std::string(e.pass ? "true" : "false")});
    return table;
}

inline nlohmann::json mc_json(const McReport& report)
{
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : report.points) {
        nlohmann::json elements = nlohmann::json::array();
        for (const auto& e : p.check.elements)
            elements.push_back({{"row", e.row + 1},
                                {"col", e.col + 1},
                                {"estimate", {e.estimate.real(), e.estimate.imag()}},
                                {"expected", {e.expected.real(), e.expected.imag()}},
                                {"z", std::isfinite(e.z) ? nlohmann::json(e.z) : nlohmann::json()},
                                {"pass", e.pass}});
        points.push_back({{"r", p.r},
                          {"gamma_ratio", p.ratio},
                          {"Gt", p.t},
                          {"max_z", std::isfinite(p.check.max_z) ? nlohmann::json(p.check.max_z) : nlohmann::json()},
                          {"verdict", std::string(to_string(verdict_of(p.check)))},
                          {"elements", std::move(elements)}});
    }
    return {{"family", std::string(to_string(report.family))},
            {"mode", std::string(to_string(report.trajectories.mode))},
            {"n_traj", report.trajectories.n_traj},
            {"seed", report.trajectories.seed},
            {"sigma", kVerificationSigma},
            {"verdict", std::string(to_string(report.verdict()))},
            {"points", std::move(points)}};
}

} // namespace qcorr
