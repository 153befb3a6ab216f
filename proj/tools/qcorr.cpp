// Command-line front end: scan | death-time | mc-verify.
//
// Exit codes: 0 success, 1 trajectory verification failed, 2 usage error,
// 3 numerical-contract violation.

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "qcorr/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMcFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitContract = 3;

// Every option is captured as text so that flags and config-file values go
// through the same parsers.
struct RawOptions {
    std::string family = "GHZ";
    std::string r = "0.98";
    std::string gamma_ratio = "10";
    std::string t_max = "5";
    std::string t_steps = "50";
    std::string measures = "N,C,D,mabk,svetlichny";
    std::string theta_bc;
    std::string numeric = "false";
    std::string threads = "0";
    std::string traj = "100000";
    std::string dt = "0";
    std::string seed = "1";
    std::string mode = "exact-phase";
    std::string out;
    std::string format = "csv";
    std::string config;
};

struct Command {
    CLI::App* app = nullptr;
    std::map<std::string, CLI::Option*> options; // config key -> option
};

Command add_command(CLI::App& root, const std::string& name, const std::string& help, RawOptions& raw, bool mc)
{
    Command cmd{root.add_subcommand(name, help), {}};
    auto add = [&](const std::string& key, std::string& target, const std::string& text) {
        std::string flag = "--" + key;
        for (char& c : flag)
            if (c == '_') c = '-';
        cmd.options[key] = cmd.app->add_option(flag, target, text)->capture_default_str();
    };
    add("family", raw.family, "GHZ or W");
    add("r", raw.r, "purity values, comma separated");
    add("gamma_ratio", raw.gamma_ratio, "gamma/Gamma values, comma separated");
    add("t_max", raw.t_max, "largest Gamma t");
    add("t_steps", raw.t_steps, "number of time intervals (t_steps + 1 points)");
    add("measures", raw.measures, "subset of N,C,D,mabk,svetlichny");
    add("theta_bc", raw.theta_bc, "explicit theta_BC in radians for both Bell operators (default: optimal)");
    add("threads", raw.threads, "worker threads (0 = all cores)");
    add("out", raw.out, "output path (default: stdout)");
    add("format", raw.format, "csv or json");
    auto* numeric = cmd.app->add_flag("--numeric", "use the numeric pipeline instead of closed forms");
    cmd.options["numeric"] = numeric;
    numeric->each([&raw](const std::string&) { raw.numeric = "true"; });
    if (mc) {
        add("traj", raw.traj, "trajectories per grid point");
        add("dt", raw.dt, "ou-path time step (default 0.01/gamma)");
        add("seed", raw.seed, "random seed");
        add("mode", raw.mode, "exact-phase or ou-path");
    }
    cmd.app->add_option("--config", raw.config, "key=value file; repeated keys form lists; flags take precedence");
    return cmd;
}

bool is_list_key(const std::string& key) { return key == "r" || key == "gamma_ratio" || key == "measures"; }

void apply_config(const Command& cmd, RawOptions& raw)
{
    if (raw.config.empty()) return;
    std::map<std::string, std::string*> targets{
        {"family", &raw.family},   {"r", &raw.r},         {"gamma_ratio", &raw.gamma_ratio}, {"t_max", &raw.t_max},
        {"t_steps", &raw.t_steps}, {"measures", &raw.measures}, {"theta_bc", &raw.theta_bc}, {"numeric", &raw.numeric},
        {"threads", &raw.threads}, {"traj", &raw.traj},   {"dt", &raw.dt},                   {"seed", &raw.seed},
        {"mode", &raw.mode},       {"out", &raw.out},     {"format", &raw.format}};
    for (const auto& [raw_key, values] : qcorr::read_config_file(raw.config)) {
        std::string key = raw_key;
        for (char& c : key)
            if (c == '-') c = '_';
        const auto opt = cmd.options.find(key);
        if (opt == cmd.options.end()) throw qcorr::UsageError("unknown config key '" + raw_key + "'");
        if (opt->second->count() > 0) continue;
        if (values.size() > 1 && !is_list_key(key))
            throw qcorr::UsageError("config key '" + raw_key + "' may appear only once");
        std::string joined;
        for (const auto& v : values) joined += (joined.empty() ? "" : ",") + v;
        *targets.at(key) = joined;
    }
}

bool parse_bool(const std::string& text)
{
    const std::string s = qcorr::lowercase(qcorr::trim(text));
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw qcorr::UsageError("not a boolean: '" + text + "'");
}

std::uint64_t parse_count(const std::string& text, const char* name)
{
    const std::string_view s = qcorr::trim(text);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw qcorr::UsageError(std::string(name) + " must be a non-negative integer, got '" + text + "'");
    return value;
}

qcorr::SweepConfig sweep_config(const RawOptions& raw)
{
    qcorr::SweepConfig cfg;
    cfg.family = qcorr::parse_family(raw.family);
    cfg.r_grid = qcorr::parse_double_list(raw.r);
    cfg.gamma_ratio_grid = qcorr::parse_double_list(raw.gamma_ratio);
    const auto steps = parse_count(raw.t_steps, "t-steps");
    if (steps > 1000000) throw qcorr::UsageError("t-steps is too large");
    cfg.t_grid = qcorr::make_time_grid(qcorr::parse_double(raw.t_max), static_cast<int>(steps));
    cfg.measures = qcorr::parse_measures(raw.measures);
    if (!qcorr::trim(raw.theta_bc).empty()) cfg.theta_bc = qcorr::parse_double(raw.theta_bc);
    cfg.numeric = parse_bool(raw.numeric);
    cfg.threads = static_cast<unsigned>(parse_count(raw.threads, "threads"));
    cfg.validate();
    return cfg;
}

qcorr::TrajectoryConfig trajectory_config(const RawOptions& raw, unsigned threads)
{
    qcorr::TrajectoryConfig t;
    t.n_traj = parse_count(raw.traj, "traj");
    if (t.n_traj < 1) throw qcorr::UsageError("traj must be at least 1");
    t.dt = qcorr::parse_double(raw.dt);
    if (!(t.dt >= 0.0)) throw qcorr::UsageError("dt must be positive");
    t.seed = parse_count(raw.seed, "seed");
    t.mode = qcorr::parse_mode(raw.mode);
    t.threads = threads;
    return t;
}

bool json_format(const RawOptions& raw)
{
    const std::string f = qcorr::lowercase(qcorr::trim(raw.format));
    if (f == "json") return true;
    if (f == "csv") return false;
    throw qcorr::UsageError("unknown format '" + raw.format + "' (expected csv or json)");
}

template <class Writer>
void emit(const RawOptions& raw, Writer&& write)
{
    if (raw.out.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream file(raw.out, std::ios::binary | std::ios::trunc);
    if (!file) throw qcorr::UsageError("cannot open output file '" + raw.out + "'");
    write(file);
    if (!file) throw std::runtime_error("failed writing '" + raw.out + "'");
}

void emit_table(const RawOptions& raw, const qcorr::Table& table)
{
    const bool json = json_format(raw);
    emit(raw, [&](std::ostream& os) {
        if (json)
            os << qcorr::table_json(table).dump(2) << '\n';
        else
            qcorr::write_csv(os, table);
    });
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Correlation dynamics of three dephasing qubits under Ornstein-Uhlenbeck noise"};
    app.require_subcommand(1);
    RawOptions raw;
    const Command scan = add_command(app, "scan", "tabulate N, C, D and Bell margins over a grid", raw, false);
    const Command death = add_command(app, "death-time", "tabulate sudden-death times", raw, false);
    const Command mc = add_command(app, "mc-verify", "check trajectory averages against the exact state", raw, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (scan.app->parsed()) {
            apply_config(scan, raw);
            emit_table(raw, qcorr::cmd_scan(sweep_config(raw)));
            return kExitOk;
        }
        if (death.app->parsed()) {
            apply_config(death, raw);
            emit_table(raw, qcorr::cmd_death_time(sweep_config(raw)));
            return kExitOk;
        }
        apply_config(mc, raw);
        const qcorr::SweepConfig cfg = sweep_config(raw);
        const bool json = json_format(raw);
        const qcorr::McReport report = qcorr::cmd_mc_verify(cfg, trajectory_config(raw, cfg.threads));
        emit(raw, [&](std::ostream& os) {
            if (json)
                os << qcorr::mc_json(report).dump(2) << '\n';
            else
                qcorr::write_csv(os, qcorr::mc_table(report));
        });
        double max_z = 0.0;
        for (const auto& p : report.points) max_z = std::max(max_z, p.check.max_z);
        std::cerr << "mc-verify: " << qcorr::to_string(report.verdict()) << " (" << report.points.size()
                  << " points, max z = " << qcorr::format_number(max_z) << ")\n";
        return report.verdict() == qcorr::Verdict::Fail ? kExitMcFailed : kExitOk;
    } catch (const qcorr::UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const qcorr::ContractError& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return kExitContract;
    } catch (const qcorr::ChannelContractError& e) {
        std::cerr << "contract violation: " << e.what() << '\n';
        return kExitContract;
    }
}
