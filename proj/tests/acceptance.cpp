// Acceptance checks. `acceptance` runs every criterion; `acceptance <id>` runs
// one. Each prints a single "criterion <id>: PASS|FAIL ..." line, and the exit
// status is non-zero if any selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qcorr/channel.hpp"
#include "qcorr/closed_forms.hpp"
#include "qcorr/death.hpp"
#include "qcorr/mc.hpp"
#include "qcorr/pipeline.hpp"
#include "support/oracles.hpp"

using namespace qcorr;

namespace {

// Pinned tolerances.
constexpr double kOracleTol = 1e-9;
constexpr double kOracleDiscordTol = 1e-4;
constexpr double kOracleSeconds = 30.0;
constexpr double kLiftTol = 1e-14;
constexpr double kLiftSeconds = 10.0;
constexpr double kBenchmarkTol = 1e-10;
constexpr double kDeathTol = 1e-5;
constexpr double kKinkMarkovTarget = 0.4, kKinkMarkovTol = 0.05;
constexpr double kKinkSlowTarget = 2.3, kKinkSlowTol = 0.2;
constexpr double kThresholdStep = 1e-4;
constexpr double kMcSigma = 4.0;
constexpr std::size_t kMcTrajectories = 100000;
constexpr double kMcSeconds = 120.0;
constexpr double kPropertySeconds = 60.0;
constexpr double kPropertyTol = 1e-10;

constexpr double kMarkovLimitRatio = 1e6;
constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Stopwatch {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double x, int digits = 6)
{
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

// 1. Numeric pipeline against closed forms on random samples.
Outcome oracle_equivalence()
{
    Stopwatch clock;
    std::mt19937_64 rng(20240601);
    double worst = 0.0, worst_d = 0.0;
    for (int i = 0; i < 500; ++i) {
        const Family fam = qtest::uniform(rng) < 0.5 ? Family::GHZ : Family::W;
        const double r = qtest::uniform(rng);
        const auto noise = NoiseParams::from_ratio(std::exp(qtest::uniform(rng, std::log(0.01), std::log(100.0))));
        const double t = qtest::uniform(rng, 0.0, 10.0);
        const auto c = closed_form(fam, noise, r, t);
        const auto n = numeric_report(fam, noise, r, t);
        for (auto m : {Measure::N, Measure::C, Measure::MABK, Measure::Svetlichny})
            worst = std::max(worst, std::abs(c.value(m) - n.value(m)));
        worst_d = std::max(worst_d, std::abs(c.discord - n.discord));
    }
    const double s = clock.seconds();
    return {worst <= kOracleTol && worst_d <= kOracleDiscordTol && s < kOracleSeconds,
            "500 samples, max |diff| N/C/B/S = " + fmt(worst, 3) + ", D = " + fmt(worst_d, 3) + ", " + fmt(s, 3) + " s"};
}

// 2. Table-driven dephasing against the general channel lift.
Outcome lift_equivalence()
{
    Stopwatch clock;
    std::mt19937_64 rng(77);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Matrix8 rho = qtest::random_density<8>(rng, 1 + i % 8);
        const auto noise = NoiseParams::from_ratio(std::exp(qtest::uniform(rng, -4, 4)));
        const double t = qtest::uniform(rng, 0, 10);
        const auto p = dephasing_params(noise, t);
        worst = std::max(worst, max_abs_diff(evolve_dephasing(rho, noise, t), lift_three_qubit(rho, p, p, p)));
    }
    const double s = clock.seconds();
    return {worst <= kLiftTol && s < kLiftSeconds,
            "1000 states, max entry diff = " + fmt(worst, 3) + ", " + fmt(s, 3) + " s"};
}

// 3. Pure-state values at t = 0, from the numeric measures with numerically
//    optimized Bell angles and from the closed forms.
Outcome pure_benchmarks()
{
    struct Expect {
        Family fam;
        Measure m;
        double value;
    };
    const double s2 = std::sqrt(2.0);
    const Expect expected[] = {
        {Family::GHZ, Measure::N, 0.5},          {Family::GHZ, Measure::MABK, 2.0},
        {Family::GHZ, Measure::Svetlichny, 4 * s2}, {Family::W, Measure::C, 2.0 / 3.0},
        {Family::W, Measure::N, s2 / 3.0},       {Family::W, Measure::MABK, 1.5},
        {Family::W, Measure::Svetlichny, 3 * s2},
    };
    double worst = 0.0;
    for (const auto& e : expected) {
        const Matrix8 rho = make_state(e.fam, 1.0);
        double numeric = 0.0;
        if (e.m == Measure::N) numeric = tripartite_negativity(rho);
        if (e.m == Measure::C) numeric = concurrence_general(partial_trace<4>(rho, {Subsystem::A, Subsystem::B}));
        if (e.m == Measure::MABK || e.m == Measure::Svetlichny) {
            const BellKind kind = e.m == Measure::MABK ? BellKind::MABK : BellKind::Svetlichny;
            numeric = bell_expectation(rho, bell_operator(kind, optimize_bell_angles(e.fam, kind, rho)));
        }
        const double closed = closed_form(e.fam, NoiseParams{}, 1.0, 0.0).value(e.m);
        worst = std::max({worst, std::abs(numeric - e.value), std::abs(closed - e.value)});
    }
    return {worst <= kBenchmarkTol, "7 values, max |diff| = " + fmt(worst, 3)};
}

// 4. Markov-limit death times against an independent inversion of each
//    threshold condition, plus the ordering claims.
Outcome markov_death_times()
{
    const double r = 0.98, s2 = std::sqrt(2.0);
    const NoiseParams noise = NoiseParams::from_ratio(kMarkovLimitRatio);
    struct Case {
        Family fam;
        Measure m;
        double f; // exponent at which the threshold is met
    };
    const Case cases[] = {
        {Family::GHZ, Measure::MABK, std::log(2 * r) / 3},
        {Family::GHZ, Measure::Svetlichny, std::log(s2 * r) / 3},
        {Family::GHZ, Measure::N, std::log(4 * r / (1 - r)) / 3},
        {Family::W, Measure::MABK, -0.5 * std::log((2 / r - 1) / 2)},
        {Family::W, Measure::Svetlichny, -0.5 * std::log((4 / (s2 * r) - 1) / 2)},
        {Family::W, Measure::C, -0.5 * std::log(std::sqrt(3 * (1 - r) * (3 + r)) / (4 * r))},
        {Family::W, Measure::N, -0.5 * std::log(3 * (1 - r) / (8 * s2 * r))},
    };
    bool pass = true;
    double worst = 0.0;
    std::string values;
    std::map<std::pair<Family, Measure>, double> td;
    for (const auto& c : cases) {
        const auto t = death_time(c.fam, c.m, noise, r);
        const double oracle = qtest::time_for_exponent(1.0, kMarkovLimitRatio, c.f);
        if (!t) {
            pass = false;
            continue;
        }
        td[{c.fam, c.m}] = *t;
        worst = std::max(worst, std::abs(*t - oracle));
        values += " " + std::string(to_string(c.fam)) + "/" + std::string(to_string(c.m)) + "=" + fmt(*t, 7);
    }
    pass = pass && worst <= kDeathTol;
    const bool ghz_order = td[{Family::GHZ, Measure::MABK}] < td[{Family::GHZ, Measure::N}]
                           && td[{Family::GHZ, Measure::Svetlichny}] < td[{Family::GHZ, Measure::N}];
    const bool w_order = td[{Family::W, Measure::MABK}] < td[{Family::W, Measure::C}]
                         && td[{Family::W, Measure::Svetlichny}] < td[{Family::W, Measure::C}]
                         && td[{Family::W, Measure::C}] < td[{Family::W, Measure::N}];
    pass = pass && ghz_order && w_order;
    return {pass, "max |diff| vs inversion = " + fmt(worst, 3) + (ghz_order && w_order ? ", ordering ok;" : ", ORDERING BROKEN;")
                      + values};
}

// 5. Every finite death time is later for gamma/Gamma = 0.1 than for 10.
Outcome non_markovian_delay()
{
    bool pass = true;
    int compared = 0;
    for (auto fam : {Family::GHZ, Family::W})
        for (auto m : {Measure::N, Measure::C, Measure::MABK, Measure::Svetlichny}) {
            const auto slow = death_time(fam, m, NoiseParams::from_ratio(kNonMarkovianRatio), 0.98);
            const auto fast = death_time(fam, m, NoiseParams::from_ratio(kMarkovianRatio), 0.98);
            if (slow.has_value() != fast.has_value()) pass = false;
            if (slow && fast) {
                ++compared;
                pass = pass && *slow > *fast;
            }
        }
    return {pass && compared == 7, std::to_string(compared) + " finite death times compared"};
}

// 6. W-family discord stays positive and decreases on the whole grid.
Outcome discord_immortality()
{
    bool positive = true, decreasing = true;
    double smallest = 1.0;
    int points = 0;
    for (double r : {0.3, 0.6, 0.98, 1.0})
        for (double ratio : {kNonMarkovianRatio, kMarkovianRatio}) {
            const auto noise = NoiseParams::from_ratio(ratio);
            double prev = std::numeric_limits<double>::infinity();
            for (int i = 0; i <= 2000; ++i) {
                const double d = w_closed_form(noise, r, 0.01 * i).discord;
                ++points;
                positive = positive && d > 0.0;
                decreasing = decreasing && d < prev;
                smallest = std::min(smallest, d);
                prev = d;
            }
        }
    return {positive && decreasing, std::to_string(points) + " points, min D = " + fmt(smallest, 3)
                                        + (decreasing ? ", strictly decreasing" : ", NOT strictly decreasing")};
}

// 7. Branch crossing of the W-family discord at r = 0.98.
Outcome discord_kink()
{
    const auto fast = discord_kink_time(NoiseParams::from_ratio(kMarkovianRatio), 0.98);
    const auto slow = discord_kink_time(NoiseParams::from_ratio(kNonMarkovianRatio), 0.98);
    const bool fast_ok = fast && std::abs(*fast - kKinkMarkovTarget) <= kKinkMarkovTol;
    const bool slow_ok = slow && std::abs(*slow - kKinkSlowTarget) <= kKinkSlowTol;
    auto show = [](const std::optional<double>& t) { return t ? fmt(*t, 6) : std::string("none"); };
    return {fast_ok && slow_ok, "gamma/Gamma=10: Gt=" + show(fast) + " (target 0.4 +/- 0.05) " + (fast_ok ? "ok" : "off")
                                    + "; gamma/Gamma=0.1: Gt=" + show(slow) + " (target 2.3 +/- 0.2) "
                                    + (slow_ok ? "ok" : "off")};
}

// 8. Violation / entanglement onsets in r at t = 0.
Outcome purity_thresholds()
{
    const NoiseParams n{};
    struct Threshold {
        const char* name;
        double r0;
        std::function<double(double)> margin;
    };
    const Threshold thresholds[] = {
        {"GHZ mabk", 0.5, [&](double r) { return ghz_closed_form(n, r, 0).mabk - 1; }},
        {"GHZ N", 0.2, [&](double r) { return ghz_closed_form(n, r, 0).negativity; }},
        {"W mabk", 2.0 / 3.0, [&](double r) { return w_closed_form(n, r, 0).mabk - 1; }},
        {"W svetlichny", 4 / (3 * std::sqrt(2.0)), [&](double r) { return w_closed_form(n, r, 0).svetlichny - 4; }},
        {"W N", 3 / (3 + 8 * std::sqrt(2.0)), [&](double r) { return w_closed_form(n, r, 0).negativity; }},
        {"W C", (-6 + std::sqrt(36.0 + 4 * 19 * 9)) / 38, [&](double r) { return w_closed_form(n, r, 0).concurrence; }},
    };
    bool pass = true;
    std::string failed;
    for (const auto& th : thresholds) {
        const bool ok = th.margin(th.r0 - kThresholdStep) <= 0.0 && th.margin(th.r0 + kThresholdStep) > 0.0;
        if (!ok) failed += std::string(" ") + th.name;
        pass = pass && ok;
    }
    return {pass, pass ? "6 sign changes found at step 1e-4" : "no sign change for" + failed};
}

// 9. Trajectory ensembles against the exact dephased state.
Outcome mc_validation()
{
    Stopwatch clock;
    bool pass = true;
    double max_z = 0.0, max_cross_z = 0.0;
    int runs = 0;
    std::uint64_t seed = 1000;
    for (auto fam : {Family::GHZ, Family::W}) {
        const Matrix8 rho0 = make_state(fam, 1.0);
        for (double ratio : {0.1, 1.0, 10.0})
            for (double t : {0.5, 1.0, 2.0}) {
                const auto noise = NoiseParams::from_ratio(ratio);
                const auto stats =
                    ensemble_statistics(rho0, noise, t, {kMcTrajectories, 0.0, ++seed, PhaseMode::ExactPhase});
                const auto v = verify_ensemble(stats, evolve_dephasing(rho0, noise, t), kMcSigma);
                pass = pass && v.passed && v.sufficient;
                max_z = std::max(max_z, v.max_z);
                ++runs;
            }
        for (double ratio : {0.1, 1.0, 10.0}) {
            const auto noise = NoiseParams::from_ratio(ratio);
            const double t = 1.0;
            const auto exact = ensemble_statistics(rho0, noise, t, {kMcTrajectories, 0.0, ++seed, PhaseMode::ExactPhase});
            const auto path = ensemble_statistics(rho0, noise, t,
                                                  {kMcTrajectories, 0.01 / noise.bandwidth, ++seed, PhaseMode::OuPath});
            const auto v = compare_ensembles(path, exact, kMcSigma);
            pass = pass && v.passed;
            max_cross_z = std::max(max_cross_z, v.max_z);
            ++runs;
        }
    }
    const double s = clock.seconds();
    pass = pass && s < kMcSeconds;
    return {pass, std::to_string(runs) + " ensembles of 1e5, max z vs exact = " + fmt(max_z, 3)
                      + ", max z ou-path vs exact-phase = " + fmt(max_cross_z, 3) + ", " + fmt(s, 3) + " s"};
}

// 10. Randomized property suites.
Outcome property_suites()
{
    Stopwatch clock;
    std::mt19937_64 rng(4242);
    int cases = 0, failures = 0;
    auto check = [&](bool ok) {
        ++cases;
        if (!ok) ++failures;
    };
    for (int i = 0; i < 2000; ++i) { // channel keeps density matrices
        const Matrix8 rho = qtest::random_density<8>(rng, 1 + i % 8);
        const Matrix8 out = evolve_dephasing(rho, NoiseParams::from_ratio(qtest::uniform(rng, 0.01, 100)),
                                             qtest::uniform(rng, 0, 10));
        check(is_hermitian(out, kPropertyTol) && std::abs(out.trace() - 1.0) <= kPropertyTol
              && hermitian_eigenvalues(out).min() >= -kPropertyTol);
    }
    for (int i = 0; i < 2000; ++i) { // partial transpose is an involution
        const Matrix8 rho = qtest::random_density<8>(rng);
        const auto s = static_cast<Subsystem>(i % 3);
        check(partial_transpose(partial_transpose(rho, s), s) == rho);
    }
    for (int i = 0; i < 2000; ++i) { // entropy is unitarily invariant
        const Matrix4 rho = qtest::random_density<4>(rng);
        const Matrix4 u = kron(qtest::random_unitary2(rng), qtest::random_unitary2(rng));
        check(std::abs(von_neumann_entropy(rho) - von_neumann_entropy(Matrix4(u * rho * u.adjoint()))) <= kPropertyTol);
    }
    for (int i = 0; i < 2000; ++i) { // Bell values depend on theta_B + theta_C only
        const Family fam = i % 2 ? Family::GHZ : Family::W;
        const Matrix8 rho = evolve_dephasing(make_state(fam, qtest::uniform(rng)),
                                             NoiseParams::from_ratio(qtest::uniform(rng, 0.05, 20)), qtest::uniform(rng, 0, 4));
        const double tb = qtest::uniform(rng, -kPi, kPi), tc = qtest::uniform(rng, -kPi, kPi), d = qtest::uniform(rng, -kPi, kPi);
        const BellKind kind = i % 4 < 2 ? BellKind::MABK : BellKind::Svetlichny;
        check(std::abs(bell_expectation(rho, bell_operator(kind, {tb, tc, fam}))
                       - bell_expectation(rho, bell_operator(kind, {tb + d, tc - d, fam})))
              <= kPropertyTol);
    }
    for (int i = 0; i < 2000; ++i) { // no revivals: every measure is non-increasing in t
        const Family fam = i % 2 ? Family::GHZ : Family::W;
        const auto noise = NoiseParams::from_ratio(std::exp(qtest::uniform(rng, -4, 4)));
        const double r = qtest::uniform(rng), t1 = qtest::uniform(rng, 0, 10), t2 = t1 + qtest::uniform(rng, 0, 2);
        const auto a = closed_form(fam, noise, r, t1), b = closed_form(fam, noise, r, t2);
        bool ok = true;
        for (auto m : {Measure::N, Measure::C, Measure::D, Measure::MABK, Measure::Svetlichny})
            ok = ok && b.value(m) <= a.value(m) + 1e-15;
        const Matrix8 rho0 = qtest::random_density<8>(rng);
        ok = ok && std::abs(evolve_dephasing(rho0, noise, t2)(1, 6)) <= std::abs(evolve_dephasing(rho0, noise, t1)(1, 6));
        check(ok);
    }
    const double s = clock.seconds();
    return {failures == 0 && cases == 10000 && s < kPropertySeconds,
            std::to_string(cases) + " cases, " + std::to_string(failures) + " failures, " + fmt(s, 3) + " s"};
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<std::function<Outcome()>> criteria{
        oracle_equivalence, lift_equivalence,    pure_benchmarks, markov_death_times, non_markovian_delay,
        discord_immortality, discord_kink, purity_thresholds, mc_validation,      property_suites};

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        const int id = std::atoi(argv[i]);
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
            return 2;
        }
        selected.push_back(id);
    }
    if (selected.empty())
        for (int id = 1; id <= static_cast<int>(criteria.size()); ++id) selected.push_back(id);

    bool all = true;
    for (int id : selected) {
        Outcome o;
        try {
            o = criteria[static_cast<std::size_t>(id - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %d: %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
