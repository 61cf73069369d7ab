// Copyright 2026 The qtomo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Benchmark reference values are the published LIN/MLE
// numbers for 500 runs at 100 copies per setting.

#include "qtomo/harness.hpp"
#include "qtomo/qubit_constraints.hpp"
#include "test_support.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

using namespace qtomo;

namespace {

int failures = 0;

void report(int id, const std::string &name, bool pass, const std::string &detail) {
    std::printf("%s criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

std::string fmt(const char *format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

bool within_rel(double x, double target, double rel) { return std::abs(x - target) <= rel * target; }
bool within_abs(double x, double target, double tol) { return std::abs(x - target) <= tol; }
bool in_range(double x, double lo, double hi) { return x >= lo && x <= hi; }

double std_dev(const ScenarioStats &s) { return std::sqrt(std::max(s.variance, 0.0)); }

struct Timed {
    ScenarioResult result;
    double seconds = 0;
};

Timed run_timed(const ScenarioConfig &cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    Timed out{run_scenario(cfg), 0};
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

struct Options {
    std::int64_t runs = 500;
    unsigned workers = 0;
    std::filesystem::path out_dir = "acceptance_out";
};

ScenarioConfig base_config(const Options &opt) {
    ScenarioConfig cfg;
    cfg.runs = opt.runs;
    cfg.workers = opt.workers;
    return cfg;
}

ScenarioConfig ghz_config(const Options &opt, std::optional<double> f0) {
    ScenarioConfig cfg = base_config(opt);
    cfg.target.kind = StateKind::Ghz;
    cfg.true_fidelity = f0;
    return cfg;
}

// LIN mean against F0 at three standard errors of the mean.
struct Unbiasedness {
    std::string label;
    double gap = 0;
    double bound = 0;
};

Unbiasedness lin_unbiasedness(const std::string &label, const ScenarioResult &r) {
    const ScenarioStats &s = r.summaries.at(Estimator::Lin).stats;
    return {label, std::abs(s.mean - r.f0),
            3 * std_dev(s) / std::sqrt(static_cast<double>(s.runs))};
}

} // namespace

int main(int argc, char **argv) {
    Options opt;
    CLI::App app{"qtomo acceptance suite"};
    app.add_option("--runs", opt.runs, "Runs per scenario (criteria assume 500)");
    app.add_option("--workers", opt.workers, "Worker threads (0 = hardware concurrency)");
    app.add_option("--out-dir", opt.out_dir, "Scratch directory for determinism outputs");
    CLI11_PARSE(app, argc, argv);
    const double runs = static_cast<double>(opt.runs);
    std::vector<Unbiasedness> unbiased;

    // 1. Pure GHZ: LIN is exact in every run.
    {
        ScenarioConfig cfg = ghz_config(opt, std::nullopt);
        cfg.estimators = {Estimator::Lin};
        const Timed t = run_timed(cfg);
        double worst = 0;
        for (double f : t.result.fidelities(Estimator::Lin))
            worst = std::max(worst, std::abs(f - 1.0));
        const ScenarioStats &s = t.result.summaries.at(Estimator::Lin).stats;
        const bool pass = worst <= 1e-12 && std::abs(s.mse) < 1e-24 &&
                          std::abs(s.variance) < 1e-24 && std::abs(s.bias_sq) < 1e-24 &&
                          t.seconds < 10;
        report(1, "GHZ exactness", pass,
               fmt("max|F_LIN-1|=%.3g mse=%.3g var=%.3g bias_sq=%.3g runtime=%.2fs", worst, s.mse,
                   s.variance, s.bias_sq, t.seconds));
        unbiased.push_back(lin_unbiasedness("ghz4_f1.0", t.result));
    }

    // 2 and 5. Noisy GHZ at F0 = 0.8.
    {
        const Timed t = run_timed(ghz_config(opt, 0.8));
        const ScenarioStats &lin = t.result.summaries.at(Estimator::Lin).stats;
        const ScenarioStats &mle = t.result.summaries.at(Estimator::Mle).stats;
        const bool pass = within_rel(lin.mse, 1.488e-4, 0.3) &&
                          within_rel(lin.variance, 1.480e-4, 0.3) && lin.bias_sq < 1e-5 &&
                          within_rel(mle.mse, 2.623e-4, 0.3) &&
                          within_rel(mle.variance, 1.148e-4, 0.3) &&
                          within_rel(mle.bias_sq, 1.475e-4, 0.3) && t.seconds < 900;
        report(2, "noisy GHZ benchmark", pass,
               fmt("LIN mse=%.4g var=%.4g bias_sq=%.3g | MLE mse=%.4g var=%.4g bias_sq=%.4g | "
                   "unconverged=%lld runtime=%.1fs",
                   lin.mse, lin.variance, lin.bias_sq, mle.mse, mle.variance, mle.bias_sq,
                   static_cast<long long>(t.result.summaries.at(Estimator::Mle).unconverged_runs),
                   t.seconds));

        std::int64_t lin_negative = 0, mle_physical = 0, mle_total = 0;
        for (const auto &rec : t.result.records) {
            if (rec.estimator == Estimator::Lin)
                lin_negative += rec.min_eig < -1e-12;
            else {
                ++mle_total;
                mle_physical += rec.physical;
            }
        }
        const double frac = static_cast<double>(lin_negative) / runs;
        report(5, "nonphysicality rate", frac >= 0.95 && mle_physical == mle_total,
               fmt("LIN min_eig<-1e-12 in %.1f%% of runs; MLE physical in %lld/%lld", 100 * frac,
                   static_cast<long long>(mle_physical), static_cast<long long>(mle_total)));
        unbiased.push_back(lin_unbiasedness("ghz4_f0.8", t.result));
    }

    // 3. Pure W.
    {
        ScenarioConfig cfg = base_config(opt);
        cfg.target.kind = StateKind::W;
        const Timed t = run_timed(cfg);
        const ScenarioStats &lin = t.result.summaries.at(Estimator::Lin).stats;
        const ScenarioStats &mle = t.result.summaries.at(Estimator::Mle).stats;
        const bool pass = within_rel(lin.mse, 2.323e-4, 0.3) &&
                          within_rel(mle.mse, 2.642e-6, 0.5) &&
                          within_abs(lin.mean, 0.999, 0.003) &&
                          within_rel(std_dev(lin), 0.015, 0.3) &&
                          within_abs(lin.frac_above_one, 0.5, 0.15);
        report(3, "W benchmark", pass,
               fmt("LIN mse=%.4g mean=%.5f std=%.4g frac>1=%.3f | MLE mse=%.4g mean=%.5f "
                   "runtime=%.1fs",
                   lin.mse, lin.mean, std_dev(lin), lin.frac_above_one, mle.mse, mle.mean,
                   t.seconds));
        unbiased.push_back(lin_unbiasedness("w4_f1.0", t.result));
    }

    // 4. Pure GHZ, MLE spread.
    {
        ScenarioConfig cfg = ghz_config(opt, std::nullopt);
        cfg.estimators = {Estimator::Mle};
        const Timed t = run_timed(cfg);
        const ScenarioStats &mle = t.result.summaries.at(Estimator::Mle).stats;
        const bool pass = within_abs(mle.mean, 0.999, 0.001) && within_rel(std_dev(mle), 0.00036, 0.5);
        report(4, "GHZ MLE spread", pass,
               fmt("MLE mean=%.6f std=%.4g mse=%.4g runtime=%.1fs", mle.mean, std_dev(mle), mle.mse,
                   t.seconds));
    }

    // 7. Random pure targets depolarized to F0 = 0.8.
    {
        bool pass = true;
        std::string detail;
        for (std::uint64_t seed = 101; seed <= 103; ++seed) {
            ScenarioConfig cfg = base_config(opt);
            cfg.target.kind = StateKind::HaarRandomPure;
            cfg.target.seed = seed;
            cfg.true_fidelity = 0.8;
            const Timed t = run_timed(cfg);
            const ScenarioStats &lin = t.result.summaries.at(Estimator::Lin).stats;
            const ScenarioStats &mle = t.result.summaries.at(Estimator::Mle).stats;
            pass = pass && in_range(lin.mse, 2.0e-4, 5.5e-4) &&
                   in_range(mle.variance, 0.8e-4, 2.2e-4) &&
                   in_range(mle.bias_sq, 2.5e-4, 6.0e-4) && lin.bias_sq < 1e-5;
            detail += fmt("%sseed %llu: LIN mse=%.4g bias_sq=%.3g MLE var=%.4g bias_sq=%.4g "
                          "(%.0fs)",
                          detail.empty() ? "" : "; ", static_cast<unsigned long long>(seed),
                          lin.mse, lin.bias_sq, mle.variance, mle.bias_sq, t.seconds);
            unbiased.push_back(lin_unbiasedness("random" + std::to_string(seed), t.result));
        }
        report(7, "random targets", pass, detail);
    }

    // 6. LIN unbiasedness across the scenarios above.
    {
        bool pass = true;
        std::string detail;
        for (const auto &u : unbiased) {
            pass = pass && u.gap <= u.bound;
            detail += fmt("%s%s %.3g<=%.3g", detail.empty() ? "" : "; ", u.label.c_str(), u.gap,
                          u.bound);
        }
        report(6, "LIN unbiasedness", pass, detail);
    }

    // 8. Exact-probability pseudo-data.
    // Run to the end; this rho sits close to the boundary and RrhoR
    // creeps there, so it needs ~1e6 iterations.
    {
        std::mt19937_64 gen(2024);
        const auto pom = std::make_shared<const PauliPom>(4);
        double lin_worst = 0;
        for (int rank : {1, 2, 4, 16, 16}) {
            const CMatrix rho = qtomo::testing::random_density(16, gen, rank);
            const auto lin = lin_estimate(FrequencyData::exact(rho, pom, 100));
            lin_worst = std::max(lin_worst, qtomo::testing::max_abs_diff(lin.matrix, rho));
        }
        const CMatrix rho = qtomo::testing::random_density(16, gen);
        const auto data = FrequencyData::exact(rho, pom, 100);
        MleOptions opts;
        opts.tol = 0;
        opts.max_iter = 2000000;
        const auto mle = mle_estimate(data, opts);
        const double td = trace_distance(mle.matrix, rho);
        const bool pass = lin_worst <= 1e-10 && td <= 1e-6 && mle.optimality_gap <= 1e-6;
        report(8, "oracle equivalence", pass,
               fmt("LIN max entry error=%.3g; MLE trace distance=%.3g gap=%.3g after %d "
                   "iterations (min eig of rho %.3g)",
                   lin_worst, td, mle.optimality_gap, mle.iterations, min_eigenvalue(rho)));
    }

    // 9. MSE decomposition on random sample sets.
    {
        std::mt19937_64 gen(9);
        std::uniform_real_distribution<double> u(-0.2, 1.2);
        double worst = 0;
        for (int set = 0; set < 1000; ++set) {
            const int n = 2 + static_cast<int>(gen() % 1000);
            std::vector<double> x(static_cast<std::size_t>(n));
            for (double &v : x)
                v = u(gen);
            const auto s = aggregate(x, u(gen));
            worst = std::max(worst, std::abs(s.mse - s.bias_sq - s.variance));
        }
        report(9, "MSE = bias^2 + variance", worst <= 1e-12,
               fmt("max |mse-bias_sq-variance| over 1000 sets = %.3g", worst));
    }

    // 10. Qubit constraints.
    {
        using namespace qtomo::qubit;
        const auto tet = tetrahedron_pom();
        std::mt19937_64 gen(10);
        std::uniform_real_distribution<double> u(-1, 1);
        int tet_ok = 0, samples = 0;
        double max_sq = 0;
        while (samples < 10000) {
            const Eigen::Vector3d r(u(gen), u(gen), u(gen));
            if (r.squaredNorm() > 1)
                continue;
            ++samples;
            const auto p = tet.probabilities(qubit_state(r));
            const double sq = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
            max_sq = std::max(max_sq, sq);
            tet_ok += sq <= 1.0 / 3 + 1e-12;
        }
        const auto pb = tet.probabilities(qubit_state(tet.axes[0]));
        const double boundary = pb[0] * pb[0] + pb[1] * pb[1] + pb[2] * pb[2] + pb[3] * pb[3];

        std::uniform_int_distribution<std::uint64_t> count(0, 500);
        int fixes = 0, linear_ok = 0;
        double linear_dev = 0;
        while (fixes < 10000) {
            const Bb84Counts c{count(gen), count(gen), count(gen), count(gen)};
            if (c.n0 + c.n1 < c.nminus || c.n0 + c.n1 == 0)
                continue;
            ++fixes;
            const auto f = bb84_discard_fix(c).frequencies;
            const double dev = std::max(std::abs(f[0] + f[1] - 0.5), std::abs(f[2] + f[3] - 0.5));
            linear_dev = std::max(linear_dev, dev);
            linear_ok += dev <= 1e-12;
        }
        const auto counter = bb84_discard_fix({50, 0, 50, 0}).frequencies;
        const double quad = (counter[0] - counter[1]) * (counter[0] - counter[1]) +
                            (counter[2] - counter[3]) * (counter[2] - counter[3]);
        const bool counter_linear = std::abs(counter[0] + counter[1] - 0.5) <= 1e-12 &&
                                    std::abs(counter[2] + counter[3] - 0.5) <= 1e-12;
        const bool pass = tet_ok == samples && std::abs(boundary - 1.0 / 3) <= 1e-12 &&
                          linear_ok == fixes && counter_linear && quad > 0.25 &&
                          !bb84_constraints(counter);
        report(10, "qubit constraints", pass,
               fmt("tetrahedron %d/%d within bound (max sum p^2=%.15g), aligned state %.15g; "
                   "discard fix linear constraints %d/%d (max dev %.3g); counts (50,0,50,0) "
                   "give quadratic %.3g > 1/4",
                   tet_ok, samples, max_sq, boundary, linear_ok, fixes, linear_dev, quad));
    }

    // 11. Determinism across worker counts.
    {
        std::vector<std::string> files;
        for (unsigned workers : {1u, 4u, 8u}) {
            ScenarioConfig cfg = ghz_config(opt, 0.8);
            cfg.runs = 24;
            cfg.workers = workers;
            cfg.out_dir = opt.out_dir / ("workers" + std::to_string(workers));
            std::filesystem::create_directories(cfg.out_dir);
            emit_outputs(run_scenario(cfg), cfg);
            std::ifstream in(cfg.out_dir / "runs.csv", std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            files.push_back(ss.str());
        }
        const bool pass = !files[0].empty() && files[0] == files[1] && files[0] == files[2];
        report(11, "determinism", pass,
               fmt("runs.csv with 1, 4, 8 workers: %zu bytes, %s", files[0].size(),
                   pass ? "byte-identical" : "different"));
    }

    std::printf("%d of 11 criteria failed\n", failures);
    return failures ? 1 : 0;
}
