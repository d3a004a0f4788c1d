// lvar: command-line front end. Every subcommand writes CSV files and a JSON manifest
// into --out. Exit codes: 0 ok, 1 a check failed, 2 usage or configuration error.

#include <curl/curl.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lvar/lvar.hpp"
#include "lvar/testing/selftest.hpp"
#include "lvar/testing/tauberian_suite.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace lvar;

namespace {

constexpr int exit_ok = 0, exit_check = 1, exit_usage = 2;

// A failed check; carries exit status 1.
struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- descriptors

struct DescOptions {
    std::string desc = "zeta";
    std::string curve;  // "a1,a2,a3,a4,a6,N"
    std::string table;
    int table_degree = 2;
    double table_conductor = 1.0;
    std::string cache_dir;
    std::uint64_t budget = 4'000'000;

    void add_to(CLI::App* app) {
        app->add_option("--desc", desc, "L-function: zeta, delta, ec or table")
            ->check(CLI::IsMember({"zeta", "delta", "ec", "table"}))
            ->capture_default_str();
        app->add_option("--curve", curve, "elliptic curve as a1,a2,a3,a4,a6,N (default 37a)");
        app->add_option("--table", table, "external coefficient table (p a [bad] per line)");
        app->add_option("--table-degree", table_degree, "degree of the external table")->capture_default_str();
        app->add_option("--table-conductor", table_conductor, "conductor of the external table")->capture_default_str();
        app->add_option("--cache-dir", cache_dir, "coefficient cache directory")->envname("LVAR_CACHE_DIR");
        app->add_option("--budget", budget, "largest prime cutoff computed without a cache hit")->capture_default_str();
    }

    LFunctionDescriptor descriptor() const {
        if (desc == "zeta") return make_builtin(Builtin::riemann_zeta);
        if (desc == "delta") return make_builtin(Builtin::ramanujan_delta);
        if (desc == "ec") {
            if (curve.empty()) return curve_37a();
            std::vector<long long> v;
            std::stringstream ss(curve);
            std::string item;
            while (std::getline(ss, item, ',')) {
                try {
                    v.push_back(std::stoll(item));
                } catch (const std::exception&) {
                    throw DomainError("--curve: '" + item + "' is not an integer");
                }
            }
            if (v.size() != 6 || v[5] <= 0) throw DomainError("--curve: expected a1,a2,a3,a4,a6,N with N > 0");
            BuiltinParams p;
            p.curve = EllipticCurve{v[0], v[1], v[2], v[3], v[4], std::uint64_t(v[5])};
            return make_builtin(Builtin::elliptic_curve, p);
        }
        if (table.empty()) throw DomainError("--table: required with --desc table");
        BuiltinParams p;
        p.table = ExternalTable{table, table_degree, table_conductor};
        return make_builtin(Builtin::external_table, p);
    }

    CoefficientOptions coefficient_options() const {
        CoefficientOptions o;
        o.compute_budget = budget;
        if (!cache_dir.empty()) o.cache_dir = cache_dir;
        return o;
    }

    json to_json() const {
        json j{{"desc", desc}, {"budget", budget}};
        if (!curve.empty()) j["curve"] = curve;
        if (!table.empty()) j["table"] = {{"path", table}, {"degree", table_degree}, {"conductor", table_conductor}};
        if (!cache_dir.empty()) j["cache_dir"] = cache_dir;
        return j;
    }
};

// ---------------------------------------------------------------- output

// Comma-separated rows, reals in 17-significant-digit scientific notation.
class Csv {
public:
    Csv(const fs::path& path, const std::vector<std::string>& header) : path_(path) {
        f_ = std::fopen(path.string().c_str(), "w");
        if (!f_) throw DomainError("--out: cannot write " + path.string());
        for (std::size_t i = 0; i < header.size(); ++i) std::fprintf(f_, "%s%s", i ? "," : "", header[i].c_str());
        std::fputc('\n', f_);
    }
    ~Csv() {
        if (f_) std::fclose(f_);
    }
    Csv(const Csv&) = delete;
    Csv& operator=(const Csv&) = delete;

    Csv& num(double v) {
        sep();
        std::fprintf(f_, "%.16e", v);
        return *this;
    }
    Csv& integer(long long v) {
        sep();
        std::fprintf(f_, "%lld", v);
        return *this;
    }
    Csv& text(const std::string& s) {
        sep();
        std::fputs(s.c_str(), f_);
        return *this;
    }
    void end() {
        std::fputc('\n', f_);
        first_ = true;
    }
    const fs::path& path() const { return path_; }

private:
    void sep() {
        if (!first_) std::fputc(',', f_);
        first_ = false;
    }
    fs::path path_;
    std::FILE* f_ = nullptr;
    bool first_ = true;
};

struct Run {
    std::string subcommand;
    std::vector<std::string> argv;  // the subcommand's arguments, --out excluded
    fs::path out;
    json inputs = json::object();
    json cutoffs = json::object();
    json results = json::object();
    std::vector<std::string> outputs;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    fs::path file(const std::string& name) {
        outputs.push_back(name);
        return out / name;
    }

    void write_manifest() const {
        double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::time_t now = std::time(nullptr);
        char stamp[32];
        std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        json m{{"tool", "lvar"},
               {"version", lvar::version},
               {"subcommand", subcommand},
               {"argv", argv},
               {"inputs", inputs},
               {"cutoffs", cutoffs},
               {"results", results},
               {"outputs", outputs},
               {"finished_utc", stamp},
               {"wall_time_seconds", wall}};
        std::ofstream(out / (subcommand + ".manifest.json")) << m.dump(2) << '\n';
    }
};

// ---------------------------------------------------------------- subcommands

struct VarianceOptions {
    double X = 1e6;
    std::string kind = "tilde";
    double u_min = 3.0, u_max = 10.0;
    std::size_t points = 25;
    std::vector<double> steps;
};

void run_variance(Run& run, const DescOptions& dopt, const VarianceOptions& o) {
    if (!(o.X > 1.0)) throw DomainError("--X: must exceed 1");
    if (o.steps.empty() && o.points > 0) {
        if (!(o.u_min < o.u_max) && o.points > 1) throw DomainError("--u-min: must be below --u-max");
        if (o.u_max > std::log(o.X)) throw DomainError("--u-max: must not exceed log X (h >= 1)");
        if (o.u_min <= 0.0) throw DomainError("--u-min: must be positive (h < X)");
    }
    auto desc = dopt.descriptor();
    const bool tilde = o.kind == "tilde";
    std::vector<double> grid = o.steps;
    if (grid.empty()) {
        grid = log_spaced_h(o.X, o.u_min, o.u_max, o.points);
        if (!tilde)
            for (double& g : grid) g /= o.X;
    }
    double reach = o.X + 1.0;
    for (double g : grid) reach = std::max(reach, tilde ? o.X + g : o.X * (1.0 + g));
    const auto N = std::uint64_t(std::ceil(reach)) + 1;
    run.inputs = {{"descriptor", dopt.to_json()}, {"X", o.X}, {"kind", o.kind}, {"grid", grid}};
    run.cutoffs = {{"N", N}};

    Csv csv(run.file("variance.csv"), {"X", "h_or_delta", "value", "normalized", "log_X_over_h", "prediction_normalized",
                                       "formula", "regime"});
    if (!grid.empty()) {
        auto t = lambda_table(desc, N, dopt.coefficient_options());
        auto curve = variance_curve(t, o.X, tilde ? VarianceKind::tilde : VarianceKind::delta, grid);
        for (const auto& r : curve.grid) {
            double h = tilde ? r.step : r.step * o.X;
            csv.num(o.X).num(r.step).num(r.value).num(r.normalized).num(std::log(o.X / h));
            bool predictable = tilde ? (h > 1.0 && h < o.X) : (r.step > 0.0 && r.step < 1.0);
            if (predictable) {
                auto p = tilde ? predict_v_tilde(desc, o.X, r.step) : predict_v_delta(desc, o.X, r.step);
                csv.num(p.normalized).text(to_string(p.formula)).text(to_string(p.regime));
            } else {
                csv.text("").text("").text("");
            }
            csv.end();
        }
    }
    run.results["points"] = grid.size();
}

struct PredictOptions {
    std::string stat = "v_tilde";
    double X = std::exp(10.0);
    std::vector<double> steps{std::exp(3.0)};
};

void run_predict(Run& run, const DescOptions& dopt, const PredictOptions& o) {
    auto desc = dopt.descriptor();
    run.inputs = {{"descriptor", dopt.to_json()}, {"statistic", o.stat}, {"X", o.X}, {"steps", o.steps}};
    Csv csv(run.file("predict.csv"), {"statistic", "X", "step", "regime", "formula", "value", "normalized"});
    for (double s : o.steps) {
        PredictionLine p = o.stat == "v_tilde"   ? predict_v_tilde(desc, o.X, s)
                           : o.stat == "v_delta" ? predict_v_delta(desc, o.X, s)
                                                 : predict_pair_correlation(desc, o.X, s);
        csv.text(o.stat).num(o.X).num(s).text(to_string(p.regime)).text(to_string(p.formula)).num(p.value).num(p.normalized);
        csv.end();
    }
    if (auto hs = regime_boundary(desc, o.X)) run.results["regime_boundary_h"] = *hs;
}

struct CoeffOptions {
    std::uint64_t P = 100000;
    std::uint64_t lambda_N = 0;
};

void run_coeffs(Run& run, const DescOptions& dopt, const CoeffOptions& o) {
    auto desc = dopt.descriptor();
    run.inputs = {{"descriptor", dopt.to_json()}};
    run.cutoffs = {{"P", o.P}, {"lambda_N", o.lambda_N}};
    auto primes = prime_coefficients(desc, std::max(o.P, o.lambda_N), dopt.coefficient_options());
    Csv csv(run.file("primes.csv"), {"p", "a", "bad"});
    for (const auto& e : primes.entries) {
        if (e.p > o.P) break;
        csv.integer((long long)e.p).num(e.a).integer(e.bad ? 1 : 0);
        csv.end();
    }
    if (o.lambda_N > 0) {
        auto t = lambda_table(desc, primes, o.lambda_N);
        write_lambda_csv(run.file("lambda.csv").string(), t);
        run.results["psi_N"] = t.psi(double(o.lambda_N));
    }
    run.results["orthogonality_sum"] = orthogonality_sum(primes, double(std::max<std::uint64_t>(o.P, 2)));
}

struct HlOptions {
    std::uint64_t k_max = 30;
    std::uint64_t P = 1000000;
    std::uint64_t X = 1000000;
};

void run_hl(Run& run, const DescOptions& dopt, const HlOptions& o) {
    if (o.k_max < 1) throw DomainError("--k-max: must be >= 1");
    auto desc = dopt.descriptor();
    run.inputs = {{"descriptor", dopt.to_json()}, {"k_max", o.k_max}, {"X", o.X}};
    run.cutoffs = {{"P", o.P}, {"N", o.X + o.k_max}};
    std::optional<CoefficientTable> t;
    if (o.X > 0) t = lambda_table(desc, o.X + o.k_max, dopt.coefficient_options());
    Csv csv(run.file("hl.csv"), {"k", "S", "autocorrelation_over_X", "ratio", "tail_bound"});
    for (std::uint64_t k = 1; k <= o.k_max; ++k) {
        auto s = singular_series(k, o.P);
        csv.integer((long long)k).num(s.value);
        if (t) {
            double a = autocorrelation(*t, o.X, k) / double(o.X);
            csv.num(a);
            if (s.value > 0.0)
                csv.num(a / s.value);
            else
                csv.text("");
        } else {
            csv.text("").text("");
        }
        csv.num(s.tail_bound);
        csv.end();
    }
}

struct ZeroOptions {
    std::string zeros;
    bool no_reflect = false;
    std::string synth;  // picket or uniform
    std::size_t synth_count = 1000;
    double synth_spacing = 1.0, synth_T = 1000.0;
    std::uint64_t seed = 1;

    void add_to(CLI::App* app) {
        app->add_option("--zeros", zeros, "zero ordinates, one per line");
        app->add_flag("--no-reflect", no_reflect, "the file holds signed ordinates");
        app->add_option("--synth", synth, "synthetic list instead of a file: picket or uniform")
            ->check(CLI::IsMember({"picket", "uniform"}));
        app->add_option("--synth-count", synth_count, "number of synthetic ordinates")->capture_default_str();
        app->add_option("--synth-spacing", synth_spacing, "picket spacing")->capture_default_str();
        app->add_option("--synth-T", synth_T, "uniform range [0, T]")->capture_default_str();
        app->add_option("--seed", seed, "random seed")->capture_default_str();
    }

    ZeroList load() const {
        if (!synth.empty()) {
            SynthParams p;
            p.kind = synth == "picket" ? SynthKind::picket : SynthKind::uniform;
            p.count = synth_count;
            p.spacing = synth_spacing;
            p.T = synth_T;
            p.seed = seed;
            p.reflect = !no_reflect;
            return synth_zeros(p);
        }
        if (zeros.empty()) throw DomainError("--zeros: a zero list (or --synth) is required");
        auto z = load_zeros(zeros, !no_reflect);
        z.validate();
        return z;
    }

    json to_json() const {
        json j{{"reflect", !no_reflect}};
        if (synth.empty())
            j["zeros"] = zeros;
        else
            j["synth"] = {{"kind", synth}, {"count", synth_count}, {"spacing", synth_spacing}, {"T", synth_T}, {"seed", seed}};
        return j;
    }
};

struct PairOptions {
    std::vector<double> X;
    double T = 0.0;
};

void run_paircorr(Run& run, const DescOptions& dopt, const ZeroOptions& zopt, const PairOptions& o) {
    auto desc = dopt.descriptor();
    auto z = zopt.load();
    double T = o.T > 0.0 ? o.T : z.max_abs();
    if (!(T > 2.0 * constants::pi)) throw DomainError("--T: must exceed 2 pi (or supply more zeros)");
    std::vector<double> Xs = o.X.empty() ? std::vector<double>{T} : o.X;
    run.inputs = {{"descriptor", dopt.to_json()}, {"zeros", zopt.to_json()}, {"X", Xs}, {"T", T}};
    run.results["zeros_in_window"] = z.signed_window(T).size();
    Csv csv(run.file("paircorr.csv"), {"X", "T", "F", "F_tilde", "prediction", "ratio", "formula"});
    for (double X : Xs) {
        double F = f_statistic(z, X, T), Ft = f_tilde(z, X, T);
        auto p = predict_pair_correlation(desc, X, T);
        csv.num(X).num(T).num(F).num(Ft).num(p.value).num(p.value != 0.0 ? F / p.value : NAN).text(to_string(p.formula));
        csv.end();
    }
}

struct ExplicitOptions {
    std::size_t samples = 50;
    double x_max = 1e4;
    double delta_min = 1e-3, delta_max = 0.5;
    double Z = 0.0;
    double constant = 20.0;
    std::vector<double> x, delta;
};

void run_explicit(Run& run, const DescOptions& dopt, const ZeroOptions& zopt, const ExplicitOptions& o) {
    auto desc = dopt.descriptor();
    auto z = zopt.load();
    double Z = o.Z > 0.0 ? o.Z : z.max_abs();
    std::vector<double> xs = o.x, ds = o.delta;
    if (xs.size() != ds.size()) throw DomainError("--x/--delta: give the same number of values");
    if (xs.empty()) {
        if (!(o.x_max > 2.0)) throw DomainError("--x-max: must exceed 2");
        if (!(o.delta_min > 0.0 && o.delta_min <= o.delta_max)) throw DomainError("--delta-min: need 0 < min <= max");
        std::mt19937_64 rng(zopt.seed);
        for (std::size_t i = 0; i < o.samples; ++i) {
            xs.push_back(2.0 + (o.x_max - 2.0) * unit_uniform(rng));
            ds.push_back(o.delta_min * std::pow(o.delta_max / o.delta_min, unit_uniform(rng)));
        }
    }
    double reach = 2.0;
    for (std::size_t i = 0; i < xs.size(); ++i) reach = std::max(reach, xs[i] * (1.0 + ds[i]));
    const auto N = std::uint64_t(std::ceil(reach)) + 1;
    run.inputs = {{"descriptor", dopt.to_json()}, {"zeros", zopt.to_json()}, {"x", xs}, {"delta", ds}, {"constant", o.constant}};
    run.cutoffs = {{"Z", Z}, {"N", N}};
    auto t = lambda_table(desc, N, dopt.coefficient_options());
    Csv csv(run.file("explicit.csv"), {"x", "delta", "lhs", "zero_sum", "residual", "envelope", "ratio"});
    double worst = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        auto r = explicit_formula_residual(t, z, xs[i], ds[i], Z);
        double ratio = std::abs(r.residual) / r.envelope;
        worst = std::max(worst, ratio);
        csv.num(xs[i]).num(ds[i]).num(r.lhs).num(r.zero_sum).num(r.residual).num(r.envelope).num(ratio);
        csv.end();
    }
    run.results["worst_ratio"] = worst;
    run.results["pass"] = worst <= o.constant;
    if (worst > o.constant)
        throw CheckFailure("explicit: |residual| reached " + std::to_string(worst) + " envelopes (limit " +
                           std::to_string(o.constant) + ")");
}

void run_tauberian(Run& run) {
    auto rows = tauberian_suite::run();
    Csv csv(run.file("tauberian.csv"), {"check", "parameter", "computed", "predicted", "error", "tolerance", "pass"});
    std::size_t failed = 0;
    for (const auto& r : rows) {
        csv.text(r.check).num(r.parameter).num(r.computed).num(r.predicted).num(r.error).num(r.tolerance).integer(r.pass());
        csv.end();
        if (!r.pass()) ++failed;
    }
    run.results = {{"checks", rows.size()}, {"failed", failed}};
    if (failed) throw CheckFailure("tauberian: " + std::to_string(failed) + " check(s) failed");
}

struct EulerOptions {
    std::uint64_t P = 100000;
    int L = 8;
    double eps = 1e-2;
    std::vector<double> r{-0.2, -0.1, 0.0, 0.1, 0.2};
    std::vector<double> eta{-1.0, -0.1, 0.0, 0.1, 1.0};
    double t = 100.0;
};

void run_euler(Run& run, const DescOptions& dopt, const EulerOptions& o) {
    auto desc = dopt.descriptor();
    TruncationPolicy pol{o.P, o.L, o.eps};
    pol.validate();
    auto primes = prime_coefficients(desc, o.P, dopt.coefficient_options());
    run.inputs = {{"descriptor", dopt.to_json()}, {"r", o.r}, {"eta", o.eta}, {"t", o.t}};
    run.cutoffs = {{"P", o.P}, {"L", o.L}, {"eps", o.eps}};

    Csv ab(run.file("euler_ab.csv"), {"r", "A_re", "A_im", "B_re", "B_im", "A_half_cutoff_re", "B_half_cutoff_re"});
    for (double r : o.r) {
        auto a = a_f_detail(primes, r, pol);
        auto b = b_f_detail(primes, r, pol);
        ab.num(r).num(a.value.real()).num(a.value.imag()).num(b.value.real()).num(b.value.imag());
        ab.num(a.half_cutoff_value.real()).num(b.half_cutoff_value.real());
        ab.end();
    }
    Csv g(run.file("rcs.csv"), {"eta", "t", "g_re", "g_im", "regular_re", "regular_im", "drift", "flagged"});
    for (double e : o.eta) {
        auto v = rcs_integrand(desc, primes, e, o.t, pol);
        g.num(e).num(o.t).num(v.value.real()).num(v.value.imag()).num(v.regular.real()).num(v.regular.imag());
        g.num(v.drift).integer(v.flagged ? 1 : 0);
        g.end();
    }
    auto two = tensor_product_FxF(primes, 2.0, pol);
    run.results["tensor_at_2"] = {{"value", two.value.real()}, {"tail_estimate", two.tail_estimate}, {"drift", two.drift}};
    run.results["residue_pole_free"] = residue_from_pole_free_part(primes, pol);
    try {
        auto r = residue_FxF(primes, pol);
        run.results["residue_extrapolated"] = {{"value", r.value}, {"spread", r.spread}};
    } catch (const ConvergenceError& e) {
        run.results["residue_extrapolated"] = {{"error", e.what()}};
    }
}

void run_selftest(Run& run) {
    Csv csv(run.file("selftest.csv"), {"check", "worst", "tolerance", "pass"});
    std::size_t failed = 0;
    for (auto& check : selftest::all_checks()) {
        auto r = check();
        std::printf("%s  %s (worst %.3e, tolerance %.1e)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.worst, r.tolerance);
        csv.text(r.name).num(r.worst).num(r.tolerance).integer(r.pass ? 1 : 0);
        csv.end();
        if (!r.pass) ++failed;
    }
    run.results = {{"failed", failed}};
    if (failed) throw CheckFailure("selftest: " + std::to_string(failed) + " check(s) failed");
}

std::size_t write_to_file(char* data, std::size_t size, std::size_t n, void* user) {
    return std::fwrite(data, size, n, static_cast<std::FILE*>(user)) * size;
}

void run_fetch(Run& run, const std::string& url, const std::string& dest, bool reflect) {
    if (url.empty()) throw DomainError("--url: required");
    std::string tmp = dest + ".part";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (!f) throw DomainError("--output: cannot write " + tmp);
    CURL* curl = curl_easy_init();
    curl_easy_setopt(curl, CURLOPT_URL, url.c_str());
    curl_easy_setopt(curl, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(curl, CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(curl, CURLOPT_WRITEFUNCTION, write_to_file);
    curl_easy_setopt(curl, CURLOPT_WRITEDATA, f);
    CURLcode rc = curl_easy_perform(curl);
    curl_easy_cleanup(curl);
    std::fclose(f);
    if (rc != CURLE_OK) {
        fs::remove(tmp);
        throw std::runtime_error("fetch-zeros: " + std::string(curl_easy_strerror(rc)));
    }
    ZeroList z = load_zeros(tmp, reflect);  // refuse files that do not parse
    fs::rename(tmp, dest);
    run.inputs = {{"url", url}, {"reflect", reflect}};
    run.results = {{"path", dest}, {"count", z.ordinates.size()}, {"max_abs", z.max_abs()}};
}

// Re-runs the recorded arguments into `out` and compares the CSV bodies with the originals.
int run_replay(const std::string& manifest_path, const fs::path& out, const std::string& self);

// ---------------------------------------------------------------- driver

struct Cli {
    CLI::App app{"Short-interval variance and pair-correlation experiments for L-functions"};
    std::string out = ".";
    DescOptions desc;
    ZeroOptions zeros;
    VarianceOptions variance;
    PredictOptions predict;
    CoeffOptions coeffs;
    HlOptions hl;
    PairOptions pair;
    ExplicitOptions expl;
    EulerOptions euler;
    std::string url, fetch_output, manifest;
    bool fetch_reflect = true;

    CLI::App* sub(const std::string& name, const std::string& help, bool with_desc = true) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--out", out, "output directory")->capture_default_str();
        if (with_desc) desc.add_to(s);
        return s;
    }

    Cli() {
        app.set_config("--config", "", "read options from a TOML/INI file");
        app.require_subcommand(1);
        app.set_version_flag("--version", std::string(lvar::version));

        auto* c = sub("coeffs", "build (and cache) prime coefficient and Lambda tables");
        c->add_option("--P", coeffs.P, "prime cutoff")->capture_default_str();
        c->add_option("--lambda-N", coeffs.lambda_N, "also write Lambda_F(n) for n <= N");

        auto* v = sub("variance", "variance curve with prediction overlay");
        v->add_option("--X", variance.X, "upper limit of integration")->capture_default_str();
        v->add_option("--kind", variance.kind, "tilde (psi(x+h)) or delta (psi(x(1+delta)))")
            ->check(CLI::IsMember({"tilde", "delta"}))
            ->capture_default_str();
        v->add_option("--u-min", variance.u_min, "smallest log(X/h)")->capture_default_str();
        v->add_option("--u-max", variance.u_max, "largest log(X/h)")->capture_default_str();
        v->add_option("--points", variance.points, "number of grid points")->capture_default_str();
        v->add_option("--steps", variance.steps, "explicit h (or delta) values, increasing");

        auto* p = sub("predict", "closed-form main terms");
        p->add_option("--stat", predict.stat, "v_tilde, v_delta or paircorr")
            ->check(CLI::IsMember({"v_tilde", "v_delta", "paircorr"}))
            ->capture_default_str();
        p->add_option("--X", predict.X, "X")->capture_default_str();
        p->add_option("--step", predict.steps, "h, delta or T values");

        auto* h = sub("hl", "singular series and autocorrelation of Lambda_F");
        h->add_option("--k-max", hl.k_max, "shifts k = 1..k_max")->capture_default_str();
        h->add_option("--P", hl.P, "prime cutoff of the singular series")->capture_default_str();
        h->add_option("--X", hl.X, "autocorrelation length (0 to skip)")->capture_default_str();

        auto* pc = sub("paircorr", "pair-correlation sums from zero ordinates");
        zeros.add_to(pc);
        pc->add_option("--X", pair.X, "X values (default X = T)");
        pc->add_option("--T", pair.T, "window [-T, T] (default: largest ordinate)");

        auto* e = sub("explicit", "explicit-formula residuals against the error envelope");
        zeros.add_to(e);
        e->add_option("--samples", expl.samples, "random (x, delta) pairs")->capture_default_str();
        e->add_option("--x-max", expl.x_max, "largest x")->capture_default_str();
        e->add_option("--delta-min", expl.delta_min, "smallest delta (log-uniform)")->capture_default_str();
        e->add_option("--delta-max", expl.delta_max, "largest delta")->capture_default_str();
        e->add_option("--Z", expl.Z, "zero height cutoff (default: largest ordinate)");
        e->add_option("--constant", expl.constant, "allowed multiple of the envelope")->capture_default_str();
        e->add_option("--x", expl.x, "explicit x values");
        e->add_option("--delta", expl.delta, "explicit delta values, paired with --x");

        sub("tauberian", "kernel lemma checks", false);

        auto* eu = sub("euler", "Euler-product constants and the ratios density g(eta, t)");
        eu->add_option("--P", euler.P, "prime cutoff")->capture_default_str();
        eu->add_option("--L", euler.L, "minimum local exponent")->capture_default_str();
        eu->add_option("--eps", euler.eps, "principal-value radius")->capture_default_str();
        eu->add_option("--r", euler.r, "real r values for A_F, B_F");
        eu->add_option("--eta", euler.eta, "eta values for g");
        eu->add_option("--t", euler.t, "height t for g")->capture_default_str();

        sub("selftest", "library routines against independent reference computations", false);

        auto* f = sub("fetch-zeros", "download a zero list to a local file", false);
        f->add_option("--url", url, "source URL")->required();
        f->add_option("--output", fetch_output, "destination file")->required();
        f->add_flag("!--no-reflect", fetch_reflect, "the file holds signed ordinates");

        auto* r = app.add_subcommand("replay", "re-run a manifest and compare its CSV files");
        r->add_option("manifest", manifest, "manifest written by an earlier run")->required();
        r->add_option("--out", out, "directory for the re-run")->required();
    }

    int dispatch(const std::vector<std::string>& args, const std::string& self) {
        CLI::App* s = app.get_subcommands().front();
        const std::string name = s->get_name();
        if (name == "replay") return run_replay(manifest, out, self);

        Run run;
        run.subcommand = name;
        run.out = out;
        // arguments after the subcommand name, minus --out
        for (std::size_t i = 1; i < args.size(); ++i) {
            if (args[i] == "--out") {
                ++i;
                continue;
            }
            if (args[i].rfind("--out=", 0) == 0) continue;
            run.argv.push_back(args[i]);
        }
        fs::create_directories(run.out);
        int status = exit_ok;
        try {
            if (name == "coeffs") run_coeffs(run, desc, coeffs);
            else if (name == "variance") run_variance(run, desc, variance);
            else if (name == "predict") run_predict(run, desc, predict);
            else if (name == "hl") run_hl(run, desc, hl);
            else if (name == "paircorr") run_paircorr(run, desc, zeros, pair);
            else if (name == "explicit") run_explicit(run, desc, zeros, expl);
            else if (name == "tauberian") run_tauberian(run);
            else if (name == "euler") run_euler(run, desc, euler);
            else if (name == "selftest") run_selftest(run);
            else if (name == "fetch-zeros") run_fetch(run, url, fetch_output, fetch_reflect);
        } catch (const CheckFailure& e) {
            std::fprintf(stderr, "%s\n", e.what());
            status = exit_check;
        }
        run.results["exit_status"] = status;
        run.write_manifest();
        return status;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_replay(const std::string& manifest_path, const fs::path& out, const std::string& self) {
    std::ifstream in(manifest_path);
    if (!in) throw DomainError("replay: cannot read " + manifest_path);
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("replay: " + manifest_path + " is not valid JSON: " + e.what());
    }
    if (!m.contains("subcommand") || !m.contains("argv")) throw DomainError("replay: manifest lacks subcommand/argv");
    std::vector<std::string> args{self, m["subcommand"].get<std::string>()};
    for (auto& a : m["argv"]) args.push_back(a.get<std::string>());
    args.push_back("--out");
    args.push_back(out.string());
    Cli cli;
    std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
    cli.app.parse(rev);
    int status = cli.dispatch(std::vector<std::string>(args.begin() + 1, args.end()), self);
    const fs::path original = fs::path(manifest_path).parent_path();
    int mismatches = 0;
    for (auto& name : m["outputs"]) {
        std::string n = name.get<std::string>();
        bool same = slurp(original / n) == slurp(out / n);
        std::printf("%s  %s\n", same ? "same" : "DIFFERS", n.c_str());
        if (!same) ++mismatches;
    }
    return mismatches ? exit_check : status;
}

}  // namespace

int main(int argc, char** argv) {
    Cli cli;
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        cli.app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = cli.app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }
    try {
        return cli.dispatch(args, argv[0]);
    } catch (const DomainError& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return exit_usage;
    } catch (const RangeError& e) {
        std::fprintf(stderr, "invalid config: %s\n", e.what());
        return exit_usage;
    } catch (const lvar::ParseError& e) {
        std::fprintf(stderr, "invalid input: %s\n", e.what());
        return exit_usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_check;
    }
}
