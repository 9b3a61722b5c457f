// Copyright 2026 The shadowframe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "shadowframe/errors.h"
#include "shadowframe/frame.h"
#include "shadowframe/povm.h"
#include "shadowframe/serialization.h"
#include "shadowframe/simulator.h"
#include "shadowframe/variance.h"
#include "shadowframe/version.h"

namespace shadowframe::cli {

namespace {

struct Options {
    std::string builtin;
    std::string json_path;
    int dim = 2;
    int outcomes = 0;
    uint64_t seed = 1;
    std::string observable = "random";
    std::string state = "pure:0";
    std::string prior;
    std::string dual = "canonical-estimator";
    bool pseudo = false;
    double purity = 1.0;
    bool include_dual = false;
    std::int64_t shots = 100000;
    int groups = 0;
    int bins = 50;
    int workers = 1;
    int realizations = 0;
    bool pmf = false;
    std::string dims = "2,3,5,7,11,13";
    std::string out;
    std::string csv;
    std::string growth_csv;
};

// Stream indices under the root seed.
constexpr uint64_t kPovmStream = 1;
constexpr uint64_t kObservableStream = 2;
constexpr uint64_t kSimulationStream = 3;
constexpr uint64_t kReportStream = 4;

struct Source {
    std::optional<Povm> povm;
    bool covariant = false;
    int dim = 0;
    std::string label;
};

Source resolve_source(const Options &o) {
    Source s;
    if (!o.json_path.empty()) {
        Json j = read_json_file(o.json_path);
        if (j.is_object() && j.contains("povm")) {
            j = j["povm"];
        }
        s.povm = povm_from_json(j);
        s.label = "json";
    } else {
        const std::string &b = o.builtin.empty() ? std::string("mub") : o.builtin;
        s.label = b;
        if (b == "mub") {
            s.povm = mub_povm(o.dim);
        } else if (b == "toy-projective") {
            s.povm = toy_povm(ToyPovm::projective);
        } else if (b == "toy-non-ic") {
            s.povm = toy_povm(ToyPovm::non_ic);
        } else if (b == "toy-ic") {
            s.povm = toy_povm(ToyPovm::ic);
        } else if (b == "random") {
            Rng rng = make_rng(o.seed, kPovmStream);
            s.povm = random_rank1(o.dim, o.outcomes > 0 ? o.outcomes : o.dim * o.dim, rng);
        } else if (b == "projective") {
            std::vector<CVector> basis;
            for (int k = 0; k < o.dim; ++k) {
                basis.push_back(ket(o.dim, k));
            }
            s.povm = projective(basis);
        } else if (b == "covariant") {
            if (o.dim < 2) {
                throw DimensionError("covariant: d must be at least 2");
            }
            s.covariant = true;
            s.dim = o.dim;
            return s;
        } else {
            throw ValidationError("unknown builtin POVM '" + b + "'");
        }
    }
    s.dim = s.povm->dim();
    return s;
}

void require_valid(const Povm &p) {
    const PovmValidation v = validate(p);
    if (!v.passed()) {
        std::string msg = "POVM failed validation:";
        for (const auto &f : v.failures) {
            msg += " " + f + ";";
        }
        throw ValidationError(msg);
    }
}

const Povm &require_finite(const Source &s, const char *command) {
    if (s.covariant) {
        throw ValidationError(std::string(command) + ": the covariant measurement has no finite POVM");
    }
    return *s.povm;
}

HermOperator pauli_string(const std::string &spec, int d) {
    CMatrix m = CMatrix::Identity(1, 1);
    for (char c : spec) {
        CMatrix f;
        switch (c) {
            case 'I':
                f = CMatrix::Identity(2, 2);
                break;
            case 'X':
                f = pauli_x().matrix();
                break;
            case 'Y':
                f = pauli_y().matrix();
                break;
            case 'Z':
                f = pauli_z().matrix();
                break;
            default:
                throw ValidationError("observable: unknown Pauli letter in '" + spec + "'");
        }
        CMatrix k(m.rows() * 2, m.cols() * 2);
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                k.block(2 * i, 2 * j, 2, 2) = m(i, j) * f;
            }
        }
        m = std::move(k);
    }
    if (m.rows() != d) {
        throw DimensionError("observable: Pauli string '" + spec + "' does not act on dimension " + std::to_string(d));
    }
    return HermOperator(m);
}

int parse_index(const std::string &text, int d, const char *what) {
    int k = 0;
    try {
        std::size_t used = 0;
        k = std::stoi(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
    } catch (const std::exception &) {
        throw ValidationError(std::string(what) + ": bad index '" + text + "'");
    }
    if (k < 0 || k >= d) {
        throw DimensionError(std::string(what) + ": index out of range");
    }
    return k;
}

bool starts_with(const std::string &s, const std::string &prefix) { return s.rfind(prefix, 0) == 0; }

HermOperator resolve_observable(const Options &o, int d) {
    const std::string &spec = o.observable;
    if (spec == "random") {
        Rng rng = make_rng(o.seed, kObservableStream);
        return random_traceless_observable(d, rng);
    }
    if (starts_with(spec, "proj:")) {
        return HermOperator::basis_projector(d, parse_index(spec.substr(5), d, "observable"));
    }
    if (starts_with(spec, "json:")) {
        return operator_from_json(read_json_file(spec.substr(5)), d);
    }
    return pauli_string(spec, d);
}

HermOperator resolve_state(const std::string &spec, int d, const char *what) {
    if (spec == "mixed") {
        return HermOperator::identity(d) / d;
    }
    if (starts_with(spec, "pure:")) {
        return HermOperator::basis_projector(d, parse_index(spec.substr(5), d, what));
    }
    if (starts_with(spec, "json:")) {
        HermOperator rho = operator_from_json(read_json_file(spec.substr(5)), d);
        if (!is_density_matrix(rho)) {
            throw ValidationError(std::string(what) + ": not a density matrix");
        }
        return rho;
    }
    throw ValidationError(std::string(what) + ": expected pure:k, mixed or json:PATH");
}

DualFrame resolve_dual(const Options &o, const Povm &p) {
    const DualMode mode = o.pseudo ? DualMode::pseudo : DualMode::strict;
    if (o.dual == "canonical-estimator") {
        return canonical_estimator(p, mode);
    }
    if (o.dual == "canonical-dual") {
        return canonical_dual(p, mode);
    }
    if (o.dual == "min-variance") {
        if (o.prior.empty()) {
            throw ValidationError("dual min-variance needs --prior");
        }
        return min_variance_dual(p, resolve_state(o.prior, p.dim(), "prior"), mode);
    }
    throw ValidationError("unknown dual '" + o.dual + "'");
}

std::vector<int> parse_dims(const std::string &text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception &) {
            throw ValidationError("bad dimension list '" + text + "'");
        }
    }
    if (out.empty()) {
        throw ValidationError("empty dimension list");
    }
    return out;
}

Json config_json(const std::string &command, const Options &o) {
    Json c;
    c["command"] = command;
    c["seed"] = o.seed;
    if (command == "scan") {
        c["dims"] = o.dims;
        c["observable"] = o.observable;
        return c;
    }
    c["builtin"] = o.json_path.empty() ? (o.builtin.empty() ? "mub" : o.builtin) : "";
    c["json"] = o.json_path;
    c["dim"] = o.dim;
    c["outcomes"] = o.outcomes;
    if (command == "povm") {
        return c;
    }
    c["observable"] = o.observable;
    c["state"] = o.state;
    c["prior"] = o.prior;
    c["dual"] = o.dual;
    c["pseudo"] = o.pseudo;
    if (command == "analyze") {
        c["purity"] = o.purity;
        c["include_dual"] = o.include_dual;
    } else {
        c["shots"] = o.shots;
        c["groups"] = o.groups;
        c["bins"] = o.bins;
        c["workers"] = o.workers;
        c["realizations"] = o.realizations;
        c["pmf"] = o.pmf;
    }
    return c;
}

Json header(const std::string &command, const Options &o, const std::string &hash) {
    Json h;
    h["tool"] = kToolName;
    h["version"] = kVersion;
    h["config"] = config_json(command, o);
    h["seed"] = o.seed;
    h["povm_hash"] = hash;
    return h;
}

std::string csv_preamble(const Json &h) {
    std::string s;
    s += "# tool=" + h["tool"].get<std::string>() + " version=" + h["version"].get<std::string>() + "\n";
    s += "# config=" + h["config"].dump() + "\n";
    s += "# seed=" + std::to_string(h["seed"].get<uint64_t>()) + "\n";
    s += "# povm_hash=" + h["povm_hash"].get<std::string>() + "\n";
    return s;
}

std::optional<std::string> output_dir() {
    const char *env = std::getenv(kOutputDirEnv);
    if (env == nullptr || *env == '\0') {
        return std::nullopt;
    }
    return std::string(env);
}

// Writes to `explicit_path` if given, else to $SHADOWFRAME_OUTPUT_DIR/default_name, else
// (when `to_stdout`) to out.
void emit(const std::string &explicit_path, const std::string &default_name, const std::string &text,
          std::ostream &out, bool to_stdout) {
    if (!explicit_path.empty()) {
        write_text_file(explicit_path, text);
        return;
    }
    if (auto dir = output_dir()) {
        std::error_code ec;
        std::filesystem::create_directories(*dir, ec);
        write_text_file((std::filesystem::path(*dir) / default_name).string(), text);
        return;
    }
    if (to_stdout) {
        out << text;
    }
}

std::string pretty(const Json &j) { return j.dump(2) + "\n"; }

Json histogram_json(const std::vector<HistogramBin> &bins) {
    Json out = Json::array();
    for (const auto &b : bins) {
        out.push_back({{"low", b.low}, {"high", b.high}, {"count", b.count}, {"density", b.density}});
    }
    return out;
}

Json real_list(const RVector &v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

int cmd_povm(const Options &o, std::ostream &out) {
    const Source src = resolve_source(o);
    const Povm &p = require_finite(src, "povm");
    const PovmValidation v = validate(p);
    Json j = header("povm", o, povm_hash(p));
    j["povm"] = povm_to_json(p);
    Json r;
    r["validation"] = validation_to_json(v);
    r["outcomes"] = p.size();
    if (v.passed()) {
        const FrameOperator f = frame_superop(p);
        r["frame_rank"] = f.rank();
        r["informationally_complete"] = f.informationally_complete();
        const TightnessCheck t = is_tight(p);
        r["tight"] = {{"tight", t.tight}, {"a", t.a}, {"b", t.b}};
        if (p.rank1_form()) {
            const DesignCheck d2 = is_2design(p);
            r["design2"] = {{"holds", d2.holds}, {"residual", d2.residual}};
            if (p.dim() <= 10) {
                const DesignCheck d3 = is_3design(p);
                r["design3"] = {{"holds", d3.holds}, {"residual", d3.residual}};
            } else {
                r["design3"] = nullptr;
            }
        } else {
            r["design2"] = nullptr;
            r["design3"] = nullptr;
        }
    }
    j["report"] = std::move(r);
    emit(o.out, "povm.json", pretty(j), out, true);
    return v.passed() ? kOk : kValidationFailure;
}

int cmd_analyze(const Options &o, std::ostream &out) {
    const Source src = resolve_source(o);
    const Povm &p = require_finite(src, "analyze");
    require_valid(p);
    const int d = p.dim();
    const DualFrame dual = resolve_dual(o, p);
    const HermOperator obs = resolve_observable(o, d);
    const HermOperator rho = resolve_state(o.state, d, "state");

    Json j = header("analyze", o, povm_hash(p));
    const FrameOperator plain = frame_superop(p);
    const FrameOperator canon = canonical_frame_superop(p);
    const TightnessCheck t = is_tight(p);
    Json frame;
    frame["rank"] = plain.rank();
    frame["informationally_complete"] = plain.informationally_complete();
    frame["spectrum"] = real_list(plain.spectrum().eigenvalues);
    frame["canonical_spectrum"] = real_list(canon.spectrum().eigenvalues);
    frame["tight"] = {{"tight", t.tight}, {"a", t.a}, {"b", t.b}};
    j["frame"] = std::move(frame);
    j["dual_kind"] = to_string(dual.kind);
    j["support_restricted"] = dual.support_restricted;
    j["reconstruction_defect"] = reconstruction_defect(p, dual);
    j["observable"] = operator_to_json(obs);
    j["state"] = operator_to_json(rho);
    j["estimator_values"] = dual.values(obs);
    if (plain.informationally_complete()) {
        const EstimatorBound eb = estimator_bound(p, dual, obs);
        j["estimator_bound"] = {{"bound", eb.bound},
                                {"plain_bound", eb.plain_bound},
                                {"max_abs_value", eb.max_abs_value},
                                {"holds", eb.holds}};
    } else {
        j["estimator_bound"] = nullptr;
    }
    j["report"] = report_to_json(make_variance_report(p, dual, obs, rho, o.purity, derive_seed(o.seed, kReportStream)));
    if (o.include_dual) {
        j["dual"] = dual_to_json(dual);
    }
    emit(o.out, "analyze.json", pretty(j), out, true);
    return kOk;
}

int cmd_simulate(const Options &o, std::ostream &out) {
    const Source src = resolve_source(o);
    const int d = src.dim;
    const HermOperator obs = resolve_observable(o, d);
    const HermOperator rho = resolve_state(o.state, d, "state");
    const uint64_t sim_seed = derive_seed(o.seed, kSimulationStream);
    const std::optional<int> groups = o.groups > 0 ? std::optional<int>(o.groups) : std::nullopt;

    std::optional<Povm> p;
    std::optional<DualFrame> dual;
    Json j = header("simulate", o, src.covariant ? std::string("covariant") : povm_hash(*src.povm));
    j["expected_mean"] = hs_inner(obs, rho);
    if (src.covariant) {
        j["reference_variance"] = variance_3design(rho, obs, d);
        j["reference_variance_method"] = "3design_closed_form";
    } else {
        p = *src.povm;
        require_valid(*p);
        dual = resolve_dual(o, *p);
        j["dual_kind"] = to_string(dual->kind);
        j["reference_variance"] = variance_exact(*p, *dual, rho, obs);
        j["reference_variance_method"] = "exact";
        if (o.pmf) {
            Json pmf = Json::array();
            for (const auto &m : estimator_pmf(*p, *dual, rho, obs)) {
                pmf.push_back({{"value", m.value}, {"probability", m.probability}});
            }
            j["pmf"] = std::move(pmf);
        }
    }

    std::vector<double> values;
    std::string growth_text;
    if (o.realizations > 0) {
        values = src.covariant ? covariant_realization_means(d, rho, obs, o.shots, o.realizations, sim_seed)
                               : realization_means(*p, *dual, rho, obs, o.shots, o.realizations, sim_seed);
        j["mode"] = "realizations";
        j["summary"] = summary_to_json(summarize(values, groups, o.seed));
    } else {
        RunSummary s;
        if (src.covariant) {
            values = covariant_values(d, rho, obs, o.shots, sim_seed);
            s = summarize(values, groups, o.seed);
        } else if (o.workers > 1) {
            ParallelRun run = simulate_parallel(*p, *dual, rho, obs, o.shots, sim_seed, o.workers, groups);
            values = std::move(run.values);
            s = run.summary;
            s.seed = o.seed;
        } else {
            values = simulate_values(*p, *dual, rho, obs, o.shots, sim_seed);
            s = summarize(values, groups, o.seed);
        }
        j["mode"] = "single_run";
        j["summary"] = summary_to_json(s);
        const std::vector<std::int64_t> checkpoints = log_checkpoints(o.shots, 10);
        Json growth = Json::array();
        growth_text = "N,mean,sample_variance\n";
        for (const auto &g : growth_curve(values, checkpoints)) {
            growth.push_back({{"N", g.n}, {"mean", g.mean}, {"sample_variance", g.sample_variance}});
            growth_text += std::to_string(g.n) + "," + format_double(g.mean) + "," + format_double(g.sample_variance) + "\n";
        }
        j["growth"] = std::move(growth);
    }
    const std::vector<HistogramBin> hist = histogram_export(values, o.bins);
    j["histogram"] = histogram_json(hist);

    const std::string preamble = csv_preamble(j);
    emit(o.out, "simulate.json", pretty(j), out, true);
    emit(o.csv, "simulate.csv", preamble + histogram_csv(hist), out, false);
    if (!growth_text.empty()) {
        emit(o.growth_csv, "growth.csv", preamble + growth_text, out, false);
    }
    return kOk;
}

int cmd_scan(const Options &o, std::ostream &out) {
    std::string rows = "d,lambda_min,A_op,A_trace_over_d,form,identity_defect,povm_hash\n";
    for (int d : parse_dims(o.dims)) {
        if (!is_prime(d)) {
            throw ValidationError("scan: dimension " + std::to_string(d) + " is not prime");
        }
        const Povm p = mub_povm(d);
        const DualFrame dual = canonical_estimator(p);
        Options per_d = o;
        per_d.seed = derive_seed(o.seed, static_cast<uint64_t>(d));
        const HermOperator obs = resolve_observable(per_d, d);
        const MinMax mm = variance_minmax(p, dual, obs);
        const double form = superop_form(canonical_frame_superop(p).inverse(), obs, obs);
        rows += std::to_string(d) + "," + format_double(mm.min) + "," + format_double(mm.max) + "," +
                format_double(mm.trace_over_d) + "," + format_double(form) + "," +
                format_double(std::abs(mm.trace_over_d - form)) + "," + povm_hash(p) + "\n";
    }
    emit(o.out, "scan.csv", csv_preamble(header("scan", o, "per_row")) + rows, out, true);
    return kOk;
}

void add_source_options(CLI::App *sub, Options &o) {
    auto *b = sub->add_option("--builtin", o.builtin,
                              "mub | toy-projective | toy-non-ic | toy-ic | random | projective | covariant");
    auto *j = sub->add_option("--json", o.json_path, "POVM JSON file (raw or the output of `povm`)");
    b->excludes(j);
    j->excludes(b);
    sub->add_option("--dim", o.dim, "Hilbert-space dimension for builtins")->check(CLI::Range(2, 64));
    sub->add_option("--outcomes", o.outcomes, "outcome count for --builtin random (default d^2)");
}

void add_estimator_options(CLI::App *sub, Options &o) {
    sub->add_option("--observable", o.observable, "random | Pauli string (e.g. XZ) | proj:k | json:PATH");
    sub->add_option("--state", o.state, "pure:k | mixed | json:PATH");
    sub->add_option("--prior", o.prior, "prior for --dual min-variance: pure:k | mixed | json:PATH");
    sub->add_option("--dual", o.dual, "canonical-estimator | canonical-dual | min-variance");
    sub->add_flag("--pseudo", o.pseudo, "allow non-IC POVMs via support-restricted duals");
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    Options o;
    CLI::App app{"Shadow tomography on general measurement frames", kToolName};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    app.add_option("--seed", o.seed, "root RNG seed")->capture_default_str();
    app.add_option("--out", o.out, "output path (default: $" + std::string(kOutputDirEnv) + "/<command>.* or stdout)");

    auto *povm = app.add_subcommand("povm", "build, validate and export a POVM");
    add_source_options(povm, o);

    auto *analyze = app.add_subcommand("analyze", "frame spectrum, duals, variances and bounds");
    add_source_options(analyze, o);
    add_estimator_options(analyze, o);
    analyze->add_option("--purity", o.purity, "purity P for state-averaged quantities");
    analyze->add_flag("--include-dual", o.include_dual, "embed the dual-frame elements");

    auto *simulate = app.add_subcommand("simulate", "shot-level Monte Carlo run");
    add_source_options(simulate, o);
    add_estimator_options(simulate, o);
    simulate->add_option("--shots", o.shots, "shots per run (N)")->check(CLI::Range(std::int64_t{2}, std::int64_t{1} << 40));
    simulate->add_option("--groups", o.groups, "median-of-means group count (K)");
    simulate->add_option("--bins", o.bins, "histogram bins")->check(CLI::PositiveNumber);
    simulate->add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1, 256));
    simulate->add_option("--realizations", o.realizations, "R realizations of N-shot means (histogram mode)");
    simulate->add_flag("--pmf", o.pmf, "include the exact estimator distribution");
    simulate->add_option("--csv", o.csv, "histogram CSV path");
    simulate->add_option("--growth-csv", o.growth_csv, "growth curve CSV path");

    auto *scan = app.add_subcommand("scan", "A-operator statistics for MUB POVMs over prime dimensions");
    scan->add_option("--dims", o.dims, "comma-separated prime dimensions");
    scan->add_option("--observable", o.observable, "random | proj:k (random is reseeded per d)");

    // Options given after a subcommand name belong to it; --seed and --out are global.
    for (auto *sub : {povm, analyze, simulate, scan}) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (povm->parsed()) {
            return cmd_povm(o, out);
        }
        if (analyze->parsed()) {
            return cmd_analyze(o, out);
        }
        if (simulate->parsed()) {
            return cmd_simulate(o, out);
        }
        return cmd_scan(o, out);
    } catch (const IoError &e) {
        err << Json{{"error", "io"}, {"message", e.what()}}.dump() << "\n";
        return kIoError;
    } catch (const DomainError &e) {
        err << Json{{"error", "domain"}, {"message", e.what()}}.dump() << "\n";
        return kDomainError;
    } catch (const std::invalid_argument &e) {
        err << Json{{"error", "validation"}, {"message", e.what()}}.dump() << "\n";
        return kValidationFailure;
    }
}

}  // namespace shadowframe::cli
