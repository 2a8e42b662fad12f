// depfn command-line tool: sample the copula families, estimate the
// dependence functions phi/kappa from data, emit reference curves, run the
// convergence study, and cross-check the two scalar representations of xi.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "depfn/depfn.hpp"

namespace {

constexpr int kSchemaVersion = 1;

struct FamilyArgs {
    std::string family;
    double alpha = 0.0, beta = 0.0, rho = 0.0;
    std::size_t d = 1;
    int m = 0;
    std::string knots;
    CLI::Option *alpha_opt = nullptr, *beta_opt = nullptr, *rho_opt = nullptr, *m_opt = nullptr,
                *knots_opt = nullptr;
};

void add_family_options(CLI::App* cmd, FamilyArgs& fa) {
    cmd->add_option("--family", fa.family, "copula family")
        ->required()
        ->check(CLI::IsMember({"frechet", "gaussian", "marshall_olkin", "mo", "jump", "lsl",
                               "independence", "comonotone"}));
    fa.alpha_opt = cmd->add_option("--alpha", fa.alpha, "frechet / marshall_olkin alpha");
    fa.beta_opt = cmd->add_option("--beta", fa.beta, "frechet / marshall_olkin beta");
    fa.rho_opt = cmd->add_option("--rho", fa.rho, "gaussian correlation parameter");
    cmd->add_option("--d", fa.d, "gaussian predictor dimension (default 1)");
    fa.m_opt = cmd->add_option("--m", fa.m, "jump parameter m");
    fa.knots_opt = cmd->add_option("--knots", fa.knots,
                                   "lsl diagonal knots, e.g. 0:0,0.5:0.35,1:1");
}

depfn::DiagonalSpec parse_knots(const std::string& text) {
    depfn::DiagonalSpec diag;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw depfn::config_error("lsl: knot '" + item + "' is not t:value");
        try {
            diag.knots.emplace_back(std::stod(item.substr(0, colon)),
                                    std::stod(item.substr(colon + 1)));
        } catch (const std::exception&) {
            throw depfn::config_error("lsl: cannot parse knot '" + item + "'");
        }
    }
    diag.validate();
    return diag;
}

depfn::CopulaSpec build_spec(const FamilyArgs& fa) {
    using namespace depfn;
    auto require = [&](CLI::Option* opt, const char* name) {
        if (opt->count() == 0)
            throw config_error(fa.family + ": missing required option --" + name);
    };
    if (fa.family == "frechet") {
        require(fa.alpha_opt, "alpha");
        require(fa.beta_opt, "beta");
        return FrechetSpec{fa.alpha, fa.beta};
    }
    if (fa.family == "gaussian") {
        require(fa.rho_opt, "rho");
        return GaussianEquiSpec{fa.rho, fa.d};
    }
    if (fa.family == "marshall_olkin" || fa.family == "mo") {
        require(fa.alpha_opt, "alpha");
        require(fa.beta_opt, "beta");
        return MarshallOlkinSpec{fa.alpha, fa.beta};
    }
    if (fa.family == "jump") {
        require(fa.m_opt, "m");
        return JumpSpec{fa.m};
    }
    if (fa.family == "lsl") {
        require(fa.knots_opt, "knots");
        return LslSpec{parse_knots(fa.knots)};
    }
    if (fa.family == "independence") return IndependenceSpec{};
    return ComonotoneSpec{};
}

depfn::TieRule make_tie_rule(const std::string& name, std::uint64_t seed) {
    if (name == "by-index") return depfn::TieRule::by_index();
    if (name == "random") return depfn::TieRule::random(seed);
    throw depfn::config_error("unknown tie rule '" + name + "'");
}

// Writes to the given path, or stdout when path is empty or "-".
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) throw depfn::io_error("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

void emit_tie_rule(depfn::JsonWriter& w, depfn::TieRule rule) {
    w.begin_object();
    w.key("kind").value(rule.kind == depfn::TieRule::Kind::ByIndex ? "by_index" : "random");
    if (rule.kind == depfn::TieRule::Kind::Random) w.key("seed").value(rule.seed);
    w.end_object();
}

// ---------------------------------------------------------------------------
// study config file: one `key = value` per line, '#' comments
// ---------------------------------------------------------------------------

struct StudyFileConfig {
    depfn::StudyConfig config;
    std::string family;
};

StudyFileConfig parse_study_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw depfn::io_error("cannot open config file '" + path + "'");

    std::string family;
    double alpha = 0, beta = 0, rho = 0;
    std::size_t d = 1;
    int m = 0;
    std::string knots;
    std::string tie_rule = "by-index";
    std::size_t grid_points = 101;
    StudyFileConfig out;
    out.config.repetitions = 500;
    out.config.sample_sizes.clear();

    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& msg) {
        throw depfn::config_error(path + ":" + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::string_view sv = depfn::detail::trim(line);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos) fail("expected key = value");
        const std::string key{depfn::detail::trim(sv.substr(0, eq))};
        const std::string value{depfn::detail::trim(sv.substr(eq + 1))};
        try {
            if (key == "family") family = value;
            else if (key == "alpha") alpha = std::stod(value);
            else if (key == "beta") beta = std::stod(value);
            else if (key == "rho") rho = std::stod(value);
            else if (key == "d") d = std::stoul(value);
            else if (key == "m") m = std::stoi(value);
            else if (key == "knots") knots = value;
            else if (key == "tie_rule") tie_rule = value;
            else if (key == "grid_points") grid_points = std::stoul(value);
            else if (key == "repetitions") out.config.repetitions = std::stoul(value);
            else if (key == "master_seed") out.config.master_seed = std::stoull(value);
            else if (key == "reference_samples") out.config.reference_mc_samples = std::stoul(value);
            else if (key == "threads") out.config.threads = std::stoul(value);
            else if (key == "sizes") {
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ','))
                    out.config.sample_sizes.push_back(std::stoul(std::string(depfn::detail::trim(item))));
            } else if (key == "kinds") {
                out.config.kinds.clear();
                std::stringstream ss(value);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    const std::string k{depfn::detail::trim(item)};
                    if (k == "phi") out.config.kinds.push_back(depfn::CurveKind::Phi);
                    else if (k == "kappa") out.config.kinds.push_back(depfn::CurveKind::Kappa);
                    else fail("unknown curve kind '" + k + "'");
                }
            } else {
                fail("unknown key '" + key + "'");
            }
        } catch (const depfn::config_error&) {
            throw;
        } catch (const std::exception&) {
            fail("cannot parse value '" + value + "' for key '" + key + "'");
        }
    }

    if (family.empty()) throw depfn::config_error(path + ": missing key 'family'");
    if (family == "frechet") out.config.spec = depfn::FrechetSpec{alpha, beta};
    else if (family == "gaussian") out.config.spec = depfn::GaussianEquiSpec{rho, d};
    else if (family == "marshall_olkin" || family == "mo")
        out.config.spec = depfn::MarshallOlkinSpec{alpha, beta};
    else if (family == "jump") out.config.spec = depfn::JumpSpec{m};
    else if (family == "lsl") out.config.spec = depfn::LslSpec{parse_knots(knots)};
    else if (family == "independence") out.config.spec = depfn::IndependenceSpec{};
    else if (family == "comonotone") out.config.spec = depfn::ComonotoneSpec{};
    else throw depfn::config_error(path + ": unknown family '" + family + "'");

    out.config.grid = depfn::uniform_grid(grid_points);
    out.config.tie_rule = make_tie_rule(tie_rule, out.config.master_seed);
    out.family = family;
    return out;
}

// ---------------------------------------------------------------------------
// subcommand implementations
// ---------------------------------------------------------------------------

void run_sample(const depfn::CopulaSpec& spec, std::size_t n, std::uint64_t seed,
                const std::string& out_path) {
    const depfn::Dataset data = depfn::sample_joint(spec, n, seed);
    OutputTarget out(out_path);
    depfn::write_dataset_csv(out.stream(), data);
}

void run_analyze(const std::string& input, const std::string& y_column,
                 const std::vector<std::string>& x_columns, depfn::TieRule rule,
                 std::size_t grid_points, depfn::NnAlgorithm algo, const std::string& curves_out) {
    const depfn::CsvLoadResult loaded = depfn::load_csv(input, y_column, x_columns);
    for (const auto& warning : loaded.warnings) std::cerr << "warning: " << warning << "\n";
    const std::vector<double> grid = depfn::uniform_grid(grid_points);
    const depfn::AnalysisReport rep = depfn::analyze(loaded.data, rule, grid, algo);

    depfn::JsonWriter w(std::cout);
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value("analyze");
    w.key("input").value(input);
    w.key("n").value(rep.n);
    w.key("d").value(rep.d);
    w.key("tie_rule");
    emit_tie_rule(w, rep.tie_rule);
    w.key("b_n").value(rep.b_n);
    w.key("phi_at_bn").value(rep.phi_at_bn);
    w.key("xi_hat").value(rep.xi);
    w.key("skipped_rows");
    w.begin_array();
    for (std::size_t r : loaded.skipped_rows) w.value(r);
    w.end_array();
    w.key("phi_curve");
    depfn::write_curve_json(w, rep.phi);
    w.key("kappa_curve");
    depfn::write_curve_json(w, rep.kappa);
    w.end_object();
    std::cout << "\n";

    if (!curves_out.empty()) {
        OutputTarget out(curves_out);
        depfn::write_curves_csv(out.stream(), rep.phi, rep.kappa);
    }
}

void run_curve(const depfn::CopulaSpec& spec, const std::string& family, depfn::CurveKind kind,
               const std::string& mode, std::size_t n, std::uint64_t seed, std::size_t grid_points,
               const depfn::ReferenceOptions& ref_opts, const std::string& format,
               const std::string& out_path) {
    const std::vector<double> grid = depfn::uniform_grid(grid_points);
    std::vector<depfn::DependenceCurve> curves;
    std::vector<std::string> labels;
    if (mode == "estimate" || mode == "both") {
        const depfn::Dataset data = depfn::sample_joint(spec, n, seed);
        const depfn::NormalizedGaps gaps =
            depfn::normalized_gaps(depfn::make_rank_pairs(data));
        curves.push_back(kind == depfn::CurveKind::Phi ? depfn::phi_curve(gaps, grid)
                                                       : depfn::kappa_curve(gaps, grid));
        labels.push_back("estimate");
    }
    if (mode == "reference" || mode == "both") {
        curves.push_back(depfn::reference_curve(spec, kind, grid, ref_opts));
        labels.push_back("reference");
    }

    OutputTarget out(out_path);
    if (format == "csv") {
        if (curves.size() == 1) {
            depfn::write_curve_csv(out.stream(), curves[0]);
        } else {
            out.stream() << "t," << labels[0] << ',' << labels[1] << "\n";
            for (std::size_t i = 0; i < grid.size(); ++i)
                out.stream() << depfn::format_double(grid[i]) << ','
                             << depfn::format_double(curves[0].values[i]) << ','
                             << depfn::format_double(curves[1].values[i]) << "\n";
        }
        return;
    }
    depfn::JsonWriter w(out.stream());
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value("curve");
    w.key("family").value(family);
    w.key("kind").value(depfn::curve_kind_name(kind));
    w.key("curves");
    w.begin_array();
    for (const auto& c : curves) depfn::write_curve_json(w, c);
    w.end_array();
    w.end_object();
    out.stream() << "\n";
}

void run_study(const std::string& config_path, const std::string& json_out,
               const std::string& csv_out, std::size_t threads_override) {
    StudyFileConfig file = parse_study_config(config_path);
    if (threads_override > 0) file.config.threads = threads_override;
    const depfn::StudyResult result = depfn::run_study(file.config);

    OutputTarget out(json_out);
    depfn::JsonWriter w(out.stream());
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value("study");
    w.key("family").value(file.family);
    w.key("repetitions").value(file.config.repetitions);
    w.key("master_seed").value(file.config.master_seed);
    w.key("grid_points").value(file.config.grid.size());
    w.key("cells");
    w.begin_array();
    for (const auto& cell : result.cells) {
        w.begin_object();
        w.key("kind").value(depfn::curve_kind_name(cell.kind));
        w.key("n").value(cell.n);
        w.key("summary");
        w.begin_object();
        w.key("min").value(cell.summary.min);
        w.key("q1").value(cell.summary.q1);
        w.key("median").value(cell.summary.median);
        w.key("q3").value(cell.summary.q3);
        w.key("max").value(cell.summary.max);
        w.end_object();
        w.key("deviations").number_array(cell.deviations);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    out.stream() << "\n";

    if (!csv_out.empty()) {
        OutputTarget csv(csv_out);
        depfn::write_study_csv(csv.stream(), result);
    }
}

void run_check_identity(const depfn::CopulaSpec& spec, const std::string& family, std::size_t samples,
                        std::uint64_t seed) {
    const depfn::MarkovSample ms = depfn::sample_markov_product(spec, samples, seed);
    const depfn::IdentityCheck check = depfn::identity_check(ms.pairs);
    depfn::JsonWriter w(std::cout);
    w.begin_object();
    w.key("schema_version").value(kSchemaVersion);
    w.key("command").value("check_identity");
    w.key("family").value(family);
    w.key("samples").value(samples);
    w.key("seed").value(seed);
    w.key("lhs").value(check.lhs);
    w.key("rhs").value(check.rhs);
    w.key("diff").value(check.diff);
    w.end_object();
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dependence functions phi/kappa via nearest-neighbor ranks"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "draw a joint sample and write it as CSV");
    FamilyArgs sample_fa;
    add_family_options(sample, sample_fa);
    std::size_t sample_n = 1000;
    std::uint64_t sample_seed = 1;
    std::string sample_out = "-";
    sample->add_option("-n,--n", sample_n, "sample size")->required();
    sample->add_option("--seed", sample_seed, "RNG seed");
    sample->add_option("--out", sample_out, "output CSV path ('-' for stdout)");

    // analyze
    auto* analyze = app.add_subcommand("analyze", "estimate phi/kappa from a CSV dataset");
    std::string an_input, an_y, an_tie = "by-index", an_curves_out, an_nn = "auto";
    std::vector<std::string> an_x;
    std::uint64_t an_tie_seed = 1;
    std::size_t an_grid = 101;
    analyze->add_option("--input", an_input, "input CSV path")->required();
    analyze->add_option("--y-column", an_y, "response column name")->required();
    analyze->add_option("--x-columns", an_x, "predictor column names (comma separated)")
        ->required()
        ->delimiter(',');
    analyze->add_option("--tie-rule", an_tie, "rank tie rule")
        ->check(CLI::IsMember({"by-index", "random"}));
    analyze->add_option("--tie-seed", an_tie_seed, "seed for the random tie rule");
    analyze->add_option("--grid-points", an_grid, "evaluation grid size (default 101)");
    analyze->add_option("--nn", an_nn, "nearest-neighbor algorithm")
        ->check(CLI::IsMember({"auto", "brute", "kdtree"}));
    analyze->add_option("--curves-out", an_curves_out, "optional CSV path for both curves");

    // curve
    auto* curve = app.add_subcommand("curve", "emit an estimated and/or reference curve");
    FamilyArgs curve_fa;
    add_family_options(curve, curve_fa);
    std::string cv_kind = "phi", cv_mode = "reference", cv_format = "json", cv_out = "-";
    std::size_t cv_n = 1000, cv_grid = 101, cv_mc = 200000;
    std::uint64_t cv_seed = 1, cv_mc_seed = 0x9e2026;
    curve->add_option("--kind", cv_kind, "phi or kappa")->check(CLI::IsMember({"phi", "kappa"}));
    curve->add_option("--mode", cv_mode, "estimate, reference or both")
        ->check(CLI::IsMember({"estimate", "reference", "both"}));
    curve->add_option("-n,--n", cv_n, "sample size for estimate mode");
    curve->add_option("--seed", cv_seed, "seed for estimate mode");
    curve->add_option("--grid-points", cv_grid, "evaluation grid size (default 101)");
    curve->add_option("--mc-samples", cv_mc, "Monte Carlo sample count for MC references");
    curve->add_option("--mc-seed", cv_mc_seed, "Monte Carlo seed for MC references");
    curve->add_option("--format", cv_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    curve->add_option("--out", cv_out, "output path ('-' for stdout)");

    // study
    auto* study = app.add_subcommand("study", "run the convergence study from a config file");
    std::string st_config, st_json = "-", st_csv;
    std::size_t st_threads = 0;
    study->add_option("--config", st_config, "study config file (key = value lines)")->required();
    study->add_option("--json-out", st_json, "JSON output path ('-' for stdout)");
    study->add_option("--csv-out", st_csv, "optional long-format CSV output path");
    study->add_option("--threads", st_threads, "worker threads (overrides config)");

    // check-identity
    auto* check = app.add_subcommand("check-identity",
                                     "compare the two scalar xi representations on Markov samples");
    FamilyArgs check_fa;
    add_family_options(check, check_fa);
    std::size_t ci_samples = 100000;
    std::uint64_t ci_seed = 1;
    check->add_option("--samples", ci_samples, "Markov-product sample count");
    check->add_option("--seed", ci_seed, "RNG seed");

    try {
        app.parse(argc, argv);
        if (sample->parsed()) {
            run_sample(build_spec(sample_fa), sample_n, sample_seed, sample_out);
        } else if (analyze->parsed()) {
            depfn::NnAlgorithm algo = an_nn == "brute"    ? depfn::NnAlgorithm::BruteForce
                                      : an_nn == "kdtree" ? depfn::NnAlgorithm::KdTree
                                                          : depfn::NnAlgorithm::Auto;
            run_analyze(an_input, an_y, an_x, make_tie_rule(an_tie, an_tie_seed), an_grid, algo,
                        an_curves_out);
        } else if (curve->parsed()) {
            depfn::ReferenceOptions ref_opts;
            ref_opts.mc_samples = cv_mc;
            ref_opts.mc_seed = cv_mc_seed;
            run_curve(build_spec(curve_fa), curve_fa.family,
                      cv_kind == "phi" ? depfn::CurveKind::Phi : depfn::CurveKind::Kappa, cv_mode,
                      cv_n, cv_seed, cv_grid, ref_opts, cv_format, cv_out);
        } else if (study->parsed()) {
            run_study(st_config, st_json, st_csv, st_threads);
        } else if (check->parsed()) {
            run_check_identity(build_spec(check_fa), check_fa.family, ci_samples, ci_seed);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const depfn::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const depfn::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const depfn::io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const depfn::numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
