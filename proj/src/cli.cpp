#include "dzeta/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "dzeta/error.hpp"
#include "dzeta/spectral.hpp"

namespace dzeta::cli {

namespace {

constexpr std::size_t kDefaultNMax = 5000;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_real(const std::string& key, const std::string& text) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || text.empty() || !std::isfinite(v)) {
        throw ValidationError("--" + key + " expects a finite real number (got '" + text + "')");
    }
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text, std::size_t minimum) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || v < minimum) {
        throw ValidationError("--" + key + " expects an integer >= " + std::to_string(minimum) + " (got '" +
                              text + "')");
    }
    return v;
}

std::vector<EstimatorKind> parse_estimator_list(const std::string& text) {
    std::vector<EstimatorKind> kinds;
    std::string_view rest = text;
    while (true) {
        const auto comma = rest.find(',');
        const std::string_view token = trim(rest.substr(0, comma));
        if (token.empty()) throw ValidationError("empty entry in --estimators list '" + text + "'");
        kinds.push_back(parse_estimator(std::string(token)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return kinds;
}

const char* experiment_name(ExperimentId id) {
    switch (id) {
        case ExperimentId::I: return "I";
        case ExperimentId::II: return "II";
        case ExperimentId::III: return "III";
        case ExperimentId::IV: return "IV";
        case ExperimentId::V: return "V";
        case ExperimentId::VI: return "VI";
        case ExperimentId::AppendixF: return "appendix-f";
    }
    return "?";
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
    if (!config.out_path) {
        out << text;
        return;
    }
    std::ofstream file(*config.out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open output file '" + *config.out_path + "'");
    file << text;
    file.flush();
    if (!file) throw IoError("failed writing output file '" + *config.out_path + "'");
}

std::optional<double> resolve_base(const RunConfig& config) {
    if (config.p) return config.p;
    if (config.base_strategy && config.q) return recommended_base(*config.q, *config.base_strategy).value();
    return std::nullopt;
}

double require_q(const RunConfig& config) {
    if (!config.q) throw ValidationError("missing required --q");
    return *config.q;
}

std::size_t grid_start(const std::vector<EstimatorKind>& kinds) {
    std::size_t n_min = 1;
    for (const auto& k : kinds) n_min = std::max(n_min, min_n(k));
    return n_min;
}

std::vector<std::size_t> sweep_grid(const RunConfig& config, std::size_t n_min, std::size_t n_max) {
    if (n_max < n_min) {
        throw ValidationError("--n-max=" + std::to_string(n_max) + " is below the smallest admissible n=" +
                              std::to_string(n_min));
    }
    return geometric_grid(n_min, n_max, config.points_per_decade);
}

ErrorSeries classical_column(const std::string& label, const EstimatorKind& kind, double q,
                             std::optional<double> p, std::span<const std::size_t> grid,
                             const RunConfig& config) {
    if (needs_base(kind) && !p) {
        throw ValidationError("estimator '" + estimator_name(kind) + "' requires --p or --base");
    }
    const std::size_t n_max = grid.back();
    std::optional<Exponent> base;
    if (needs_base(kind)) base = Exponent(*p);
    const EstimatorContext context(Exponent(q), base, n_max, config.reference);
    ErrorSeries series = build_error_series(kind, context, grid, reference_zeta(Exponent(q), config.reference),
                                            config.saturation_floor);
    series.label = label;
    return series;
}

ErrorSeries spectral_column(const std::string& label, const EstimatorKind& kind, const SpectralContext& context,
                            std::span<const std::size_t> grid, double saturation_floor) {
    EstimateFn fn;
    if (std::holds_alternative<Truncation>(kind)) {
        fn = [&context](std::size_t n) { return context.truncation(n); };
    } else if (std::holds_alternative<DeficiencyA>(kind)) {
        fn = [&context](std::size_t n) { return context.estimate_a(n); };
    } else if (std::holds_alternative<DeficiencyB>(kind)) {
        fn = [&context](std::size_t n) { return context.estimate_b(n); };
    } else if (std::holds_alternative<DeficiencyB2>(kind)) {
        fn = [&context](std::size_t n) { return context.estimate_b2(n); };
    } else {
        throw ValidationError("estimator '" + estimator_name(kind) + "' is not available for spectral sums");
    }
    return build_error_series(label, fn, grid, context.target_zeta(), saturation_floor);
}

std::string render_report(const std::string& label, const RateReport& report, double plateau_exponent) {
    std::ostringstream os;
    os << "series=" << label << '\n'
       << "fit_window=" << report.fit_window.lo << ',' << report.fit_window.hi << '\n'
       << "fitted_slope=" << format_double(report.fitted_slope) << '\n'
       << "theoretical_exponent=" << format_double(report.theoretical_exponent) << '\n'
       << "slope_deviation=" << format_double(report.fitted_slope - report.theoretical_exponent) << '\n'
       << "plateau_exponent=" << format_double(plateau_exponent) << '\n'
       << "plateau_constant="
       << (report.plateau_constant ? format_double(*report.plateau_constant) : std::string("none")) << '\n'
       << "plateau_stability=" << format_double(report.plateau_stability) << '\n'
       << "plateau=" << (report.plateau_declared ? "declared" : "not-declared") << '\n'
       << "saturation_floor_detected=" << (report.saturation_floor_detected ? "true" : "false") << '\n';
    return os.str();
}

std::string scaled_csv(const ErrorSeries& series, double exponent) {
    std::string text = "n,scaled_error\n";
    for (const auto& [n, v] : scaled_error(series, exponent)) {
        text += std::to_string(n) + ',' + format_double(v) + '\n';
    }
    return text;
}

int run_rate(const RunConfig& config, const ErrorSeries& series, double rate, std::ostream& out) {
    RateOptions options;
    options.window = config.fit_window;
    options.plateau_exponent = config.plateau_exponent;
    const RateReport report = verify_rate(series, rate, options);
    const double exponent = config.plateau_exponent.value_or(rate);
    out << render_report(series.label, report, exponent);
    if (config.out_path) emit(config, scaled_csv(series, exponent), out);
    return kOk;
}

int experiment_rate(RunConfig config, double p, double q, std::ostream& out) {
    config.p = p;
    config.q = q;
    config.estimators = {DeficiencyB{}};
    return cmd_rate(config, out);
}

}  // namespace

std::optional<ExperimentId> parse_experiment_id(const std::string& token) {
    for (auto id : {ExperimentId::I, ExperimentId::II, ExperimentId::III, ExperimentId::IV, ExperimentId::V,
                    ExperimentId::VI, ExperimentId::AppendixF}) {
        if (token == experiment_name(id)) return id;
    }
    return std::nullopt;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{
        "p",        "q",      "n",     "n-max", "estimators", "base",             "alpha",
        "spectrum", "out",    "n-ref", "m-ref", "floor",      "points-per-decade", "fit-lo",
        "fit-hi",   "exponent"};
    return keys;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> settings;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    const auto& keys = config_keys();
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        settings[key] = value;
    }
    return settings;
}

RunConfig make_config(Command command, const std::map<std::string, std::string>& settings) {
    RunConfig config;
    config.command = command;
    auto get = [&settings](const std::string& key) -> const std::string* {
        auto it = settings.find(key);
        return it == settings.end() ? nullptr : &it->second;
    };

    if (auto v = get("p")) config.p = parse_real("p", *v);
    if (auto v = get("q")) config.q = parse_real("q", *v);
    if (auto v = get("n")) config.n = parse_count("n", *v, 1);
    if (auto v = get("n-max")) config.n_max = parse_count("n-max", *v, 1);
    if (auto v = get("estimators")) config.estimators = parse_estimator_list(*v);
    if (auto v = get("base")) {
        if (*v == "universal") config.base_strategy = BaseStrategy::Universal;
        else if (*v == "explicit-even") config.base_strategy = BaseStrategy::ExplicitEven;
        else throw ValidationError("--base expects 'universal' or 'explicit-even' (got '" + *v + "')");
    }
    if (auto v = get("alpha")) config.alpha = parse_real("alpha", *v);
    if (auto v = get("spectrum")) config.spectrum_path = *v;
    if (auto v = get("out")) config.out_path = *v;
    if (auto v = get("n-ref")) config.reference.n_ref = parse_count("n-ref", *v, 2);
    if (auto v = get("m-ref")) {
        const auto m = parse_count("m-ref", *v, 0);
        if (2 * m > static_cast<std::size_t>(kBernoulliCap)) {
            throw ValidationError("--m-ref exceeds the Bernoulli cap of " + std::to_string(kBernoulliCap / 2));
        }
        config.reference.m_ref = static_cast<int>(m);
    }
    if (auto v = get("floor")) {
        config.saturation_floor = parse_real("floor", *v);
        if (!(config.saturation_floor >= 0.0)) throw ValidationError("--floor must be >= 0");
    }
    if (auto v = get("points-per-decade")) {
        config.points_per_decade = static_cast<int>(parse_count("points-per-decade", *v, 1));
    }
    const auto* fit_lo = get("fit-lo");
    const auto* fit_hi = get("fit-hi");
    if ((fit_lo == nullptr) != (fit_hi == nullptr)) {
        throw ValidationError("--fit-lo and --fit-hi must be given together");
    }
    if (fit_lo) {
        FitWindow w{parse_count("fit-lo", *fit_lo, 1), parse_count("fit-hi", *fit_hi, 1)};
        if (w.hi < 10 * w.lo) throw ValidationError("fit window must span at least one decade (fit-hi >= 10*fit-lo)");
        config.fit_window = w;
    }
    if (auto v = get("exponent")) {
        config.plateau_exponent = parse_real("exponent", *v);
        if (!(*config.plateau_exponent > 0.0)) throw ValidationError("--exponent must be > 0");
    }
    if (auto v = get("self-test")) config.self_test = (*v == "true");
    if (auto v = get("experiment")) {
        config.experiment = parse_experiment_id(*v);
        if (!config.experiment) {
            throw ValidationError("unknown experiment '" + *v + "' (expected I, II, III, IV, V, VI or appendix-f)");
        }
    }

    // Cross-field checks, all before any computation.
    if (config.q) Exponent{*config.q};
    if (config.p) {
        if (!config.q) throw ValidationError("--p given without --q");
        ExponentPair{*config.p, *config.q};
    }
    if (config.alpha && config.spectrum_path) throw ValidationError("give either --alpha or --spectrum, not both");
    if (config.alpha && !(*config.alpha > 0.0)) throw ValidationError("--alpha must be > 0");
    return config;
}

std::string format_double(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string to_csv(const std::vector<ErrorSeries>& columns) {
    std::string text = "n";
    for (const auto& c : columns) text += ',' + c.label;
    text += '\n';
    if (columns.empty()) return text;
    const std::size_t rows = columns.front().points.size();
    for (const auto& c : columns) {
        if (c.points.size() != rows) throw ValidationError("CSV columns have different grids");
    }
    for (std::size_t r = 0; r < rows; ++r) {
        text += std::to_string(columns.front().points[r].n);
        for (const auto& c : columns) text += ',' + format_double(c.points[r].abs_error);
        text += '\n';
    }
    return text;
}

int cmd_estimate(const RunConfig& config, std::ostream& out) {
    const double q = require_q(config);
    if (!config.n) throw ValidationError("missing required --n");
    if (config.estimators.size() > 1) throw ValidationError("estimate takes a single --estimator");
    const EstimatorKind kind = config.estimators.empty() ? EstimatorKind{DeficiencyB{}} : config.estimators.front();
    const std::optional<double> p = resolve_base(config);
    if (needs_base(kind) && !p) {
        throw ValidationError("estimator '" + estimator_name(kind) + "' requires --p or --base");
    }
    std::optional<ExponentPair> pair;
    if (p) pair.emplace(*p, q);
    if (*config.n < min_n(kind)) {
        throw ValidationError("estimator '" + estimator_name(kind) + "' requires n >= " +
                              std::to_string(min_n(kind)));
    }

    std::optional<Exponent> base;
    if (p) base = Exponent(*p);
    const EstimatorContext context(Exponent(q), needs_base(kind) ? base : std::nullopt, *config.n,
                                   config.reference);
    const DoubleDouble value = estimate(kind, context, *config.n);
    const DoubleDouble reference = reference_zeta(Exponent(q), config.reference);

    out << "estimator=" << estimator_name(kind) << " p=" << (p ? format_double(*p) : std::string("none"))
        << " q=" << format_double(q) << " n=" << *config.n << " estimate=" << format_double(value.hi)
        << " reference=" << format_double(reference.hi) << " abs_error=" << format_double(abs(value - reference).hi)
        << " predicted_rate=" << (pair ? format_double(predicted_rate(*pair)) : std::string("none"))
        << " optimal_region=" << (pair ? (in_optimal_region(*pair) ? "yes" : "no") : "none") << '\n';
    return kOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
    const double q = require_q(config);
    const auto kinds = config.estimators.empty() ? std::vector<EstimatorKind>{Truncation{}, DeficiencyA{}, DeficiencyB{}}
                                                 : config.estimators;
    const std::optional<double> p = resolve_base(config);
    for (const auto& k : kinds) {
        if (needs_base(k) && !p) throw ValidationError("estimator '" + estimator_name(k) + "' requires --p or --base");
    }
    const auto grid = sweep_grid(config, grid_start(kinds), config.n_max.value_or(kDefaultNMax));
    std::vector<ErrorSeries> columns;
    for (const auto& k : kinds) columns.push_back(classical_column(estimator_name(k), k, q, p, grid, config));
    emit(config, to_csv(columns), out);
    return kOk;
}

int cmd_rate(const RunConfig& config, std::ostream& out) {
    if (config.self_test) {
        // Injected exact law E_n = n^-2 exercises the fitting harness alone.
        const auto grid = geometric_grid(1, config.n_max.value_or(kDefaultNMax), config.points_per_decade);
        const ErrorSeries series = build_error_series(
            "synthetic", [](std::size_t n) { return DoubleDouble{1.0 / (static_cast<double>(n) * static_cast<double>(n))}; },
            grid, DoubleDouble{0.0}, config.saturation_floor);
        return run_rate(config, series, 2.0, out);
    }
    const double q = require_q(config);
    if (config.estimators.size() > 1) throw ValidationError("rate takes a single --estimator");
    const EstimatorKind kind = config.estimators.empty() ? EstimatorKind{DeficiencyB{}} : config.estimators.front();
    const std::optional<double> p = resolve_base(config);
    if (needs_base(kind) && !p) {
        throw ValidationError("estimator '" + estimator_name(kind) + "' requires --p or --base");
    }
    const auto grid = sweep_grid(config, min_n(kind), config.n_max.value_or(kDefaultNMax));
    const ErrorSeries series = classical_column(estimator_name(kind), kind, q, p, grid, config);
    return run_rate(config, series, estimator_rate(kind, q, p), out);
}

int cmd_spectral(const RunConfig& config, std::ostream& out) {
    const double q = require_q(config);
    if (!config.p) throw ValidationError("missing required --p");
    if (!config.alpha && !config.spectrum_path) throw ValidationError("spectral needs --alpha or --spectrum");
    const auto kinds = config.estimators.empty() ? std::vector<EstimatorKind>{DeficiencyB{}} : config.estimators;
    for (const auto& k : kinds) {
        if (std::holds_alternative<EulerMaclaurin>(k)) {
            throw ValidationError("estimator '" + estimator_name(k) + "' is not available for spectral sums");
        }
    }

    SpectrumSource source = config.alpha ? SpectrumSource::power_law(*config.alpha)
                                         : SpectrumSource::explicit_values(load_spectrum_file(*config.spectrum_path));
    const SpectralPair pair(source, *config.p, q);
    const std::size_t n_max =
        config.n_max.value_or(source.is_power_law() ? kDefaultNMax : source.k_max());
    if (n_max > source.k_max()) {
        throw ValidationError("--n-max=" + std::to_string(n_max) + " exceeds the " +
                              std::to_string(source.k_max()) + " eigenvalues in the spectrum file");
    }
    const auto grid = sweep_grid(config, 1, n_max);
    const SpectralContext context(pair, n_max, config.reference);
    std::vector<ErrorSeries> columns;
    for (const auto& k : kinds) {
        columns.push_back(spectral_column(estimator_name(k), k, context, grid, config.saturation_floor));
    }
    emit(config, to_csv(columns), out);
    return kOk;
}

int cmd_experiment(const RunConfig& config, std::ostream& out) {
    if (!config.experiment) throw ValidationError("missing experiment id");
    const std::size_t n_max = config.n_max.value_or(kDefaultNMax);
    std::vector<ErrorSeries> columns;

    auto add_b = [&](double p, double q, const std::string& label, std::span<const std::size_t> grid) {
        columns.push_back(classical_column(label, DeficiencyB{}, q, p, grid, config));
    };

    switch (*config.experiment) {
        case ExperimentId::I: {
            const std::vector<EstimatorKind> kinds{Truncation{}, DeficiencyA{}, DeficiencyB{}, EulerMaclaurin{2}};
            const auto grid = sweep_grid(config, grid_start(kinds), n_max);
            for (const auto& k : kinds) columns.push_back(classical_column(estimator_name(k), k, 3.0, 2.0, grid, config));
            break;
        }
        case ExperimentId::II: {
            const auto grid = sweep_grid(config, 1, n_max);
            add_b(2.0, 5.0, "b_p2", grid);
            add_b(4.0, 5.0, "b_p4", grid);
            break;
        }
        case ExperimentId::III: return experiment_rate(config, 4.0, 5.0, out);
        case ExperimentId::IV: {
            const auto grid = sweep_grid(config, 1, n_max);
            columns.push_back(classical_column("trunc", Truncation{}, 7.0, std::nullopt, grid, config));
            add_b(2.0, 7.0, "b_p2", grid);
            add_b(6.0, 7.0, "b_p6", grid);
            break;
        }
        case ExperimentId::V: return experiment_rate(config, 6.0, 7.0, out);
        case ExperimentId::VI: {
            const auto grid = sweep_grid(config, 1, n_max);
            for (double alpha : {2.0, 3.0, 4.0}) {
                const SpectralPair pair(SpectrumSource::power_law(alpha), 2.0, 3.0);
                const SpectralContext context(pair, n_max, config.reference);
                columns.push_back(spectral_column("b_alpha" + format_double(alpha), DeficiencyB{}, context, grid,
                                                  config.saturation_floor));
            }
            break;
        }
        case ExperimentId::AppendixF: {
            const auto grid = linear_grid(1, n_max);
            for (int q = 3; q <= 19; q += 2) add_b(2.0, q, "b_q" + std::to_string(q), grid);
            break;
        }
    }
    emit(config, to_csv(columns), out);
    return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deficiency-based zeta estimators and convergence experiments", "dzeta"};
    app.require_subcommand(1);

    std::map<std::string, std::string> flag_values;
    std::vector<std::pair<std::string, CLI::Option*>> bound;
    std::string config_path;
    bool self_test = false;

    auto add_common = [&](CLI::App* sub) {
        for (const auto& key : config_keys()) {
            const std::string names = key == "estimators" ? "--estimators,--estimator" : "--" + key;
            bound.emplace_back(key, sub->add_option(names, flag_values[key]));
        }
        sub->add_option("--config", config_path, "Plain `key = value` config file");
    };

    auto* estimate_cmd = app.add_subcommand("estimate", "Single estimate of zeta(q)");
    auto* sweep_cmd = app.add_subcommand("sweep", "Error sweep over a geometric n-grid (CSV)");
    auto* rate_cmd = app.add_subcommand("rate", "Slope fit and plateau test for one estimator");
    auto* spectral_cmd = app.add_subcommand("spectral", "Spectral-zeta error sweep (CSV)");
    auto* experiment_cmd = app.add_subcommand("experiment", "Preset experiments I..VI, appendix-f");
    for (auto* sub : {estimate_cmd, sweep_cmd, rate_cmd, spectral_cmd, experiment_cmd}) add_common(sub);
    rate_cmd->add_flag("--self-test", self_test, "Fit an injected n^-2 series");
    std::string experiment_id;
    experiment_cmd->add_option("id", experiment_id, "I, II, III, IV, V, VI or appendix-f")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << '\n';
        return kValidation;
    }

    try {
        std::map<std::string, std::string> settings;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw IoError("cannot open config file '" + config_path + "'");
            std::ostringstream text;
            text << in.rdbuf();
            settings = parse_config_text(text.str());
        }
        for (const auto& [key, option] : bound) {
            if (option->count() > 0) settings[key] = flag_values[key];
        }
        if (self_test) settings["self-test"] = "true";

        Command command = Command::Estimate;
        if (sweep_cmd->parsed()) command = Command::Sweep;
        else if (rate_cmd->parsed()) command = Command::Rate;
        else if (spectral_cmd->parsed()) command = Command::Spectral;
        else if (experiment_cmd->parsed()) {
            command = Command::Experiment;
            settings["experiment"] = experiment_id;
        }

        const RunConfig config = make_config(command, settings);
        switch (command) {
            case Command::Estimate: return cmd_estimate(config, out);
            case Command::Sweep: return cmd_sweep(config, out);
            case Command::Rate: return cmd_rate(config, out);
            case Command::Spectral: return cmd_spectral(config, out);
            case Command::Experiment: return cmd_experiment(config, out);
        }
    } catch (const DataFormatError& e) {
        err << "error: " << e.what() << '\n';
        return kDataFormat;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    }
    return kOk;
}

}  // namespace dzeta::cli
