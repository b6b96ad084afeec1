// curvekit command-line front end: curve generation, Frenet estimation,
// Mannheim checks and partner construction, generating-curve tools, SVG plots.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "curvekit/errors.hpp"
#include "curvekit/generating.hpp"
#include "curvekit/integrate.hpp"
#include "curvekit/io.hpp"
#include "curvekit/mannheim.hpp"
#include "curvekit/profile.hpp"

namespace ck = curvekit;
using nlohmann::json;

namespace {

constexpr int kExitBadInput = 2;
constexpr int kExitNumeric = 3;

// ---- field spec mini-grammar ------------------------------------------------
// component := FLOAT | [FLOAT*]sin(A*s+B) | [FLOAT*]cos(A*s+B)
// The three components are normalized to unit length at parse time; a
// non-constant analytic norm is an error.

struct FieldTerm {
    bool trig = false;
    bool is_sin = false;
    double amp = 0.0; // constant value when !trig
    double freq = 0.0;
    double phase = 0.0;

    double eval(double s) const {
        if (!trig) return amp;
        const double g = freq * s + phase;
        return amp * (is_sin ? std::sin(g) : std::cos(g));
    }
};

FieldTerm parse_field_term(std::string text) {
    std::erase(text, ' ');
    if (text.empty()) throw ck::ParseError("empty field component");

    FieldTerm term;
    const size_t sin_pos = text.find("sin(");
    const size_t cos_pos = text.find("cos(");
    const size_t fn_pos = std::min(sin_pos, cos_pos);
    auto parse_num = [&](const std::string& tok) {
        try {
            size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            throw ck::ParseError("bad number '" + tok + "' in field component '" + text + "'");
        }
    };

    if (fn_pos == std::string::npos) {
        term.amp = parse_num(text);
        return term;
    }

    term.trig = true;
    term.is_sin = sin_pos < cos_pos;
    term.amp = 1.0;
    if (fn_pos > 0) {
        if (text[fn_pos - 1] != '*')
            throw ck::ParseError("expected '<coef>*' before trig in '" + text + "'");
        term.amp = parse_num(text.substr(0, fn_pos - 1));
    }
    if (text.back() != ')')
        throw ck::ParseError("unterminated trig argument in '" + text + "'");
    std::string arg = text.substr(fn_pos + 4, text.size() - fn_pos - 5);
    // a*s+b | a*s-b | a*s | s | s+b ...
    const size_t s_pos = arg.find('s');
    if (s_pos == std::string::npos)
        throw ck::ParseError("trig argument must contain 's' in '" + text + "'");
    std::string head = arg.substr(0, s_pos);
    std::string tail = arg.substr(s_pos + 1);
    if (head.empty()) term.freq = 1.0;
    else if (head == "-") term.freq = -1.0;
    else {
        if (head.back() != '*')
            throw ck::ParseError("expected 'a*s' in trig argument of '" + text + "'");
        term.freq = parse_num(head.substr(0, head.size() - 1));
    }
    if (tail.empty()) term.phase = 0.0;
    else term.phase = parse_num(tail);
    return term;
}

struct ParsedField {
    ck::FrameVectorField field = ck::FrameVectorField::constant(1.0, 0.0, 0.0);
    bool v_zero = true;
    ck::ScalarFn v_fn;
    std::optional<std::pair<double, double>> const_uw; // when constant with v == 0
};

ParsedField parse_field_spec(const std::string& spec) {
    std::map<char, FieldTerm> terms = {
        {'u', FieldTerm{}}, {'v', FieldTerm{}}, {'w', FieldTerm{}}};
    size_t start = 0;
    const std::string padded = spec + ",";
    int assigned = 0;
    for (size_t i = 0; i < padded.size(); ++i) {
        if (padded[i] != ',') continue;
        std::string item = padded.substr(start, i - start);
        start = i + 1;
        if (item.empty()) continue;
        const size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ck::ParseError("field component must look like u=..., got '" + item + "'");
        const char name = item[0];
        if (eq != 1 || (name != 'u' && name != 'v' && name != 'w'))
            throw ck::ParseError("unknown field component '" + item.substr(0, eq) + "'");
        terms[name] = parse_field_term(item.substr(eq + 1));
        ++assigned;
    }
    if (assigned == 0) throw ck::ParseError("empty field spec");

    // Analytic norm: squares of constants plus amp^2/2 per trig term; the
    // oscillatory parts must cancel within matching (freq, phase) groups.
    double norm2 = 0.0;
    std::map<std::pair<double, double>, double> wobble;
    for (const auto& [name, term] : terms) {
        (void)name;
        if (!term.trig) {
            norm2 += term.amp * term.amp;
        } else {
            norm2 += 0.5 * term.amp * term.amp;
            const double sign = term.is_sin ? -1.0 : 1.0;
            wobble[{term.freq, term.phase}] += 0.5 * sign * term.amp * term.amp;
        }
    }
    for (const auto& [key, residue] : wobble) {
        (void)key;
        if (std::abs(residue) > 1e-12)
            throw ck::ParseError("field norm is not constant; pair sin/cos terms of equal "
                                 "amplitude, frequency and phase");
    }
    if (!(norm2 > 0.0)) throw ck::ParseError("field spec has zero norm");
    const double inv = 1.0 / std::sqrt(norm2);

    FieldTerm u = terms['u'], v = terms['v'], w = terms['w'];
    u.amp *= inv;
    v.amp *= inv;
    w.amp *= inv;

    ParsedField out;
    const bool constant = !u.trig && !v.trig && !w.trig;
    out.v_zero = !v.trig && v.amp == 0.0;
    out.v_fn = [v](double s) { return v.eval(s); };
    if (constant) {
        out.field = ck::FrameVectorField::constant(u.amp, v.amp, w.amp);
        if (out.v_zero) out.const_uw = std::make_pair(u.amp, w.amp);
    } else {
        out.field = ck::FrameVectorField::varying([u](double s) { return u.eval(s); },
                                                  [v](double s) { return v.eval(s); },
                                                  [w](double s) { return w.eval(s); });
    }
    return out;
}

// ---- config resolution -------------------------------------------------------

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    try {
        return json::parse(ck::io::read_file(path));
    } catch (const json::parse_error& e) {
        throw ck::ParseError(std::string("config JSON: ") + e.what());
    }
}

template <typename T>
T resolve(const std::optional<T>& flag, const json& config, const std::string& key, T fallback) {
    if (flag.has_value()) return *flag;
    if (config.contains(key)) return config.at(key).get<T>();
    return fallback;
}

template <typename T>
T require(const std::optional<T>& flag, const json& config, const std::string& key) {
    if (flag.has_value()) return *flag;
    if (config.contains(key)) return config.at(key).get<T>();
    throw ck::ParseError("missing required option --" + key);
}

double resolve_tol_pred(const std::optional<double>& flag, const json& config) {
    if (flag.has_value()) return *flag;
    if (const char* env = std::getenv("CURVEKIT_TOL_PRED")) {
        try {
            return std::stod(env);
        } catch (const std::exception&) {
            throw ck::ParseError("CURVEKIT_TOL_PRED is not a number");
        }
    }
    if (config.contains("tol-pred")) return config.at("tol-pred").get<double>();
    return ck::kTolPredEstimated;
}

void emit_json(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) std::cout << text;
    else ck::io::atomic_write(out_path, text);
}

std::map<std::string, double> parse_params(const std::vector<std::string>& items) {
    std::map<std::string, double> params;
    for (const auto& item : items) {
        const size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ck::ParseError("--param expects name=value, got '" + item + "'");
        try {
            size_t used = 0;
            const std::string value = item.substr(eq + 1);
            params[item.substr(0, eq)] = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ck::ParseError("bad value in --param '" + item + "'");
        }
    }
    return params;
}

ck::OffsetFunction make_offset(const ParsedField& field, bool lambda_auto,
                               const std::optional<double>& lambda0,
                               const ck::FrenetApparatus& app) {
    if (lambda_auto) {
        if (!field.v_zero)
            throw ck::NotApplicable("--lambda auto requires a field with v == 0");
        return ck::OffsetFunction::constant(
            ck::estimate_lambda(app, field.field).lambda_fit);
    }
    if (!lambda0.has_value())
        throw ck::ParseError("provide --lambda auto or --lambda0 <value>");
    if (field.v_zero) return ck::OffsetFunction::constant(*lambda0);
    return ck::lambda_from_v(field.v_fn, *lambda0, app.s.back(), app.step);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvekit - numerical toolkit for Mannheim curve theory"};
    app.require_subcommand(1);
    // fallthrough lets the global --config appear after the subcommand name
    auto add_sub = [](CLI::App& parent, const std::string& name, const std::string& desc) {
        CLI::App* sub = parent.add_subcommand(name, desc);
        sub->fallthrough();
        return sub;
    };
    std::string config_path;
    app.add_option("--config", config_path, "JSON config mirroring the flags");

    // gen
    auto* gen = add_sub(app, "gen", "generate a named curve family as CSV");
    std::optional<std::string> gen_family;
    std::vector<std::string> gen_params;
    std::optional<double> gen_smax, gen_step;
    std::optional<std::string> gen_out, gen_apparatus;
    gen->add_option("--family", gen_family, "circle | helix | salkowski");
    gen->add_option("--param", gen_params, "family parameter name=value (repeatable)");
    gen->add_option("--s-max", gen_smax, "arc-length domain end");
    gen->add_option("--step", gen_step, "integration step");
    gen->add_option("--out", gen_out, "output curve CSV");
    gen->add_option("--apparatus", gen_apparatus, "also write the apparatus CSV");

    // reconstruct
    auto* rec = add_sub(app, "reconstruct", "integrate a profile JSON into a curve CSV");
    std::optional<std::string> rec_profile, rec_out, rec_apparatus;
    std::optional<double> rec_step;
    rec->add_option("--profile", rec_profile, "profile JSON path");
    rec->add_option("--step", rec_step, "integration step (overrides the JSON)");
    rec->add_option("--out", rec_out, "output curve CSV");
    rec->add_option("--apparatus", rec_apparatus, "also write the apparatus CSV");

    // frenet
    auto* fre = add_sub(app, "frenet", "estimate the Frenet apparatus of a curve CSV");
    std::optional<std::string> fre_in, fre_out;
    std::optional<double> fre_kmin;
    fre->add_option("--in", fre_in, "input curve CSV");
    fre->add_option("--out", fre_out, "output apparatus CSV");
    fre->add_option("--kappa-min", fre_kmin, "vanishing-curvature threshold");

    // mannheim check | partner
    auto* man = add_sub(app, "mannheim", "V-Mannheim checks and partner construction");
    man->require_subcommand(1);
    auto* chk = add_sub(*man, "check", "predicate check on an apparatus CSV");
    std::optional<std::string> chk_in, chk_field, chk_out;
    std::string chk_lambda;
    std::optional<double> chk_lambda0, chk_tol_pred;
    bool chk_strict = false;
    chk->add_option("--in", chk_in, "input apparatus CSV");
    chk->add_option("--field", chk_field, "field spec u=...,v=...,w=...");
    chk->add_option("--lambda", chk_lambda, "'auto' to fit a constant lambda");
    chk->add_option("--lambda0", chk_lambda0, "offset integration constant");
    chk->add_option("--tol-pred", chk_tol_pred, "predicate tolerance");
    chk->add_option("--out", chk_out, "report JSON path (stdout when absent)");
    chk->add_flag("--strict", chk_strict, "exit 1 when the verdict is false");

    auto* par = add_sub(*man, "partner", "build and verify the partner curve");
    std::optional<std::string> par_in, par_field, par_out, par_report;
    std::string par_lambda;
    std::optional<double> par_lambda0, par_tol_pred, par_tol_col, par_kmin;
    bool par_strict = false;
    par->add_option("--in", par_in, "input curve CSV");
    par->add_option("--field", par_field, "field spec u=...,v=...,w=...");
    par->add_option("--lambda", par_lambda, "'auto' to fit a constant lambda");
    par->add_option("--lambda0", par_lambda0, "offset integration constant");
    par->add_option("--tol-pred", par_tol_pred, "predicate tolerance");
    par->add_option("--tol-col", par_tol_col, "collinearity tolerance");
    par->add_option("--kappa-min", par_kmin, "vanishing-curvature threshold");
    par->add_option("--out", par_out, "partner curve CSV (unit speed)");
    par->add_option("--report", par_report, "report JSON path (stdout when absent)");
    par->add_flag("--strict", par_strict, "exit 1 when the verdict is false");

    // generating build | classify
    auto* genr = add_sub(app, "generating", "generating-curve construction and classification");
    genr->require_subcommand(1);
    auto* bld = add_sub(*genr, "build", "build the generated curve K from a base curve");
    std::optional<std::string> bld_in, bld_out, bld_apparatus, bld_report;
    std::optional<double> bld_phi0;
    bld->add_option("--in", bld_in, "input base curve CSV");
    bld->add_option("--phi0", bld_phi0, "generating phase");
    bld->add_option("--out", bld_out, "output curve CSV for K");
    bld->add_option("--apparatus", bld_apparatus, "also write K's apparatus CSV");
    bld->add_option("--report", bld_report, "residual report JSON");

    auto* cls = add_sub(*genr, "classify", "sinusoid classification of an apparatus CSV");
    std::optional<std::string> cls_in, cls_field, cls_out;
    bool cls_definition = false;
    cls->add_option("--in", cls_in, "input apparatus CSV");
    cls->add_option("--field", cls_field, "constant field spec u=...,w=... (optional)");
    cls->add_flag("--definition", cls_definition,
                  "label per the generating-curve definition");
    cls->add_option("--out", cls_out, "result JSON path (stdout when absent)");

    // plot
    auto* plt = add_sub(app, "plot", "three-panel orthographic SVG projection");
    std::optional<std::string> plt_in, plt_overlay, plt_out;
    plt->add_option("--in", plt_in, "input curve CSV");
    plt->add_option("--overlay", plt_overlay, "second curve CSV drawn on top");
    plt->add_option("--out", plt_out, "output SVG path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }

    try {
        const json config = load_config(config_path);

        if (gen->parsed()) {
            const auto family = require(gen_family, config, "family");
            const double s_max = require(gen_smax, config, "s-max");
            const double step = require(gen_step, config, "step");
            const auto out = require(gen_out, config, "out");
            auto params = parse_params(gen_params);
            if (gen_params.empty() && config.contains("params"))
                for (const auto& [key, value] : config.at("params").items())
                    params[key] = value.get<double>();
            const auto profile = ck::make_named_curve(family, params, s_max);
            const auto [curve, apparatus] = ck::integrate_frenet(profile, ck::InitialFrame{}, step);
            ck::io::write_curve_csv(out, curve);
            const auto app_path = resolve(gen_apparatus, config, "apparatus", std::string());
            if (!app_path.empty()) ck::io::write_apparatus_csv(app_path, curve, apparatus);
            return 0;
        }

        if (rec->parsed()) {
            const auto spec = ck::io::read_profile_json(require(rec_profile, config, "profile"));
            double step = 0.0;
            if (rec_step.has_value()) step = *rec_step;
            else if (spec.step.has_value()) step = *spec.step;
            else if (config.contains("step")) step = config.at("step").get<double>();
            else throw ck::ParseError("no step given (flag, profile JSON or config)");
            const auto [curve, apparatus] =
                ck::integrate_frenet(spec.profile, ck::InitialFrame{}, step);
            ck::io::write_curve_csv(require(rec_out, config, "out"), curve);
            const auto app_path = resolve(rec_apparatus, config, "apparatus", std::string());
            if (!app_path.empty()) ck::io::write_apparatus_csv(app_path, curve, apparatus);
            return 0;
        }

        if (fre->parsed()) {
            const auto curve = ck::io::read_curve_csv(require(fre_in, config, "in"));
            const double kmin = resolve(fre_kmin, config, "kappa-min", ck::kKappaMin);
            const auto apparatus = ck::frenet_apparatus(curve, kmin);
            ck::io::write_apparatus_csv(require(fre_out, config, "out"), curve, apparatus);
            return 0;
        }

        if (chk->parsed()) {
            const auto apparatus = ck::io::read_apparatus_csv(require(chk_in, config, "in"));
            const auto field = parse_field_spec(require(chk_field, config, "field"));
            const double tol_pred = resolve_tol_pred(chk_tol_pred, config);
            const std::string lambda_mode =
                !chk_lambda.empty() ? chk_lambda
                                    : config.value("lambda", std::string());
            std::optional<double> lambda0;
            if (chk_lambda0.has_value()) lambda0 = *chk_lambda0;
            else if (config.contains("lambda0")) lambda0 = config.at("lambda0").get<double>();
            if (lambda_mode != "auto" && !lambda0.has_value())
                throw ck::ParseError("provide --lambda auto or --lambda0 <value>");
            if (!lambda_mode.empty() && lambda_mode != "auto")
                throw ck::ParseError("--lambda only accepts 'auto'");
            const auto report = ck::check_mannheim(
                apparatus, field.field,
                lambda_mode == "auto" ? std::nullopt : lambda0, tol_pred);
            emit_json(ck::io::report_to_json(report),
                      resolve(chk_out, config, "out", std::string()));
            return (chk_strict && !report.verdict) ? 1 : 0;
        }

        if (par->parsed()) {
            const auto curve = ck::io::read_curve_csv(require(par_in, config, "in"));
            const auto field = parse_field_spec(require(par_field, config, "field"));
            const double kmin = resolve(par_kmin, config, "kappa-min", ck::kKappaMin);
            const auto apparatus = ck::frenet_apparatus(curve, kmin);
            const std::string lambda_mode =
                !par_lambda.empty() ? par_lambda : config.value("lambda", std::string());
            if (!lambda_mode.empty() && lambda_mode != "auto")
                throw ck::ParseError("--lambda only accepts 'auto'");
            std::optional<double> lambda0;
            if (par_lambda0.has_value()) lambda0 = *par_lambda0;
            else if (config.contains("lambda0")) lambda0 = config.at("lambda0").get<double>();
            const auto lam =
                make_offset(field, lambda_mode == "auto", lambda0, apparatus);
            ck::PartnerOptions opts;
            opts.kappa_min = kmin;
            opts.tol_pred = resolve_tol_pred(par_tol_pred, config);
            opts.tol_col = resolve(par_tol_col, config, "tol-col", ck::kTolCol);
            const auto verification =
                ck::verify_partner(curve, apparatus, field.field, lam, opts);
            const auto out = resolve(par_out, config, "out", std::string());
            if (!out.empty()) ck::io::write_curve_csv(out, verification.partner_unit);
            emit_json(ck::io::report_to_json(verification.report),
                      resolve(par_report, config, "report", std::string()));
            return (par_strict && !verification.report.verdict) ? 1 : 0;
        }

        if (bld->parsed()) {
            const auto curve = ck::io::read_curve_csv(require(bld_in, config, "in"));
            const double phi0 = require(bld_phi0, config, "phi0");
            const auto apparatus = ck::frenet_apparatus(curve);
            const auto [k_curve, k_app] = ck::build_generated(curve, apparatus, phi0);
            ck::io::write_curve_csv(require(bld_out, config, "out"), k_curve);
            const auto app_path = resolve(bld_apparatus, config, "apparatus", std::string());
            if (!app_path.empty()) ck::io::write_apparatus_csv(app_path, k_curve, k_app);
            const auto report_path = resolve(bld_report, config, "report", std::string());
            if (!report_path.empty() || bld_report.has_value()) {
                const auto res = ck::generated_residuals(apparatus, k_app, phi0);
                json j;
                j["eq_beta_residual"] = res.eq_beta_max;
                j["normal_alignment_max"] = res.normal_alignment_max;
                j["epsilon"] = res.epsilon;
                emit_json(j, report_path);
            }
            return 0;
        }

        if (cls->parsed()) {
            const auto apparatus = ck::io::read_apparatus_csv(require(cls_in, config, "in"));
            std::optional<std::pair<double, double>> uw;
            const auto field_spec = resolve(cls_field, config, "field", std::string());
            if (!field_spec.empty()) {
                const auto field = parse_field_spec(field_spec);
                if (!field.const_uw.has_value())
                    throw ck::ParseError("classify needs a constant field with v == 0");
                uw = field.const_uw;
            }
            const bool definition = cls_definition || config.value("definition", false);
            const auto result = ck::classify(apparatus, uw, definition);
            emit_json(ck::io::classification_to_json(result),
                      resolve(cls_out, config, "out", std::string()));
            return 0;
        }

        if (plt->parsed()) {
            const auto curve = ck::io::read_curve_csv(require(plt_in, config, "in"));
            const auto overlay_path = resolve(plt_overlay, config, "overlay", std::string());
            std::optional<ck::SampledCurve> overlay;
            if (!overlay_path.empty()) overlay = ck::io::read_curve_csv(overlay_path);
            ck::io::write_projection_svg(require(plt_out, config, "out"), curve,
                                         overlay ? &*overlay : nullptr);
            return 0;
        }
    } catch (const ck::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBadInput;
    } catch (const ck::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
