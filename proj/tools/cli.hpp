#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <isoprofile/isoprofile.hpp>

namespace isoprofile::cli {

struct RunConfig {
    std::string command;
    std::string domain_file;
    std::string grid_h = "auto";
    std::size_t kappa_samples = 128;
    std::size_t v_samples = 512;
    std::string csv_path, json_path, svg_path, dump_path;
    std::optional<double> volume, kappa;
    std::string oracle;
    double L = 0.0;
};

inline int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput:
        case ErrorKind::Degenerate: return 2;
        case ErrorKind::HypothesisFailure: return 3;
        case ErrorKind::BudgetExceeded: return 4;
    }
    return 2;
}

namespace detail {

inline JordanDomain load_domain(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path);
    std::stringstream text;
    text << in.rdbuf();
    JordanDomain d = parse_domain(text.str());
    return d;
}

inline double resolve_h(const RunConfig& cfg, const JordanDomain& d) {
    if (cfg.grid_h == "auto") return auto_spacing(d);
    double h = 0.0;
    try {
        std::size_t used = 0;
        h = std::stod(cfg.grid_h, &used);
        if (used != cfg.grid_h.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput, "--h must be \"auto\" or a number, got \"" + cfg.grid_h + "\"");
    }
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorKind::InvalidInput, "--h must be positive");
    return h;
}

inline ScalarField load_field(const RunConfig& cfg, const JordanDomain& d) {
    ScalarField f = build_distance_field(d, resolve_h(cfg, d));
    if (!cfg.dump_path.empty()) {
        std::ostringstream buf;
        write_grid_dump(buf, f.grid(), f.values());
        write_text_file(cfg.dump_path, buf.str());
    }
    return f;
}

inline void emit(std::ostream& out, const std::string& path, const std::string& content) {
    if (path.empty()) out << content;
    else write_text_file(path, content);
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline std::string profile_csv(const Profile& p) {
    std::ostringstream csv;
    write_profile_csv(csv, p);
    return csv.str();
}

inline std::string profile_svg(const Profile& p, const std::string& name) {
    svg::Series j{p.volumes, p.j_values, "#1f4e9c", ""};
    svg::Series j2{p.volumes, {}, "#1f4e9c", ""};
    for (double v : p.j_values) j2.y.push_back(v * v);
    svg::Series floor{p.volumes, {}, "#999999", "4 3"};
    for (double v : p.volumes) floor.y.push_back(2.0 * std::sqrt(kPi * v));
    const std::string title = name.empty() ? "" : name + ": ";
    return svg::render_panels({{title + "J(V)", "V", "J", {floor, j}}, {title + "J(V)^2", "V", "J^2", {j2}}});
}

struct Oracle {
    double (*profile)(double, double);
    double (*kappa)(double, double);
    const char* (*piece)(double, double);
    double total;
    double ball;
};

inline Oracle make_oracle(const std::string& name, double L) {
    if (name == "rectangle") {
        if (!(L >= 2.0)) throw Error(ErrorKind::InvalidInput, "rectangle oracle needs --L >= 2");
        return {reference::rectangle_profile, reference::rectangle_kappa, reference::rectangle_piece, 2.0 * L, kPi};
    }
    if (name == "cross") {
        if (!(L >= 4.0)) throw Error(ErrorKind::InvalidInput, "cross oracle needs --L >= 4");
        return {reference::cross_profile, reference::cross_kappa, reference::cross_piece, 4.0 * L - 4.0, 2.0 * kPi};
    }
    throw Error(ErrorKind::InvalidInput, "unknown oracle \"" + name + "\" (rectangle or cross)");
}

}  // namespace detail

inline int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    using nlohmann::json;
    if (cfg.command == "reference") {
        const detail::Oracle o = detail::make_oracle(cfg.oracle, cfg.L);
        std::ostringstream csv;
        csv << "V,J,kappa,segment_kind\n";
        const std::size_t n = cfg.v_samples;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = i + 1 == n ? o.total : o.total * static_cast<double>(i) / static_cast<double>(n - 1);
            csv << format_number(v) << ',' << format_number(o.profile(cfg.L, v)) << ','
                << format_number(v > 0.0 ? o.kappa(cfg.L, v) : INFINITY) << ',' << o.piece(cfg.L, v) << '\n';
        }
        detail::emit(out, cfg.csv_path, csv.str());
        return 0;
    }

    const JordanDomain d = detail::load_domain(cfg.domain_file);
    if (cfg.command == "validate") {
        const double h = detail::resolve_h(cfg, d);
        const ScalarField f = detail::load_field(cfg, d);
        json j = to_json(d);
        j["area"] = d.area();
        j["perimeter"] = d.perimeter();
        j["inradius"] = f.inradius();
        j["h"] = h;
        j["grid"] = {{"nx", f.grid().nx}, {"ny", f.grid().ny}};
        j["input_was_ccw"] = d.input_was_ccw();
        detail::emit(out, cfg.json_path, detail::dump(j));
        return 0;
    }

    const ScalarField f = detail::load_field(cfg, d);
    if (cfg.command == "noneck") {
        const auto scan = component_scan(f, cfg.kappa_samples);
        json rows = json::array();
        bool neck = false;
        for (const RadiusComponents& rc : scan) {
            rows.push_back({{"r", rc.r}, {"components", rc.components}});
            neck = neck || rc.components > 1;
        }
        json j{{"inradius", f.inradius()}, {"neck", neck}, {"scan", rows}};
        if (neck) err << "warning: kind=neck reason=inner parallel set disconnected for some sampled radii\n";
        detail::emit(out, cfg.json_path, detail::dump(j));
        return 0;
    }

    if (cfg.command == "profile" || cfg.command == "cheeger" || cfg.command == "compare" ||
        (cfg.command == "minimizer" && cfg.volume)) {
        const Sweep sweep = compute_sweep(f, cfg.kappa_samples);
        for (const std::string& w : sweep.warnings) err << "warning: kind=neck reason=" << w << '\n';
        const Profile p = profile_from_legendre(sweep, cfg.v_samples);

        if (cfg.command == "profile") {
            detail::emit(out, cfg.csv_path, detail::profile_csv(p));
            if (!cfg.svg_path.empty()) write_text_file(cfg.svg_path, detail::profile_svg(p, d.name()));
            if (!cfg.json_path.empty()) {
                json segs = json::array();
                for (const ProfileSegment& s : p.segments)
                    segs.push_back({{"kind", to_string(s.kind)}, {"kappa", s.kappa}, {"v_min", s.v_min}, {"v_max", s.v_max}});
                const ConvexityReport c = check_convexity(p);
                const auto ball = interior_ball_report(f, sweep);
                json j{{"total_volume", p.total_volume},
                       {"ball_threshold", p.ball_threshold},
                       {"covered_max", p.covered_max},
                       {"segments", segs},
                       {"convexity", {{"violations_j", c.violations_j}, {"violations_j2", c.violations_j2},
                                      {"tolerance", c.tolerance}}},
                       {"interior_ball_kappa", ball ? json(*ball) : json(nullptr)},
                       {"excluded_radii", sweep.excluded},
                       {"warnings", sweep.warnings}};
                write_text_file(cfg.json_path, detail::dump(j));
            }
            return 0;
        }
        if (cfg.command == "cheeger") {
            const CheegerReport rep = cheeger_via_inner_formula(f, &p);
            if (!rep.inner_formula_converged)
                err << "warning: kind=degenerate reason=no sign change in the inner formula; profile value used\n";
            detail::emit(out, cfg.json_path, detail::dump(to_json(rep)));
            if (!cfg.svg_path.empty())
                write_text_file(cfg.svg_path, svg::render_contours(d, rep.cheeger_set_contour, "Cheeger set"));
            return 0;
        }
        if (cfg.command == "compare") {
            const detail::Oracle o = detail::make_oracle(cfg.oracle, cfg.L);
            if (std::abs(o.total - p.total_volume) > 1e-9 * o.total)
                throw Error(ErrorKind::InvalidInput, "domain area does not match the oracle shape");
            const double hi = std::min(p.covered_max, 0.99 * p.total_volume);
            double max_err = 0.0, sum = 0.0;
            std::size_t count = 0;
            for (std::size_t i = 0; i < p.volumes.size(); ++i) {
                const double v = p.volumes[i];
                if (v < o.ball || v > hi) continue;
                const double ref = o.profile(cfg.L, v);
                const double e = std::abs(p.j_values[i] - ref) / ref;
                max_err = std::max(max_err, e);
                sum += e;
                ++count;
            }
            json j{{"oracle", cfg.oracle}, {"L", cfg.L}, {"v_min", o.ball}, {"v_max", hi}, {"samples", count},
                   {"max_rel_error", max_err}, {"mean_rel_error", count ? sum / static_cast<double>(count) : 0.0}};
            detail::emit(out, cfg.json_path, detail::dump(j));
            return 0;
        }
        const double v = *cfg.volume;
        if (!(v > 0.0) || v > p.total_volume)
            throw Error(ErrorKind::InvalidInput, "--volume must lie in (0, " + format_number(p.total_volume) + "]");
        const MinimizerReport rep = minimizer_for_volume(f, p, v);
        json j = to_json(rep);
        j["requested_volume"] = v;
        if (rep.family) err << "note: kind=family reason=a one-parameter family of minimizers shares this curvature\n";
        detail::emit(out, cfg.json_path, detail::dump(j));
        if (!cfg.svg_path.empty()) write_text_file(cfg.svg_path, svg::render_contours(d, rep.contours, "minimizer"));
        return 0;
    }

    if (cfg.command == "minimizer") {
        if (!cfg.kappa) throw Error(ErrorKind::InvalidInput, "minimizer needs --volume or --kappa");
        const MinimizerReport rep = minimizer_for_kappa(f, *cfg.kappa);
        json j = to_json(rep);
        j["arc_check"] = to_json(verify_arc_property(rep, f, 2.0 * f.h()));
        detail::emit(out, cfg.json_path, detail::dump(j));
        if (!cfg.svg_path.empty()) write_text_file(cfg.svg_path, svg::render_contours(d, rep.contours, "minimizer"));
        return 0;
    }
    throw Error(ErrorKind::InvalidInput, "unknown command " + cfg.command);
}

/// Parses argv and runs one command. Errors become exit statuses 2/3/4 with a
/// single "error: kind=<kind> reason=<text>" line on err.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Isoperimetric profiles of planar polygonal domains"};
    app.set_help_flag("--help", "print help");  // -h would clash with --h
    app.require_subcommand(1);
    auto common = [&](CLI::App* sub, bool needs_domain) {
        if (needs_domain) sub->add_option("domain", cfg.domain_file, "domain JSON file")->required();
        sub->add_option("--h", cfg.grid_h, "grid spacing or \"auto\" (shorter side / 400)");
        sub->add_option("--kappa-samples", cfg.kappa_samples, "curvature samples")->check(CLI::Range(16, 100000));
        sub->add_option("--v-samples", cfg.v_samples, "volume samples")->check(CLI::Range(8, 10000000));
        sub->add_option("--csv", cfg.csv_path, "CSV output path");
        sub->add_option("--json", cfg.json_path, "JSON output path");
        sub->add_option("--svg", cfg.svg_path, "SVG output path");
        sub->add_option("--dump-field", cfg.dump_path, "write the distance field as an ISOF1 grid");
    };
    common(app.add_subcommand("validate", "area, perimeter and inradius"), true);
    common(app.add_subcommand("noneck", "component counts of the inner parallel sets"), true);
    common(app.add_subcommand("profile", "isoperimetric profile as CSV"), true);
    common(app.add_subcommand("cheeger", "Cheeger constant by two methods"), true);
    CLI::App* mini = app.add_subcommand("minimizer", "minimizer at a volume or curvature");
    common(mini, true);
    auto* vol_opt = mini->add_option("--volume", cfg.volume, "target volume");
    mini->add_option("--kappa", cfg.kappa, "target curvature")->excludes(vol_opt);
    for (const char* name : {"reference", "compare"}) {
        CLI::App* sub = app.add_subcommand(name, name == std::string("reference") ? "closed-form profile table"
                                                                                  : "raster profile vs closed form");
        common(sub, name == std::string("compare"));
        sub->add_option("--oracle", cfg.oracle, "rectangle or cross")->required();
        sub->add_option("--L", cfg.L, "long side of the shape")->required();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: kind=invalid_input reason=" << e.what() << '\n';
        return 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();

    try {
        return execute(cfg, out, err);
    } catch (const Error& e) {
        err << "error: kind=" << to_string(e.kind()) << " reason=" << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "error: kind=invalid_input reason=" << e.what() << '\n';
        return 2;
    }
}

}  // namespace isoprofile::cli
