#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <json.hpp>

#include "minimizer.hpp"
#include "profile.hpp"

namespace isoprofile {

// %.17g, with "inf"/"nan" spelled out.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_profile_csv(std::ostream& out, const Profile& p) {
    out << "V,J,kappa,segment_kind\n";
    for (std::size_t i = 0; i < p.volumes.size(); ++i)
        out << format_number(p.volumes[i]) << ',' << format_number(p.j_values[i]) << ','
            << format_number(p.kappa_of_v[i]) << ',' << to_string(p.kinds[i]) << '\n';
}

namespace detail {

inline nlohmann::json number_or_null(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

inline nlohmann::json points_json(const Polyline& line) {
    nlohmann::json pts = nlohmann::json::array();
    for (const Vec2& p : line) pts.push_back({p.x, p.y});
    return pts;
}

}  // namespace detail

inline nlohmann::json to_json(const SweepSample& s) {
    return {{"r", s.r},
            {"kappa", s.kappa},
            {"area_inner", s.area_inner},
            {"volume", s.volume},
            {"mink_content", s.mink_content},
            {"perimeter", s.perimeter},
            {"g_value", s.g_value},
            {"components", s.components}};
}

inline nlohmann::json to_json(const MinimizerReport& rep) {
    nlohmann::json arcs = nlohmann::json::array();
    for (const FreeArc& a : rep.arcs)
        arcs.push_back({{"length", a.length}, {"fitted_radius", detail::number_or_null(a.fitted_radius)}});
    nlohmann::json contours = nlohmann::json::array();
    for (std::size_t k = 1; k < rep.contours.size(); ++k) contours.push_back(detail::points_json(rep.contours[k]));
    return {{"r", rep.sample.r},
            {"kappa", rep.sample.kappa},
            {"volume", rep.sample.volume},
            {"perimeter", rep.sample.perimeter},
            {"area_inner", rep.sample.area_inner},
            {"mask_kind", to_string(rep.mask.kind)},
            {"family", rep.family},
            {"contour", rep.contours.empty() ? nlohmann::json::array() : detail::points_json(rep.contours.front())},
            {"other_contours", contours},
            {"arcs", arcs},
            {"pass_rate", rep.pass_rate}};
}

inline nlohmann::json to_json(const CheegerReport& rep) {
    nlohmann::json contours = nlohmann::json::array();
    for (const Polyline& line : rep.cheeger_set_contour) contours.push_back(detail::points_json(line));
    return {{"h_by_profile", detail::number_or_null(rep.h_by_profile)},
            {"h_by_inner_formula", detail::number_or_null(rep.h_by_inner_formula)},
            {"root_radius", detail::number_or_null(rep.root_radius)},
            {"inner_formula_converged", rep.inner_formula_converged},
            {"cheeger_set_contour", contours}};
}

inline nlohmann::json to_json(const ArcCheck& c) {
    return {{"free_points", c.free_points},       {"passing_points", c.passing_points},
            {"pass_rate", c.pass_rate},           {"fitted_arcs", c.fitted_arcs},
            {"radius_failures", c.radius_failures}, {"length_failures", c.length_failures},
            {"max_arc_length", c.max_arc_length}, {"max_radius_error", c.max_radius_error}};
}

// Writes `content` to `path`; the file is only created once the content exists.
inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path);
    out << content;
    if (!out) throw Error(ErrorKind::InvalidInput, "failed writing " + path);
}

}  // namespace isoprofile
