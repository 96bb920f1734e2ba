#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "spacinglab/io.hpp"
#include "spacinglab/models.hpp"
#include "spacinglab/util.hpp"

namespace spacinglab {

/// Reads a flat key=value model file. Recognized keys:
///   tag, V.coeffs, f.coeffs, h.gamma, h.width, J
/// V doubles as Q when an interaction is present.
inline ModelSpec parse_model(std::istream& in) {
    ModelSpec spec;
    std::optional<std::vector<double>> v_coeffs, f_coeffs;
    std::optional<double> gamma, width;
    double lo = -kInf, hi = kInf;
    for (const auto& kv : read_key_values(in)) {
        if (kv.key == "tag") {
            spec.tag = kv.value;
        } else if (kv.key == "V.coeffs" || kv.key == "Q.coeffs") {
            v_coeffs = parse_real_list(kv.value, kv.line);
        } else if (kv.key == "f.coeffs") {
            f_coeffs = parse_real_list(kv.value, kv.line);
        } else if (kv.key == "h.gamma") {
            gamma = parse_real(kv.value, kv.line);
        } else if (kv.key == "h.width") {
            width = parse_real(kv.value, kv.line);
        } else if (kv.key == "J") {
            const auto ends = parse_real_list(kv.value, kv.line);
            if (ends.size() != 2 || !(ends[0] < ends[1]))
                throw ParseError("J must be 'lo,hi' with lo < hi", kv.line);
            lo = ends[0];
            hi = ends[1];
        } else {
            throw ParseError("unknown model key '" + kv.key + "'", kv.line);
        }
    }
    if (!v_coeffs) throw ParseError("model file missing V.coeffs", 0);
    spec.confinement = Potential::polynomial(*v_coeffs, lo, hi);
    if (f_coeffs) spec.field = Potential::polynomial(*f_coeffs, lo, hi);
    if (gamma || width) {
        if (!gamma || !width) throw ParseError("interaction needs both h.gamma and h.width", 0);
        spec.interaction = Interaction::gaussian(*gamma, *width);
        if (spec.field) throw ParseError("repulsive models do not take an external field f", 0);
    }
    return spec;
}

inline ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file '" + path + "'", 0);
    auto spec = parse_model(in);
    if (spec.tag == "model") {
        // Default the tag to the file stem.
        auto slash = path.find_last_of("/\\");
        std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
        auto dot = stem.find_last_of('.');
        if (dot != std::string::npos && dot > 0) stem = stem.substr(0, dot);
        if (!stem.empty()) spec.tag = stem;
    }
    return spec;
}

inline void save_model(const ModelSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write model file '" + path + "'", 0);
    out << "tag = " << spec.tag << "\n";
    out << "V.coeffs = ";
    for (std::size_t i = 0; i < spec.confinement.coeffs.size(); ++i)
        out << (i ? "," : "") << format_double(spec.confinement.coeffs[i]);
    out << "\n";
    if (spec.field) {
        out << "f.coeffs = ";
        for (std::size_t i = 0; i < spec.field->coeffs.size(); ++i)
            out << (i ? "," : "") << format_double(spec.field->coeffs[i]);
        out << "\n";
    }
    if (spec.interaction) {
        out << "h.gamma = " << format_double(spec.interaction->gamma) << "\n";
        out << "h.width = " << format_double(spec.interaction->width) << "\n";
    }
    out << "J = " << format_double(spec.confinement.lower) << ","
        << format_double(spec.confinement.upper) << "\n";
}

} // namespace spacinglab
