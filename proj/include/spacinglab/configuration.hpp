#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spacinglab/errors.hpp"
#include "spacinglab/io.hpp"
#include "spacinglab/util.hpp"

namespace spacinglab {

enum class SamplerKind { tridiagonal, mcmc };

inline const char* to_string(SamplerKind s) {
    return s == SamplerKind::tridiagonal ? "tridiagonal" : "mcmc";
}

/// One sampled N-tuple of ordered eigenvalues/particles plus provenance.
/// Sampler outputs are strictly increasing; unfolded configurations may
/// carry ties at the window edges 0 and N because unfolding clamps there.
struct Configuration {
    std::vector<double> points;
    std::size_t n = 0;
    std::string model_tag;
    std::uint64_t seed = 0;
    SamplerKind sampler = SamplerKind::tridiagonal;

    static Configuration make(std::vector<double> sorted_points, std::string tag,
                              std::uint64_t seed, SamplerKind sampler, bool strict = true) {
        Configuration c;
        c.n = sorted_points.size();
        for (std::size_t i = 1; i < sorted_points.size(); ++i) {
            if (sorted_points[i] < sorted_points[i - 1])
                throw DomainError("Configuration: points must be sorted");
            if (strict && sorted_points[i] == sorted_points[i - 1])
                throw DomainError("Configuration: coincident points");
        }
        c.points = std::move(sorted_points);
        c.model_tag = std::move(tag);
        c.seed = seed;
        c.sampler = sampler;
        return c;
    }
};

inline void save_configuration(const Configuration& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write configuration file '" + path + "'", 0);
    out << "# configuration v1 model=" << c.model_tag << " n=" << c.n << " seed=" << c.seed
        << " sampler=" << to_string(c.sampler) << "\n";
    for (double x : c.points) out << format_double(x) << "\n";
}

inline Configuration load_configuration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open configuration file '" + path + "'", 0);
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty configuration file", 1);
    std::istringstream hs(header);
    std::string hash, magic, version;
    hs >> hash >> magic >> version;
    if (hash != "#" || magic != "configuration" || version != "v1")
        throw ParseError("bad configuration header '" + header + "'", 1);
    Configuration c;
    std::size_t n = 0;
    bool have_n = false;
    std::string kvtok;
    while (hs >> kvtok) {
        const auto eq = kvtok.find('=');
        if (eq == std::string::npos) throw ParseError("bad header token '" + kvtok + "'", 1);
        const std::string key = kvtok.substr(0, eq);
        const std::string val = kvtok.substr(eq + 1);
        if (key == "model") {
            c.model_tag = val;
        } else if (key == "n") {
            n = static_cast<std::size_t>(parse_int(val, 1));
            have_n = true;
        } else if (key == "seed") {
            c.seed = static_cast<std::uint64_t>(std::stoull(val));
        } else if (key == "sampler") {
            if (val == "tridiagonal")
                c.sampler = SamplerKind::tridiagonal;
            else if (val == "mcmc")
                c.sampler = SamplerKind::mcmc;
            else
                throw ParseError("unknown sampler '" + val + "'", 1);
        } else {
            throw ParseError("unknown header key '" + key + "'", 1);
        }
    }
    if (!have_n) throw ParseError("configuration header missing n", 1);
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        c.points.push_back(parse_real(line, lineno));
    }
    if (c.points.size() != n)
        throw ParseError("configuration has " + std::to_string(c.points.size()) +
                             " points, header says " + std::to_string(n),
                         lineno);
    c.n = n;
    for (std::size_t i = 1; i < c.points.size(); ++i)
        if (c.points[i] < c.points[i - 1]) throw ParseError("points not sorted", 1);
    return c;
}

} // namespace spacinglab
