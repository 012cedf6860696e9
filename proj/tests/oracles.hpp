#pragma once

// Test-side reference implementations, written independently of the
// library code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "restrictml/dna.hpp"
#include "restrictml/enzyme.hpp"
#include "restrictml/rng.hpp"

namespace oracles {

// Own IUPAC expansion table (kept separate from the library's bitmasks).
inline const std::string& iupac_expansion(char code) {
    static const std::map<char, std::string> table = {
        {'A', "A"},   {'C', "C"},   {'G', "G"},   {'T', "T"},
        {'R', "AG"},  {'Y', "CT"},  {'S', "CG"},  {'W', "AT"},
        {'K', "GT"},  {'M', "AC"},  {'B', "CGT"}, {'D', "AGT"},
        {'H', "ACT"}, {'V', "ACG"}, {'N', "ACGT"}};
    static const std::string empty;
    const auto it = table.find(code);
    return it == table.end() ? empty : it->second;
}

// Pattern symbol vs text character, text N matching only pattern N.
inline bool symbol_match(char pattern, char text) {
    if (text == 'N') return pattern == 'N';
    return iupac_expansion(pattern).find(text) != std::string::npos;
}

// O(n*m) sliding-window matcher.
inline std::vector<std::size_t> naive_find_sites(const std::string& site,
                                                 const std::string& text) {
    std::vector<std::size_t> hits;
    if (site.empty() || text.size() < site.size()) return hits;
    for (std::size_t p = 0; p + site.size() <= text.size(); ++p) {
        bool ok = true;
        for (std::size_t j = 0; j < site.size() && ok; ++j) {
            ok = symbol_match(site[j], text[p + j]);
        }
        if (ok) hits.push_back(p);
    }
    return hits;
}

// Union of per-enzyme naive scans as (position, enzyme) pairs.
inline std::set<std::pair<std::size_t, std::size_t>> naive_scan_all(
    const restrictml::EnzymeDb& db, const std::string& text) {
    std::set<std::pair<std::size_t, std::size_t>> hits;
    for (std::size_t e = 0; e < db.size(); ++e) {
        for (const std::size_t p : naive_find_sites(db[e].site, text)) {
            hits.emplace(p, e);
        }
    }
    return hits;
}

// Brute-force applicability: enumerate every enzyme and site position,
// collect top-strand cut coordinates, and ask for two distinct ones.
inline bool brute_force_applicable(const restrictml::EnzymeDb& db,
                                   const std::string& subseq) {
    std::set<std::size_t> cuts;
    for (std::size_t e = 0; e < db.size(); ++e) {
        for (const std::size_t p : naive_find_sites(db[e].site, subseq)) {
            cuts.insert(p + static_cast<std::size_t>(db[e].cut_top));
        }
    }
    if (cuts.size() < 2) return false;
    return *cuts.begin() < *cuts.rbegin();
}

// Textbook two-pass Pearson correlation.
inline double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

inline std::string random_dna(restrictml::Rng& rng, std::size_t length,
                              bool with_n = false) {
    static const char bases[] = "ACGTN";
    std::string s(length, 'A');
    for (char& c : s) {
        c = bases[rng.below(with_n ? 5 : 4)];
    }
    return s;
}

}  // namespace oracles
