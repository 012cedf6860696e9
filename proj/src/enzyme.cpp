#include "restrictml/enzyme.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

namespace restrictml {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

int parse_offset(const std::string& text, const char* what, std::size_t line_no) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw ParseError(std::string("invalid ") + what + " '" + text + "'", line_no);
    }
}

}  // namespace

void EnzymeDb::add(Enzyme enzyme) {
    if (enzyme.name.empty()) {
        throw ValueError("enzyme name is empty");
    }
    if (enzyme.site.empty()) {
        throw ValueError("enzyme '" + enzyme.name + "' has an empty site");
    }
    for (char& c : enzyme.site) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (!is_iupac(c)) {
            throw ValueError("enzyme '" + enzyme.name + "' has illegal IUPAC letter '" +
                             std::string(1, c) + "'");
        }
    }
    const int len = static_cast<int>(enzyme.site.size());
    if (enzyme.cut_top < 0 || enzyme.cut_top > len ||
        enzyme.cut_bottom < 0 || enzyme.cut_bottom > len) {
        throw ValueError("enzyme '" + enzyme.name + "' has cut offset out of range [0, " +
                         std::to_string(len) + "]");
    }
    if (by_name_.count(enzyme.name)) {
        throw ValueError("duplicate enzyme name '" + enzyme.name + "'");
    }
    by_name_.emplace(enzyme.name, enzymes_.size());
    enzymes_.push_back(std::move(enzyme));
}

EnzymeDb EnzymeDb::load_tsv(std::istream& in) {
    EnzymeDb db;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        const auto fields = split_tabs(line);
        if (!saw_header) {
            if (fields.size() != 4 || fields[0] != "name" || fields[1] != "site" ||
                fields[2] != "cut_top" || fields[3] != "cut_bottom") {
                throw ParseError("expected header 'name\\tsite\\tcut_top\\tcut_bottom'",
                                 line_no);
            }
            saw_header = true;
            continue;
        }
        if (fields.size() != 4) {
            throw ParseError("expected 4 tab-separated fields, got " +
                             std::to_string(fields.size()), line_no);
        }
        Enzyme enzyme{fields[0], fields[1],
                      parse_offset(fields[2], "cut_top", line_no),
                      parse_offset(fields[3], "cut_bottom", line_no)};
        try {
            db.add(std::move(enzyme));
        } catch (const ValueError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    if (!saw_header) {
        throw ParseError("enzyme table has no header row");
    }
    return db;
}

EnzymeDb EnzymeDb::load_tsv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open enzyme table: " + path);
    }
    return load_tsv(in);
}

std::optional<std::size_t> EnzymeDb::find(const std::string& name) const {
    const auto it = by_name_.find(name);
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> find_sites(const Enzyme& enzyme, const DnaSequence& seq) {
    std::vector<std::size_t> positions;
    const std::size_t m = enzyme.site.size();
    if (m == 0 || seq.size() < m) return positions;

    for (std::size_t p = 0; p + m <= seq.size(); ++p) {
        bool hit = true;
        for (std::size_t j = 0; j < m; ++j) {
            if (!site_symbol_match(enzyme.site[j], seq[p + j])) {
                hit = false;
                break;
            }
        }
        if (hit) positions.push_back(p);
    }
    return positions;
}

std::pair<FragmentEnd, FragmentEnd> cut_ends(const Enzyme& enzyme,
                                             const DnaSequence& seq,
                                             std::size_t site_pos) {
    if (enzyme.blunt()) {
        return {FragmentEnd{}, FragmentEnd{}};
    }
    const std::size_t lo = site_pos + static_cast<std::size_t>(
                               std::min(enzyme.cut_top, enzyme.cut_bottom));
    const std::size_t hi = site_pos + static_cast<std::size_t>(
                               std::max(enzyme.cut_top, enzyme.cut_bottom));
    const DnaSequence bases = seq.subseq(lo, hi - lo);

    // cut_top < cut_bottom: the top strand protrudes on the downstream
    // fragment, the bottom strand on the upstream one (EcoRI-style 5'
    // overhang); cut_top > cut_bottom is the mirrored 3' case.
    FragmentEnd upstream_right;
    FragmentEnd downstream_left;
    if (enzyme.cut_top < enzyme.cut_bottom) {
        upstream_right = {FragmentEnd::Kind::Overhang, FragmentEnd::Strand::Bottom, bases};
        downstream_left = {FragmentEnd::Kind::Overhang, FragmentEnd::Strand::Top, bases};
    } else {
        upstream_right = {FragmentEnd::Kind::Overhang, FragmentEnd::Strand::Top, bases};
        downstream_left = {FragmentEnd::Kind::Overhang, FragmentEnd::Strand::Bottom, bases};
    }
    return {upstream_right, downstream_left};
}

std::vector<Fragment> digest(const Enzyme& enzyme, const DnaSequence& seq) {
    std::vector<Fragment> fragments;
    if (seq.empty()) return fragments;

    const std::vector<std::size_t> sites = find_sites(enzyme, seq);

    // Leftmost-first non-overlapping site selection.
    std::vector<std::size_t> accepted;
    std::size_t next_free = 0;
    for (const std::size_t p : sites) {
        if (accepted.empty() || p >= next_free) {
            accepted.push_back(p);
            next_free = p + enzyme.site.size();
        }
    }

    struct Boundary {
        std::size_t cut;
        FragmentEnd upstream_right;
        FragmentEnd downstream_left;
    };
    std::vector<Boundary> cuts;
    for (const std::size_t p : accepted) {
        const std::size_t cut = p + static_cast<std::size_t>(enzyme.cut_top);
        auto ends = cut_ends(enzyme, seq, p);
        cuts.push_back({cut, std::move(ends.first), std::move(ends.second)});
    }

    std::size_t start = 0;
    FragmentEnd left{};  // source boundary: blunt
    for (const Boundary& b : cuts) {
        if (b.cut > start) {
            fragments.push_back({seq.subseq(start, b.cut - start), left,
                                 b.upstream_right, start, b.cut});
        }
        // A cut at the very start or end of the sequence splits off an
        // empty fragment; keep only the end descriptor it contributes.
        left = b.downstream_left;
        start = b.cut;
    }
    if (start < seq.size() || fragments.empty()) {
        fragments.push_back({seq.subseq(start, seq.size() - start), left,
                             FragmentEnd{}, start, seq.size()});
    }
    return fragments;
}

}  // namespace restrictml
