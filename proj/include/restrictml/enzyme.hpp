#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "restrictml/dna.hpp"

namespace restrictml {

// One restriction endonuclease.  The recognition site is a string of IUPAC
// letters; cut offsets are measured from the site start in top-strand
// coordinates and must lie in [0, site length].  cut_top != cut_bottom
// produces sticky ends, equal offsets a blunt cut.
struct Enzyme {
    std::string name;
    std::string site;
    int cut_top = 0;
    int cut_bottom = 0;

    std::size_t site_length() const { return site.size(); }
    int overhang_length() const { return cut_top >= cut_bottom ? cut_top - cut_bottom
                                                               : cut_bottom - cut_top; }
    bool blunt() const { return cut_top == cut_bottom; }
};

// Immutable-after-load catalog with unique names.
class EnzymeDb {
public:
    // Validates site letters, offset bounds, and name uniqueness.
    void add(Enzyme enzyme);

    // TSV with header "name\tsite\tcut_top\tcut_bottom"; one enzyme per row.
    // Errors are reported with their 1-based row (line) number.
    static EnzymeDb load_tsv(std::istream& in);
    static EnzymeDb load_tsv_file(const std::string& path);

    std::size_t size() const { return enzymes_.size(); }
    bool empty() const { return enzymes_.empty(); }
    const Enzyme& operator[](std::size_t i) const { return enzymes_[i]; }
    const std::vector<Enzyme>& enzymes() const { return enzymes_; }

    std::optional<std::size_t> find(const std::string& name) const;

private:
    std::vector<Enzyme> enzymes_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

// One end of a double-stranded fragment.  For an overhang, `strand` names
// the protruding strand and `bases` holds the single-stranded region in
// top-strand coordinates, so its length is |cut_top - cut_bottom|.
struct FragmentEnd {
    enum class Kind : std::uint8_t { Blunt, Overhang };
    enum class Strand : std::uint8_t { Top, Bottom };

    Kind kind = Kind::Blunt;
    Strand strand = Strand::Top;
    DnaSequence bases;

    bool operator==(const FragmentEnd&) const = default;
};

struct Fragment {
    DnaSequence sequence;     // top strand
    FragmentEnd left_end;
    FragmentEnd right_end;
    std::size_t source_start = 0;  // [source_start, source_end) in the digested sequence
    std::size_t source_end = 0;
};

// All site start positions (ascending, overlaps included) where the
// enzyme's site matches under per-symbol IUPAC semantics.
std::vector<std::size_t> find_sites(const Enzyme& enzyme, const DnaSequence& seq);

// The two end descriptors created by one cut: .first belongs to the
// upstream fragment's right end, .second to the downstream fragment's left
// end.  site_pos is the matched site's start in the cut sequence.
std::pair<FragmentEnd, FragmentEnd> cut_ends(const Enzyme& enzyme,
                                             const DnaSequence& seq,
                                             std::size_t site_pos);

// Single-enzyme digest per top-strand cut offsets.  Site occurrences are
// consumed leftmost-first without overlap; fragment sequences concatenate
// to the input exactly.  Empty fragments (cuts at position 0 or at the
// sequence end) are not emitted.
std::vector<Fragment> digest(const Enzyme& enzyme, const DnaSequence& seq);

}  // namespace restrictml
