#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "restrictml/dna.hpp"
#include "restrictml/enzyme.hpp"

namespace restrictml {

struct SiteHit {
    std::uint32_t enzyme_index = 0;
    std::size_t position = 0;  // site start in the scanned sequence

    friend bool operator==(const SiteHit&, const SiteHit&) = default;
};

// One-pass scanner for every catalog site at once.  All sites are laid out
// in a single bit vector and matched with the shift-and algorithm; IUPAC
// degeneracy is folded into the per-character masks instead of expanding
// sites into their concrete variants, so an N6 spacer costs six bits, not
// 4^6 patterns.  scan_all output is exactly the union of per-enzyme
// find_sites results.
class SiteScanner {
public:
    explicit SiteScanner(const EnzymeDb& db);

    // All hits, sorted by (position, enzyme_index); overlaps included.
    std::vector<SiteHit> scan_all(const DnaSequence& seq) const;

    // Number of distinct enzymes with at least one site fully inside seq
    // (the EZY feature).
    std::size_t count_cutters(const DnaSequence& seq) const;

    std::size_t enzyme_count() const { return enzyme_count_; }

private:
    template <typename OnHit>
    void scan(const DnaSequence& seq, OnHit&& on_hit) const;

    static std::size_t text_class(char c);

    std::size_t enzyme_count_ = 0;
    std::size_t words_ = 0;
    // Per text character class (A, C, G, T, N): bit set where the site
    // symbol at that slot accepts the class.
    std::array<std::vector<std::uint64_t>, 5> char_masks_;
    std::vector<std::uint64_t> start_mask_;  // first slot of every site
    std::vector<std::uint64_t> end_mask_;    // last slot of every site
    std::vector<std::uint32_t> enzyme_at_end_bit_;
    std::vector<std::uint32_t> length_at_end_bit_;
};

}  // namespace restrictml
