#include "restrictml/site_scanner.hpp"

#include <algorithm>
#include <bit>

namespace restrictml {

SiteScanner::SiteScanner(const EnzymeDb& db) : enzyme_count_(db.size()) {
    std::size_t total_bits = 0;
    for (const Enzyme& e : db.enzymes()) total_bits += e.site.size();
    words_ = (total_bits + 63) / 64;

    for (auto& mask : char_masks_) mask.assign(words_, 0);
    start_mask_.assign(words_, 0);
    end_mask_.assign(words_, 0);
    enzyme_at_end_bit_.assign(total_bits, 0);
    length_at_end_bit_.assign(total_bits, 0);

    static constexpr char kClasses[5] = {'A', 'C', 'G', 'T', 'N'};
    std::size_t bit = 0;
    for (std::size_t e = 0; e < db.size(); ++e) {
        const std::string& site = db[e].site;
        for (std::size_t j = 0; j < site.size(); ++j, ++bit) {
            const std::size_t word = bit >> 6;
            const std::uint64_t flag = 1ull << (bit & 63);
            for (std::size_t c = 0; c < 5; ++c) {
                if (site_symbol_match(site[j], kClasses[c])) {
                    char_masks_[c][word] |= flag;
                }
            }
            if (j == 0) start_mask_[word] |= flag;
            if (j + 1 == site.size()) {
                end_mask_[word] |= flag;
                enzyme_at_end_bit_[bit] = static_cast<std::uint32_t>(e);
                length_at_end_bit_[bit] = static_cast<std::uint32_t>(site.size());
            }
        }
    }
}

std::size_t SiteScanner::text_class(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        case 'T': return 3;
        default:  return 4;  // N
    }
}

template <typename OnHit>
void SiteScanner::scan(const DnaSequence& seq, OnHit&& on_hit) const {
    if (words_ == 0 || seq.empty()) return;

    // state bit b set <=> the site prefix ending at slot b matches the text
    // ending at the current position
    std::vector<std::uint64_t> state(words_, 0);

    for (std::size_t pos = 0; pos < seq.size(); ++pos) {
        const std::vector<std::uint64_t>& accept = char_masks_[text_class(seq[pos])];

        std::uint64_t carry = 0;
        for (std::size_t w = 0; w < words_; ++w) {
            const std::uint64_t shifted = (state[w] << 1) | carry;
            carry = state[w] >> 63;
            state[w] = (shifted | start_mask_[w]) & accept[w];
        }

        for (std::size_t w = 0; w < words_; ++w) {
            std::uint64_t hits = state[w] & end_mask_[w];
            while (hits != 0) {
                const int b = std::countr_zero(hits);
                hits &= hits - 1;
                const std::size_t bit = (w << 6) + static_cast<std::size_t>(b);
                const std::size_t start = pos + 1 - length_at_end_bit_[bit];
                on_hit(enzyme_at_end_bit_[bit], start);
            }
        }
    }
}

std::vector<SiteHit> SiteScanner::scan_all(const DnaSequence& seq) const {
    std::vector<SiteHit> hits;
    scan(seq, [&hits](std::uint32_t enzyme, std::size_t start) {
        hits.push_back({enzyme, start});
    });
    std::sort(hits.begin(), hits.end(), [](const SiteHit& a, const SiteHit& b) {
        return a.position != b.position ? a.position < b.position
                                        : a.enzyme_index < b.enzyme_index;
    });
    return hits;
}

std::size_t SiteScanner::count_cutters(const DnaSequence& seq) const {
    std::vector<bool> seen(enzyme_count_, false);
    std::size_t distinct = 0;
    scan(seq, [&](std::uint32_t enzyme, std::size_t) {
        if (!seen[enzyme]) {
            seen[enzyme] = true;
            ++distinct;
        }
    });
    return distinct;
}

}  // namespace restrictml
